#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>

namespace conic {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kOrthoTol = 1e-10;

// Reproducible random stream. A stream is identified by (seed, stream_index);
// the output sequence is a pure function of that pair on every platform
// (xoshiro256** seeded through splitmix64, Marsaglia polar normals).
//
// substream(i) derives an independent child stream; chunked Monte Carlo
// gives chunk i the stream root.substream(i).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    RngStream substream(std::uint64_t index) const;

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::array<std::uint64_t, 4> state_{};
    std::optional<double> spare_;
};

// Linear subspace of R^n stored as an n x d matrix with orthonormal columns.
class Subspace {
public:
    Subspace(int ambient_dim, Matrix basis);

    static Subspace zero(int ambient_dim);
    static Subspace whole(int ambient_dim);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Matrix& basis() const { return basis_; }

    Matrix projector() const { return basis_ * basis_.transpose(); }
    Subspace orthogonal_complement() const;

private:
    int ambient_dim_;
    Matrix basis_;
};

Matrix sample_gaussian_matrix(int rows, int cols, RngStream& rng);
Vector sample_gaussian_vector(int n, RngStream& rng);
Vector sample_uniform_sphere(int n, RngStream& rng);

// Haar-distributed d-dimensional subspace of R^n.
Subspace sample_uniform_subspace(int n, int d, RngStream& rng);

Vector project_onto_subspace(const Vector& x, const Subspace& w);

// Modified Gram-Schmidt with one re-orthogonalization pass, processing
// columns in order. A column whose residual falls to tol * (largest input
// column norm) or below is dropped.
Subspace orthonormalize(const Matrix& columns, double tol = kOrthoTol);

// Number of columns that survive greedy largest-residual Gram-Schmidt
// pivoting above tol * (largest column norm).
int numerical_rank(const Matrix& m, double tol = kOrthoTol);

}  // namespace conic
