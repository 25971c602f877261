#include "conic/linalg.hpp"

#include "conic/error.hpp"

#include <cmath>
#include <string>

namespace conic {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t x) {
    return splitmix64(x);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index) {
    std::uint64_t x = mix64(seed) ^ mix64(stream_index ^ 0x632BE59BD9B4E019ULL);
    for (auto& word : state_) {
        word = splitmix64(x);
    }
    // xoshiro must not start from the all-zero state.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
        state_[0] = 1;
    }
}

RngStream RngStream::substream(std::uint64_t index) const {
    return RngStream(seed_, mix64(stream_ ^ mix64(index + 0x2545F4914F6CDD1DULL)));
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    return u * f;
}

Subspace::Subspace(int ambient_dim, Matrix basis)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    if (ambient_dim < 0 || basis_.rows() != ambient_dim || basis_.cols() > ambient_dim) {
        throw InvalidArgument("subspace basis does not fit ambient dimension " +
                              std::to_string(ambient_dim));
    }
    const Matrix gram = basis_.transpose() * basis_;
    const Matrix eye = Matrix::Identity(basis_.cols(), basis_.cols());
    if (basis_.cols() > 0 && (gram - eye).cwiseAbs().maxCoeff() > kOrthoTol) {
        throw InvalidArgument("subspace basis is not orthonormal");
    }
}

Subspace Subspace::zero(int ambient_dim) {
    return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::whole(int ambient_dim) {
    return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::orthogonal_complement() const {
    const int n = ambient_dim_;
    Matrix stacked(n, dim() + n);
    stacked << basis_, Matrix::Identity(n, n);
    const Subspace full = orthonormalize(stacked);
    // orthonormalize keeps input order, so the first dim() columns span *this.
    return Subspace(n, full.basis().rightCols(full.dim() - dim()));
}

Matrix sample_gaussian_matrix(int rows, int cols, RngStream& rng) {
    if (rows < 1 || cols < 1) {
        throw InvalidArgument("gaussian matrix needs positive dimensions");
    }
    Matrix a(rows, cols);
    // Fill row-major so the draw order does not depend on Eigen's storage.
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            a(i, j) = rng.normal();
        }
    }
    return a;
}

Vector sample_gaussian_vector(int n, RngStream& rng) {
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v(i) = rng.normal();
    }
    return v;
}

Vector sample_uniform_sphere(int n, RngStream& rng) {
    if (n < 1) {
        throw InvalidArgument("sphere dimension must be positive");
    }
    for (;;) {
        Vector g = sample_gaussian_vector(n, rng);
        const double norm = g.norm();
        if (norm > 0.0) {
            return g / norm;
        }
    }
}

Subspace sample_uniform_subspace(int n, int d, RngStream& rng) {
    if (n < 1 || d < 0 || d > n) {
        throw InvalidArgument("subspace dimension out of range");
    }
    if (d == 0) {
        return Subspace::zero(n);
    }
    for (;;) {
        Matrix g(n, d);
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < n; ++i) {
                g(i, j) = rng.normal();
            }
        }
        Subspace w = orthonormalize(g);
        if (w.dim() == d) {
            return w;
        }
    }
}

Vector project_onto_subspace(const Vector& x, const Subspace& w) {
    if (x.size() != w.ambient_dim()) {
        throw InvalidArgument("vector dimension " + std::to_string(x.size()) +
                              " does not match subspace ambient dimension " +
                              std::to_string(w.ambient_dim()));
    }
    return w.basis() * (w.basis().transpose() * x);
}

Subspace orthonormalize(const Matrix& columns, double tol) {
    if (!(tol > 0.0)) {
        throw InvalidArgument("orthonormalize tolerance must be positive");
    }
    const int n = static_cast<int>(columns.rows());
    double largest = 0.0;
    for (int j = 0; j < columns.cols(); ++j) {
        largest = std::max(largest, columns.col(j).norm());
    }
    const double cutoff = tol * largest;

    Matrix q(n, std::min<Eigen::Index>(n, columns.cols()));
    int kept = 0;
    for (int j = 0; j < columns.cols() && kept < n; ++j) {
        Vector v = columns.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < kept; ++i) {
                v -= q.col(i).dot(v) * q.col(i);
            }
        }
        const double norm = v.norm();
        if (norm > cutoff && norm > 0.0) {
            q.col(kept++) = v / norm;
        }
    }
    return Subspace(n, q.leftCols(kept));
}

int numerical_rank(const Matrix& m, double tol) {
    if (!(tol > 0.0)) {
        throw InvalidArgument("rank tolerance must be positive");
    }
    Matrix r = m;
    const int cols = static_cast<int>(r.cols());
    double largest = 0.0;
    for (int j = 0; j < cols; ++j) {
        largest = std::max(largest, r.col(j).norm());
    }
    if (largest == 0.0) {
        return 0;
    }
    std::vector<bool> used(cols, false);
    int rank = 0;
    for (int step = 0; step < std::min<int>(cols, static_cast<int>(r.rows())); ++step) {
        int pivot = -1;
        double best = 0.0;
        for (int j = 0; j < cols; ++j) {
            if (used[j]) continue;
            const double nj = r.col(j).norm();
            if (nj > best) {
                best = nj;
                pivot = j;
            }
        }
        if (pivot < 0 || best <= tol * largest) {
            break;
        }
        used[pivot] = true;
        const Vector q = r.col(pivot) / best;
        for (int j = 0; j < cols; ++j) {
            if (used[j]) continue;
            r.col(j) -= q.dot(r.col(j)) * q;
            r.col(j) -= q.dot(r.col(j)) * q;
        }
        ++rank;
    }
    return rank;
}

}  // namespace conic
