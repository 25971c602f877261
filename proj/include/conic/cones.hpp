#pragma once

#include "conic/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conic {

inline constexpr double kDefaultTol = 1e-9;

// Finitely generated cone pos(g_1, ..., g_m) in R^n. Generators are stored
// as the columns of an n x m matrix, unnormalized; the cone {0} is rejected.
class ConeVRep {
public:
    explicit ConeVRep(Matrix generators);
    static ConeVRep from_vectors(const std::vector<Vector>& generators);

    int ambient_dim() const { return static_cast<int>(generators_.rows()); }
    int num_generators() const { return static_cast<int>(generators_.cols()); }
    const Matrix& generators() const { return generators_; }
    Vector generator(int i) const { return generators_.col(i); }

    // Generators scaled to unit length.
    Matrix normalized_generators() const;

private:
    Matrix generators_;
};

struct ConeStructure {
    int dim = 0;
    int lineality_dim = 0;
    bool is_linear_subspace = false;
};

ConeVRep orthant(int n);

// Weyl chamber of type B_n, {t_1 >= ... >= t_n >= 0}, generated by the
// partial sums e_1, e_1 + e_2, ..., e_1 + ... + e_n.
ConeVRep weyl_chamber_b(int n);

// pos(+-b_i): the linear span of an independent family.
ConeVRep linear_subspace_cone(const std::vector<Vector>& basis);

// Tangent cone of conv(points) at the face spanned by the first face_size
// points: pos(X_i - mean(X_1..X_face_size), i = 1..n), zero vectors removed.
ConeVRep simplex_tangent_cone(const std::vector<Vector>& points, int face_size);

// pos(A g_i); zero images are dropped. Throws DegenerateCone when every
// generator is mapped to zero.
ConeVRep apply_linear_map(const Matrix& a, const ConeVRep& cone);

// Zero-pad the generators into R^ambient.
ConeVRep embed(const ConeVRep& cone, int ambient);

ConeStructure structure(const ConeVRep& cone, double tol = kDefaultTol);

// Fast test for pos M = lin M: the origin lies in the relative interior of
// the convex hull of the normalized generators.
bool is_linear_subspace(const ConeVRep& cone);

// Families that carry closed-form angles, plus arbitrary generator lists.
enum class ConeFamily { orthant, weyl_b, subspace, simplex_tangent, custom };

struct NamedCone {
    ConeFamily family = ConeFamily::custom;
    // orthant/weyl_b: {n}; subspace: {d, n}; simplex_tangent: {n, k, ell, seed}.
    std::vector<long long> params;
    ConeVRep cone;
    std::string literal;
};

// Gaussian simplex vertices X_1..X_n in R^k drawn from (seed, 0).
std::vector<Vector> gaussian_simplex_points(int n, int k, std::uint64_t seed);

// Parses "orthant:n", "weyl-b:n", "subspace:d,n", "simplex-tangent:n,k,ell,seed"
// or a JSON object {"ambient_dim": n, "generators": [[...], ...]}.
NamedCone parse_cone_literal(const std::string& literal);

}  // namespace conic
