#pragma once

#include "conic/cones.hpp"
#include "conic/linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace conic {

// 128-bit unsigned integer that throws std::overflow_error instead of wrapping.
using Count = boost::multiprecision::checked_uint128_t;

// Nonnegative rational kept in lowest terms.
struct Fraction {
    Count numerator{0};
    Count denominator{1};

    static Fraction reduced(Count num, Count den);
    double value() const;
    std::string str() const;  // "3/8", or "1" when the denominator is 1
};

// (upsilon_0, ..., upsilon_n): nonnegative, sum 1.
struct IntrinsicVolumes {
    std::vector<double> values;
};

// (gamma_0, ..., gamma_n): gamma_0 = 1 for C != {0}, nonincreasing, gamma_n = 0.
struct AngleProfile {
    std::vector<double> values;
};

Count binomial(int n, int k);

IntrinsicVolumes orthant_intrinsic_volumes(int n);
AngleProfile orthant_grassmann(int n);
std::vector<Fraction> orthant_volume_fractions(int n);
std::vector<Fraction> orthant_angle_fractions(int n);

// Coefficients B(n, 0..n) of (t + 1)(t + 3)...(t + 2n - 1). Throws Overflow for n > 20.
std::vector<Count> weyl_b_coefficients(int n);
IntrinsicVolumes weyl_b_intrinsic_volumes(int n);
AngleProfile weyl_b_grassmann(int n);
std::vector<Fraction> weyl_b_volume_fractions(int n);
std::vector<Fraction> weyl_b_angle_fractions(int n);

// Conic Crofton transform. For cones that are not subspaces,
// gamma_k = 2 (v_{k+1} + v_{k+3} + ...). For a subspace the volumes are a
// point mass and gamma_k = v_{k+1} + v_{k+2} + ... (= 1 for k < dim).
AngleProfile crofton_from_v(const IntrinsicVolumes& v, bool is_subspace);

// m-dimensional subspace in R^n: gamma_k = 1 for k < m, else 0.
AngleProfile subspace_grassmann(int m, int n);
IntrinsicVolumes subspace_intrinsic_volumes(int m, int n);

// Regularized incomplete beta function I_x(a, b), Lentz continued fraction.
double reg_inc_beta(double a, double b, double x);

// CDF of dist^2(Z, L_k) for Z uniform on the sphere in R^n and L_k a
// k-dimensional subspace: Beta((n - k)/2, k/2). k = n is the unit step at 0
// and k = 0 the unit step at 1.
double steiner_beta(int k, int n, double r);

// Rows r_j, columns k = 0..n, entries steiner_beta(k, n, r_j).
Matrix steiner_design_matrix(int n, const std::vector<double>& r_grid);

// Rows r_j, columns k = 0..n, entries r_j^k.
Matrix mgf_design_matrix(int n, const std::vector<double>& r_grid);

// min |A v - b|^2 over the probability simplex (v >= 0, sum v = 1), primal
// active-set method. Throws InvalidArgument when A lacks full column rank.
IntrinsicVolumes solve_simplex_constrained_ls(const Matrix& a, const Vector& b);

// P[0 in int conv(X_1..X_n)] for n i.i.d. standard Gaussian points in R^k:
// 2^{1-n} sum_{i=k}^{n-1} C(n-1, i).
double wendel_absorption(int n, int k);
Fraction wendel_absorption_fraction(int n, int k);

std::vector<double> default_steiner_grid();
std::vector<double> default_mgf_grid(int n);

// Closed forms for a named family, when the family has them.
struct ExactReference {
    IntrinsicVolumes volumes;
    AngleProfile angles;
    bool is_subspace = false;
};
std::optional<ExactReference> exact_for(const NamedCone& cone);

}  // namespace conic
