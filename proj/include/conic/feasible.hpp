#pragma once

#include "conic/cones.hpp"
#include "conic/linalg.hpp"

#include <optional>

namespace conic {

inline constexpr double kStrictTol = 1e-9;
inline constexpr double kPivotTol = 1e-10;

struct NnlsResult {
    Vector coefficients;  // >= 0, one per column of G
    Vector projection;    // G * coefficients
    double residual_norm = 0.0;
};

// min |z - G mu| over mu >= 0 by the Lawson-Hanson active-set method.
// Throws SolverFailure when 10 * cols * rows iterations do not reach KKT.
NnlsResult nnls(const Matrix& g, const Vector& z);

// Metric projection onto a cone. Coefficients refer to the cone's own
// (unnormalized) generators.
NnlsResult project_onto_cone(const ConeVRep& cone, const Vector& z);
double dist2(const ConeVRep& cone, const Vector& z);
double proj_norm2(const ConeVRep& cone, const Vector& z);

enum class LpStatus { optimal, infeasible, unbounded };

// maximize objective . x  subject to  equality_lhs * x = equality_rhs,
//                                     x >= lower_bounds.
// A lower bound of -infinity marks a free variable.
struct LpProblem {
    Vector objective;
    Matrix equality_lhs;
    Vector equality_rhs;
    Vector lower_bounds;
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    Vector solution;
};

// Dense two-phase simplex with Bland's rule. Redundant equality rows are
// detected and dropped after phase one.
LpResult lp_solve(const LpProblem& problem);

// Optimal value of  max t  s.t.  sum l_i x_i = 0, sum l_i = 1, l_i >= t,
// over the columns x_i of `points`; nullopt when 0 is outside aff(points).
// Nonzero points are normalized first, so t is scale-free.
std::optional<double> relint_margin(const Matrix& points);

// 0 in relint conv(points).
bool origin_in_relint_of_hull(const Matrix& points);

// 0 in int conv(points), i.e. pos(points) = R^k. Points are the columns.
bool origin_in_interior_of_hull(const Matrix& points);

bool cone_contains(const ConeVRep& cone, const Vector& z, double tol = kDefaultTol);

// (relint C) meets W. Throws PreconditionViolation when C is a linear
// subspace (then relint C contains 0 and the test is vacuous).
bool relint_meets_subspace(const ConeVRep& cone, const Subspace& w);

// Same test without the subspace check; for callers that already branched.
bool relint_meets_subspace_unchecked(const ConeVRep& cone, const Subspace& w);

}  // namespace conic
