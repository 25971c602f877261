#include "conic/feasible.hpp"

#include "conic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace conic {

// ---------------------------------------------------------------------------
// Nonnegative least squares
// ---------------------------------------------------------------------------

namespace {

// Unconstrained least squares restricted to the passive columns.
Vector solve_passive(const Matrix& g, const Vector& z, const std::vector<int>& passive) {
    Matrix sub(g.rows(), static_cast<Eigen::Index>(passive.size()));
    for (std::size_t i = 0; i < passive.size(); ++i) {
        sub.col(static_cast<Eigen::Index>(i)) = g.col(passive[i]);
    }
    return sub.colPivHouseholderQr().solve(z);
}

}  // namespace

NnlsResult nnls(const Matrix& g, const Vector& z) {
    const int rows = static_cast<int>(g.rows());
    const int cols = static_cast<int>(g.cols());
    if (cols < 1) {
        throw InvalidArgument("nnls needs at least one column");
    }
    if (z.size() != rows) {
        throw InvalidArgument("nnls right-hand side has " + std::to_string(z.size()) +
                              " entries, expected " + std::to_string(rows));
    }

    double gmax = 0.0;
    for (int j = 0; j < cols; ++j) {
        gmax = std::max(gmax, g.col(j).norm());
    }
    const double kkt_tol = 1e-12 * std::max(1.0, z.norm()) * std::max(1.0, gmax) * cols;
    const long max_iter = 10L * cols * std::max(rows, 1) + 10;

    Vector x = Vector::Zero(cols);
    std::vector<bool> in_passive(cols, false);
    std::vector<bool> blocked(cols, false);
    std::vector<int> passive;
    long iter = 0;

    for (;;) {
        const Vector w = g.transpose() * (z - g * x);
        int enter = -1;
        double best = kkt_tol;
        for (int j = 0; j < cols; ++j) {
            if (!in_passive[j] && !blocked[j] && w(j) > best) {
                best = w(j);
                enter = j;
            }
        }
        if (enter < 0) {
            break;
        }
        in_passive[enter] = true;
        passive.push_back(enter);

        bool first_solve = true;
        for (;;) {
            if (++iter > max_iter) {
                throw SolverFailure("nnls exceeded " + std::to_string(max_iter) + " iterations");
            }
            const Vector s = solve_passive(g, z, passive);
            bool feasible = true;
            for (std::size_t i = 0; i < passive.size(); ++i) {
                if (s(static_cast<Eigen::Index>(i)) <= 0.0) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                for (std::size_t i = 0; i < passive.size(); ++i) {
                    x(passive[i]) = s(static_cast<Eigen::Index>(i));
                }
                break;
            }
            if (first_solve && s(static_cast<Eigen::Index>(passive.size() - 1)) <= 0.0) {
                // The entering column is numerically dependent on the passive
                // set; its gradient is rounding noise. Park it.
                passive.pop_back();
                in_passive[enter] = false;
                blocked[enter] = true;
                break;
            }
            first_solve = false;

            double alpha = 1.0;
            for (std::size_t i = 0; i < passive.size(); ++i) {
                const double si = s(static_cast<Eigen::Index>(i));
                if (si <= 0.0) {
                    const double xi = x(passive[i]);
                    alpha = std::min(alpha, xi / (xi - si));
                }
            }
            for (std::size_t i = 0; i < passive.size(); ++i) {
                const int p = passive[i];
                x(p) += alpha * (s(static_cast<Eigen::Index>(i)) - x(p));
            }
            std::vector<int> kept;
            for (int p : passive) {
                if (x(p) > 1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
                    kept.push_back(p);
                } else {
                    x(p) = 0.0;
                    in_passive[p] = false;
                }
            }
            passive.swap(kept);
            if (passive.empty()) {
                break;
            }
        }
        // Anything that changed the passive set may unblock parked columns.
        if (!first_solve) {
            std::fill(blocked.begin(), blocked.end(), false);
        }
    }

    NnlsResult out;
    out.coefficients = x;
    out.projection = g * x;
    out.residual_norm = (z - out.projection).norm();
    return out;
}

NnlsResult project_onto_cone(const ConeVRep& cone, const Vector& z) {
    if (z.size() != cone.ambient_dim()) {
        throw InvalidArgument("point dimension " + std::to_string(z.size()) +
                              " does not match cone ambient dimension " +
                              std::to_string(cone.ambient_dim()));
    }
    NnlsResult r = nnls(cone.normalized_generators(), z);
    for (int i = 0; i < cone.num_generators(); ++i) {
        r.coefficients(i) /= cone.generators().col(i).norm();
    }
    return r;
}

double dist2(const ConeVRep& cone, const Vector& z) {
    const double r = project_onto_cone(cone, z).residual_norm;
    return r * r;
}

double proj_norm2(const ConeVRep& cone, const Vector& z) {
    return project_onto_cone(cone, z).projection.squaredNorm();
}

// ---------------------------------------------------------------------------
// Two-phase dense simplex
// ---------------------------------------------------------------------------

namespace {

constexpr double kReducedCostTol = 1e-10;

class Tableau {
public:
    Tableau(Matrix a, Vector b) : rows_(static_cast<int>(a.rows())), structural_(static_cast<int>(a.cols())) {
        // Layout: [structural | artificial | rhs], objective row last.
        t_ = Matrix::Zero(rows_ + 1, structural_ + rows_ + 1);
        for (int i = 0; i < rows_; ++i) {
            const double sign = b(i) < 0.0 ? -1.0 : 1.0;
            t_.row(i).head(structural_) = sign * a.row(i);
            t_(i, structural_ + i) = 1.0;
            t_(i, rhs()) = sign * b(i);
        }
        basis_.resize(rows_);
        for (int i = 0; i < rows_; ++i) {
            basis_[i] = structural_ + i;
        }
    }

    int rows() const { return rows_; }
    int rhs() const { return static_cast<int>(t_.cols()) - 1; }

    // Objective row holds z_j - c_j for "maximize c.x".
    void set_objective(const Vector& c_full) {
        t_.row(rows_).setZero();
        for (int j = 0; j <= rhs(); ++j) {
            double v = 0.0;
            for (int i = 0; i < rows_; ++i) {
                v += c_full(basis_[i]) * t_(i, j);
            }
            t_(rows_, j) = j < rhs() ? v - c_full(j) : v;
        }
    }

    double objective_value() const { return t_(rows_, rhs()); }

    // Returns false if unbounded.
    bool optimize(int allowed_cols, long& iter, long max_iter) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < allowed_cols; ++j) {
                if (t_(rows_, j) < -kReducedCostTol) {
                    enter = j;  // Bland: smallest index
                    break;
                }
            }
            if (enter < 0) {
                return true;
            }
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows_; ++i) {
                const double aij = t_(i, enter);
                if (aij <= kPivotTol) continue;
                const double ratio = t_(i, rhs()) / aij;
                const double slack = 1e-12 * (1.0 + std::abs(best));
                if (leave < 0 || ratio < best - slack ||
                    (ratio <= best + slack && basis_[i] < basis_[leave])) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave < 0) {
                return false;
            }
            if (++iter > max_iter) {
                throw SolverFailure("simplex exceeded " + std::to_string(max_iter) + " pivots");
            }
            pivot(leave, enter);
        }
    }

    // After phase one: pivot artificials out of the basis, dropping rows that
    // turn out to be linear combinations of the others.
    void purge_artificials() {
        std::vector<int> keep;
        for (int i = 0; i < rows_; ++i) {
            if (basis_[i] < structural_) {
                keep.push_back(i);
                continue;
            }
            int col = -1;
            double best = kPivotTol;
            for (int j = 0; j < structural_; ++j) {
                if (std::abs(t_(i, j)) > best) {
                    best = std::abs(t_(i, j));
                    col = j;
                }
            }
            if (col >= 0) {
                pivot(i, col);
                keep.push_back(i);
            }
        }
        if (static_cast<int>(keep.size()) == rows_) {
            return;
        }
        Matrix reduced(static_cast<Eigen::Index>(keep.size()) + 1, t_.cols());
        std::vector<int> basis;
        for (std::size_t r = 0; r < keep.size(); ++r) {
            reduced.row(static_cast<Eigen::Index>(r)) = t_.row(keep[r]);
            basis.push_back(basis_[keep[r]]);
        }
        reduced.row(static_cast<Eigen::Index>(keep.size())) = t_.row(rows_);
        t_ = std::move(reduced);
        basis_ = std::move(basis);
        rows_ = static_cast<int>(keep.size());
    }

    Vector structural_solution() const {
        Vector y = Vector::Zero(structural_);
        for (int i = 0; i < rows_; ++i) {
            if (basis_[i] < structural_) {
                y(basis_[i]) = t_(i, rhs());
            }
        }
        return y;
    }

private:
    void pivot(int r, int c) {
        t_.row(r) /= t_(r, c);
        for (int i = 0; i <= rows_; ++i) {
            if (i == r) continue;
            const double f = t_(i, c);
            if (f != 0.0) {
                t_.row(i) -= f * t_.row(r);
            }
        }
        basis_[r] = c;
    }

    int rows_;
    int structural_;
    Matrix t_;
    std::vector<int> basis_;
};

}  // namespace

LpResult lp_solve(const LpProblem& p) {
    const int n = static_cast<int>(p.objective.size());
    const int m = static_cast<int>(p.equality_lhs.rows());
    if (p.equality_lhs.cols() != n || p.equality_rhs.size() != m || p.lower_bounds.size() != n) {
        throw InvalidArgument("lp_solve: inconsistent problem dimensions");
    }

    // Shift finite lower bounds to zero, split free variables.
    std::vector<int> plus_col(n), minus_col(n, -1);
    int cols = 0;
    for (int j = 0; j < n; ++j) {
        plus_col[j] = cols++;
        if (!std::isfinite(p.lower_bounds(j))) {
            if (p.lower_bounds(j) > 0) {
                throw InvalidArgument("lp_solve: lower bound +inf");
            }
            minus_col[j] = cols++;
        }
    }
    Matrix a = Matrix::Zero(m, cols);
    Vector b = p.equality_rhs;
    Vector c = Vector::Zero(cols);
    double offset = 0.0;
    for (int j = 0; j < n; ++j) {
        a.col(plus_col[j]) = p.equality_lhs.col(j);
        c(plus_col[j]) = p.objective(j);
        if (minus_col[j] >= 0) {
            a.col(minus_col[j]) = -p.equality_lhs.col(j);
            c(minus_col[j]) = -p.objective(j);
        } else {
            b -= p.equality_lhs.col(j) * p.lower_bounds(j);
            offset += p.objective(j) * p.lower_bounds(j);
        }
    }

    Tableau tab(a, b);
    const long max_iter = 50L * (m + cols) + 100;
    long iter = 0;

    Vector phase1 = Vector::Zero(cols + m);
    phase1.tail(m).setConstant(-1.0);
    tab.set_objective(phase1);
    tab.optimize(cols + m, iter, max_iter);
    const double scale = 1.0 + (b.size() > 0 ? b.cwiseAbs().maxCoeff() : 0.0);
    if (tab.objective_value() < -1e-9 * scale) {
        return LpResult{LpStatus::infeasible, 0.0, Vector()};
    }
    tab.purge_artificials();

    Vector phase2 = Vector::Zero(cols + m);
    phase2.head(cols) = c;
    tab.set_objective(phase2);
    if (!tab.optimize(cols, iter, max_iter)) {
        return LpResult{LpStatus::unbounded, std::numeric_limits<double>::infinity(), Vector()};
    }

    const Vector y = tab.structural_solution();
    Vector x(n);
    for (int j = 0; j < n; ++j) {
        if (minus_col[j] >= 0) {
            x(j) = y(plus_col[j]) - y(minus_col[j]);
        } else {
            x(j) = y(plus_col[j]) + p.lower_bounds(j);
        }
    }
    return LpResult{LpStatus::optimal, tab.objective_value() + offset, x};
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

std::optional<double> relint_margin(const Matrix& points) {
    const int k = static_cast<int>(points.rows());
    const int m = static_cast<int>(points.cols());
    if (m < 1) {
        throw InvalidArgument("relint_margin needs at least one point");
    }
    Matrix x = points;
    for (int i = 0; i < m; ++i) {
        const double nrm = x.col(i).norm();
        if (nrm > 0.0) {
            x.col(i) /= nrm;
        }
    }
    // Substitute l_i = t + s_i, s_i >= 0, t free:
    //   X s + t (X 1) = 0,   1.s + m t = 1.
    LpProblem lp;
    lp.objective = Vector::Zero(m + 1);
    lp.objective(m) = 1.0;
    lp.equality_lhs = Matrix::Zero(k + 1, m + 1);
    lp.equality_lhs.topLeftCorner(k, m) = x;
    lp.equality_lhs.topRightCorner(k, 1) = x.rowwise().sum();
    lp.equality_lhs.row(k).head(m).setOnes();
    lp.equality_lhs(k, m) = static_cast<double>(m);
    lp.equality_rhs = Vector::Zero(k + 1);
    lp.equality_rhs(k) = 1.0;
    lp.lower_bounds = Vector::Zero(m + 1);
    lp.lower_bounds(m) = -std::numeric_limits<double>::infinity();

    const LpResult r = lp_solve(lp);
    switch (r.status) {
        case LpStatus::optimal:
            return r.objective;
        case LpStatus::infeasible:
            return std::nullopt;
        case LpStatus::unbounded:
            break;
    }
    // t <= 1/m on the feasible set, so this is a numerical breakdown.
    throw SolverFailure("relint LP reported unbounded");
}

bool origin_in_relint_of_hull(const Matrix& points) {
    const auto t = relint_margin(points);
    return t && *t > kStrictTol;
}

bool origin_in_interior_of_hull(const Matrix& points) {
    if (points.cols() < 1) {
        throw InvalidArgument("origin_in_interior_of_hull needs at least one point");
    }
    // relint equals int only when the points span R^k.
    if (numerical_rank(points, kDefaultTol) < points.rows()) {
        return false;
    }
    return origin_in_relint_of_hull(points);
}

bool cone_contains(const ConeVRep& cone, const Vector& z, double tol) {
    const NnlsResult r = project_onto_cone(cone, z);
    return r.residual_norm <= tol * std::max(1.0, z.norm());
}

bool relint_meets_subspace_unchecked(const ConeVRep& cone, const Subspace& w) {
    if (w.ambient_dim() != cone.ambient_dim()) {
        throw InvalidArgument("subspace and cone live in different dimensions");
    }
    // relint(pos G) = { G mu : mu > 0 }. It meets W iff some strictly positive
    // combination of the generators projects to 0 in the complement of W; the
    // normalization sum mu = 1 is free since such mu can be rescaled.
    const Subspace perp = w.orthogonal_complement();
    const Matrix projected = perp.basis().transpose() * cone.normalized_generators();
    return origin_in_relint_of_hull(projected);
}

bool relint_meets_subspace(const ConeVRep& cone, const Subspace& w) {
    if (is_linear_subspace(cone)) {
        throw PreconditionViolation(
            "relint_meets_subspace: cone is a linear subspace; use the closed form instead");
    }
    return relint_meets_subspace_unchecked(cone, w);
}

}  // namespace conic
