#include "conic/exact.hpp"

#include "conic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conic {

namespace {

Count gcd(Count a, Count b) {
    while (b != 0) {
        Count t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Count pow2(int n) {
    if (n < 0 || n > 127) {
        throw Overflow("2^" + std::to_string(n) + " exceeds 128 bits");
    }
    return Count(1) << n;
}

Count factorial(int n) {
    Count f = 1;
    try {
        for (int i = 2; i <= n; ++i) {
            f *= i;
        }
    } catch (const std::overflow_error&) {
        throw Overflow(std::to_string(n) + "! exceeds 128 bits");
    }
    return f;
}

std::vector<double> values_of(const std::vector<Fraction>& f) {
    std::vector<double> out;
    out.reserve(f.size());
    for (const auto& x : f) {
        out.push_back(x.value());
    }
    return out;
}

void require_dim(int n, const char* what) {
    if (n < 1) {
        throw InvalidArgument(std::string(what) + ": n must be >= 1");
    }
}

}  // namespace

Fraction Fraction::reduced(Count num, Count den) {
    if (den == 0) {
        throw InvalidArgument("fraction with zero denominator");
    }
    const Count g = gcd(num, den);
    if (g == 0) {
        return Fraction{0, 1};
    }
    return Fraction{num / g, den / g};
}

double Fraction::value() const {
    return numerator.convert_to<double>() / denominator.convert_to<double>();
}

std::string Fraction::str() const {
    if (denominator == 1) {
        return numerator.str();
    }
    return numerator.str() + "/" + denominator.str();
}

Count binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    Count c = 1;
    try {
        for (int i = 1; i <= k; ++i) {
            // c * (n - k + i) is divisible by i at every step.
            c = c * (n - k + i) / i;
        }
    } catch (const std::overflow_error&) {
        throw Overflow("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") overflows");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Orthant
// ---------------------------------------------------------------------------

std::vector<Fraction> orthant_volume_fractions(int n) {
    require_dim(n, "orthant_volume_fractions");
    const Count den = pow2(n);
    std::vector<Fraction> out;
    for (int k = 0; k <= n; ++k) {
        out.push_back(Fraction::reduced(binomial(n, k), den));
    }
    return out;
}

std::vector<Fraction> orthant_angle_fractions(int n) {
    require_dim(n, "orthant_angle_fractions");
    const Count den = pow2(n - 1);
    std::vector<Fraction> out;
    for (int k = 0; k < n; ++k) {
        Count num = 0;
        for (int i = k; i <= n - 1; ++i) {
            num += binomial(n - 1, i);
        }
        out.push_back(Fraction::reduced(num, den));
    }
    out.push_back(Fraction{0, 1});
    return out;
}

IntrinsicVolumes orthant_intrinsic_volumes(int n) {
    return {values_of(orthant_volume_fractions(n))};
}

AngleProfile orthant_grassmann(int n) {
    return {values_of(orthant_angle_fractions(n))};
}

// ---------------------------------------------------------------------------
// Weyl chamber B_n
// ---------------------------------------------------------------------------

std::vector<Count> weyl_b_coefficients(int n) {
    require_dim(n, "weyl_b_coefficients");
    if (n > 20) {
        throw Overflow("weyl_b_coefficients supports n <= 20, got " + std::to_string(n));
    }
    std::vector<Count> poly{1};
    for (int i = 1; i <= n; ++i) {
        const Count root = 2 * i - 1;
        std::vector<Count> next(poly.size() + 1, 0);
        for (std::size_t d = 0; d < poly.size(); ++d) {
            next[d] += poly[d] * root;
            next[d + 1] += poly[d];
        }
        poly.swap(next);
    }
    return poly;
}

std::vector<Fraction> weyl_b_volume_fractions(int n) {
    const auto b = weyl_b_coefficients(n);
    const Count den = pow2(n) * factorial(n);
    std::vector<Fraction> out;
    for (const auto& c : b) {
        out.push_back(Fraction::reduced(c, den));
    }
    return out;
}

std::vector<Fraction> weyl_b_angle_fractions(int n) {
    const auto b = weyl_b_coefficients(n);
    const Count den = pow2(n) * factorial(n);
    std::vector<Fraction> out;
    for (int k = 0; k <= n; ++k) {
        Count num = 0;
        for (int i = k + 1; i <= n; i += 2) {
            num += b[i];
        }
        out.push_back(Fraction::reduced(2 * num, den));
    }
    return out;
}

IntrinsicVolumes weyl_b_intrinsic_volumes(int n) {
    return {values_of(weyl_b_volume_fractions(n))};
}

AngleProfile weyl_b_grassmann(int n) {
    return {values_of(weyl_b_angle_fractions(n))};
}

// ---------------------------------------------------------------------------
// Crofton, subspaces
// ---------------------------------------------------------------------------

AngleProfile crofton_from_v(const IntrinsicVolumes& v, bool is_subspace) {
    const int size = static_cast<int>(v.values.size());
    AngleProfile g;
    g.values.assign(size, 0.0);
    for (int k = 0; k < size; ++k) {
        double tail = 0.0;
        const int stride = is_subspace ? 1 : 2;
        for (int i = k + 1; i < size; i += stride) {
            tail += v.values[i];
        }
        g.values[k] = is_subspace ? tail : 2.0 * tail;
    }
    return g;
}

AngleProfile subspace_grassmann(int m, int n) {
    if (m < 0 || m > n) {
        throw InvalidArgument("subspace_grassmann: need 0 <= m <= n");
    }
    AngleProfile g;
    g.values.assign(n + 1, 0.0);
    for (int k = 0; k < m; ++k) {
        g.values[k] = 1.0;
    }
    return g;
}

IntrinsicVolumes subspace_intrinsic_volumes(int m, int n) {
    if (m < 0 || m > n) {
        throw InvalidArgument("subspace_intrinsic_volumes: need 0 <= m <= n");
    }
    IntrinsicVolumes v;
    v.values.assign(n + 1, 0.0);
    v.values[m] = 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Incomplete beta and design matrices
// ---------------------------------------------------------------------------

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return h;
        }
    }
    throw SolverFailure("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument("reg_inc_beta: parameters must be positive and finite");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidArgument("reg_inc_beta: x must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The fraction converges fast below the mean; use symmetry above it.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double steiner_beta(int k, int n, double r) {
    if (k < 0 || k > n) {
        throw InvalidArgument("steiner_beta: need 0 <= k <= n");
    }
    if (k == n) return r >= 0.0 ? 1.0 : 0.0;
    if (k == 0) return r >= 1.0 ? 1.0 : 0.0;
    return reg_inc_beta(0.5 * (n - k), 0.5 * k, std::clamp(r, 0.0, 1.0));
}

Matrix steiner_design_matrix(int n, const std::vector<double>& r_grid) {
    require_dim(n, "steiner_design_matrix");
    if (r_grid.empty()) {
        throw InvalidArgument("steiner_design_matrix: empty grid");
    }
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
        if (!(r_grid[j] > 0.0 && r_grid[j] <= 1.0)) {
            throw InvalidArgument("steiner grid values must lie in (0, 1]");
        }
        if (j > 0 && !(r_grid[j] > r_grid[j - 1])) {
            throw InvalidArgument("steiner grid must be strictly increasing");
        }
    }
    Matrix m(static_cast<Eigen::Index>(r_grid.size()), n + 1);
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
        for (int k = 0; k <= n; ++k) {
            m(static_cast<Eigen::Index>(j), k) = steiner_beta(k, n, r_grid[j]);
        }
    }
    return m;
}

Matrix mgf_design_matrix(int n, const std::vector<double>& r_grid) {
    require_dim(n, "mgf_design_matrix");
    std::vector<double> sorted = r_grid;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("mgf grid values must be distinct");
    }
    Matrix m(static_cast<Eigen::Index>(r_grid.size()), n + 1);
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
        if (!(r_grid[j] > 0.0) || !std::isfinite(r_grid[j])) {
            throw InvalidArgument("mgf grid values must be positive");
        }
        double p = 1.0;
        for (int k = 0; k <= n; ++k) {
            m(static_cast<Eigen::Index>(j), k) = p;
            p *= r_grid[j];
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Least squares on the probability simplex
// ---------------------------------------------------------------------------

IntrinsicVolumes solve_simplex_constrained_ls(const Matrix& a, const Vector& b) {
    const int p = static_cast<int>(a.cols());
    if (p < 1 || a.rows() != b.size()) {
        throw InvalidArgument("solve_simplex_constrained_ls: inconsistent dimensions");
    }
    if (numerical_rank(a, 1e-12) < p) {
        throw InvalidArgument("solve_simplex_constrained_ls: design matrix is rank deficient");
    }
    const Matrix h = a.transpose() * a;
    const Vector f = a.transpose() * b;
    const double scale = std::max({1.0, h.cwiseAbs().maxCoeff(), f.cwiseAbs().maxCoeff()});
    const double tol = 1e-9 * scale;

    Vector x = Vector::Constant(p, 1.0 / p);
    std::vector<bool> free(p, true);

    const int max_iter = 50 * p + 50;
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<int> idx;
        for (int i = 0; i < p; ++i) {
            if (free[i]) idx.push_back(i);
        }
        const int nf = static_cast<int>(idx.size());
        // KKT system of the equality-constrained subproblem on the free set:
        //   H_FF y + lambda 1 = f_F,   1.y = 1.
        Matrix kkt = Matrix::Zero(nf + 1, nf + 1);
        Vector rhs(nf + 1);
        for (int r = 0; r < nf; ++r) {
            for (int c = 0; c < nf; ++c) {
                kkt(r, c) = h(idx[r], idx[c]);
            }
            kkt(r, nf) = 1.0;
            kkt(nf, r) = 1.0;
            rhs(r) = f(idx[r]);
        }
        rhs(nf) = 1.0;
        const Vector sol = kkt.colPivHouseholderQr().solve(rhs);
        const double lambda = sol(nf);

        bool feasible = true;
        for (int r = 0; r < nf; ++r) {
            if (sol(r) < 0.0) {
                feasible = false;
                break;
            }
        }
        if (feasible) {
            x.setZero();
            for (int r = 0; r < nf; ++r) {
                x(idx[r]) = sol(r);
            }
            // Multipliers of the active bounds: nu = H x - f + lambda 1.
            const Vector grad = h * x - f;
            int release = -1;
            double most_negative = -tol;
            for (int i = 0; i < p; ++i) {
                if (free[i]) continue;
                const double nu = grad(i) + lambda;
                if (nu < most_negative) {
                    most_negative = nu;
                    release = i;
                }
            }
            if (release < 0) {
                IntrinsicVolumes out;
                out.values.assign(x.data(), x.data() + p);
                return out;
            }
            free[release] = true;
            continue;
        }

        // Step toward the subproblem solution until a bound blocks.
        double alpha = 1.0;
        int blocking = -1;
        for (int r = 0; r < nf; ++r) {
            const int i = idx[r];
            if (sol(r) < 0.0) {
                const double step = x(i) / (x(i) - sol(r));
                if (step < alpha) {
                    alpha = step;
                    blocking = i;
                }
            }
        }
        for (int r = 0; r < nf; ++r) {
            const int i = idx[r];
            x(i) += alpha * (sol(r) - x(i));
        }
        if (blocking >= 0) {
            x(blocking) = 0.0;
            free[blocking] = false;
        }
        for (int i = 0; i < p; ++i) {
            if (free[i] && x(i) <= 0.0) {
                x(i) = 0.0;
                free[i] = false;
            }
        }
    }
    throw SolverFailure("solve_simplex_constrained_ls: active set did not settle");
}

// ---------------------------------------------------------------------------

Fraction wendel_absorption_fraction(int n, int k) {
    if (n < 2 || k < 1 || k > n - 1) {
        throw InvalidArgument("wendel_absorption: need 1 <= k <= n - 1");
    }
    return orthant_angle_fractions(n)[k];
}

double wendel_absorption(int n, int k) {
    return wendel_absorption_fraction(n, k).value();
}

std::vector<double> default_steiner_grid() {
    // The empirical CDF is free to evaluate at extra points of the same sample.
    std::vector<double> g;
    for (int j = 1; j <= 48; ++j) {
        g.push_back(j / 48.0);
    }
    return g;
}

std::vector<double> default_mgf_grid(int n) {
    require_dim(n, "default_mgf_grid");
    // Steps of 1/20 from 0.05 to 1.2; r = 1 is hit exactly. The variance of
    // the r-th mean is infinite from r = sqrt(2) on.
    std::vector<double> g;
    for (int i = 1; i <= 24; ++i) {
        g.push_back(i / 20.0);
    }
    return g;
}

std::optional<ExactReference> exact_for(const NamedCone& cone) {
    switch (cone.family) {
        case ConeFamily::orthant: {
            const int n = static_cast<int>(cone.params.at(0));
            return ExactReference{orthant_intrinsic_volumes(n), orthant_grassmann(n), false};
        }
        case ConeFamily::weyl_b: {
            const int n = static_cast<int>(cone.params.at(0));
            return ExactReference{weyl_b_intrinsic_volumes(n), weyl_b_grassmann(n), false};
        }
        case ConeFamily::subspace: {
            const int d = static_cast<int>(cone.params.at(0));
            const int n = static_cast<int>(cone.params.at(1));
            return ExactReference{subspace_intrinsic_volumes(d, n), subspace_grassmann(d, n), true};
        }
        case ConeFamily::simplex_tangent:
        case ConeFamily::custom:
            break;
    }
    return std::nullopt;
}

}  // namespace conic
