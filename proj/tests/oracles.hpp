#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive and share no code with the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Nearest point of pos(G) to z by trying every support set: least squares on
// each subset of columns with full column rank, kept when the coefficients
// are nonnegative. The cone projection is the best feasible candidate.
inline Vector nnls_projection(const Matrix& g, const Vector& z) {
    const int m = static_cast<int>(g.cols());
    Vector best = Vector::Zero(g.rows());
    double best_res = z.squaredNorm();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> cols;
        for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) cols.push_back(i);
        }
        Matrix s(g.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t i = 0; i < cols.size(); ++i) s.col(static_cast<Eigen::Index>(i)) = g.col(cols[i]);
        Eigen::ColPivHouseholderQR<Matrix> qr(s);
        if (qr.rank() < static_cast<Eigen::Index>(cols.size())) continue;
        const Vector c = qr.solve(z);
        if (c.minCoeff() < -1e-12) continue;
        const Vector p = s * c;
        const double res = (z - p).squaredNorm();
        if (res < best_res) {
            best_res = res;
            best = p;
        }
    }
    return best;
}

// Pool-adjacent-violators for the nonincreasing least-squares fit.
inline Vector pava_nonincreasing(const Vector& z) {
    std::vector<double> value;
    std::vector<int> weight;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        value.push_back(z(i));
        weight.push_back(1);
        while (value.size() > 1 && value[value.size() - 2] < value.back()) {
            const double w1 = weight[weight.size() - 2];
            const double w2 = weight.back();
            const double merged = (w1 * value[value.size() - 2] + w2 * value.back()) / (w1 + w2);
            value.pop_back();
            weight.pop_back();
            value.back() = merged;
            weight.back() += static_cast<int>(w2);
        }
    }
    Vector out(z.size());
    Eigen::Index pos = 0;
    for (std::size_t b = 0; b < value.size(); ++b) {
        for (int t = 0; t < weight[b]; ++t) out(pos++) = value[b];
    }
    return out;
}

// Projection onto {x_1 >= x_2 >= ... >= x_n >= 0}.
inline Vector weyl_b_projection(const Vector& z) {
    return pava_nonincreasing(z).cwiseMax(0.0);
}

inline Matrix gaussian(int rows, int cols, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = nd(gen);
    return m;
}

// Dirichlet(1, ..., 1) draw with roughly a third of the entries zeroed.
inline std::vector<double> sparse_simplex_point(int size, std::mt19937_64& gen) {
    std::exponential_distribution<double> ex;
    std::bernoulli_distribution drop(1.0 / 3.0);
    std::vector<double> v(size);
    double total = 0.0;
    for (auto& x : v) {
        x = drop(gen) ? 0.0 : ex(gen);
        total += x;
    }
    if (total == 0.0) {
        v[0] = total = 1.0;
    }
    for (auto& x : v) x /= total;
    return v;
}

}  // namespace oracle
