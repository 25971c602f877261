#include "conic/error.hpp"
#include "conic/linalg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace conic;

TEST(RngStream, SameSeedAndStreamGiveSameSequence) {
    RngStream a(7, 3), b(7, 3);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next_u64(), b.next_u64());
    }
}

TEST(RngStream, StreamsAndSubstreamsDiffer) {
    RngStream a(7, 0), b(7, 1);
    EXPECT_NE(a.next_u64(), b.next_u64());
    const RngStream root(7);
    RngStream c0 = root.substream(0), c1 = root.substream(1);
    EXPECT_NE(c0.next_u64(), c1.next_u64());
    RngStream again = root.substream(1);
    RngStream c1b = root.substream(1);
    EXPECT_EQ(again.next_u64(), c1b.next_u64());
}

TEST(RngStream, UniformInUnitInterval) {
    RngStream r(1);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(RngStream, NormalMoments) {
    RngStream r(2);
    const int n = 200000;
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        m1 += x;
        m2 += x * x;
        m4 += x * x * x * x;
    }
    EXPECT_NEAR(m1 / n, 0.0, 0.01);
    EXPECT_NEAR(m2 / n, 1.0, 0.015);
    EXPECT_NEAR(m4 / n, 3.0, 0.08);
}

TEST(Subspace, RejectsNonOrthonormalBasis) {
    Matrix b(3, 2);
    b << 1, 1, 0, 1, 0, 0;
    EXPECT_THROW(Subspace(3, b), InvalidArgument);
    EXPECT_THROW(Subspace(2, Matrix::Identity(3, 3)), InvalidArgument);
}

TEST(Subspace, ZeroWholeAndComplement) {
    const Subspace z = Subspace::zero(4);
    EXPECT_EQ(z.dim(), 0);
    EXPECT_EQ(z.orthogonal_complement().dim(), 4);
    const Subspace w = Subspace::whole(3);
    EXPECT_TRUE(w.projector().isApprox(Matrix::Identity(3, 3)));

    RngStream r(3);
    const Subspace s = sample_uniform_subspace(5, 2, r);
    const Subspace c = s.orthogonal_complement();
    EXPECT_EQ(c.dim(), 3);
    EXPECT_LT((s.basis().transpose() * c.basis()).norm(), 1e-12);
    EXPECT_TRUE((s.projector() + c.projector()).isApprox(Matrix::Identity(5, 5), 1e-12));
}

TEST(Sampling, SphereAndSubspaceShapes) {
    RngStream r(4);
    for (int i = 0; i < 50; ++i) {
        EXPECT_NEAR(sample_uniform_sphere(6, r).norm(), 1.0, 1e-14);
        const Subspace s = sample_uniform_subspace(6, 3, r);
        EXPECT_EQ(s.dim(), 3);
        EXPECT_LT((s.basis().transpose() * s.basis() - Matrix::Identity(3, 3)).norm(), 1e-12);
    }
    EXPECT_EQ(sample_uniform_subspace(4, 0, r).dim(), 0);
    EXPECT_EQ(sample_uniform_subspace(4, 4, r).dim(), 4);
    EXPECT_THROW(sample_uniform_subspace(4, 5, r), InvalidArgument);
}

TEST(Sampling, GaussianMatrixIsDeterministic) {
    RngStream a(9), b(9);
    EXPECT_EQ(sample_gaussian_matrix(3, 4, a), sample_gaussian_matrix(3, 4, b));
}

// The first coordinate of a Haar line's unit vector, squared, is Beta(1/2, (n-1)/2);
// for n = 3 its distribution function is sqrt(t).
TEST(Sampling, HaarLineMatchesKnownLaw) {
    RngStream r(5);
    const int n = 20000;
    std::vector<double> t;
    for (int i = 0; i < n; ++i) {
        const Subspace s = sample_uniform_subspace(3, 1, r);
        t.push_back(s.basis()(0, 0) * s.basis()(0, 0));
    }
    std::sort(t.begin(), t.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = std::sqrt(t[i]);
        ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
    }
    // 99.9% Kolmogorov quantile is about 1.95 / sqrt(n).
    EXPECT_LT(ks, 1.95 / std::sqrt(double(n)));
}

// Rotation invariance of the sphere sampler: the law of <Z, u> does not depend on u.
TEST(Sampling, SphereRotationInvariance) {
    RngStream r(6);
    const int n = 20000;
    Vector u = Vector::Ones(4).normalized();
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
        const Vector z = sample_uniform_sphere(4, r);
        a.push_back(z(0));
        b.push_back(z.dot(u));
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // Two-sample KS statistic by merging.
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i; else ++j;
        d = std::max(d, std::abs(double(i) / n - double(j) / n));
    }
    EXPECT_LT(d, 1.95 * std::sqrt(2.0 / n));
}

TEST(ProjectOntoSubspace, Basics) {
    Matrix b = Matrix::Zero(3, 1);
    b(0, 0) = 1.0;
    const Subspace s(3, b);
    Vector x(3);
    x << 2, 3, 4;
    const Vector p = project_onto_subspace(x, s);
    EXPECT_DOUBLE_EQ(p(0), 2.0);
    EXPECT_DOUBLE_EQ(p(1), 0.0);
    EXPECT_THROW(project_onto_subspace(Vector::Ones(2), s), InvalidArgument);
}

TEST(Orthonormalize, DropsDependentColumns) {
    Matrix m(3, 3);
    m << 1, 2, 0,
         0, 0, 1,
         0, 0, 0;
    const Subspace s = orthonormalize(m);
    EXPECT_EQ(s.dim(), 2);
    EXPECT_EQ(numerical_rank(m), 2);
    EXPECT_EQ(numerical_rank(Matrix::Identity(4, 4)), 4);
    EXPECT_EQ(numerical_rank(Matrix::Zero(3, 2)), 0);
}
