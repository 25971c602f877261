#include "conic/cones.hpp"
#include "conic/error.hpp"
#include "conic/feasible.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace conic;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

void expect_structure(const ConeVRep& c, int dim, int lineality, bool subspace) {
    const ConeStructure s = structure(c);
    EXPECT_EQ(s.dim, dim);
    EXPECT_EQ(s.lineality_dim, lineality);
    EXPECT_EQ(s.is_linear_subspace, subspace);
    EXPECT_EQ(is_linear_subspace(c), subspace);
}

}  // namespace

TEST(ConeVRep, RejectsBadGenerators) {
    EXPECT_THROW(ConeVRep(Matrix(0, 0)), InvalidArgument);
    EXPECT_THROW(ConeVRep(Matrix::Zero(2, 1)), InvalidArgument);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(ConeVRep{bad}, InvalidArgument);
    EXPECT_THROW(ConeVRep::from_vectors({vec({1, 0}), vec({1})}), InvalidArgument);
}

TEST(Families, Orthant) {
    EXPECT_EQ(orthant(2).generators(), Matrix::Identity(2, 2));
    expect_structure(orthant(3), 3, 0, false);
    EXPECT_TRUE(cone_contains(orthant(1), vec({1.0})));
    EXPECT_FALSE(cone_contains(orthant(1), vec({-1.0})));
    EXPECT_THROW(orthant(0), InvalidArgument);
}

TEST(Families, WeylChamber) {
    Matrix expected(2, 2);
    expected << 1, 1, 0, 1;
    EXPECT_EQ(weyl_chamber_b(2).generators(), expected);
    EXPECT_TRUE(cone_contains(weyl_chamber_b(2), vec({2, 1})));
    EXPECT_FALSE(cone_contains(weyl_chamber_b(2), vec({1, 2})));
    expect_structure(weyl_chamber_b(4), 4, 0, false);
}

TEST(Families, LinearSubspace) {
    const ConeVRep line = linear_subspace_cone({vec({1, 0})});
    EXPECT_EQ(line.num_generators(), 2);
    EXPECT_TRUE(line.generator(1).isApprox(vec({-1, 0})));
    EXPECT_TRUE(cone_contains(line, vec({-3, 0})));
    expect_structure(linear_subspace_cone({vec({1, 0, 0}), vec({0, 1, 0})}), 2, 2, true);
    EXPECT_THROW(linear_subspace_cone({vec({1, 1}), vec({2, 2})}), InvalidArgument);
}

TEST(Families, HalfPlaneStructure) {
    expect_structure(ConeVRep::from_vectors({vec({1, 0}), vec({-1, 0}), vec({0, 1})}), 2, 1, false);
}

TEST(Families, SimplexTangentCones) {
    const std::vector<Vector> delta = {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})};
    const ConeVRep vertex = simplex_tangent_cone(delta, 1);
    EXPECT_EQ(vertex.num_generators(), 2);
    expect_structure(vertex, 2, 0, false);

    const ConeVRep half_line = simplex_tangent_cone({vec({0}), vec({1})}, 1);
    ASSERT_EQ(half_line.num_generators(), 1);
    EXPECT_GT(half_line.generator(0)(0), 0.0);

    std::mt19937_64 gen(1);
    for (int t = 0; t < 20; ++t) {
        std::vector<Vector> pts;
        for (int i = 0; i < 3; ++i) pts.push_back(oracle::gaussian(3, 1, gen).col(0));
        expect_structure(simplex_tangent_cone(pts, 2), 2, 1, false);
    }
    EXPECT_THROW(simplex_tangent_cone(delta, 0), InvalidArgument);
    EXPECT_THROW(simplex_tangent_cone(delta, 4), InvalidArgument);
}

TEST(ApplyLinearMap, Basics) {
    const ConeVRep c = orthant(2);
    EXPECT_EQ(apply_linear_map(Matrix::Identity(2, 2), c).generators(), c.generators());
    const ConeVRep ray = apply_linear_map(Matrix::Ones(1, 2), c);
    EXPECT_TRUE(cone_contains(ray, vec({5})));
    EXPECT_FALSE(cone_contains(ray, vec({-5})));
    Matrix kill(1, 2);
    kill << 0, 0;
    EXPECT_THROW(apply_linear_map(kill, c), DegenerateCone);
    Matrix partial(1, 2);
    partial << 1, 0;
    EXPECT_EQ(apply_linear_map(partial, c).num_generators(), 1);
    EXPECT_THROW(apply_linear_map(Matrix::Ones(1, 3), c), InvalidArgument);
}

TEST(ApplyLinearMap, GaussianImageDimension) {
    RngStream rng(2);
    const ConeVRep c = weyl_chamber_b(4);
    for (int k = 1; k <= 6; ++k) {
        for (int t = 0; t < 50; ++t) {
            const ConeVRep image = apply_linear_map(sample_gaussian_matrix(k, 4, rng), c);
            EXPECT_EQ(structure(image).dim, std::min(k, 4));
        }
    }
}

TEST(ApplyLinearMap, ImagesOfConeCombinationsAreMembers) {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 200; ++t) {
        const ConeVRep c(oracle::gaussian(4, 5, gen));
        const Matrix a = oracle::gaussian(3, 4, gen);
        const Vector mu = oracle::gaussian(5, 1, gen).col(0).cwiseAbs();
        EXPECT_TRUE(cone_contains(apply_linear_map(a, c), a * c.generators() * mu));
    }
}

TEST(Families, DescriptionsAgreeWithMembership) {
    std::mt19937_64 gen(4);
    for (int n = 1; n <= 6; ++n) {
        const ConeVRep o = orthant(n), w = weyl_chamber_b(n);
        for (int t = 0; t < 1000; ++t) {
            const Vector z = oracle::gaussian(n, 1, gen).col(0);
            EXPECT_EQ(cone_contains(o, z), z.minCoeff() >= 0.0);
            bool in_w = z(n - 1) >= 0.0;
            for (int i = 0; i + 1 < n; ++i) in_w = in_w && z(i) >= z(i + 1);
            EXPECT_EQ(cone_contains(w, z), in_w);
        }
    }
}

TEST(Structure, SubspaceIffNegatedGeneratorsInside) {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> count(1, 5);
    for (int t = 0; t < 200; ++t) {
        const int m = count(gen);
        Matrix g = oracle::gaussian(3, m, gen);
        if (t % 3 == 0) {
            Matrix both(3, 2 * m);
            both << g, -g;
            g = both;
        }
        const ConeVRep c(g);
        bool all_negated = true;
        for (int j = 0; j < c.num_generators(); ++j) {
            all_negated = all_negated && cone_contains(c, -c.generator(j), 1e-8);
        }
        EXPECT_EQ(is_linear_subspace(c), all_negated);
        EXPECT_EQ(structure(c).is_linear_subspace, all_negated);
    }
}

TEST(Embed, PadsWithZeros) {
    const ConeVRep e = embed(orthant(2), 4);
    EXPECT_EQ(e.ambient_dim(), 4);
    EXPECT_EQ(structure(e).dim, 2);
    EXPECT_THROW(embed(orthant(3), 2), InvalidArgument);
}

TEST(ParseConeLiteral, Families) {
    EXPECT_EQ(parse_cone_literal("orthant:3").family, ConeFamily::orthant);
    EXPECT_EQ(parse_cone_literal("weyl-b:2").cone.generators(), weyl_chamber_b(2).generators());
    const NamedCone s = parse_cone_literal("subspace:2,4");
    EXPECT_EQ(s.cone.ambient_dim(), 4);
    EXPECT_TRUE(is_linear_subspace(s.cone));
    const NamedCone t1 = parse_cone_literal("simplex-tangent:4,3,1,9");
    const NamedCone t2 = parse_cone_literal("simplex-tangent:4,3,1,9");
    EXPECT_EQ(t1.cone.generators(), t2.cone.generators());
    const NamedCone j = parse_cone_literal(R"({"ambient_dim": 2, "generators": [[1, 0], [1, 1]]})");
    EXPECT_EQ(j.family, ConeFamily::custom);
    EXPECT_EQ(j.cone.generators(), weyl_chamber_b(2).generators());
}

TEST(ParseConeLiteral, Errors) {
    for (const char* bad : {"orthant", "orthant:", "orthant:x", "orthant:0", "orthant:1,2", "cube:3",
                            "subspace:3,2", "simplex-tangent:3,2,3,1", "{\"ambient_dim\": 2}",
                            "{\"ambient_dim\": 2, \"generators\": [[1]]}", "{bad json"}) {
        EXPECT_THROW(parse_cone_literal(bad), InvalidArgument) << bad;
    }
}
