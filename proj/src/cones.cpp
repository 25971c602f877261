#include "conic/cones.hpp"

#include "conic/error.hpp"
#include "conic/feasible.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <string_view>

namespace conic {

ConeVRep::ConeVRep(Matrix generators) : generators_(std::move(generators)) {
    if (generators_.rows() < 1 || generators_.cols() < 1) {
        throw InvalidArgument("a cone needs ambient dimension >= 1 and at least one generator");
    }
    if (!generators_.allFinite()) {
        throw InvalidArgument("cone generators must be finite");
    }
    for (int j = 0; j < generators_.cols(); ++j) {
        if (!(generators_.col(j).norm() > 0.0)) {
            throw InvalidArgument("cone generator " + std::to_string(j) + " is zero");
        }
    }
}

ConeVRep ConeVRep::from_vectors(const std::vector<Vector>& generators) {
    if (generators.empty()) {
        throw InvalidArgument("a cone needs at least one generator");
    }
    const auto n = generators.front().size();
    Matrix g(n, static_cast<Eigen::Index>(generators.size()));
    for (std::size_t j = 0; j < generators.size(); ++j) {
        if (generators[j].size() != n) {
            throw InvalidArgument("generators have mixed dimensions");
        }
        g.col(static_cast<Eigen::Index>(j)) = generators[j];
    }
    return ConeVRep(std::move(g));
}

Matrix ConeVRep::normalized_generators() const {
    return generators_.colwise().normalized();
}

ConeVRep orthant(int n) {
    if (n < 1) {
        throw InvalidArgument("orthant dimension must be >= 1");
    }
    return ConeVRep(Matrix::Identity(n, n));
}

ConeVRep weyl_chamber_b(int n) {
    if (n < 1) {
        throw InvalidArgument("Weyl chamber dimension must be >= 1");
    }
    // Column j is e_1 + ... + e_{j+1}.
    Matrix g = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        g.col(j).head(j + 1).setOnes();
    }
    return ConeVRep(std::move(g));
}

ConeVRep linear_subspace_cone(const std::vector<Vector>& basis) {
    if (basis.empty()) {
        throw InvalidArgument("linear_subspace_cone needs a nonempty basis");
    }
    std::vector<Vector> gens;
    for (const auto& b : basis) {
        gens.push_back(b);
        gens.push_back(-b);
    }
    ConeVRep cone = ConeVRep::from_vectors(gens);
    Matrix b(cone.ambient_dim(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        b.col(static_cast<Eigen::Index>(i)) = basis[i];
    }
    if (numerical_rank(b.colwise().normalized(), kDefaultTol) != static_cast<int>(basis.size())) {
        throw InvalidArgument("linear_subspace_cone: basis vectors are dependent");
    }
    return cone;
}

ConeVRep simplex_tangent_cone(const std::vector<Vector>& points, int face_size) {
    const int n = static_cast<int>(points.size());
    if (face_size < 1 || face_size > n) {
        throw InvalidArgument("simplex_tangent_cone: face size " + std::to_string(face_size) +
                              " outside [1, " + std::to_string(n) + "]");
    }
    Vector centroid = Vector::Zero(points.front().size());
    for (int i = 0; i < face_size; ++i) {
        centroid += points[i];
    }
    centroid /= face_size;

    double scale = 0.0;
    for (const auto& p : points) {
        scale = std::max(scale, p.norm());
    }
    std::vector<Vector> gens;
    for (const auto& p : points) {
        Vector d = p - centroid;
        if (d.norm() > 1e-14 * std::max(1.0, scale)) {
            gens.push_back(std::move(d));
        }
    }
    if (gens.empty()) {
        throw DegenerateCone("simplex_tangent_cone: all directions vanish");
    }
    return ConeVRep::from_vectors(gens);
}

ConeVRep apply_linear_map(const Matrix& a, const ConeVRep& cone) {
    if (a.cols() != cone.ambient_dim()) {
        throw InvalidArgument("apply_linear_map: matrix has " + std::to_string(a.cols()) +
                              " columns, cone lives in R^" + std::to_string(cone.ambient_dim()));
    }
    const Matrix images = a * cone.generators();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < images.cols(); ++j) {
        if (images.col(j).norm() > 0.0) {
            keep.push_back(j);
        }
    }
    if (keep.empty()) {
        throw DegenerateCone("apply_linear_map: every generator maps to zero");
    }
    if (static_cast<Eigen::Index>(keep.size()) == images.cols()) {
        return ConeVRep(images);
    }
    Matrix g(images.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        g.col(static_cast<Eigen::Index>(i)) = images.col(keep[i]);
    }
    return ConeVRep(std::move(g));
}

ConeVRep embed(const ConeVRep& cone, int ambient) {
    if (ambient < cone.ambient_dim()) {
        throw InvalidArgument("embed: target dimension smaller than the cone's");
    }
    Matrix g = Matrix::Zero(ambient, cone.num_generators());
    g.topRows(cone.ambient_dim()) = cone.generators();
    return ConeVRep(std::move(g));
}

ConeStructure structure(const ConeVRep& cone, double tol) {
    if (!(tol > 0.0)) {
        throw InvalidArgument("structure: tolerance must be positive");
    }
    const Matrix g = cone.normalized_generators();
    ConeStructure s;
    s.dim = numerical_rank(g, tol);

    // The lineality space is spanned by the generators g with -g in C.
    std::vector<Eigen::Index> two_sided;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        if (cone_contains(cone, -g.col(j), tol)) {
            two_sided.push_back(j);
        }
    }
    if (!two_sided.empty()) {
        Matrix l(g.rows(), static_cast<Eigen::Index>(two_sided.size()));
        for (std::size_t i = 0; i < two_sided.size(); ++i) {
            l.col(static_cast<Eigen::Index>(i)) = g.col(two_sided[i]);
        }
        s.lineality_dim = numerical_rank(l, tol);
    }
    s.is_linear_subspace = s.lineality_dim == s.dim;
    return s;
}

bool is_linear_subspace(const ConeVRep& cone) {
    return origin_in_relint_of_hull(cone.generators());
}

std::vector<Vector> gaussian_simplex_points(int n, int k, std::uint64_t seed) {
    if (n < 1 || k < 1) {
        throw InvalidArgument("gaussian simplex needs n, k >= 1");
    }
    RngStream rng(seed, 0);
    std::vector<Vector> pts;
    for (int i = 0; i < n; ++i) {
        pts.push_back(sample_gaussian_vector(k, rng));
    }
    return pts;
}

namespace {

std::vector<long long> parse_int_list(std::string_view text, const std::string& literal) {
    std::vector<long long> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            throw InvalidArgument("malformed cone literal '" + literal + "'");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

void expect_arity(const std::vector<long long>& p, std::size_t n, const std::string& literal) {
    if (p.size() != n) {
        throw InvalidArgument("cone literal '" + literal + "' expects " + std::to_string(n) +
                              " integer parameter(s)");
    }
}

NamedCone parse_json_cone(const std::string& literal) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(literal);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("cone literal is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("generators")) {
        throw InvalidArgument("JSON cone needs \"ambient_dim\" and \"generators\"");
    }
    try {
        const int n = j.at("ambient_dim").get<int>();
        std::vector<Vector> gens;
        for (const auto& row : j.at("generators")) {
            const auto values = row.get<std::vector<double>>();
            if (static_cast<int>(values.size()) != n) {
                throw InvalidArgument("JSON cone generator has wrong dimension");
            }
            gens.push_back(Eigen::Map<const Vector>(values.data(), n));
        }
        return NamedCone{ConeFamily::custom, {}, ConeVRep::from_vectors(gens), literal};
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("malformed JSON cone: " + std::string(e.what()));
    }
}

}  // namespace

NamedCone parse_cone_literal(const std::string& literal) {
    const auto first = literal.find_first_not_of(" \t\n");
    if (first != std::string::npos && literal[first] == '{') {
        return parse_json_cone(literal);
    }
    const auto colon = literal.find(':');
    if (colon == std::string::npos) {
        throw InvalidArgument("unknown cone literal '" + literal + "'");
    }
    const std::string family = literal.substr(0, colon);
    const auto p = parse_int_list(std::string_view(literal).substr(colon + 1), literal);

    auto positive = [&](long long v) {
        if (v < 1 || v > 64) {
            throw InvalidArgument("cone literal '" + literal + "': dimension out of range");
        }
        return static_cast<int>(v);
    };

    if (family == "orthant") {
        expect_arity(p, 1, literal);
        return NamedCone{ConeFamily::orthant, p, orthant(positive(p[0])), literal};
    }
    if (family == "weyl-b") {
        expect_arity(p, 1, literal);
        return NamedCone{ConeFamily::weyl_b, p, weyl_chamber_b(positive(p[0])), literal};
    }
    if (family == "subspace") {
        expect_arity(p, 2, literal);
        const int d = positive(p[0]);
        const int n = positive(p[1]);
        if (d > n) {
            throw InvalidArgument("cone literal '" + literal + "': d exceeds n");
        }
        std::vector<Vector> basis;
        for (int i = 0; i < d; ++i) {
            basis.push_back(Vector::Unit(n, i));
        }
        return NamedCone{ConeFamily::subspace, p, linear_subspace_cone(basis), literal};
    }
    if (family == "simplex-tangent") {
        expect_arity(p, 4, literal);
        const int n = positive(p[0]);
        const int k = positive(p[1]);
        const long long ell = p[2];
        if (ell < 0 || ell + 1 > n || p[3] < 0) {
            throw InvalidArgument("cone literal '" + literal + "': ell or seed out of range");
        }
        const auto pts = gaussian_simplex_points(n, k, static_cast<std::uint64_t>(p[3]));
        return NamedCone{ConeFamily::simplex_tangent, p,
                         simplex_tangent_cone(pts, static_cast<int>(ell) + 1), literal};
    }
    throw InvalidArgument("unknown cone family '" + family + "'");
}

}  // namespace conic
