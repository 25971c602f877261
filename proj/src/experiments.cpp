#include "conic/experiments.hpp"

#include "conic/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace conic {

namespace {

using nlohmann::json;

double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

json number_or_null(const std::optional<double>& x) {
    if (!x || !std::isfinite(*x)) return nullptr;
    return round12(*x);
}

SamplingPlan plan_for(const ExperimentSpec& spec, std::uint64_t stream) {
    if (spec.samples < 1) {
        throw InvalidArgument("samples must be positive");
    }
    SamplingPlan plan;
    plan.samples = spec.samples;
    plan.rng = RngStream(spec.seed, 0).substream(stream);
    plan.threads = spec.threads;
    return plan;
}

NamedCone cone_or(const ExperimentSpec& spec, const std::string& fallback) {
    return parse_cone_literal(spec.cone.value_or(fallback));
}

NamedCone require_cone(const ExperimentSpec& spec) {
    if (!spec.cone) {
        throw InvalidArgument("'" + spec.experiment + "' needs --cone");
    }
    return parse_cone_literal(*spec.cone);
}

int require_int(const std::optional<int>& v, const char* flag, const ExperimentSpec& spec) {
    if (!v) {
        throw InvalidArgument("'" + spec.experiment + "' needs " + flag);
    }
    return *v;
}

int cone_dimension(const NamedCone& c) {
    return numerical_rank(c.cone.normalized_generators(), kDefaultTol);
}

ExperimentReport start(const ExperimentSpec& spec, const NamedCone* cone) {
    ExperimentReport r;
    r.experiment = spec.experiment;
    r.seed = spec.seed;
    r.params["samples"] = spec.samples;
    r.params["z_max"] = spec.z_max;
    if (cone) {
        r.params["cone"] = cone->literal;
    }
    return r;
}

void add(ExperimentReport& r, Estimate e, std::optional<double> abs_tol = std::nullopt) {
    r.entries.push_back(ReportEntry{std::move(e), abs_tol, true});
}

void finish(ExperimentReport& r, double z_max) {
    r.pass = true;
    for (auto& entry : r.entries) {
        const Estimate& e = entry.estimate;
        if (entry.abs_tol && e.exact_ref) {
            entry.pass = std::abs(e.value - *e.exact_ref) <= *entry.abs_tol;
        } else if (e.z_score) {
            entry.pass = std::abs(*e.z_score) <= z_max;
        } else {
            entry.pass = true;
        }
        r.pass = r.pass && entry.pass;
    }
}

// ---------------------------------------------------------------------------

void absorption(ExperimentReport& r, const ExperimentSpec& spec, const NamedCone& c, int k) {
    r.params["k"] = k;
    Estimate e = estimate_absorption(c.cone, k, plan_for(spec, 1));
    if (const auto ref = exact_for(c); ref && k < static_cast<int>(ref->angles.values.size())) {
        e.with_exact(ref->angles.values[k]);
    }
    add(r, std::move(e));
}

void grassmann(ExperimentReport& r, const ExperimentSpec& spec, const NamedCone& c,
               const std::vector<int>& js) {
    const auto ref = exact_for(c);
    json jl = json::array();
    for (std::size_t i = 0; i < js.size(); ++i) {
        const int j = js[i];
        jl.push_back(j);
        Estimate e = estimate_grassmann_subspace(c.cone, j, plan_for(spec, 1 + i));
        if (ref) e.with_exact(ref->angles.values.at(j));
        add(r, std::move(e));
    }
    r.params["j"] = jl;
}

void image_grassmann(ExperimentReport& r, const ExperimentSpec& spec, const NamedCone& c, int k, int j,
                     bool conditional) {
    r.params["k"] = k;
    r.params["j"] = j;
    ImageEstimate im = estimate_expected_grassmann_image(c.cone, k, j, plan_for(spec, 1), conditional);
    if (const auto ref = exact_for(c)) {
        const auto& g = ref->angles.values;
        const double gk = k < static_cast<int>(g.size()) ? g[k] : 0.0;
        im.estimate.with_exact(conditional ? g.at(j) - gk : g.at(j));
    }
    r.notes.push_back("images equal to R^k: " + std::to_string(im.full_space_images) +
                      "; degenerate images excluded: " + std::to_string(im.degenerate_images));
    add(r, std::move(im.estimate));
}

void solid_angle(ExperimentReport& r, const ExperimentSpec& spec, const NamedCone& c,
                 const std::vector<int>& ks) {
    const auto ref = exact_for(c);
    Estimate a = estimate_solid_angle(c.cone, plan_for(spec, 1));
    if (ref) a.with_exact(ref->volumes.values.back());
    add(r, std::move(a));
    json kl = json::array();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const int k = ks[i];
        kl.push_back(k);
        Estimate e = estimate_expected_solid_angle_image(c.cone, k, plan_for(spec, 2 + i));
        if (ref) {
            const auto& g = ref->angles.values;
            e.with_exact(0.5 * (g.at(k) + g.at(k - 1)));
        }
        add(r, std::move(e));
    }
    r.params["k"] = kl;
}

void persistence(ExperimentReport& r, const ExperimentSpec& spec, const NamedCone& c) {
    Estimate e = estimate_persistence_v0(c.cone, plan_for(spec, 1));
    if (const auto ref = exact_for(c)) e.with_exact(ref->volumes.values.front());
    add(r, std::move(e));
}

void volumes(ExperimentReport& r, const ExperimentSpec& spec, const NamedCone& c, bool mgf) {
    const int n = c.cone.ambient_dim();
    std::vector<double> grid = spec.r_grid;
    if (grid.empty()) {
        grid = mgf ? default_mgf_grid(n) : default_steiner_grid();
    }
    r.params["r_grid"] = grid;
    VolumeEstimate v = mgf ? estimate_intrinsic_volumes_mgf(c.cone, grid, plan_for(spec, 1))
                           : estimate_intrinsic_volumes_steiner(c.cone, grid, plan_for(spec, 1));
    const auto ref = exact_for(c);
    const Matrix design = mgf ? mgf_design_matrix(n, grid) : steiner_design_matrix(n, grid);
    for (std::size_t i = 0; i < v.per_r.size(); ++i) {
        Estimate e = v.per_r[i];
        if (ref) {
            const Eigen::Map<const Vector> u(ref->volumes.values.data(),
                                             static_cast<Eigen::Index>(ref->volumes.values.size()));
            e.with_exact(design.row(static_cast<Eigen::Index>(i)).dot(u));
        }
        add(r, std::move(e));
    }
    for (std::size_t k = 0; k < v.recovered.values.size(); ++k) {
        Estimate e;
        e.name = "upsilon_" + std::to_string(k);
        e.value = v.recovered.values[k];
        e.samples = spec.samples;
        if (ref) {
            e.exact_ref = ref->volumes.values[k];
            add(r, std::move(e), kVolumeAbsTol);
        } else {
            add(r, std::move(e));
        }
    }
}

void angle_sums(ExperimentReport& r, const ExperimentSpec& spec, int n, int k, int ell, int j) {
    r.params["n"] = n;
    r.params["k"] = k;
    r.params["ell"] = ell;
    r.params["j"] = j;
    AngleSumEstimate a = estimate_face_angle_sums(n, k, ell, j, plan_for(spec, 1));
    if (j == 0) {
        const double faces = binomial(n, ell + 1).convert_to<double>();
        a.gaussian.with_exact(faces);
        a.regular.with_exact(faces);
    }
    add(r, std::move(a.gaussian));
    add(r, std::move(a.regular));
    add(r, std::move(a.difference));
}

std::vector<int> range(int from, int to) {
    std::vector<int> v;
    for (int i = from; i <= to; ++i) v.push_back(i);
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
    try {
        ExperimentSpec s;
        s.experiment = j.at("experiment").get<std::string>();
        auto opt_int = [&](const char* key, std::optional<int>& out) {
            if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<int>();
        };
        if (j.contains("cone") && !j.at("cone").is_null()) {
            const auto& c = j.at("cone");
            s.cone = c.is_string() ? c.get<std::string>() : c.dump();
        }
        opt_int("n", s.n);
        opt_int("k", s.k);
        opt_int("j", s.j);
        opt_int("ell", s.ell);
        if (j.contains("samples")) s.samples = j.at("samples").get<std::size_t>();
        if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("r_grid")) s.r_grid = j.at("r_grid").get<std::vector<double>>();
        if (j.contains("z_max")) s.z_max = j.at("z_max").get<double>();
        if (j.contains("threads")) s.threads = j.at("threads").get<unsigned>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("malformed experiment spec: " + std::string(e.what()));
    }
}

nlohmann::json ExperimentSpec::to_json() const {
    json j;
    j["experiment"] = experiment;
    if (cone) j["cone"] = *cone;
    if (n) j["n"] = *n;
    if (k) j["k"] = *k;
    if (this->j) j["j"] = *this->j;
    if (ell) j["ell"] = *ell;
    j["samples"] = samples;
    j["seed"] = seed;
    if (!r_grid.empty()) j["r_grid"] = r_grid;
    j["z_max"] = z_max;
    return j;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "absorption-wendel", "absorption-weyl",   "grassmann-orthant", "theorem-655",
        "solid-angle",       "persistence-v0",    "intrinsic-mgf",     "intrinsic-steiner",
        "simplex-angle-sums", "conditional-1151",
    };
    return names;
}

const std::vector<std::string>& estimate_kinds() {
    static const std::vector<std::string> kinds = {
        "absorption",    "grassmann",         "solid-angle", "persistence",
        "intrinsic-mgf", "intrinsic-steiner", "angle-sums",
    };
    return kinds;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    const std::string& name = spec.experiment;

    if (name == "absorption-wendel") {
        if (spec.cone) {
            throw InvalidArgument("absorption-wendel uses the basis of R^n; pass --n, not --cone");
        }
        const int n = spec.n.value_or(4);
        const int k = spec.k.value_or(2);
        if (n < 2 || n > 64 || k < 1 || k > n - 1) {
            throw InvalidArgument("absorption-wendel: need 2 <= n <= 64 and 1 <= k <= n - 1");
        }
        const NamedCone c = parse_cone_literal("orthant:" + std::to_string(n));
        ExperimentReport r = start(spec, &c);
        r.params["n"] = n;
        r.params["k"] = k;
        Estimate e = estimate_absorption(c.cone, k, plan_for(spec, 1));
        e.with_exact(wendel_absorption(n, k));
        r.notes.push_back("exact reference " + wendel_absorption_fraction(n, k).str());
        add(r, std::move(e));
        finish(r, spec.z_max);
        return r;
    }
    if (name == "absorption-weyl") {
        const NamedCone c = cone_or(spec, "weyl-b:3");
        ExperimentReport r = start(spec, &c);
        absorption(r, spec, c, spec.k.value_or(1));
        finish(r, spec.z_max);
        return r;
    }
    if (name == "grassmann-orthant") {
        const NamedCone c = cone_or(spec, "orthant:3");
        ExperimentReport r = start(spec, &c);
        const std::vector<int> js = spec.j ? std::vector<int>{*spec.j} : range(1, cone_dimension(c) - 1);
        grassmann(r, spec, c, js);
        finish(r, spec.z_max);
        return r;
    }
    if (name == "theorem-655" || name == "conditional-1151") {
        const NamedCone c = cone_or(spec, name == "theorem-655" ? "weyl-b:3" : "orthant:3");
        ExperimentReport r = start(spec, &c);
        image_grassmann(r, spec, c, spec.k.value_or(2), spec.j.value_or(1), name == "conditional-1151");
        finish(r, spec.z_max);
        return r;
    }
    if (name == "solid-angle") {
        const NamedCone c = cone_or(spec, "orthant:3");
        ExperimentReport r = start(spec, &c);
        const std::vector<int> ks = spec.k ? std::vector<int>{*spec.k} : range(1, cone_dimension(c));
        solid_angle(r, spec, c, ks);
        finish(r, spec.z_max);
        return r;
    }
    if (name == "persistence-v0") {
        const NamedCone c = cone_or(spec, "orthant:3");
        ExperimentReport r = start(spec, &c);
        persistence(r, spec, c);
        finish(r, spec.z_max);
        return r;
    }
    if (name == "intrinsic-mgf" || name == "intrinsic-steiner") {
        const bool mgf = name == "intrinsic-mgf";
        const NamedCone c = cone_or(spec, mgf ? "weyl-b:2" : "orthant:2");
        ExperimentReport r = start(spec, &c);
        volumes(r, spec, c, mgf);
        finish(r, spec.z_max);
        return r;
    }
    if (name == "simplex-angle-sums") {
        ExperimentReport r = start(spec, nullptr);
        angle_sums(r, spec, spec.n.value_or(3), spec.k.value_or(2), spec.ell.value_or(0),
                   spec.j.value_or(1));
        finish(r, spec.z_max);
        return r;
    }
    throw InvalidArgument("unknown experiment '" + name + "'");
}

std::vector<ExperimentReport> run_all(const ExperimentSpec& spec) {
    std::vector<ExperimentReport> reports;
    for (const auto& name : experiment_names()) {
        ExperimentSpec s;
        s.experiment = name;
        s.samples = spec.samples;
        s.seed = spec.seed;
        s.z_max = spec.z_max;
        s.threads = spec.threads;
        reports.push_back(run_experiment(s));
    }
    return reports;
}

ExperimentReport run_estimate(const ExperimentSpec& spec) {
    const std::string& kind = spec.experiment;
    if (kind == "angle-sums") {
        ExperimentReport r = start(spec, nullptr);
        angle_sums(r, spec, require_int(spec.n, "--n", spec), require_int(spec.k, "--k", spec),
                   spec.ell.value_or(0), require_int(spec.j, "--j", spec));
        finish(r, spec.z_max);
        return r;
    }
    if (kind != "absorption" && kind != "grassmann" && kind != "solid-angle" && kind != "persistence" &&
        kind != "intrinsic-mgf" && kind != "intrinsic-steiner") {
        throw InvalidArgument("unknown estimate kind '" + kind + "'");
    }
    const NamedCone c = require_cone(spec);
    ExperimentReport r = start(spec, &c);
    if (kind == "absorption") {
        absorption(r, spec, c, require_int(spec.k, "--k", spec));
    } else if (kind == "grassmann") {
        grassmann(r, spec, c, {require_int(spec.j, "--j", spec)});
    } else if (kind == "solid-angle") {
        solid_angle(r, spec, c, spec.k ? std::vector<int>{*spec.k} : std::vector<int>{});
    } else if (kind == "persistence") {
        persistence(r, spec, c);
    } else {
        volumes(r, spec, c, kind == "intrinsic-mgf");
    }
    finish(r, spec.z_max);
    return r;
}

// ---------------------------------------------------------------------------

namespace {

json entry_to_json(const ReportEntry& entry) {
    const Estimate& e = entry.estimate;
    json j;
    j["name"] = e.name;
    j["value"] = round12(e.value);
    j["stderr"] = round12(e.std_error);
    j["samples"] = e.samples;
    j["exact"] = number_or_null(e.exact_ref);
    j["z"] = number_or_null(e.z_score);
    if (entry.abs_tol) j["abs_tol"] = *entry.abs_tol;
    j["pass"] = entry.pass;
    return j;
}

json round_params(const json& p) {
    if (p.is_number_float()) return round12(p.get<double>());
    if (p.is_array() || p.is_object()) {
        json out = p;
        for (auto it = out.begin(); it != out.end(); ++it) *it = round_params(*it);
        return out;
    }
    return p;
}

}  // namespace

nlohmann::json report_to_json(const ExperimentReport& report) {
    json j;
    j["experiment"] = report.experiment;
    j["params"] = round_params(report.params);
    j["seed"] = report.seed;
    json est = json::array();
    for (const auto& e : report.entries) est.push_back(entry_to_json(e));
    j["estimates"] = est;
    j["notes"] = report.notes;
    j["pass"] = report.pass;
    if (report.wall_time_ms) j["wall_time_ms"] = *report.wall_time_ms;
    return j;
}

nlohmann::json reports_to_json(const std::vector<ExperimentReport>& reports, std::uint64_t seed) {
    if (reports.size() == 1) return report_to_json(reports.front());
    json j;
    j["experiment"] = "all";
    json names = json::array();
    json sub = json::array();
    bool pass = true;
    for (const auto& r : reports) {
        names.push_back(r.experiment);
        sub.push_back(report_to_json(r));
        pass = pass && r.pass;
    }
    j["params"] = json{{"experiments", names}};
    j["seed"] = seed;
    json est = json::array();
    for (const auto& r : reports) {
        for (const auto& e : r.entries) {
            json ej = entry_to_json(e);
            ej["name"] = r.experiment + "/" + e.estimate.name;
            est.push_back(ej);
        }
    }
    j["estimates"] = est;
    j["reports"] = sub;
    j["pass"] = pass;
    return j;
}

std::string reports_to_csv(const std::vector<ExperimentReport>& reports) {
    std::ostringstream out;
    out << "experiment,name,value,stderr,samples,exact,z,pass\n";
    auto num = [](const std::optional<double>& x) {
        if (!x) return std::string();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", *x);
        return std::string(buf);
    };
    for (const auto& r : reports) {
        for (const auto& entry : r.entries) {
            const Estimate& e = entry.estimate;
            out << r.experiment << ',' << e.name << ',' << num(e.value) << ',' << num(e.std_error) << ','
                << e.samples << ',' << num(e.exact_ref) << ',' << num(e.z_score) << ','
                << (entry.pass ? "true" : "false") << '\n';
        }
    }
    return out.str();
}

}  // namespace conic
