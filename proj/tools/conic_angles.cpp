// conic-angles: exact tables, single estimators and verification bundles.
//
// Exit codes: 0 success, 2 usage or input error, 3 a statistical check
// failed, 4 a numerical solver failed.

#include "conic/error.hpp"
#include "conic/exact.hpp"
#include "conic/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitStatistical = 3;
constexpr int kExitSolver = 4;

struct Options {
    std::string family;
    int dim = 0;
    std::optional<int> ambient;

    std::string target;
    std::optional<std::string> cone;
    std::optional<int> n, k, j, ell;
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string format = "json";
    std::string out;
    double z_max = 3.0;
    std::string r_grid;
    std::string spec_file;
    bool timing = false;
};

std::string decimal(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw conic::InvalidArgument("--r-grid: cannot parse '" + item + "'");
        }
    }
    return out;
}

void emit(const std::string& text, const Options& o) {
    if (o.out.empty() || o.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
        throw conic::InvalidArgument("cannot open output file '" + o.out + "'");
    }
    f << text;
}

int cmd_exact(const Options& o) {
    std::vector<conic::Fraction> v, g;
    if (o.family == "orthant") {
        v = conic::orthant_volume_fractions(o.dim);
        g = conic::orthant_angle_fractions(o.dim);
    } else if (o.family == "weyl-b") {
        v = conic::weyl_b_volume_fractions(o.dim);
        g = conic::weyl_b_angle_fractions(o.dim);
    } else if (o.family == "subspace") {
        const int n = o.ambient.value_or(o.dim);
        if (o.dim < 1 || n < o.dim) {
            throw conic::InvalidArgument("exact subspace: need 1 <= d <= ambient");
        }
        for (int i = 0; i <= n; ++i) {
            v.push_back(conic::Fraction::reduced(i == o.dim ? 1 : 0, 1));
            g.push_back(conic::Fraction::reduced(i < o.dim ? 1 : 0, 1));
        }
    } else {
        throw conic::InvalidArgument("unknown family '" + o.family + "' (orthant, weyl-b, subspace)");
    }

    std::string text;
    if (o.format == "csv") {
        std::ostringstream s;
        s << "quantity,k,fraction,value\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            s << "upsilon," << i << ',' << v[i].str() << ',' << decimal(v[i].value()) << '\n';
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            s << "gamma," << i << ',' << g[i].str() << ',' << decimal(g[i].value()) << '\n';
        }
        text = s.str();
    } else {
        auto table = [](const std::vector<conic::Fraction>& f) {
            json a = json::array();
            for (const auto& x : f) {
                a.push_back({{"fraction", x.str()}, {"value", std::stod(decimal(x.value()))}});
            }
            return a;
        };
        json j;
        j["family"] = o.family;
        j["n"] = o.family == "subspace" ? o.ambient.value_or(o.dim) : o.dim;
        if (o.family == "subspace") j["dim"] = o.dim;
        j["upsilon"] = table(v);
        j["gamma"] = table(g);
        text = j.dump(2) + "\n";
    }
    emit(text, o);
    return kExitOk;
}

conic::ExperimentSpec build_spec(const Options& o) {
    conic::ExperimentSpec s;
    if (!o.spec_file.empty()) {
        std::ifstream f(o.spec_file);
        if (!f) {
            throw conic::InvalidArgument("cannot read spec file '" + o.spec_file + "'");
        }
        try {
            s = conic::ExperimentSpec::from_json(json::parse(f));
        } catch (const json::exception& e) {
            throw conic::InvalidArgument("spec file is not valid JSON: " + std::string(e.what()));
        }
    } else {
        s.experiment = o.target;
        s.cone = o.cone;
        s.n = o.n;
        s.k = o.k;
        s.j = o.j;
        s.ell = o.ell;
        s.samples = o.samples;
        s.seed = o.seed;
        s.z_max = o.z_max;
        if (!o.r_grid.empty()) s.r_grid = parse_grid(o.r_grid);
    }
    s.threads = o.threads > 0 ? o.threads : std::max(1u, std::thread::hardware_concurrency());
    return s;
}

int cmd_run(const Options& o, bool verify) {
    const conic::ExperimentSpec spec = build_spec(o);
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<conic::ExperimentReport> reports;
    if (verify && spec.experiment == "all") {
        reports = conic::run_all(spec);
    } else if (verify) {
        reports.push_back(conic::run_experiment(spec));
    } else {
        reports.push_back(conic::run_estimate(spec));
    }

    bool pass = true;
    for (const auto& r : reports) pass = pass && r.pass;

    std::string text;
    if (o.format == "csv") {
        text = conic::reports_to_csv(reports);
    } else {
        json j = conic::reports_to_json(reports, spec.seed);
        if (o.timing) {
            const auto dt = std::chrono::steady_clock::now() - t0;
            j["wall_time_ms"] = std::chrono::duration<double, std::milli>(dt).count();
        }
        text = j.dump(2) + "\n";
    }
    emit(text, o);
    return pass ? kExitOk : kExitStatistical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conic intrinsic volumes and Grassmann angles: exact tables and Monte Carlo checks"};
    app.require_subcommand(1);
    Options o;

    auto* exact = app.add_subcommand("exact", "Exact intrinsic volumes and Grassmann angles");
    exact->add_option("family", o.family, "orthant | weyl-b | subspace")->required();
    exact->add_option("n", o.dim, "Dimension (for subspace: dimension of the subspace)")->required();
    exact->add_option("--ambient", o.ambient, "Ambient dimension for subspace");

    auto* estimate = app.add_subcommand("estimate", "Run one estimator");
    auto* verify = app.add_subcommand("verify", "Run a verification experiment, or 'all'");
    estimate->add_option("kind", o.target, "absorption | grassmann | solid-angle | persistence | "
                                           "intrinsic-mgf | intrinsic-steiner | angle-sums");
    verify->add_option("experiment", o.target, "Experiment name or 'all'");

    for (auto* sub : {estimate, verify}) {
        sub->add_option("--cone", o.cone, "Cone literal, e.g. orthant:3, weyl-b:2, subspace:2,4, "
                                          "simplex-tangent:n,k,ell,seed or a JSON object");
        sub->add_option("--n", o.n, "Dimension n");
        sub->add_option("--k", o.k, "Target dimension k");
        sub->add_option("--j", o.j, "Angle index j");
        sub->add_option("--ell", o.ell, "Face dimension ell");
        sub->add_option("--samples", o.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "Root RNG seed");
        sub->add_option("--threads", o.threads, "Worker threads (default: all cores)");
        sub->add_option("--z-max", o.z_max, "Largest accepted |z|")->check(CLI::PositiveNumber);
        sub->add_option("--r-grid", o.r_grid, "Comma-separated r values");
        sub->add_option("--spec", o.spec_file, "ExperimentSpec JSON file (overrides other flags)");
        sub->add_flag("--timing", o.timing, "Add wall_time_ms to the JSON report");
    }
    for (auto* sub : {exact, estimate, verify}) {
        sub->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", o.out, "Output file (default: standard output)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (exact->parsed()) return cmd_exact(o);
        if ((estimate->parsed() || verify->parsed()) && o.target.empty() && o.spec_file.empty()) {
            std::cerr << "error: name an estimator or experiment\n";
            return kExitUsage;
        }
        return cmd_run(o, verify->parsed());
    } catch (const conic::SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        // InvalidArgument, PreconditionViolation, DegenerateCone, Overflow.
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
