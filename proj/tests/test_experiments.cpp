#include "conic/error.hpp"
#include "conic/experiments.hpp"

#include <gtest/gtest.h>

using namespace conic;

namespace {

ExperimentSpec spec(const std::string& name, std::size_t samples = 20000) {
    ExperimentSpec s;
    s.experiment = name;
    s.samples = samples;
    return s;
}

}  // namespace

TEST(ExperimentSpec, JsonRoundTrip) {
    const auto j = nlohmann::json::parse(
        R"({"experiment": "theorem-655", "cone": "weyl-b:3", "k": 2, "j": 1, "samples": 5000,
            "seed": 7, "r_grid": [0.5, 1.0], "z_max": 2.5})");
    const ExperimentSpec s = ExperimentSpec::from_json(j);
    EXPECT_EQ(s.experiment, "theorem-655");
    EXPECT_EQ(*s.cone, "weyl-b:3");
    EXPECT_EQ(*s.k, 2);
    EXPECT_EQ(s.samples, 5000u);
    EXPECT_EQ(s.seed, 7u);
    EXPECT_EQ(s.r_grid.size(), 2u);
    EXPECT_EQ(ExperimentSpec::from_json(s.to_json()).to_json(), s.to_json());
    EXPECT_THROW(ExperimentSpec::from_json(nlohmann::json::parse(R"({"k": 2})")), InvalidArgument);
    EXPECT_THROW(ExperimentSpec::from_json(nlohmann::json::parse(R"({"experiment": "x", "k": "two"})")),
                 InvalidArgument);
}

TEST(RunExperiment, ImageAngleExample) {
    ExperimentSpec s = spec("theorem-655", 100000);
    s.cone = "weyl-b:3";
    s.k = 2;
    s.j = 1;
    s.seed = 7;
    const ExperimentReport r = run_experiment(s);
    ASSERT_EQ(r.entries.size(), 1u);
    EXPECT_DOUBLE_EQ(*r.entries[0].estimate.exact_ref, 3.0 / 8);
    EXPECT_TRUE(r.pass);
}

TEST(RunExperiment, ConditionalReference) {
    const ExperimentReport r = run_experiment(spec("conditional-1151"));
    EXPECT_DOUBLE_EQ(*r.entries.at(0).estimate.exact_ref, 0.5);
}

TEST(RunExperiment, AbsorptionWendelArithmetic) {
    ExperimentSpec s = spec("absorption-wendel");
    s.n = 6;
    s.k = 3;
    const ExperimentReport r = run_experiment(s);
    EXPECT_DOUBLE_EQ(*r.entries.at(0).estimate.exact_ref, 0.5);
    EXPECT_EQ(r.notes.at(0), "exact reference 1/2");
}

TEST(RunExperiment, DeterministicReports) {
    for (const auto& name : experiment_names()) {
        const std::string a = report_to_json(run_experiment(spec(name, 10000))).dump();
        ExperimentSpec threaded = spec(name, 10000);
        threaded.threads = 3;
        const std::string b = report_to_json(run_experiment(threaded)).dump();
        EXPECT_EQ(a, b) << name;
    }
}

TEST(RunExperiment, Errors) {
    EXPECT_THROW(run_experiment(spec("no-such-experiment")), InvalidArgument);
    ExperimentSpec bad = spec("absorption-wendel");
    bad.k = 7;
    EXPECT_THROW(run_experiment(bad), InvalidArgument);
    ExperimentSpec zero = spec("persistence-v0");
    zero.samples = 0;
    EXPECT_THROW(run_experiment(zero), InvalidArgument);
}

TEST(RunAll, CoversEveryExperiment) {
    const auto reports = run_all(spec("all", 10000));
    ASSERT_EQ(reports.size(), 10u);
    const nlohmann::json j = reports_to_json(reports, 42);
    EXPECT_EQ(j["experiment"], "all");
    EXPECT_EQ(j["reports"].size(), 10u);
    const std::string csv = reports_to_csv(reports);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "experiment,name,value,stderr,samples,exact,z,pass");
}

TEST(RunEstimate, KindsAndErrors) {
    ExperimentSpec s = spec("absorption");
    s.cone = "orthant:4";
    s.k = 2;
    EXPECT_DOUBLE_EQ(*run_estimate(s).entries.at(0).estimate.exact_ref, 0.5);

    ExperimentSpec mgf = spec("intrinsic-mgf");
    mgf.cone = "weyl-b:2";
    const ExperimentReport r = run_estimate(mgf);
    int volumes = 0;
    for (const auto& e : r.entries) volumes += e.abs_tol ? 1 : 0;
    EXPECT_EQ(volumes, 3);

    EXPECT_THROW(run_estimate(spec("absorption")), InvalidArgument);
    ExperimentSpec no_k = spec("absorption");
    no_k.cone = "orthant:3";
    EXPECT_THROW(run_estimate(no_k), InvalidArgument);
    EXPECT_THROW(run_estimate(spec("unknown-kind")), InvalidArgument);
}

TEST(Reports, JsonRoundsAndMarksFailures) {
    ExperimentReport r;
    r.experiment = "x";
    Estimate e;
    e.name = "e";
    e.value = 0.1 + 0.2;
    e.std_error = 0.0;
    e.samples = 1;
    e.with_exact(0.5);
    r.entries.push_back({e, std::nullopt, false});
    r.pass = false;
    const auto j = report_to_json(r);
    EXPECT_EQ(j["estimates"][0]["value"].dump(), "0.3");
    EXPECT_TRUE(j["estimates"][0]["z"].is_null());
    EXPECT_FALSE(j["pass"].get<bool>());
    EXPECT_FALSE(j.contains("wall_time_ms"));
}
