#pragma once

#include "conic/mc.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conic {

struct ExperimentSpec {
    std::string experiment;
    std::optional<std::string> cone;
    std::optional<int> n;
    std::optional<int> k;
    std::optional<int> j;
    std::optional<int> ell;
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
    std::vector<double> r_grid;  // empty: estimator default
    double z_max = 3.0;
    unsigned threads = 1;        // affects speed only, never the report

    static ExperimentSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// One line of a report. Monte Carlo estimates are judged by |z| <= z_max,
// recovered intrinsic volumes by an absolute tolerance.
struct ReportEntry {
    Estimate estimate;
    std::optional<double> abs_tol;
    bool pass = true;
};

struct ExperimentReport {
    std::string experiment;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 42;
    std::vector<ReportEntry> entries;
    std::vector<std::string> notes;
    bool pass = true;
    std::optional<double> wall_time_ms;
};

inline constexpr double kVolumeAbsTol = 0.02;

const std::vector<std::string>& experiment_names();
const std::vector<std::string>& estimate_kinds();

// Bundled verification experiment, by name; see experiment_names().
ExperimentReport run_experiment(const ExperimentSpec& spec);

// Every bundled experiment with its defaults, sharing seed, samples and threads.
std::vector<ExperimentReport> run_all(const ExperimentSpec& spec);

// Single estimator run; spec.experiment is one of estimate_kinds().
ExperimentReport run_estimate(const ExperimentSpec& spec);

// Numbers are rounded to 12 significant digits so that output is stable text.
nlohmann::json report_to_json(const ExperimentReport& report);
nlohmann::json reports_to_json(const std::vector<ExperimentReport>& reports, std::uint64_t seed);
std::string reports_to_csv(const std::vector<ExperimentReport>& reports);

}  // namespace conic
