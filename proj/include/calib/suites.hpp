#pragma once

// Verification suites: named batteries of report cases over the library, driven by a RunConfig.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "calib/report.hpp"

namespace calib {

struct RunConfig {
    std::string suite = "all";
    std::uint64_t seed = 1;
    /// Directory for report.json and CSV files; empty writes the report to stdout.
    std::string out_dir;
    /// Multiplies every default tolerance.
    double tolerance_scale = 1.0;
    /// Per-case tolerance overrides keyed by case id.
    std::map<std::string, double> tolerances;
    /// Sampling resolutions keyed by name (see resolution_keys()).
    std::map<std::string, int> resolutions;
    /// Cases run on worker threads when true.
    bool parallel = false;

    double tolerance(const std::string& case_id, double fallback) const;
    int resolution(const std::string& key) const;
    nlohmann::json to_json() const;
};

/// Default values of every resolution key.
const std::map<std::string, int>& resolution_keys();

/// Flat key=value text: suite, seed, out, tolerance_scale, parallel, tolerance.<case-id>,
/// resolution.<key>.  '#' starts a comment.  Errors are ParseError with the line number.
RunConfig parse_run_config(const std::string& text, RunConfig base = {});
RunConfig read_run_config(const std::string& path, RunConfig base = {});

struct CaseSpec {
    std::string id;
    std::function<ReportCase(const RunConfig&)> run;
};

/// orbifold, calibration, metrics, volume, mirror, realalg.
const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument for an unknown suite.
const std::vector<CaseSpec>& suite_cases(const std::string& suite);

/// Runs a named suite, or every suite for "all".  Throws std::invalid_argument for unknown names.
SuiteReport run_suite(const std::string& name, const RunConfig& config);
/// Runs the listed case ids of one suite in the given order.
SuiteReport run_cases(const std::string& suite, const std::vector<std::string>& ids, const RunConfig& config);

}  // namespace calib
