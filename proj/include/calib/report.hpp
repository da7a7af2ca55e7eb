#pragma once

// Machine-readable verification reports: JSON with a versioned header, and CSV
// plot data for cases that carry tables.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace calib {

inline constexpr int kReportSchemaVersion = 1;

/// Numeric table attached to a case; column names carry their units.
struct PlotTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ReportCase {
    std::string id;
    /// The operation exercised and the claim it checks.
    std::string reference;
    nlohmann::json measured;
    nlohmann::json expected;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<PlotTable> table;
    double seconds = 0.0;
};

struct SuiteReport {
    std::string suite;
    std::vector<ReportCase> cases;

    std::size_t passed() const;
    bool pass() const { return passed() == cases.size(); }
    const ReportCase* find(const std::string& id) const;
};

/// Header fields kept apart from the body so that timestamps never touch it.
struct ReportHeader {
    std::string generated_at;
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();
};

/// {"header": {...}, "suite", "cases": [...], "summary": {...}}.  Timings go to the header.
nlohmann::json to_json(const SuiteReport& report, const ReportHeader& header);
/// Everything except the header: identical for identical config and seed.
nlohmann::json report_body(const SuiteReport& report);

class PlotRefusal : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// CSV of the case's table with a header row; '.' decimals regardless of locale.
/// Throws PlotRefusal for scalar-only cases and std::out_of_range for unknown ids.
std::string emit_plot_data(const std::string& case_id, const SuiteReport& report);

/// UTC time as 2026-01-31T12:00:00Z.
std::string utc_timestamp();

}  // namespace calib
