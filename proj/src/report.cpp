#include "calib/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>

namespace calib {

std::size_t SuiteReport::passed() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const ReportCase& c) { return c.pass; }));
}

const ReportCase* SuiteReport::find(const std::string& id) const {
    const auto it = std::find_if(cases.begin(), cases.end(), [&](const ReportCase& c) { return c.id == id; });
    return it == cases.end() ? nullptr : &*it;
}

nlohmann::json report_body(const SuiteReport& report) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : report.cases) {
        nlohmann::json j{{"id", c.id},
                         {"reference", c.reference},
                         {"measured", c.measured},
                         {"expected", c.expected},
                         {"tolerance", c.tolerance},
                         {"pass", c.pass}};
        if (c.table) j["table"] = {{"columns", c.table->columns}, {"rows", c.table->rows}};
        cases.push_back(std::move(j));
    }
    return {{"suite", report.suite},
            {"cases", std::move(cases)},
            {"summary",
             {{"total", report.cases.size()},
              {"passed", report.passed()},
              {"failed", report.cases.size() - report.passed()},
              {"pass", report.pass()}}}};
}

nlohmann::json to_json(const SuiteReport& report, const ReportHeader& header) {
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& c : report.cases) timings[c.id] = c.seconds;
    nlohmann::json out = report_body(report);
    out["header"] = {{"schema_version", kReportSchemaVersion},
                     {"generated_at", header.generated_at},
                     {"seed", header.seed},
                     {"config", header.config},
                     {"timings_seconds", std::move(timings)}};
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

}  // namespace

std::string emit_plot_data(const std::string& case_id, const SuiteReport& report) {
    const ReportCase* c = report.find(case_id);
    if (!c) throw std::out_of_range("no case '" + case_id + "' in suite " + report.suite);
    if (!c->table || c->table->rows.empty())
        throw PlotRefusal("case '" + case_id + "' has only scalar data; nothing to plot");
    std::string out;
    for (std::size_t i = 0; i < c->table->columns.size(); ++i) out += (i ? "," : "") + csv_field(c->table->columns[i]);
    out += '\n';
    for (const auto& row : c->table->rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
        out += '\n';
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace calib
