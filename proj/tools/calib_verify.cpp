// calib_verify: run verification suites and write JSON reports and CSV plot data.
// Exit status: 0 all cases pass, 1 some case fails, 2 usage or configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "calib/parse_error.hpp"
#include "calib/suites.hpp"

namespace {

constexpr int kUsage = 2;

std::pair<std::string, std::string> split_assignment(const std::string& text, const std::string& flag) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
        throw CLI::ValidationError(flag, "expected KEY=VALUE, got '" + text + "'");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Run calibrated-geometry verification suites"};
    std::string suite, config_path, out_dir, plot_case;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance_scale;
    std::vector<std::string> resolutions, tolerances;
    bool parallel = false, list = false;

    std::string suites_help = "all";
    for (const auto& s : calib::suite_names()) suites_help += "|" + s;
    app.add_option("--suite", suite, "Suite to run: " + suites_help);
    app.add_option("--config", config_path, "Flat key=value config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--out", out_dir, "Directory for report.json and <case>.csv files");
    app.add_option("--resolution", resolutions, "Sampling resolution override KEY=N (repeatable)");
    app.add_option("--tolerance", tolerances, "Tolerance override CASE=VALUE (repeatable)");
    app.add_option("--tolerance-scale", tolerance_scale, "Multiply every default tolerance")->check(CLI::PositiveNumber);
    app.add_option("--plot", plot_case, "Print the CSV table of one case instead of the report");
    app.add_flag("--parallel", parallel, "Run cases on worker threads");
    app.add_flag("--list", list, "List suites, cases and resolution keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    if (list) {
        for (const auto& s : calib::suite_names()) {
            std::cout << s << '\n';
            for (const auto& c : calib::suite_cases(s)) std::cout << "  " << c.id << '\n';
        }
        std::cout << "resolution keys:\n";
        for (const auto& [k, v] : calib::resolution_keys()) std::cout << "  " << k << " = " << v << '\n';
        return 0;
    }

    calib::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = calib::read_run_config(config_path, cfg);
        if (!suite.empty()) cfg.suite = suite;
        if (seed) cfg.seed = *seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (tolerance_scale) cfg.tolerance_scale = *tolerance_scale;
        if (parallel) cfg.parallel = true;
        for (const auto& r : resolutions) {
            const auto [key, value] = split_assignment(r, "--resolution");
            if (!calib::resolution_keys().count(key)) throw CLI::ValidationError("--resolution", "unknown key '" + key + "'");
            cfg.resolutions[key] = std::stoi(value);
            if (cfg.resolutions[key] < 1) throw CLI::ValidationError("--resolution", "must be positive");
        }
        for (const auto& t : tolerances) {
            const auto [key, value] = split_assignment(t, "--tolerance");
            cfg.tolerances[key] = std::stod(value);
        }
        if (cfg.suite != "all") calib::suite_cases(cfg.suite);
    } catch (const calib::ParseError& e) {
        std::cerr << config_path << ":" << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    const calib::SuiteReport report = calib::run_suite(cfg.suite, cfg);

    if (!plot_case.empty()) {
        try {
            std::cout << calib::emit_plot_data(plot_case, report);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kUsage;
        }
        return report.pass() ? 0 : 1;
    }

    calib::ReportHeader header;
    header.generated_at = calib::utc_timestamp();
    header.seed = cfg.seed;
    header.config = cfg.to_json();
    const std::string json = calib::to_json(report, header).dump(2) + "\n";

    if (cfg.out_dir.empty()) {
        std::cout << json;
    } else {
        try {
            const std::filesystem::path dir(cfg.out_dir);
            std::filesystem::create_directories(dir);
            write_file(dir / "report.json", json);
            for (const auto& c : report.cases)
                if (c.table) write_file(dir / (c.id + ".csv"), calib::emit_plot_data(c.id, report));
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kUsage;
        }
    }
    for (const auto& c : report.cases)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.id << " (" << c.seconds << " s)\n";
    std::cerr << report.passed() << "/" << report.cases.size() << " cases pass\n";
    return report.pass() ? 0 : 1;
}
