#include <doctest.h>

#include <clocale>

#include "calib/parse_error.hpp"
#include "calib/suites.hpp"

using namespace calib;

TEST_CASE("run config text") {
    const RunConfig cfg = parse_run_config(
        "# comment\nsuite = realalg\nseed=42\n\ntolerance_scale = 2\ntolerance.quartic-factorization = 1e-9\n"
        "resolution.realalg.coarse3 = 32\nparallel = true\nout = /tmp/x  # trailing\n");
    CHECK(cfg.suite == "realalg");
    CHECK(cfg.seed == 42);
    CHECK(cfg.out_dir == "/tmp/x");
    CHECK(cfg.parallel);
    CHECK(cfg.tolerance("quartic-factorization", 1.0) == 1e-9);
    CHECK(cfg.tolerance("other", 1e-12) == 2e-12);
    CHECK(cfg.resolution("realalg.coarse3") == 32);
    CHECK(cfg.resolution("realalg.fine3") == 128);
    CHECK_THROWS_AS(cfg.resolution("nope"), std::out_of_range);

    const auto line_of = [](const std::string& text) {
        try {
            parse_run_config(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("seed=1\nnot a pair\n") == 2);
    CHECK(line_of("seed=x\n") == 1);
    CHECK(line_of("\n\nresolution.bogus=3\n") == 3);
    CHECK(line_of("resolution.volume.mesh=0\n") == 1);
    CHECK(line_of("tolerance_scale=-1\n") == 1);
    CHECK(line_of("parallel=yes\n") == 1);
    CHECK(line_of("colour=blue\n") == 1);
    CHECK(line_of("seed=\n") == 1);
    CHECK_THROWS_AS(read_run_config("/nonexistent/config"), std::runtime_error);
}

TEST_CASE("suite registry") {
    CHECK(suite_names().size() == 6);
    CHECK_THROWS_AS(suite_cases("nope"), std::invalid_argument);
    CHECK_THROWS_AS(run_suite("nope", RunConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(run_cases("orbifold", {"missing"}, RunConfig{}), std::invalid_argument);
    for (const auto& s : suite_names()) CHECK_FALSE(suite_cases(s).empty());
}

TEST_CASE("orbifold suite report") {
    const SuiteReport r = run_suite("orbifold", RunConfig{});
    CHECK(r.pass());
    const ReportCase* c = r.find("alpha-fixed-locus-count");
    REQUIRE(c != nullptr);
    CHECK(c->measured["components"] == 16);
    CHECK_FALSE(c->reference.empty());

    ReportHeader h;
    h.generated_at = "2026-01-01T00:00:00Z";
    h.seed = 1;
    const auto j = to_json(r, h);
    CHECK(j["header"]["schema_version"] == kReportSchemaVersion);
    CHECK(j["header"]["generated_at"] == "2026-01-01T00:00:00Z");
    CHECK(j["summary"]["total"] == r.cases.size());
    CHECK(j["summary"]["pass"] == true);
    for (const auto& jc : j["cases"]) {
        for (const char* key : {"id", "reference", "measured", "expected", "tolerance", "pass"}) CHECK(jc.contains(key));
    }
    CHECK_THROWS_AS(emit_plot_data("alpha-fixed-locus-count", r), PlotRefusal);
    CHECK_THROWS_AS(emit_plot_data("missing", r), std::out_of_range);
}

TEST_CASE("reports are deterministic for a fixed seed") {
    RunConfig cfg;
    cfg.seed = 9;
    cfg.resolutions["comass.frames"] = 2000;
    cfg.resolutions["fibers.count"] = 10;
    const std::vector<std::string> ids{"comass-re-phi-upper", "cy3-fiber-defects", "g2-orbit-phi-star"};
    const auto a = report_body(run_cases("calibration", ids, cfg)).dump();
    const auto b = report_body(run_cases("calibration", ids, cfg)).dump();
    CHECK(a == b);
    cfg.parallel = true;
    CHECK(report_body(run_cases("calibration", ids, cfg)).dump() == a);
}

TEST_CASE("plot data") {
    RunConfig cfg;
    cfg.resolutions["volume.alpha_points"] = 5;
    const SuiteReport r = run_cases("volume", {"alpha-monotone"}, cfg);
    REQUIRE(r.pass());
    // Decimal points stay '.' whatever the C locale says.
    std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
    const std::string csv = emit_plot_data("alpha-monotone", r);
    std::setlocale(LC_NUMERIC, "C");
    CHECK(csv.rfind("K,t,alpha\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
    CHECK(csv.find("-1,") != std::string::npos);
    CHECK(csv.find("0.5") != std::string::npos);
}

TEST_CASE("failing cases are reported, not thrown") {
    RunConfig cfg;
    cfg.tolerances["quartic-factorization"] = 0.0;
    cfg.resolutions["realalg.points"] = 1000;
    const SuiteReport r = run_cases("realalg", {"quartic-factorization"}, cfg);
    // Rounding differences between the two evaluations exceed a zero tolerance.
    CHECK_FALSE(r.pass());
    CHECK(r.cases.front().tolerance == 0.0);
}
