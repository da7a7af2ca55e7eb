#include "calib/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "calib/catalog.hpp"
#include "calib/elliptic.hpp"
#include "calib/fibration.hpp"
#include "calib/levelset.hpp"
#include "calib/mesh.hpp"
#include "calib/metrics.hpp"
#include "calib/mirror.hpp"
#include "calib/orbifold.hpp"
#include "calib/parse_error.hpp"
#include "calib/polynomial.hpp"
#include "calib/volume.hpp"

namespace calib {

namespace cat = catalog;
using nlohmann::json;

// ---------------------------------------------------------------- config

const std::map<std::string, int>& resolution_keys() {
    static const std::map<std::string, int> keys{
        {"comass.frames", 100000},   {"fibers.count", 100},       {"fibers.grid", 4},
        {"g2.points", 100},          {"metrics.u_samples", 64},   {"metrics.directions", 24},
        {"volume.mesh", 256},        {"volume.torus", 16},        {"volume.alpha_points", 50},
        {"realalg.points", 10000},   {"realalg.sphere", 256},     {"realalg.coarse3", 64},
        {"realalg.fine3", 128},      {"realalg.coarse4", 32},     {"realalg.fine4", 48},
        {"elliptic.N", 40},          {"elliptic.nodes", 512},     {"mirror.bound", 1},
    };
    return keys;
}

double RunConfig::tolerance(const std::string& case_id, double fallback) const {
    const auto it = tolerances.find(case_id);
    return it != tolerances.end() ? it->second : fallback * tolerance_scale;
}

int RunConfig::resolution(const std::string& key) const {
    if (const auto it = resolutions.find(key); it != resolutions.end()) return it->second;
    const auto& keys = resolution_keys();
    const auto it = keys.find(key);
    if (it == keys.end()) throw std::out_of_range("unknown resolution key '" + key + "'");
    return it->second;
}

json RunConfig::to_json() const {
    return {{"suite", suite},
            {"seed", seed},
            {"tolerance_scale", tolerance_scale},
            {"tolerances", tolerances},
            {"resolutions", resolutions},
            {"parallel", parallel}};
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, int line, const std::string& key) {
    std::istringstream in(text);
    in.imbue(std::locale::classic());
    T value{};
    std::string rest;
    if (!(in >> value) || (in >> rest)) throw ParseError(line, "bad value '" + text + "' for " + key);
    return value;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, RunConfig cfg) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string body = trim(raw);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key=value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(line, "expected key=value");
        if (key == "suite") {
            cfg.suite = value;
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(value, line, key);
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "tolerance_scale") {
            cfg.tolerance_scale = parse_number<double>(value, line, key);
            if (!(cfg.tolerance_scale > 0)) throw ParseError(line, "tolerance_scale must be positive");
        } else if (key == "parallel") {
            if (value != "true" && value != "false") throw ParseError(line, "parallel must be true or false");
            cfg.parallel = value == "true";
        } else if (key.rfind("tolerance.", 0) == 0 && key.size() > 10) {
            const double t = parse_number<double>(value, line, key);
            if (!(t >= 0)) throw ParseError(line, "tolerance must be nonnegative");
            cfg.tolerances[key.substr(10)] = t;
        } else if (key.rfind("resolution.", 0) == 0) {
            const std::string name = key.substr(11);
            if (!resolution_keys().count(name)) throw ParseError(line, "unknown resolution key '" + name + "'");
            const int r = parse_number<int>(value, line, key);
            if (r < 1) throw ParseError(line, "resolution must be positive");
            cfg.resolutions[name] = r;
        } else {
            throw ParseError(line, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

RunConfig read_run_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), std::move(base));
}

// ---------------------------------------------------------------- helpers

namespace {

constexpr double pi = 3.14159265358979323846;

ReportCase make_case(std::string id, std::string reference, json measured, json expected, double tolerance, bool pass) {
    ReportCase c;
    c.id = std::move(id);
    c.reference = std::move(reference);
    c.measured = std::move(measured);
    c.expected = std::move(expected);
    c.tolerance = tolerance;
    c.pass = pass;
    return c;
}

bool all_dims(const std::vector<AffineSubtorus>& loci, int d) {
    return std::all_of(loci.begin(), loci.end(), [d](const AffineSubtorus& c) { return c.dim() == d; });
}

json dims_of(const std::vector<AffineSubtorus>& loci) {
    json out = json::array();
    for (const auto& c : loci) out.push_back(c.dim());
    return out;
}

ReportCase locus_case(const std::string& id, const std::string& what, const AffineTorusMap& map, int dim) {
    const auto loci = fixed_locus(map);
    const bool ok = loci.size() == 16 && all_dims(loci, dim);
    ReportCase c = make_case(id, "fixed_locus: the fixed set of " + what + " is 16 disjoint " + std::to_string(dim) + "-tori",
                             {{"components", loci.size()}, {"dimensions", dims_of(loci)}},
                             {{"components", 16}, {"dimension", dim}}, 0.0, ok);
    return c;
}

// ---------------------------------------------------------------- orbifold

std::vector<CaseSpec> orbifold_cases() {
    return {
        {"alpha-fixed-locus-count",
         [](const RunConfig&) { return locus_case("alpha-fixed-locus-count", "alpha on T^6", cat::cy3_alpha(), 2); }},
        {"beta-fixed-locus-count",
         [](const RunConfig&) { return locus_case("beta-fixed-locus-count", "beta on T^6", cat::cy3_beta(), 2); }},
        {"cy3-loci-disjoint",
         [](const RunConfig&) {
             const auto r = loci_pairwise_disjoint({cat::cy3_alpha(), cat::cy3_beta()});
             return make_case("cy3-loci-disjoint", "loci_pairwise_disjoint: the fixed loci of alpha and beta do not intersect",
                              {{"disjoint", r.disjoint}, {"pairs_checked", r.pairs_checked}, {"witnesses", r.witnesses.size()}},
                              {{"disjoint", true}}, 0.0, r.disjoint);
         }},
        {"alpha-beta-free",
         [](const RunConfig&) {
             const bool free = is_free(compose(cat::cy3_alpha(), cat::cy3_beta()));
             return make_case("alpha-beta-free", "is_free: alpha beta acts without fixed points on T^6", free, true, 0.0,
                              free);
         }},
        {"g2-alpha-fixed-locus-count",
         [](const RunConfig&) { return locus_case("g2-alpha-fixed-locus-count", "alpha on T^7", cat::g2_alpha(), 3); }},
        {"g2-beta-fixed-locus-count",
         [](const RunConfig&) { return locus_case("g2-beta-fixed-locus-count", "beta on T^7", cat::g2_beta(), 3); }},
        {"g2-gamma-fixed-locus-count",
         [](const RunConfig&) { return locus_case("g2-gamma-fixed-locus-count", "gamma on T^7", cat::g2_gamma(), 3); }},
        {"g2-loci-disjoint",
         [](const RunConfig&) {
             const auto r = loci_pairwise_disjoint({cat::g2_alpha(), cat::g2_beta(), cat::g2_gamma()});
             return make_case("g2-loci-disjoint",
                              "loci_pairwise_disjoint: the fixed loci of alpha, beta, gamma on T^7 are pairwise disjoint",
                              {{"disjoint", r.disjoint}, {"pairs_checked", r.pairs_checked}}, {{"disjoint", true}}, 0.0,
                              r.disjoint);
         }},
        {"g2-compositions-free",
         [](const RunConfig&) {
             const AffineTorusMap a = cat::g2_alpha(), b = cat::g2_beta(), g = cat::g2_gamma();
             const json free = {{"alpha_beta", is_free(compose(a, b))},
                                {"alpha_gamma", is_free(compose(a, g))},
                                {"beta_gamma", is_free(compose(b, g))},
                                {"alpha_beta_gamma", is_free(compose(a, compose(b, g)))}};
             const bool ok = free["alpha_beta"] && free["alpha_gamma"] && free["beta_gamma"];
             return make_case("g2-compositions-free", "is_free: pairwise compositions of alpha, beta, gamma have no fixed points",
                              free, {{"alpha_beta", true}, {"alpha_gamma", true}, {"beta_gamma", true}}, 0.0, ok);
         }},
        {"g2-group-order",
         [](const RunConfig&) {
             const auto group = group_closure({cat::g2_alpha(), cat::g2_beta(), cat::g2_gamma()});
             return make_case("g2-group-order", "group_closure: alpha, beta, gamma generate Z2^3", group.order(), 8, 0.0,
                              group.order() == 8);
         }},
    };
}

// ---------------------------------------------------------------- calibration

Matrix orthonormal_columns(Matrix a) {
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
    // Keep the orientation of the input frame.
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (q.col(j).dot(a.col(j)) < 0) q.col(j) *= -1.0;
    return q;
}

std::vector<CaseSpec> calibration_cases() {
    return {
        {"comass-re-phi-upper",
         [](const RunConfig& cfg) {
             ComassOptions o;
             o.samples = cfg.resolution("comass.frames");
             o.seed = cfg.seed;
             const auto pkg = CalibrationPackage::cy3();
             const ComassEstimate e = comass_estimate(pkg.re_phi, MetricAtPoint::euclidean(6), o);
             const double tol = cfg.tolerance("comass-re-phi-upper", 1e-9);
             const double worst = std::max(e.value, e.sampled_max);
             return make_case("comass-re-phi-upper",
                              "comass_estimate: Re(dz1^dz2^dz3) restricted to any 3-plane is at most its volume",
                              {{"max_over_frames", worst}, {"sampled_max", e.sampled_max}, {"frames", e.samples}},
                              {{"at_most", 1.0}}, tol, worst <= 1.0 + tol);
         }},
        {"comass-re-phi-attained",
         [](const RunConfig& cfg) {
             const auto pkg = CalibrationPackage::cy3();
             std::mt19937_64 rng(cfg.seed);
             std::normal_distribution<double> g;
             const Matrix slag = TangentFrame::coordinate(6, cat::cy3_fiber_axes()).as_matrix();
             double lowest = 1.0;
             for (int i = 0; i < 100; ++i) {
                 Matrix a = slag;
                 for (Eigen::Index r = 0; r < a.rows(); ++r)
                     for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) += 1e-3 * g(rng);
                 lowest = std::min(lowest, evaluate_on_frame(pkg.re_phi, TangentFrame::from_columns(orthonormal_columns(a), true)));
             }
             const double tol = cfg.tolerance("comass-re-phi-attained", 1e-4);
             return make_case("comass-re-phi-attained",
                              "comass_estimate: Re phi reaches 1 on planes within 1e-3 of the special Lagrangian y-plane",
                              {{"min_over_perturbed_frames", lowest}, {"at_slag_plane", evaluate_on_frame(pkg.re_phi, TangentFrame::from_columns(slag, true))}},
                              {{"at_least", 1.0 - tol}}, tol, lowest >= 1.0 - tol);
         }},
        {"cy3-fiber-defects",
         [](const RunConfig& cfg) {
             const auto pkg = CalibrationPackage::cy3();
             const auto loci = singular_loci(FiberFamily::CY3);
             std::mt19937_64 rng(cfg.seed);
             std::uniform_real_distribution<double> u(0.0, 1.0);
             const int want = cfg.resolution("fibers.count"), grid = cfg.resolution("fibers.grid");
             int used = 0, rejected = 0;
             double omega = 0, im_phi = 0, lo = 1, hi = 1;
             while (used < want) {
                 const double a = u(rng), b = u(rng), c = u(rng);
                 const FiberParams p{FiberFamily::CY3, a, b, c};
                 if (!fiber_meets_neighborhood(p, loci, kDefaultTubeRadius).empty()) {
                     ++rejected;
                     continue;
                 }
                 const auto fiber = make_fiber(p, grid);
                 const SlagDefect d = slag_defect(fiber, pkg);
                 const CalibrationRatio r = calibration_ratio(fiber, pkg.re_phi);
                 omega = std::max(omega, d.max_omega);
                 im_phi = std::max(im_phi, d.max_im_phi);
                 lo = std::min(lo, r.min_ratio);
                 hi = std::max(hi, r.max_ratio);
                 ++used;
             }
             const double tol = cfg.tolerance("cy3-fiber-defects", 1e-12);
             const bool ok = omega <= tol && im_phi <= tol && lo >= 1 - tol && hi <= 1 + tol;
             return make_case("cy3-fiber-defects",
                              "slag_defect, calibration_ratio: fibers T_{a,b,c} away from the singular tubes are special "
                              "Lagrangian and calibrated by Re phi",
                              {{"fibers", used},
                               {"rejected_in_tubes", rejected},
                               {"max_omega", omega},
                               {"max_im_phi", im_phi},
                               {"min_ratio", lo},
                               {"max_ratio", hi}},
                              {{"max_defect", 0.0}, {"ratio", 1.0}}, tol, ok);
         }},
        {"g2-fiber-defects",
         [](const RunConfig& cfg) {
             const auto pkg = CalibrationPackage::g2();
             const auto loci = singular_loci(FiberFamily::G2);
             std::mt19937_64 rng(cfg.seed + 1);
             std::uniform_real_distribution<double> u(0.0, 1.0);
             const int want = cfg.resolution("fibers.count"), grid = cfg.resolution("fibers.grid");
             int used = 0, rejected = 0;
             double defect = 0;
             while (used < want) {
                 const double a = u(rng), b = u(rng), c = u(rng);
                 const FiberParams p{FiberFamily::G2, a, b, c};
                 if (!fiber_meets_neighborhood(p, loci, kDefaultTubeRadius).empty()) {
                     ++rejected;
                     continue;
                 }
                 defect = std::max(defect, coassoc_defect(make_fiber(p, grid), pkg.phi3).max_defect);
                 ++used;
             }
             const double tol = cfg.tolerance("g2-fiber-defects", 1e-12);
             return make_case("g2-fiber-defects",
                              "coassoc_defect: fibers of the T^7 fibration away from the singular tubes are coassociative",
                              {{"fibers", used}, {"rejected_in_tubes", rejected}, {"max_defect", defect}},
                              {{"max_defect", 0.0}}, tol, defect <= tol);
         }},
        {"cy3-tubes-disjoint",
         [](const RunConfig&) {
             const auto s = tube_separation(singular_loci(FiberFamily::CY3), kDefaultTubeRadius);
             return make_case("cy3-tubes-disjoint", "tube_separation: radius-1/8 tubes about the fixed tori are disjoint",
                              {{"disjoint", s.disjoint}, {"min_distance", s.min_distance}},
                              {{"min_distance_at_least", 2 * kDefaultTubeRadius}}, 0.0, s.disjoint);
         }},
        {"g2-orbit-phi0",
         [](const RunConfig& cfg) {
             const auto phi = cat::g2_phi0();
             std::mt19937_64 rng(cfg.seed);
             std::uniform_real_distribution<double> u(0.0, 1.0);
             int ok = 0;
             const int n = cfg.resolution("g2.points");
             double metric_err = 0;
             for (int i = 0; i < n; ++i) {
                 Point p(7);
                 for (auto& x : p) x = u(rng);
                 const auto r = g2_orbit_test(phi.at(p));
                 if (r.is_g2) {
                     ++ok;
                     metric_err = std::max(metric_err, (r.metric - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff());
                 }
             }
             const double tol = cfg.tolerance("g2-orbit-phi0", 1e-12);
             return make_case("g2-orbit-phi0", "g2_orbit_test: phi0 is a G2 3-form inducing the flat metric",
                              {{"points", n}, {"g2_points", ok}, {"max_metric_error", metric_err}},
                              {{"g2_points", n}, {"metric", "identity"}}, tol, ok == n && metric_err <= tol);
         }},
        {"g2-orbit-phi-star",
         [](const RunConfig& cfg) {
             const auto phi = cat::g2_phi_star();
             std::mt19937_64 rng(cfg.seed + 2);
             std::uniform_real_distribution<double> u(0.0, 1.0);
             int ok = 0;
             const int n = cfg.resolution("g2.points");
             double metric_err = 0;
             for (int i = 0; i < n; ++i) {
                 Point p(7);
                 for (auto& x : p) x = u(rng);
                 const auto r = g2_orbit_test(phi.at(p));
                 if (r.is_g2) {
                     ++ok;
                     metric_err = std::max(metric_err, (r.metric - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff());
                 }
             }
             const double tol = cfg.tolerance("g2-orbit-phi-star", 1e-12);
             return make_case("g2-orbit-phi-star", "g2_orbit_test: the glued mirror form phi* is a G2 3-form",
                              {{"points", n}, {"g2_points", ok}, {"max_metric_error", metric_err}},
                              {{"g2_points", n}}, tol, ok == n && metric_err <= tol);
         }},
    };
}

// ---------------------------------------------------------------- metrics

ScanGrid scan_grid(const RunConfig& cfg) {
    ScanGrid g;
    g.u_samples = cfg.resolution("metrics.u_samples");
    g.direction_samples = cfg.resolution("metrics.directions");
    return g;
}

std::vector<CaseSpec> metrics_cases() {
    return {
        {"eh-determinant",
         [](const RunConfig& cfg) {
             std::mt19937_64 rng(cfg.seed);
             std::normal_distribution<double> normal;
             PlotTable table{{"u", "t", "abs_det_minus_one"}, {}};
             double worst = 0;
             for (double t : {0.01, 0.05, 0.1, 0.5, 1.0})
                 for (int k = 0; k <= 24; ++k) {
                     const double u = std::pow(10.0, -3.0 + 6.0 * k / 24);
                     const double a = normal(rng), b = normal(rng), c = normal(rng), e = normal(rng);
                     Eigen::Vector2cd z(Complex(a, b), Complex(c, e));
                     z *= std::sqrt(u) / z.norm();
                     const double err = std::abs(eh_kahler_matrix(z, t).determinant() - 1.0);
                     worst = std::max(worst, err);
                     table.rows.push_back({u, t, err});
                 }
             const double tol = cfg.tolerance("eh-determinant", 1e-9);
             ReportCase c = make_case("eh-determinant",
                                      "eh_kahler_matrix: the Eguchi-Hanson metric has det g = 1 on the u-t grid",
                                      {{"max_abs_det_minus_one", worst}, {"samples", table.rows.size()}}, 1.0, tol,
                                      worst <= tol);
             c.table = std::move(table);
             return c;
         }},
        {"glued-positivity",
         [](const RunConfig& cfg) {
             const auto r = positivity_scan(GluedKahlerData(0.05, 0.25, 0.5), scan_grid(cfg));
             ReportCase c = make_case("glued-positivity",
                                      "positivity_scan: the glued potential is strictly plurisubharmonic at t = 0.05 over "
                                      "the annulus [0.25, 0.5]",
                                      {{"min_eigenvalue", r.min_eigenvalue}}, {{"min_eigenvalue_above", 0.0}}, 0.0, r.pass);
             PlotTable table{{"u", "min_eigenvalue"}, {}};
             for (const auto& p : r.profile) table.rows.push_back({p.u, p.min_eigenvalue});
             c.table = std::move(table);
             return c;
         }},
        {"positivity-threshold",
         [](const RunConfig& cfg) {
             const auto r = positivity_threshold(0.25, 0.5, 0.05, 10.0, scan_grid(cfg), 30);
             const bool ok = r.t_star >= 0.05 && r.t_star < r.t_fail &&
                             positivity_scan(GluedKahlerData(r.t_star, 0.25, 0.5), scan_grid(cfg)).pass;
             return make_case("positivity-threshold",
                              "positivity_threshold: bisection for the largest t keeping the glued metric positive",
                              {{"t_star", r.t_star}, {"t_fail", r.t_fail}, {"iterations", r.iterations}},
                              {{"t_star_at_least", 0.05}}, 0.0, ok);
         }},
        {"eh-convergence",
         [](const RunConfig& cfg) {
             PlotTable table{{"t", "abs_f_t_minus_u_at_u=1", "observed_order"}, {}};
             bool ok = true;
             double prev_t = 0, prev_d = 0;
             for (double t : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
                 const double d = std::abs(eh_potential(1.0, t) - 1.0);
                 const double order = prev_t > 0 ? std::log(d / prev_d) / std::log(t / prev_t) : std::nan("");
                 ok = ok && d <= 3.0 * t * t * std::abs(std::log(t)) * cfg.tolerance_scale;
                 table.rows.push_back({t, d, order});
                 prev_t = t;
                 prev_d = d;
             }
             const double last_order = table.rows.back()[2];
             ReportCase c = make_case("eh-convergence",
                                      "eh_potential: f_t(u) -> u as t -> 0 at rate O(t^2 |log t|)",
                                      {{"observed_order_last", last_order}}, {{"bound", "3 t^2 |log t|"}}, 0.0, ok);
             c.table = std::move(table);
             return c;
         }},
        {"hyperkahler-triple",
         [](const RunConfig& cfg) {
             const auto t = cat::hyperkahler_triple();
             const double res = hyperkahler_residual(t.omega1, t.omega2, t.omega3);
             const double tol = cfg.tolerance("hyperkahler-triple", 1e-12);
             return make_case("hyperkahler-triple", "hyperkahler_residual: omega_i ^ omega_j = 2 delta_ij vol on R^4",
                              res, 0.0, tol, res <= tol);
         }},
    };
}

// ---------------------------------------------------------------- volume

Point origin(int n) { return Point::Zero(n); }

std::vector<CaseSpec> volume_cases() {
    return {
        {"holomorphic-graph-margins",
         [](const RunConfig& cfg) {
             const int res = cfg.resolution("volume.mesh");
             const auto coarse = holomorphic_graph_mesh(res / 2);
             const auto fine = holomorphic_graph_mesh(res);
             const int pc = coarse.nearest_vertex(origin(4)), pf = fine.nearest_vertex(origin(4));
             PlotTable table{{"r", "measured_area", "space_form_area", "margin", "allowance"}, {}};
             bool ok = true;
             double worst = std::numeric_limits<double>::infinity();
             for (double r : {0.1, 0.2, 0.3, 0.4}) {
                 const double vc = extrinsic_ball_volume(coarse, coarse.vertices()[static_cast<std::size_t>(pc)], r).volume;
                 const double vf = extrinsic_ball_volume(fine, fine.vertices()[static_cast<std::size_t>(pf)], r).volume;
                 const double allowance = 2 * std::abs(vc - vf) * cfg.tolerance_scale;
                 const auto b = verify_ball_comparison(fine, pf, r, 0.0, BallMode::Extrinsic, allowance);
                 ok = ok && b.pass;
                 worst = std::min(worst, b.margin + b.allowance);
                 table.rows.push_back({r, b.measured, b.model, b.margin, b.allowance});
             }
             ReportCase c = make_case("holomorphic-graph-margins",
                                      "verify_ball_comparison: K = 0, k = 2; the holomorphic graph {(z, z^2)} has balls at "
                                      "least as large as flat discs",
                                      {{"min_margin_plus_allowance", worst}, {"resolution", res}},
                                      {{"margin_at_least", "-2 |V(res/2) - V(res)|"}}, 0.0, ok);
             c.table = std::move(table);
             return c;
         }},
        {"flat-fiber-equality",
         [](const RunConfig& cfg) {
             Point base = origin(6);
             base[0] = 0.125;
             base[2] = 0.375;
             base[4] = 0.25;
             const auto fiber = flat_torus_mesh(base, cat::cy3_fiber_axes(), cfg.resolution("volume.torus"));
             PlotTable table{{"r", "measured_volume", "space_form_volume", "margin", "straddle_volume"}, {}};
             bool ok = true;
             for (double r : {0.1, 0.2}) {
                 const auto b = verify_ball_comparison(fiber, 0, r, 0.0, BallMode::Extrinsic);
                 ok = ok && std::abs(b.margin) <= b.straddle_volume * cfg.tolerance_scale;
                 table.rows.push_back({r, b.measured, b.model, b.margin, b.straddle_volume});
             }
             ReportCase c = make_case("flat-fiber-equality",
                                      "verify_ball_comparison: the flat special Lagrangian 3-torus is the equality case",
                                      {{"rows", table.rows.size()}}, {{"abs_margin_at_most", "straddle volume"}}, 0.0, ok);
             c.table = std::move(table);
             return c;
         }},
        {"alpha-monotone",
         [](const RunConfig& cfg) {
             const int n = cfg.resolution("volume.alpha_points");
             PlotTable table{{"K", "t", "alpha"}, {}};
             bool ok = true;
             for (double K : {1.0, -1.0}) {
                 const double upper = K > 0 ? pi : 3.0;
                 double prev = 0;
                 for (int i = 1; i <= n; ++i) {
                     const double t = upper * i / (n + 1.0);
                     const double a = comparison_alpha(K, 3, t);
                     ok = ok && a > prev;
                     prev = a;
                     table.rows.push_back({K, t, a});
                 }
             }
             ReportCase c = make_case("alpha-monotone", "comparison_alpha: alpha(t) is increasing for K = 1 and K = -1",
                                      {{"points_per_K", n}}, {{"strictly_increasing", true}}, 0.0, ok);
             c.table = std::move(table);
             return c;
         }},
        {"quartic-torus-negative-margin",
         [](const RunConfig&) {
             const auto torus = torus_of_revolution_mesh(64);
             const auto ext = verify_ball_comparison(torus, 0, 3.0, 0.0, BallMode::Extrinsic);
             const auto in = verify_ball_comparison(torus, 0, 1.0, 0.0, BallMode::Intrinsic);
             return make_case("quartic-torus-negative-margin",
                              "verify_ball_comparison: a non-calibrated surface (the quartic torus) is flagged with a "
                              "negative margin",
                              {{"extrinsic_r3_margin", ext.margin}, {"intrinsic_r1_margin", in.margin},
                               {"intrinsic_r1_allowance", in.allowance}},
                              {{"flagged", true}}, 0.0, !ext.pass && !in.pass);
         }},
    };
}

// ---------------------------------------------------------------- mirror

json matrix_json(const IntMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

ReportCase pullback_case(const std::string& id, MirrorContext ctx, const std::string& reference) {
    const auto rep = pullback_relations_check(mirror_glue_map(ctx), mirror_relations(ctx));
    json conventions = json::object();
    for (const auto& c : rep.conventions) {
        double worst = 0;
        for (const auto& r : c.relations) worst = std::max(worst, r.residual);
        conventions[to_string(c.convention)] = {{"all_pass", c.all_pass}, {"max_residual", worst}};
    }
    return make_case(id, reference,
                     {{"adopted", rep.adopted ? to_string(*rep.adopted) : "none"}, {"conventions", conventions}},
                     {{"adopted", to_string(PullbackConvention::Inverse)}}, 1e-12,
                     rep.adopted == PullbackConvention::Inverse);
}

std::vector<CaseSpec> mirror_cases() {
    return {
        {"block-form-intertwiner",
         [](const RunConfig& cfg) {
             const IntegerRep rep = block_form_rep(sl2z_generators());
             const auto sols = solve_intertwiner(rep, cfg.resolution("mirror.bound"));
             IntMatrix target = IntMatrix::Zero(3, 3);
             target(0, 1) = 1;
             target(1, 0) = -1;
             target(2, 2) = 1;
             bool found = false;
             for (const auto& k : sols) {
                 if (k.topLeftCorner(2, 2) == target.topLeftCorner(2, 2) && is_intertwiner(k, rep)) found = true;
             }
             json all = json::array();
             for (const auto& k : sols) all.push_back(matrix_json(k));
             return make_case("block-form-intertwiner",
                              "solve_intertwiner: K = A^T K A over the block-form monodromy has a solution restricting to "
                              "[[0,1],[-1,0]]",
                              {{"solutions", all}, {"count", sols.size()}},
                              {{"contains_block", matrix_json(IntMatrix(target.topLeftCorner(2, 2)))}}, 0.0, found);
         }},
        {"mu-pullback-relations",
         [](const RunConfig&) {
             return pullback_case("mu-pullback-relations", MirrorContext::CY3,
                                  "pullback_relations_check: the gluing map mu pulls omega', Re eta, Im eta back as "
                                  "quoted");
         }},
        {"eta-pullback-relations",
         [](const RunConfig&) {
             return pullback_case("eta-pullback-relations", MirrorContext::G2Alpha,
                                  "pullback_relations_check: the G2 gluing map eta permutes omega_1, omega_2, omega_3 as "
                                  "quoted");
         }},
        {"symplectic-mirror",
         [](const RunConfig& cfg) {
             const auto r = symplectic_mirror_check(reference_rho(), CalibrationPackage::cy3(), bad_neighborhood_frame());
             const double tol = cfg.tolerance("symplectic-mirror", 1e-12);
             Matrix expected(3, 3);
             expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
             const double diff = (r.alpha - expected).cwiseAbs().maxCoeff();
             return make_case("symplectic-mirror",
                              "symplectic_mirror_check: alpha(beta^1) = -v^2, alpha(beta^2) = v^1, alpha([dy3]) = gamma, "
                              "so alpha = xi' o rho",
                              {{"alpha", matrix_json(r.alpha)}, {"xi_rho", matrix_json(r.xi_rho)},
                               {"max_difference", r.max_difference}},
                              {{"alpha", matrix_json(expected)}}, tol, r.pass && diff <= tol);
         }},
    };
}

// ---------------------------------------------------------------- realalg

std::vector<CaseSpec> realalg_cases() {
    return {
        {"quartic-factorization",
         [](const RunConfig& cfg) {
             std::mt19937_64 rng(cfg.seed);
             std::uniform_real_distribution<double> u(-3.0, 3.0);
             const int n = cfg.resolution("realalg.points");
             const RealPolynomial p = quartic_torus();
             double worst = 0;
             for (int i = 0; i < n; ++i) {
                 const double x = u(rng), y = u(rng), z = u(rng);
                 const double v = quartic_torus_eval(x, y, z);
                 worst = std::max({worst, std::abs(v - quartic_torus_factored(x, y, z)), std::abs(v - p({x, y, z}))});
             }
             const double tol = cfg.tolerance("quartic-factorization", 1e-10);
             return make_case("quartic-factorization",
                              "quartic_torus_eval: (3/4 + |x|^2)^2 - 4(x^2 + y^2) factors through the two tube equations",
                              {{"points", n}, {"max_abs_difference", worst}}, 0.0, tol, worst <= tol);
         }},
        {"sphere-circle-count",
         [](const RunConfig& cfg) {
             const auto r = sphere_circle_count(four_circle_h(3), cfg.resolution("realalg.sphere"));
             return make_case("sphere-circle-count",
                              "sphere_circle_count: the zero set of h meets S^2 in 4 circles",
                              {{"count", r.count}, {"transversal", r.transversal},
                               {"min_tangential_gradient", r.min_tangential_gradient}},
                              {{"count", 4}, {"transversal", true}}, 0.0, r.count == 4 && r.transversal);
         }},
        {"viro-3d-stability",
         [](const RunConfig& cfg) {
             const RealPolynomial p = unit_sphere(3), q = RealPolynomial::variable(3, 2);
             const RealPolynomial one = RealPolynomial::constant(3, 1.0);
             const Eigen::VectorXd lo = Eigen::VectorXd::Constant(3, -1.25), hi = -lo;
             const int coarse = cfg.resolution("realalg.coarse3"), fine = cfg.resolution("realalg.fine3");
             const auto scan = viro_stability_scan(p, q, one, lo, hi, {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}, coarse, fine);
             const int pq_coarse = component_count(p * q, lo, hi, coarse).count;
             const int pq_fine = component_count(p * q, lo, hi, fine).count;
             PlotTable table{{"eps", "count_coarse", "count_fine"}, {}};
             for (const auto& row : scan) table.rows.push_back({row.eps, double(row.coarse), double(row.fine)});
             const StabilityRow& chosen = scan.back();
             const bool ok = chosen.stable() && chosen.coarse == 2 && pq_coarse == 1 && pq_fine == 1;
             ReportCase c = make_case("viro-3d-stability",
                                      "component_count: f = pq - eps h with h > 0 on the crossing splits into 2 sheets, "
                                      "pq alone is connected; counts agree between the two grids",
                                      {{"eps", chosen.eps}, {"count_coarse", chosen.coarse}, {"count_fine", chosen.fine},
                                       {"pq_coarse", pq_coarse}, {"pq_fine", pq_fine}},
                                      {{"count", 2}, {"pq_count", 1}}, 0.0, ok);
             c.table = std::move(table);
             return c;
         }},
        {"viro-4d-stability",
         [](const RunConfig& cfg) {
             const RealPolynomial p = unit_sphere(4), q = RealPolynomial::variable(4, 3);
             const Eigen::VectorXd lo = Eigen::VectorXd::Constant(4, -1.25), hi = -lo;
             const int coarse = cfg.resolution("realalg.coarse4"), fine = cfg.resolution("realalg.fine4");
             const auto plain = viro_stability_scan(p, q, RealPolynomial::constant(4, 1.0), lo, hi, {1e-2}, coarse, fine);
             const auto handles = viro_stability_scan(p, q, four_circle_h(4), lo, hi, {1e-2}, coarse, fine);
             const bool ok = plain[0].stable() && plain[0].coarse == 2 && handles[0].stable() && handles[0].coarse == 1;
             return make_case("viro-4d-stability",
                              "component_count: in R^4, h = 1 separates the sphere and hyperplane sheets; the four-circle "
                              "h joins them by handles",
                              {{"eps", 1e-2},
                               {"h_one", {{"coarse", plain[0].coarse}, {"fine", plain[0].fine}}},
                               {"h_four_circles", {{"coarse", handles[0].coarse}, {"fine", handles[0].fine}}}},
                              {{"h_one", 2}, {"h_four_circles", 1}}, 0.0, ok);
         }},
        {"loop-integral-constancy",
         [](const RunConfig& cfg) {
             EllipticData d{{0.0, 1.0}, cfg.resolution("elliptic.N")};
             const int nodes = cfg.resolution("elliptic.nodes");
             const std::vector<double> ts{0.25, 0.4, 0.6};
             const Complex c = choose_offset(WeierstrassP(d), 0.25, nodes);
             const auto r = loop_integral_constancy(c, ts, d, nodes);
             PlotTable table{{"N", "max_deviation", "abs_I_minus_(c-pi)"}, {}};
             for (int n = std::max(2, d.N / 4); n <= d.N; n *= 2) {
                 const auto rn = loop_integral_constancy(c, ts, EllipticData{d.tau, n}, nodes);
                 table.rows.push_back({double(n), rn.max_deviation, std::abs(rn.integrals[0] - (c - pi))});
             }
             const double tol = cfg.tolerance("loop-integral-constancy", 1e-8);
             ReportCase rc = make_case("loop-integral-constancy",
                                       "loop_integral_constancy: the integral of p + c over L_t does not depend on t",
                                       {{"max_deviation", r.max_deviation},
                                        {"quadrature_change", r.quadrature_change},
                                        {"offset", {c.real(), c.imag()}},
                                        {"integral", {r.integrals[0].real(), r.integrals[0].imag()}}},
                                       {{"max_deviation", 0.0}, {"integral_minus_offset", -pi}}, tol,
                                       r.max_deviation <= tol && r.quadrature_change <= tol);
             rc.table = std::move(table);
             return rc;
         }},
    };
}

const std::map<std::string, std::vector<CaseSpec>>& registry() {
    static const std::map<std::string, std::vector<CaseSpec>> r{
        {"orbifold", orbifold_cases()}, {"calibration", calibration_cases()}, {"metrics", metrics_cases()},
        {"volume", volume_cases()},     {"mirror", mirror_cases()},           {"realalg", realalg_cases()},
    };
    return r;
}

ReportCase timed(const CaseSpec& spec, const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ReportCase c;
    try {
        c = spec.run(cfg);
    } catch (const std::exception& e) {
        c = make_case(spec.id, "", {{"error", e.what()}}, nullptr, 0.0, false);
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

void run_into(SuiteReport& report, const std::vector<const CaseSpec*>& specs, const RunConfig& cfg) {
    if (!cfg.parallel) {
        for (const CaseSpec* s : specs) report.cases.push_back(timed(*s, cfg));
        return;
    }
    std::vector<std::future<ReportCase>> jobs;
    for (const CaseSpec* s : specs) jobs.push_back(std::async(std::launch::async, [s, &cfg] { return timed(*s, cfg); }));
    for (auto& j : jobs) report.cases.push_back(j.get());
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"orbifold", "calibration", "metrics", "volume", "mirror", "realalg"};
    return names;
}

const std::vector<CaseSpec>& suite_cases(const std::string& suite) {
    const auto& r = registry();
    const auto it = r.find(suite);
    if (it == r.end()) throw std::invalid_argument("unknown suite '" + suite + "'");
    return it->second;
}

SuiteReport run_suite(const std::string& name, const RunConfig& config) {
    SuiteReport report{name, {}};
    std::vector<const CaseSpec*> specs;
    if (name == "all") {
        for (const auto& s : suite_names())
            for (const auto& c : suite_cases(s)) specs.push_back(&c);
    } else {
        for (const auto& c : suite_cases(name)) specs.push_back(&c);
    }
    run_into(report, specs, config);
    return report;
}

SuiteReport run_cases(const std::string& suite, const std::vector<std::string>& ids, const RunConfig& config) {
    const auto& cases = suite_cases(suite);
    std::vector<const CaseSpec*> specs;
    for (const auto& id : ids) {
        const auto it = std::find_if(cases.begin(), cases.end(), [&](const CaseSpec& c) { return c.id == id; });
        if (it == cases.end()) throw std::invalid_argument("suite " + suite + " has no case '" + id + "'");
        specs.push_back(&*it);
    }
    SuiteReport report{suite, {}};
    run_into(report, specs, config);
    return report;
}

}  // namespace calib
