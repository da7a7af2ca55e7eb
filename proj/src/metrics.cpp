#include "calib/metrics.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace calib {

namespace {

void check_u_t(double u, double t) {
    if (!(u > 0.0)) throw std::invalid_argument("Eguchi-Hanson potential needs u > 0 (got " + std::to_string(u) + ")");
    if (!(t >= 0.0)) throw std::invalid_argument("Eguchi-Hanson parameter must be t >= 0");
}

double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double min_eigenvalue(const Hermitian2& h) {
    Eigen::SelfAdjointEigenSolver<Hermitian2> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

double eh_potential(double u, double t) {
    check_u_t(u, t);
    if (t == 0.0) return u;
    const double s = std::hypot(u, t);
    return s + t * std::log(u) - t * std::log(s + t);
}

double eh_potential_as_printed(double u, double t) {
    check_u_t(u, t);
    const double s = std::hypot(u, t);
    const double t2 = t * t;
    return s + t2 * std::log(u) - t2 * std::log(s + t2);
}

double eh_potential_du(double u, double t) {
    check_u_t(u, t);
    return std::hypot(u, t) / u;
}

double eh_potential_du2(double u, double t) {
    check_u_t(u, t);
    return -t * t / (std::hypot(u, t) * u * u);
}

Hermitian2 eh_kahler_matrix(const Eigen::Vector2cd& z, double t) {
    const double u = z.squaredNorm();
    if (u == 0.0) throw std::invalid_argument("eh_kahler_matrix: z = 0 lies outside the chart");
    const double f1 = eh_potential_du(u, t);
    const double f2 = eh_potential_du2(u, t);
    Hermitian2 g = f1 * Hermitian2::Identity();
    g += f2 * z.conjugate() * z.transpose();
    return g;
}

double cutoff(double u, double inner, double outer) {
    if (!(inner < outer)) throw std::invalid_argument("cutoff: need inner < outer");
    const double x = (u - inner) / (outer - inner);
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    const double a = psi(x);
    const double b = psi(1.0 - x);
    return 1.0 - a / (a + b);
}

GluedKahlerData::GluedKahlerData(double t_, double r_inner_, double r_outer_)
    : t(t_), r_inner(r_inner_), r_outer(r_outer_) {
    if (!(t >= 0.0)) throw std::invalid_argument("glued data: t must be >= 0");
    if (!(0.0 < r_inner && r_inner < r_outer)) throw std::invalid_argument("glued data: need 0 < r_inner < r_outer");
}

double glued_potential(double u, const GluedKahlerData& data) {
    if (!(u > 0.0)) throw std::invalid_argument("glued_potential needs u > 0");
    const double chi = cutoff(u, data.r_inner, data.r_outer);
    if (data.t == 0.0 || chi == 0.0) return u;
    return chi * eh_potential(u, data.t) + (1.0 - chi) * u;
}

Eigen::Vector2cd to_complex(const Vector& x) {
    if (x.size() != 4) throw std::invalid_argument("chart points live in R^4");
    return {std::complex<double>(x[0], x[1]), std::complex<double>(x[2], x[3])};
}

double default_hessian_step(double u) { return 1e-5 * std::max(1.0, std::sqrt(u)); }

Hermitian2 numeric_levi_matrix(const std::function<double(double)>& potential, const Vector& x, double h) {
    if (x.size() != 4) throw std::invalid_argument("numeric_levi_matrix: point must be in R^4");
    const auto f = [&](const Vector& p) { return potential(p.squaredNorm()); };
    Eigen::Matrix4d hess;
    const double f0 = f(x);
    for (int a = 0; a < 4; ++a) {
        Vector p = x;
        p[a] += h;
        const double fp = f(p);
        p[a] -= 2 * h;
        const double fm = f(p);
        hess(a, a) = (fp - 2 * f0 + fm) / (h * h);
        for (int b = a + 1; b < 4; ++b) {
            Vector q = x;
            q[a] += h;
            q[b] += h;
            const double fpp = f(q);
            q[b] -= 2 * h;
            const double fpm = f(q);
            q[a] -= 2 * h;
            const double fmm = f(q);
            q[b] += 2 * h;
            const double fmp = f(q);
            hess(a, b) = hess(b, a) = (fpp - fpm - fmp + fmm) / (4 * h * h);
        }
    }
    Hermitian2 levi;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double re = hess(2 * i, 2 * j) + hess(2 * i + 1, 2 * j + 1);
            const double im = hess(2 * i, 2 * j + 1) - hess(2 * i + 1, 2 * j);
            levi(i, j) = std::complex<double>(re, im) / 4.0;
        }
    }
    return levi;
}

namespace {

// h(e_a, e_b) = sum_ij H_ij dz_i(e_a) conj(dz_j(e_b)).
Eigen::Matrix4cd real_pairing(const Hermitian2& h) {
    Eigen::Matrix<std::complex<double>, 2, 4> dz = Eigen::Matrix<std::complex<double>, 2, 4>::Zero();
    dz(0, 0) = 1.0;
    dz(0, 1) = std::complex<double>(0.0, 1.0);
    dz(1, 2) = 1.0;
    dz(1, 3) = std::complex<double>(0.0, 1.0);
    return dz.transpose() * h * dz.conjugate();
}

}  // namespace

MetricAtPoint real_metric(const Hermitian2& h) {
    const Eigen::Matrix4d g = real_pairing(h).real();
    return MetricAtPoint(Matrix(0.5 * (g + g.transpose())));
}

DifferentialForm kahler_form_of(const Hermitian2& h) {
    const Eigen::Matrix4d w = -real_pairing(h).imag();
    DifferentialForm out(4, 2);
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            const double c = 0.5 * (w(a, b) - w(b, a));
            if (c != 0.0) out.add_term(index_set({a, b}), c);
        }
    }
    return out;
}

Hermitian2 glued_levi_matrix(const Vector& x, const GluedKahlerData& data) {
    const double u = x.squaredNorm();
    return numeric_levi_matrix([&](double v) { return glued_potential(v, data); }, x, default_hessian_step(u));
}

PositivityReport positivity_scan(const GluedKahlerData& data, const ScanGrid& grid) {
    if (grid.u_samples < 2 || grid.direction_samples < 1) throw std::invalid_argument("positivity_scan: grid too small");
    const double u_lo = grid.u_min > 0.0 ? grid.u_min : 0.5 * data.r_inner;
    const double u_hi = grid.u_max > 0.0 ? grid.u_max : 2.0 * data.r_outer;

    std::mt19937_64 rng(0xe6);
    std::normal_distribution<double> normal;
    std::vector<Vector> directions;
    for (int d = 0; d < grid.direction_samples; ++d) {
        Vector v(4);
        for (int i = 0; i < 4; ++i) v[i] = normal(rng);
        directions.push_back(v.normalized());
    }

    const auto potential = [&](double v) { return glued_potential(v, data); };
    PositivityReport report;
    report.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.u_samples; ++k) {
        const double u = u_lo + (u_hi - u_lo) * k / (grid.u_samples - 1);
        const double h = grid.step_scale * std::max(1.0, std::sqrt(u));
        ScanPoint sp{u, std::numeric_limits<double>::infinity()};
        for (const auto& d : directions) {
            const Vector x = std::sqrt(u) * d;
            const double ev = min_eigenvalue(numeric_levi_matrix(potential, x, h));
            if (ev < sp.min_eigenvalue) sp.min_eigenvalue = ev;
            if (ev < report.min_eigenvalue) {
                report.min_eigenvalue = ev;
                report.worst_point = x;
            }
        }
        report.profile.push_back(sp);
    }
    report.pass = report.min_eigenvalue > 0.0;
    return report;
}

ThresholdReport positivity_threshold(double r_inner, double r_outer, double t_lo, double t_hi, const ScanGrid& grid,
                                     int iterations) {
    if (!(0.0 < t_lo && t_lo < t_hi)) throw std::invalid_argument("positivity_threshold: need 0 < t_lo < t_hi");
    const auto passes = [&](double t) { return positivity_scan(GluedKahlerData(t, r_inner, r_outer), grid).pass; };
    if (!passes(t_lo)) throw std::invalid_argument("positivity_threshold: scan fails at t_lo");
    if (passes(t_hi)) throw std::invalid_argument("positivity_threshold: scan passes at t_hi");
    ThresholdReport out{t_lo, t_hi, 0};
    for (; out.iterations < iterations; ++out.iterations) {
        const double mid = std::sqrt(out.t_star * out.t_fail);
        (passes(mid) ? out.t_star : out.t_fail) = mid;
    }
    return out;
}

double conformal_factor(const MetricAtPoint& g, const DifferentialForm& eta) {
    const double norm = form_norm(eta, g);
    if (!(norm > 0.0)) throw DegenerateForm("form has zero norm; no conformal factor normalizes it");
    return norm / std::sqrt(2.0);
}

NormalizationReport normalize_to_sqrt2(const std::function<MetricAtPoint(const Point&)>& metric,
                                       const DifferentialForm& eta, const std::vector<Point>& samples) {
    NormalizationReport report;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        try {
            report.factors.push_back(conformal_factor(metric(samples[i]), eta.at(samples[i])));
        } catch (const DegenerateForm&) {
            report.degenerate = true;
            report.degenerate_index = i;
            report.factors.clear();
            return report;
        }
    }
    return report;
}

double hyperkahler_residual(const DifferentialForm& w1, const DifferentialForm& w2, const DifferentialForm& w3) {
    const std::vector<const DifferentialForm*> w{&w1, &w2, &w3};
    const int n = w1.dim();
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            DifferentialForm expected(n, 4);
            if (i == j) expected = DifferentialForm::basis(n, {0, 1, 2, 3}, 2.0);
            worst = std::max(worst, distance(wedge(*w[i], *w[j]), expected));
        }
    }
    return worst;
}

}  // namespace calib
