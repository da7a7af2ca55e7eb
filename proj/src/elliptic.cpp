#include "calib/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

namespace calib {

namespace {

constexpr double pi = boost::math::constants::pi<double>();

// sum_{n>=1} sigma_k(n) q^n, truncated once |q|^n drops below 1e-18.
Complex divisor_series(Complex tau, int k) {
    const Complex q = std::exp(Complex(0.0, 2 * pi) * tau);
    if (std::abs(q) >= 1.0) throw std::invalid_argument("q-series needs Im tau > 0");
    Complex total = 0.0, qn = 1.0;
    for (int n = 1; n < 100000; ++n) {
        qn *= q;
        if (std::abs(qn) * std::pow(double(n), k + 1) < 1e-18) break;
        double sigma = 0.0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) sigma += std::pow(double(d), k);
        total += sigma * qn;
    }
    return total;
}

std::vector<Complex> lattice_points(const EllipticData& d, int radius) {
    std::vector<Complex> pts;
    const int nmax = static_cast<int>(std::ceil(radius / d.tau.imag()));
    for (int n = -nmax; n <= nmax; ++n) {
        const int mmax = static_cast<int>(std::ceil(radius + std::abs(n * d.tau.real())));
        for (int m = -mmax; m <= mmax; ++m) {
            if (m == 0 && n == 0) continue;
            const Complex w = double(m) + double(n) * d.tau;
            if (std::abs(w) <= radius) pts.push_back(w);
        }
    }
    return pts;
}

// z minus the nearest lattice translate in the (1, tau) coordinates.
Complex reduce(Complex z, Complex tau) {
    const double b = std::round(z.imag() / tau.imag());
    z -= b * tau;
    return z - std::round(z.real());
}

}  // namespace

void EllipticData::validate() const {
    if (!(tau.imag() > 0.0)) throw std::invalid_argument("EllipticData: Im tau must be positive");
    if (N < 2) throw std::invalid_argument("EllipticData: N must be at least 2");
}

Complex eisenstein_E2(Complex tau) { return 1.0 - 24.0 * divisor_series(tau, 1); }
Complex eisenstein_E4(Complex tau) { return 1.0 + 240.0 * divisor_series(tau, 3); }
Complex eisenstein_E6(Complex tau) { return 1.0 - 504.0 * divisor_series(tau, 5); }
Complex lattice_G4(Complex tau) { return std::pow(pi, 4) / 45.0 * eisenstein_E4(tau); }
Complex lattice_G6(Complex tau) { return 2.0 * std::pow(pi, 6) / 945.0 * eisenstein_E6(tau); }

WeierstrassP::WeierstrassP(const EllipticData& data) : data_(data) {
    data_.validate();
    lattice_ = lattice_points(data_, data_.N);
    Complex g4 = 0.0, g6 = 0.0;
    for (const Complex& w : lattice_) {
        const Complex w2 = 1.0 / (w * w);
        g4 += w2 * w2;
        g6 += w2 * w2 * w2;
    }
    tail4_ = 3.0 * (lattice_G4(data_.tau) - g4);
    tail6_ = 5.0 * (lattice_G6(data_.tau) - g6);
}

Complex WeierstrassP::operator()(Complex z) const {
    z = reduce(z, data_.tau);
    if (std::abs(z) < 1e-8) throw std::domain_error("weierstrass_p: z is at a lattice point");
    const Complex z2 = z * z;
    Complex total = 1.0 / z2;
    for (const Complex& w : lattice_) {
        const Complex d = z - w;
        total += 1.0 / (d * d) - 1.0 / (w * w);
    }
    return total + tail4_ * z2 + tail6_ * z2 * z2;
}

Complex weierstrass_p(Complex z, const EllipticData& data) { return WeierstrassP(data)(z); }

WeierstrassValue weierstrass_p_checked(Complex z, const EllipticData& data) {
    EllipticData doubled = data;
    doubled.N = 2 * data.N;
    const Complex a = WeierstrassP(data)(z);
    const Complex b = WeierstrassP(doubled)(z);
    return {a, std::abs(a - b)};
}

Complex loop_integral(const WeierstrassP& p, Complex c, double t, int nodes) {
    if (nodes < 1) throw std::invalid_argument("loop_integral: nodes must be positive");
    Complex total = 0.0;
    for (int j = 0; j < nodes; ++j) total += p(double(j) / nodes + t * p.data().tau);
    return total / double(nodes) + c;
}

LoopConstancyReport loop_integral_constancy(Complex c, const std::vector<double>& t_values, const EllipticData& data,
                                            int nodes) {
    for (double t : t_values)
        if (!(t >= 0.05 && t <= 0.95)) throw std::invalid_argument("loop_integral_constancy: t must lie in [0.05, 0.95]");
    const WeierstrassP p(data);
    LoopConstancyReport r;
    r.t_values = t_values;
    for (double t : t_values) {
        const Complex i1 = loop_integral(p, c, t, nodes);
        r.integrals.push_back(i1);
        r.quadrature_change = std::max(r.quadrature_change, std::abs(i1 - loop_integral(p, c, t, 2 * nodes)));
    }
    for (std::size_t i = 0; i < r.integrals.size(); ++i)
        for (std::size_t j = i + 1; j < r.integrals.size(); ++j)
            r.max_deviation = std::max(r.max_deviation, std::abs(r.integrals[i] - r.integrals[j]));
    return r;
}

Complex choose_offset(const WeierstrassP& p, double t, int nodes) {
    double m = 0.0;
    for (int j = 0; j < nodes; ++j) m = std::max(m, std::abs(p(double(j) / nodes + t * p.data().tau)));
    return Complex(1.0, 1.0) * (m + 1.0);
}

}  // namespace calib
