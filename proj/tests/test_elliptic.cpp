#include <doctest.h>

#include <cmath>
#include <random>

#include "calib/elliptic.hpp"

using namespace calib;

namespace {

const double pi = std::acos(-1.0);

// p(z) = -(pi^2 / 3) E2(tau) + pi^2 sum_n csc^2(pi (z + n tau)).
Complex trig_oracle(Complex z, Complex tau) {
    Complex s = 0.0;
    for (int n = -30; n <= 30; ++n) {
        const Complex sn = std::sin(pi * (z + double(n) * tau));
        s += 1.0 / (sn * sn);
    }
    return -(pi * pi / 3.0) * eisenstein_E2(tau) + pi * pi * s;
}

}  // namespace

TEST_CASE("eisenstein series") {
    CHECK(std::abs(eisenstein_E2({0, 1}) - 3.0 / pi) < 1e-14);
    // E6(i) = 0 by symmetry of the square lattice.
    CHECK(std::abs(eisenstein_E6({0, 1})) < 1e-12);
    // E4(i) = 3 Gamma(1/4)^8 / (2 pi)^6.
    CHECK(std::abs(eisenstein_E4({0, 1}) - 3.0 * std::pow(std::tgamma(0.25), 8) / std::pow(2 * pi, 6)) < 1e-12);
    CHECK_THROWS_AS(eisenstein_E4({0, -1}), std::invalid_argument);
}

TEST_CASE("weierstrass p against the trigonometric series") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (const Complex tau : {Complex(0, 1), Complex(0.3, 1.2), Complex(-0.5, 0.9)}) {
        const WeierstrassP p(EllipticData{tau, 40});
        for (int i = 0; i < 20; ++i) {
            const Complex z = u(rng) + u(rng) * tau;
            if (std::abs(z) < 0.05) continue;
            CHECK(std::abs(p(z) - trig_oracle(z, tau)) < 1e-9 * std::max(1.0, std::abs(p(z))));
        }
    }
}

TEST_CASE("weierstrass p symmetries") {
    const EllipticData d{{0.2, 1.1}, 40};
    const WeierstrassP p(d);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Complex z(u(rng), u(rng));
        const WeierstrassValue v = weierstrass_p_checked(z, d);
        const double tol = 10 * v.self_convergence + 1e-10 * std::max(1.0, std::abs(v.value));
        CHECK(std::abs(p(-z) - v.value) <= tol);
        CHECK(std::abs(p(z + 1.0) - v.value) <= tol);
        CHECK(std::abs(p(z + d.tau) - v.value) <= tol);
    }
    for (double s = 1e-1; s > 1e-6; s /= 10) {
        const Complex z = s * Complex(0.6, 0.8);
        CHECK(std::abs(z * z * p(z) - 1.0) < 10 * s * s);
    }
    CHECK_THROWS_AS(p(Complex(1.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(p(d.tau + Complex(2.0, 1e-9)), std::domain_error);
    CHECK_THROWS_AS(WeierstrassP(EllipticData{{0, 1}, 1}), std::invalid_argument);
    CHECK_THROWS_AS(WeierstrassP(EllipticData{{1, 0}, 40}), std::invalid_argument);
}

TEST_CASE("loop integrals are constant in t") {
    const EllipticData d{{0, 1}, 40};
    const LoopConstancyReport r = loop_integral_constancy(0.0, {0.25, 0.4, 0.6}, d, 512);
    CHECK(r.max_deviation < 1e-8);
    CHECK(r.quadrature_change < 1e-12);
    for (const Complex& i : r.integrals) CHECK(std::abs(i + pi) < 1e-8);

    const Complex c = choose_offset(WeierstrassP(d), 0.25);
    CHECK(c.real() == c.imag());
    CHECK(c.real() > 1.0);
    const LoopConstancyReport shifted = loop_integral_constancy(c, {0.25, 0.4, 0.6}, d, 512);
    for (const Complex& i : shifted.integrals) CHECK(std::abs(i - (c - pi)) < 1e-8);

    // Truncation doubling: deviations do not grow.
    double previous = 1.0;
    for (int n : {10, 20, 40}) {
        const double dev = loop_integral_constancy(0.0, {0.25, 0.4, 0.6}, EllipticData{{0, 1}, n}, 256).max_deviation;
        CHECK(dev <= previous);
        previous = dev;
    }
    CHECK_THROWS_AS(loop_integral_constancy(0.0, {0.01}, d), std::invalid_argument);
}

TEST_CASE("constant integrand") {
    const WeierstrassP p(EllipticData{});
    const Complex c(2.0, -1.0);
    const Complex with_p = loop_integral(p, c, 0.5, 64);
    const Complex without_p = loop_integral(p, 0.0, 0.5, 64);
    CHECK(std::abs((with_p - without_p) - c) < 1e-14);
}
