#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

#include "calib/levelset.hpp"
#include "calib/parse_error.hpp"
#include "calib/polynomial.hpp"

using namespace calib;

namespace {

RealPolynomial var3(int i) { return RealPolynomial::variable(3, i); }

Eigen::VectorXd box(int n, double half) { return Eigen::VectorXd::Constant(n, half); }

}  // namespace

TEST_CASE("polynomial arithmetic") {
    const auto x = var3(0), y = var3(1);
    const RealPolynomial p = (x + y).pow(2);
    CHECK(p.coefficient({2, 0, 0}) == 1.0);
    CHECK(p.coefficient({1, 1, 0}) == 2.0);
    CHECK(p.degree() == 2);
    CHECK(p({1.5, -0.5, 7.0}) == doctest::Approx(1.0));
    CHECK((p - p).is_zero());
    CHECK((0.0 * p).is_zero());
    CHECK(RealPolynomial(3).degree() == -1);
    CHECK(p.support() == std::vector<int>{0, 1});

    const Eigen::VectorXd g = p.gradient(Eigen::Vector3d(1.0, 2.0, 3.0));
    CHECK(g[0] == doctest::Approx(6.0));
    CHECK(g[1] == doctest::Approx(6.0));
    CHECK(g[2] == 0.0);

    const RealPolynomial e = x.embedded(4, {3, 0, 1});
    CHECK(e.coefficient({0, 0, 0, 1}) == 1.0);
    CHECK_THROWS_AS(x + RealPolynomial::variable(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(RealPolynomial::variable(3, 3), std::out_of_range);
}

TEST_CASE("polynomial text format") {
    const RealPolynomial p = parse_polynomial("# quartic piece\nvars 2\n3/4 0 0\n-1 2 0  # x1^2\n0.5 1 1\n");
    CHECK(p.variables() == 2);
    CHECK(p.coefficient({0, 0}) == 0.75);
    CHECK(p.coefficient({2, 0}) == -1.0);
    CHECK(p.coefficient({1, 1}) == 0.5);
    const RealPolynomial q = parse_polynomial(format_polynomial(p));
    CHECK(q.terms() == p.terms());

    const auto line_of = [](const std::string& text) {
        try {
            parse_polynomial(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("1 0 0\n") == 1);
    CHECK(line_of("vars 2\n1 0\n") == 2);
    CHECK(line_of("vars 2\n1 0 0\nx 1 1\n") == 3);
    CHECK(line_of("vars 2\n1 0 0 0\n") == 2);
    CHECK(line_of("vars 2\n\nvars 3\n") == 3);
    CHECK(line_of("vars 0\n") == 1);
    CHECK(line_of("# nothing\n\n") == 2);
}

TEST_CASE("quartic torus") {
    CHECK(quartic_torus_eval(1.5, 0, 0) == 0.0);
    CHECK(quartic_torus_eval(0, 0, 0) == 9.0 / 16.0);
    const RealPolynomial p = quartic_torus();
    CHECK(p.degree() == 4);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double x = u(rng), y = u(rng), z = u(rng);
        const double direct = quartic_torus_eval(x, y, z);
        worst = std::max(worst, std::abs(direct - quartic_torus_factored(x, y, z)));
        worst = std::max(worst, std::abs(direct - p({x, y, z})));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("viro perturbation") {
    const RealPolynomial p = unit_sphere(4), q = RealPolynomial::variable(4, 3), h = four_circle_h(4);
    const RealPolynomial f = viro_perturb(p, q, h, 1e-3);
    CHECK(f.degree() == 4);
    // As a hypersurface in RP^4 the zero set is the quintic x0^5 f(x / x0).
    const RealPolynomial quintic = homogenize(f, 5);
    CHECK(quintic.variables() == 5);
    for (const auto& [e, c] : quintic.terms()) CHECK(std::accumulate(e.begin(), e.end(), 0) == 5);
    CHECK(quintic({0.1, 0.2, -0.3, 0.4, 1.0}) == doctest::Approx(f({0.1, 0.2, -0.3, 0.4})));
    CHECK(quintic({0.2, 0.4, -0.6, 0.8, 2.0}) == doctest::Approx(32.0 * f({0.1, 0.2, -0.3, 0.4})));
    CHECK_THROWS_AS(homogenize(f, 3), std::invalid_argument);
    CHECK(viro_perturb(p, q, h, 0.0).terms() == (p * q).terms());
    CHECK(h({1.0 / 3 + 0.25, 1.0 / 3, 0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(viro_perturb(p, q, four_circle_h(3), 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(viro_perturb(p, q, h, -1.0), std::invalid_argument);
}

TEST_CASE("component counts") {
    const Eigen::VectorXd lo = -box(3, 2.0), hi = box(3, 2.0);
    CHECK(component_count(unit_sphere(3), lo, hi, 16).count == 1);
    CHECK(component_count(unit_sphere(3) * 1.0 + RealPolynomial::constant(3, 10.0), lo, hi, 16).count == 0);
    CHECK_THROWS_AS(component_count(unit_sphere(3), lo, hi, 8), std::invalid_argument);

    // Two disjoint spheres.
    const auto x = var3(0), y = var3(1), z = var3(2);
    const auto shifted = [&](double c) {
        return (x - RealPolynomial::constant(3, c)).pow(2) + y * y + z * z - RealPolynomial::constant(3, 0.25);
    };
    const ComponentReport two = component_count(shifted(-1.0) * shifted(1.0), lo, hi, 32);
    CHECK(two.count == 2);
    REQUIRE(two.sizes.size() == 2);
    CHECK(two.sizes[0] >= two.sizes[1]);

    std::ostringstream dump;
    const CubicalLevelSet grid(unit_sphere(3), lo, hi, 16);
    write_marked_cells(dump, grid);
    const std::string text = dump.str();
    const auto lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == static_cast<long>(component_count(grid).marked_cells));

    CHECK_THROWS_AS(CubicalLevelSet([](const Eigen::VectorXd&) { return 1.0; }, lo, hi, {4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(CubicalLevelSet(unit_sphere(3), hi, lo, 4), std::invalid_argument);
}

TEST_CASE("viro counts in three dimensions") {
    const RealPolynomial p = unit_sphere(3), q = var3(2), one = RealPolynomial::constant(3, 1.0);
    const Eigen::VectorXd lo = -box(3, 1.25), hi = box(3, 1.25);
    for (int res : {64, 128}) {
        CAPTURE(res);
        CHECK(component_count(p * q, lo, hi, res).count == 1);
        CHECK(component_count(viro_perturb(p, q, one, 1e-2), lo, hi, res).count == 2);
        CHECK(component_count(viro_perturb(p, q, -1.0 * one, 1e-2), lo, hi, res).count == 2);
    }
    const auto scan = viro_stability_scan(p, q, one, lo, hi, {3e-3, 1e-2}, 64, 128);
    for (const auto& row : scan) CHECK(row.stable());
}

TEST_CASE("viro counts in four dimensions") {
    const RealPolynomial p = unit_sphere(4), q = RealPolynomial::variable(4, 3);
    const Eigen::VectorXd lo = -box(4, 1.25), hi = box(4, 1.25);
    for (int res : {32, 48}) {
        CAPTURE(res);
        CHECK(component_count(viro_perturb(p, q, RealPolynomial::constant(4, 1.0), 1e-2), lo, hi, res).count == 2);
        CHECK(component_count(viro_perturb(p, q, four_circle_h(4), 1e-2), lo, hi, res).count == 1);
    }
}

TEST_CASE("curves on the sphere") {
    const SphereCurveReport line = sphere_circle_count(var3(0));
    CHECK(line.count == 1);
    CHECK(line.transversal);

    const SphereCurveReport cross = sphere_circle_count(var3(0) * var3(1));
    CHECK_FALSE(cross.transversal);

    const SphereCurveReport four = sphere_circle_count(four_circle_h(3));
    CHECK(four.count == 4);
    CHECK(four.transversal);
    CHECK(sphere_circle_count(four_circle_h(2)).count == 4);

    CHECK(sphere_circle_count(RealPolynomial::constant(3, 1.0)).count == 0);
    CHECK_THROWS_AS(sphere_circle_count(RealPolynomial::variable(4, 3)), std::invalid_argument);
    CHECK_THROWS_AS(sphere_circle_count(var3(0), 8), std::invalid_argument);
}

TEST_CASE("sphere curve counts are rotation invariant") {
    const Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()) * Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitX()))
            .toRotationMatrix();
    const RealPolynomial h = four_circle_h(3);
    const RealPolynomial rh = rotate_polynomial(h, rot);
    const Eigen::Vector3d v(0.2, -0.4, 0.9);
    CHECK(rh(Eigen::VectorXd(v)) == doctest::Approx(h(Eigen::VectorXd(rot * v))));
    const SphereCurveReport r = sphere_circle_count(rh);
    CHECK(r.count == 4);
    CHECK(r.transversal);
    CHECK(sphere_circle_count(rotate_polynomial(var3(0), rot)).count == 1);
}
