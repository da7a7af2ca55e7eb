#include <doctest.h>

#include <cmath>
#include <sstream>

#include "calib/mesh.hpp"
#include "calib/parse_error.hpp"
#include "calib/polynomial.hpp"
#include "calib/volume.hpp"

using namespace calib;

namespace {

const double pi = std::acos(-1.0);

double residual_max(double K, double t, double h) {
    double worst = 0.0;
    for (double theta = h; theta <= t - h; theta += h) {
        const double d2 = (comparison_F(K, t, theta + h) - 2 * comparison_F(K, t, theta) + comparison_F(K, t, theta - h)) / (h * h);
        worst = std::max(worst, std::abs(d2 + K * comparison_F(K, t, theta)));
    }
    return worst;
}

// Area of {(z, z^2) : |z|^2 + |z|^4 <= r^2}: the area element is 1 + 4|z|^2.
double graph_ball_area(double r) {
    const double rho2 = (-1.0 + std::sqrt(1.0 + 4.0 * r * r)) / 2.0;
    return pi * rho2 + 2.0 * pi * rho2 * rho2;
}

Point origin(int n) { return Point::Zero(n); }

}  // namespace

TEST_CASE("comparison function closed forms") {
    CHECK(comparison_F(0.0, 0.8, 0.2) == doctest::Approx(0.25));
    CHECK(comparison_F(0.0, 0.8, 0.8) == doctest::Approx(1.0));
    CHECK(comparison_F(1.0, pi / 2, pi / 4) == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(comparison_F(-1.0, 1.0, 0.5) == doctest::Approx(std::sinh(0.5) / std::sinh(1.0)));
    CHECK(comparison_F(4.0, 1.0, 1.0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(comparison_F(1.0, pi, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(comparison_F(1.0, 4.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(comparison_F(0.0, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(comparison_F(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("comparison function solves the ODE to second order") {
    for (double K : {1.0, -1.0, 2.5}) {
        const double t = 1.2;
        const double e1 = residual_max(K, t, 0.02);
        const double e2 = residual_max(K, t, 0.01);
        const double order = std::log2(e1 / e2);
        CAPTURE(K);
        CAPTURE(order);
        CHECK(order >= 1.9);
    }
}

TEST_CASE("alpha") {
    CHECK(comparison_alpha(0.0, 3, 0.6) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(comparison_alpha(1.0, 2, pi / 2) == doctest::Approx(1.0).epsilon(1e-12));
    for (double t : {0.3, 1.0, 2.0})
        CHECK(comparison_alpha(1.0, 2, t) == doctest::Approx((1 - std::cos(t)) / std::sin(t)).epsilon(1e-12));
    for (double t : {0.3, 1.0, 2.0})
        CHECK(comparison_alpha(-1.0, 2, t) == doctest::Approx((std::cosh(t) - 1) / std::sinh(t)).epsilon(1e-12));

    SUBCASE("increasing in t at 50 points") {
        for (double K : {1.0, -1.0}) {
            const double upper = K > 0 ? pi / std::sqrt(K) : 3.0;
            double previous = 0.0;
            for (int i = 1; i <= 50; ++i) {
                const double t = upper * i / 51.0;
                const double a = comparison_alpha(K, 3, t);
                CHECK(a > previous);
                previous = a;
            }
        }
    }
    SUBCASE("continuous at K = 0") {
        for (int k : {1, 2, 3, 4})
            for (double K : {1e-6, -1e-6}) CHECK(std::abs(comparison_alpha(K, k, 0.9) - 0.9 / k) < 1e-6);
    }
    CHECK_THROWS_AS(comparison_alpha(0.0, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(comparison_alpha(1.0, 2, pi), std::invalid_argument);
}

TEST_CASE("space form ball volumes") {
    for (double r : {0.1, 0.5, 2.0}) {
        CHECK(space_form_ball_volume(0.0, 2, r) == doctest::Approx(pi * r * r));
        CHECK(space_form_ball_volume(0.0, 3, r) == doctest::Approx(4.0 / 3.0 * pi * r * r * r));
    }
    CHECK(space_form_ball_volume(1.0, 2, pi / 2) == doctest::Approx(2 * pi).epsilon(1e-12));
    CHECK(space_form_ball_volume(1.0, 2, 1.0) == doctest::Approx(2 * pi * (1 - std::cos(1.0))).epsilon(1e-12));
    CHECK(space_form_ball_volume(-1.0, 2, 1.0) == doctest::Approx(2 * pi * (std::cosh(1.0) - 1)).epsilon(1e-12));
    CHECK(space_form_ball_volume(1.0, 3, pi) == doctest::Approx(2 * pi * pi).epsilon(1e-12));
    CHECK(unit_sphere_area(1) == doctest::Approx(2.0));
    CHECK(unit_sphere_area(4) == doctest::Approx(2 * pi * pi));
    CHECK_THROWS_AS(space_form_ball_volume(1.0, 2, 3.5), std::invalid_argument);
}

TEST_CASE("mesh construction") {
    CHECK(simplex_volume({origin(2), Point::Unit(2, 0), Point::Unit(2, 1)}) == doctest::Approx(0.5));
    CHECK(simplex_volume({origin(3), Point::Unit(3, 0), Point::Unit(3, 1), Point::Unit(3, 2)}) ==
          doctest::Approx(1.0 / 6.0));

    const auto sq = flat_square_mesh(10);
    CHECK(sq.face_count() == 200);
    CHECK(sq.total_area() == doctest::Approx(1.0));

    const auto sphere = icosphere_mesh(3);
    CHECK(sphere.face_count() == 20 * 64);
    CHECK(sphere.total_area() == doctest::Approx(4 * pi).epsilon(0.01));

    const auto torus = flat_torus_mesh(origin(6), {1, 3, 5}, 4);
    CHECK(torus.face_count() == 6 * 64);
    CHECK(torus.total_area() == doctest::Approx(1.0));
    CHECK(torus.periodic());

    const auto graph = holomorphic_graph_mesh(64);
    // Staircase boundary: the disc mesh sits inside |z| <= 1.
    CHECK(graph.total_area() < graph_ball_area(std::sqrt(2.0)));
    CHECK(graph.total_area() > 0.9 * graph_ball_area(std::sqrt(2.0)));

    std::vector<Point> v{origin(2), Point::Unit(2, 0), Point::Unit(2, 1), Point::Constant(2, 5.0),
                         Point::Constant(2, 6.0), Point(Eigen::Vector2d(5.0, 6.0))};
    CHECK_THROWS_AS(MeshedSubmanifold(2, v, {{0, 1, 2}, {3, 4, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(MeshedSubmanifold(2, v, {{0, 1, 9}}), std::invalid_argument);
    CHECK_THROWS_AS(MeshedSubmanifold(2, v, {{0, 1, 1}}), std::invalid_argument);
    std::vector<Point> line{origin(2), Point::Unit(2, 0), Point(Eigen::Vector2d(2.0, 0.0))};
    CHECK_THROWS_AS(MeshedSubmanifold(2, line, {{0, 1, 2}}), std::invalid_argument);
}

TEST_CASE("intrinsic balls") {
    SUBCASE("flat square") {
        const auto sq = flat_square_mesh(100);
        const int p = sq.nearest_vertex(Point::Constant(2, 0.5));
        for (double r : {0.1, 0.2, 0.3}) {
            const auto b = intrinsic_ball_volume(sq, p, r, DistanceMethod::FastMarching);
            CAPTURE(r);
            CHECK(std::abs(b.volume - pi * r * r) <= b.straddle_volume);
        }
        const auto d = intrinsic_distances(sq, p, DistanceMethod::FastMarching);
        CHECK(d[static_cast<std::size_t>(sq.nearest_vertex(Point::Constant(2, 0.9)))] ==
              doctest::Approx(0.4 * std::sqrt(2.0)).epsilon(1e-9));
        CHECK(d[static_cast<std::size_t>(sq.nearest_vertex(Eigen::Vector2d(0.9, 0.6)))] ==
              doctest::Approx(std::hypot(0.4, 0.1)).epsilon(0.01));
        // Edge paths overestimate distance, so the graph ball is too small.
        CHECK(intrinsic_ball_volume(sq, p, 0.2, DistanceMethod::EdgeGraph).volume < 0.8 * pi * 0.04);
    }
    SUBCASE("unit sphere cap") {
        const auto s = icosphere_mesh(4);
        const int north = s.nearest_vertex(Eigen::Vector3d(0, 0, 1));
        for (double r : {0.5, 1.0, pi / 2}) {
            const auto b = intrinsic_ball_volume(s, north, r, DistanceMethod::FastMarching);
            CAPTURE(r);
            CHECK(b.volume == doctest::Approx(2 * pi * (1 - std::cos(r))).epsilon(0.01));
        }
    }
    SUBCASE("radius beyond the diameter") {
        const auto sq = flat_square_mesh(20);
        for (auto method : {DistanceMethod::EdgeGraph, DistanceMethod::FastMarching}) {
            const auto b = intrinsic_ball_volume(sq, 0, 3.0, method);
            CHECK(b.volume == doctest::Approx(sq.total_area()).epsilon(1e-12));
            CHECK(b.straddle_volume == 0.0);
        }
    }
    SUBCASE("errors") {
        const auto sq = flat_square_mesh(4);
        CHECK_THROWS_AS(intrinsic_ball_volume(sq, 0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(intrinsic_ball_volume(sq, 99, 0.1), std::out_of_range);
        const auto torus = flat_torus_mesh(origin(3), {0, 1, 2}, 4);
        CHECK_THROWS_AS(intrinsic_distances(torus, 0, DistanceMethod::FastMarching), std::invalid_argument);
    }
}

TEST_CASE("holomorphic graph dominates the flat disc") {
    const auto coarse = holomorphic_graph_mesh(128);
    const auto fine = holomorphic_graph_mesh(256);
    const int pc = coarse.nearest_vertex(origin(4));
    const int pf = fine.nearest_vertex(origin(4));
    CHECK(fine.vertices()[static_cast<std::size_t>(pf)].norm() == 0.0);
    for (double r : {0.1, 0.2, 0.3, 0.4}) {
        const double v_coarse = extrinsic_ball_volume(coarse, coarse.vertices()[static_cast<std::size_t>(pc)], r).volume;
        const double allowance = 2 * std::abs(v_coarse - extrinsic_ball_volume(fine, origin(4), r).volume);
        const auto report = verify_ball_comparison(fine, pf, r, 0.0, BallMode::Extrinsic, allowance);
        CAPTURE(r);
        CHECK(report.pass);
        CHECK(report.margin >= 0.0);
        CHECK(report.measured == doctest::Approx(graph_ball_area(r)).epsilon(1e-3));
        CHECK(report.model == doctest::Approx(pi * r * r));
    }
}

TEST_CASE("flat three-torus fiber is the equality case") {
    Point base = origin(6);
    base[0] = 0.125;
    base[2] = 0.375;
    base[4] = 0.25;
    const auto fiber = flat_torus_mesh(base, {1, 3, 5}, 16);
    for (double r : {0.1, 0.2}) {
        for (int p : {0, 1000}) {
            const auto report = verify_ball_comparison(fiber, p, r, 0.0, BallMode::Extrinsic);
            CAPTURE(r);
            CHECK(std::abs(report.margin) <= report.straddle_volume);
            CHECK(std::abs(report.margin) < 1e-3 * report.model + 1e-4);
        }
    }
}

TEST_CASE("diameter bound") {
    CHECK(diameter_bound(10.0, 2.0, 0.5) == doctest::Approx(10.0));
    CHECK(diameter_bound(20.0, 2.0, 0.5) == doctest::Approx(2 * diameter_bound(10.0, 2.0, 0.5)));
    CHECK_THROWS_AS(diameter_bound(0.0, 1.0, 1.0), std::invalid_argument);

    const auto fiber = flat_torus_mesh(origin(6), {1, 3, 5}, 8);
    const double measured = graph_diameter(fiber);
    CHECK(measured >= std::sqrt(3.0) / 2 - 1e-12);
    for (double r : {0.1, 0.25, 0.45}) {
        const double eps = space_form_ball_volume(0.0, 3, r);
        CHECK(measured <= diameter_bound(fiber.total_area(), eps, r));
    }
    const auto sphere = icosphere_mesh(3);
    // Fronts meeting at the antipode make fast marching undershoot there (first order in the edge length).
    const double sd = graph_diameter(sphere, {0}, DistanceMethod::FastMarching);
    CHECK(sd <= pi);
    CHECK(sd >= 0.97 * pi);
    CHECK(sd <= diameter_bound(sphere.total_area(), space_form_ball_volume(0.0, 2, 0.5), 0.5));
}

TEST_CASE("mesh text format") {
    const auto torus = flat_torus_mesh(origin(3), {0, 1}, 3);
    std::stringstream ss;
    write_mesh(ss, torus);
    const auto back = read_mesh(ss);
    CHECK(back.periodic());
    CHECK(back.vertex_count() == torus.vertex_count());
    CHECK(back.face_count() == torus.face_count());
    CHECK(back.total_area() == doctest::Approx(torus.total_area()).epsilon(1e-15));
    for (std::size_t i = 0; i < back.vertex_count(); ++i) CHECK(back.vertices()[i] == torus.vertices()[i]);

    std::istringstream ok("# a triangle\nmesh 2 2\nv 0 0\nv 1 0  # comment\nv 0 1\n\nf 0 1 2\n");
    CHECK(read_mesh(ok).total_area() == doctest::Approx(0.5));

    const auto error_line = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_mesh(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(error_line("v 0 0\n") == 1);
    CHECK(error_line("mesh 2 2\nv 0 0\nv 1\n") == 3);
    CHECK(error_line("mesh 2 2\nv 0 0\nv 1 0\nf 0 1 2\n") == 4);
    CHECK(error_line("mesh 2 2\nv 0 0\nv 1 0\nv 0 1\nf 0 1 2 3\n") == 5);
    CHECK(error_line("mesh 2 2\nq\n") == 2);
    CHECK(error_line("mesh 2 2 twisted\n") == 1);
    CHECK(error_line("mesh 2 2\nv 0 0\nv 1 0\nv 2 0\nf 0 1 2\n") == 5);
    CHECK(error_line("") == 0);
    CHECK_THROWS_AS(read_mesh_file("/nonexistent/mesh.txt"), std::runtime_error);
}

TEST_CASE("quartic torus mesh flags negative margins") {
    const MeshedSubmanifold torus = torus_of_revolution_mesh(64);
    double worst = 0.0;
    for (const auto& v : torus.vertices()) worst = std::max(worst, std::abs(quartic_torus_eval(v[0], v[1], v[2])));
    CHECK(worst < 1e-12);
    CHECK(torus.total_area() == doctest::Approx(2 * pi * pi).epsilon(2e-3));
    REQUIRE(torus.vertices()[0][0] == doctest::Approx(1.5));

    // Whole surface inside the ball: area 2 pi^2 against 9 pi.
    const BallComparison ext = verify_ball_comparison(torus, 0, 3.0, 0.0, BallMode::Extrinsic);
    CHECK_FALSE(ext.pass);
    CHECK(ext.margin < -8.0);

    // Positive Gauss curvature on the outer equator shrinks intrinsic balls.
    const BallComparison in = verify_ball_comparison(torus, 0, 1.0, 0.0, BallMode::Intrinsic);
    CHECK_FALSE(in.pass);
    CHECK(in.margin < -0.2);

    CHECK_THROWS_AS(torus_of_revolution_mesh(2), std::invalid_argument);
    CHECK_THROWS_AS(torus_of_revolution_mesh(16, 0.5, 1.0), std::invalid_argument);
}
