#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "calib/catalog.hpp"
#include "calib/forms.hpp"

using namespace calib;

namespace {

// Leibniz-formula evaluation straight from the definition
//   dx_I(v_1..v_k) = sum_sigma sgn(sigma) prod_r v_{sigma(r)}[I_r].
double oracle_evaluate(const DifferentialForm& a, const std::vector<Vector>& frame) {
    const int k = static_cast<int>(frame.size());
    std::vector<int> perm(static_cast<std::size_t>(k));
    double total = 0.0;
    for (const auto& [set, c] : a.terms()) {
        const auto idx = indices_of(set);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            int inversions = 0;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) inversions += perm[i] > perm[j];
            double prod = (inversions % 2) ? -1.0 : 1.0;
            for (int r = 0; r < k; ++r) prod *= frame[perm[r]][idx[r]];
            total += c.value() * prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return total;
}

// Rebuilds a (k-1)-form from its values (i_v a)(e_J) = a(v, e_J).
DifferentialForm oracle_contraction(const Vector& v, const DifferentialForm& a) {
    const int n = a.dim();
    DifferentialForm out(n, a.degree() - 1);
    for (IndexSet set : subsets_of_size(n, a.degree() - 1)) {
        std::vector<Vector> frame{v};
        for (int i : indices_of(set)) frame.push_back(Vector::Unit(n, i));
        out.add_term(set, oracle_evaluate(a, frame));
    }
    return out;
}

DifferentialForm random_form(int n, int k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DifferentialForm out(n, k);
    for (IndexSet s : subsets_of_size(n, k)) out.add_term(s, u(rng));
    return out;
}

Matrix random_matrix(int r, int c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    return m;
}

}  // namespace

TEST_CASE("wedge basics") {
    const auto dx0 = DifferentialForm::basis(6, {0});
    CHECK(wedge(dx0, dx0).is_zero());
    CHECK(evaluate_on_frame(DifferentialForm::basis(2, {0, 1}), TangentFrame::coordinate(2, {0, 1})) == 1.0);
    const auto vol = wedge(wedge(DifferentialForm::basis(6, {0, 1}), DifferentialForm::basis(6, {2, 3})),
                           DifferentialForm::basis(6, {4, 5}));
    CHECK(evaluate_on_frame(vol, TangentFrame::coordinate(6, {0, 1, 2, 3, 4, 5})) == 1.0);
    CHECK_THROWS_AS(wedge(dx0, DifferentialForm::basis(5, {0})), std::invalid_argument);
    CHECK(DifferentialForm::basis(4, {1, 0}).coefficient(index_set({0, 1})) == -1.0);
}

TEST_CASE("wedge is associative and graded commutative") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_form(6, 1 + trial % 2, rng);
        const auto b = random_form(6, 2, rng);
        const auto c = random_form(6, 1, rng);
        CHECK(approx_equal(wedge(wedge(a, b), c), wedge(a, wedge(b, c))));
        const double s = ((a.degree() * b.degree()) % 2) ? -1.0 : 1.0;
        CHECK(approx_equal(wedge(a, b), s * wedge(b, a)));
    }
}

TEST_CASE("interior product") {
    CHECK(approx_equal(interior_product(Vector::Unit(2, 0), DifferentialForm::basis(2, {0, 1})),
                       DifferentialForm::basis(2, {1})));
    const auto omega = catalog::kahler_form(3);
    CHECK(approx_equal(interior_product(Vector::Unit(6, 1), omega), -DifferentialForm::basis(6, {0})));
    CHECK_THROWS_AS(interior_product(Vector::Unit(3, 0), DifferentialForm::scalar(3, 1.0)), std::invalid_argument);

    // i_{e6} phi0 = omega1 + delta2 ^ delta3, checked against the evaluation oracle.
    const auto phi0 = catalog::g2_phi0();
    const Vector e6 = Vector::Unit(7, 6);
    const auto expected = catalog::g2_triple().omega1 + wedge(catalog::g2_delta(2), catalog::g2_delta(3));
    CHECK(approx_equal(oracle_contraction(e6, phi0), expected));
    CHECK(approx_equal(interior_product(e6, phi0), expected));
}

TEST_CASE("interior product matches the evaluation oracle and obeys Leibniz") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5;
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = g(rng);
        const auto a = random_form(n, 2, rng);
        const auto b = random_form(n, 1 + trial % 3, rng);
        CHECK(approx_equal(interior_product(v, a), oracle_contraction(v, a)));
        const auto lhs = interior_product(v, wedge(a, b));
        const auto rhs = wedge(interior_product(v, a), b) + wedge(a, interior_product(v, b));
        CHECK(approx_equal(lhs, rhs));
    }
}

TEST_CASE("pullback") {
    std::mt19937_64 rng(13);
    const auto a = DifferentialForm::basis(4, {0, 1});
    CHECK(approx_equal(pullback(Matrix::Identity(4, 4), a), a));
    CHECK(approx_equal(pullback(2.0 * Matrix::Identity(4, 4), a), 4.0 * a));
    CHECK_THROWS_AS(pullback(Matrix::Identity(3, 3), a), std::invalid_argument);

    // d mu for mu(x1,y1,x2,y2,x3,y3) = (x1,-y2,x2,y1,x3,y3): mu^* dy1 = -dy2.
    const Matrix dmu = catalog::cy3_mu().linear().cast<double>();
    CHECK(approx_equal(pullback(dmu, DifferentialForm::basis(6, {1})), -DifferentialForm::basis(6, {3})));

    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_form(5, 1 + trial % 4, rng);
        const Matrix j1 = random_matrix(5, 5, rng);
        const Matrix j2 = random_matrix(5, 4, rng);
        CHECK(distance(pullback(j1 * j2, f), pullback(j2, pullback(j1, f))) < 1e-12 * (1 + f.max_abs_coefficient() * 100));
        // Pullback agrees with evaluation on pushed-forward frames.
        std::vector<Vector> frame;
        for (int r = 0; r < f.degree(); ++r) frame.emplace_back(random_matrix(4, 1, rng));
        std::vector<Vector> pushed;
        for (const auto& v : frame) pushed.emplace_back(j2 * v);
        if (f.degree() <= 4) {
            CHECK(evaluate_on_frame(pullback(j2, f), TangentFrame(frame)) ==
                  doctest::Approx(oracle_evaluate(f, pushed)).epsilon(1e-10));
        }
    }
}

TEST_CASE("pullback composes field coefficients") {
    DifferentialForm a(2, 1);
    a.add_term(index_set({0}), Coefficient(Coefficient::Field([](const Point& p) { return p[0] + 2 * p[1]; })));
    Matrix j(2, 2);
    j << 0, 1, 1, 0;
    const auto b = pullback(j, a);
    Point p(2);
    p << 3.0, 5.0;
    // (J^* a)(p) = a(Jp) o J:  coefficient of dx1 is (Jp)_0 + 2 (Jp)_1 = 5 + 6.
    CHECK(b.at(p).coefficient(index_set({1})) == doctest::Approx(11.0));
}

TEST_CASE("hodge star") {
    const auto g4 = MetricAtPoint::euclidean(4);
    CHECK(approx_equal(hodge_star(DifferentialForm::scalar(4, 1.0), g4), DifferentialForm::volume(4)));
    CHECK(approx_equal(hodge_star(DifferentialForm::basis(4, {0, 1}), g4), DifferentialForm::basis(4, {2, 3})));
    const auto triple = catalog::hyperkahler_triple();
    for (int i = 1; i <= 3; ++i) CHECK(approx_equal(hodge_star(triple[i], g4), triple[i]));

    Matrix bad = Matrix::Identity(3, 3);
    bad(2, 2) = -1;
    try {
        MetricAtPoint m(bad);
        FAIL("expected DegenerateMetric");
    } catch (const DegenerateMetric& e) {
        CHECK(e.min_eigenvalue() == doctest::Approx(-1.0));
    }

    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + trial % 4;
        const int k = trial % (n + 1);
        const Matrix r = random_matrix(n, n, rng);
        Matrix gm = r * r.transpose() + Matrix::Identity(n, n);
        gm = 0.5 * (gm + gm.transpose()).eval();
        const MetricAtPoint g(gm);
        const auto a = random_form(n, k, rng);
        const double sign = ((k * (n - k)) % 2) ? -1.0 : 1.0;
        CHECK(distance(hodge_star(hodge_star(a, g), g), sign * a) < 1e-12 * 50);
        // a ^ *a = |a|^2 vol_g
        const auto top = wedge(a, hodge_star(a, g));
        const double norm = form_norm(a, g);
        CHECK(top.coefficient(index_set(std::vector<int>([n] {
                  std::vector<int> v(static_cast<std::size_t>(n));
                  std::iota(v.begin(), v.end(), 0);
                  return v;
              }()))) == doctest::Approx(norm * norm * g.sqrt_det()).epsilon(1e-10));
    }
}

TEST_CASE("evaluate_on_frame") {
    const auto omega = DifferentialForm::volume(3);
    CHECK(evaluate_on_frame(omega, TangentFrame::coordinate(3, {0, 1, 2})) == 1.0);
    const auto vol = catalog::holomorphic_volume(3);
    const auto xs = TangentFrame::coordinate(6, {0, 2, 4});
    CHECK(evaluate_on_frame(vol.re, xs) == 1.0);
    CHECK(evaluate_on_frame(vol.im, xs) == 0.0);
    CHECK_THROWS_AS(evaluate_on_frame(omega, TangentFrame::coordinate(3, {0, 1})), std::invalid_argument);
    CHECK_THROWS_AS(TangentFrame({Vector::Ones(2), Vector::Ones(2)}, true), std::invalid_argument);
}

TEST_CASE("alternation is exact") {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 6;
        const int k = 2 + trial % 3;
        const auto a = random_form(n, k, rng);
        std::vector<Vector> vs;
        for (int r = 0; r < k; ++r) {
            Vector v(n);
            for (int i = 0; i < n; ++i) v[i] = g(rng);
            vs.push_back(v);
        }
        const double base = evaluate_on_frame(a, TangentFrame(vs));
        CHECK(base == doctest::Approx(oracle_evaluate(a, vs)).epsilon(1e-10));
        std::swap(vs[0], vs[static_cast<std::size_t>(k - 1)]);
        CHECK(evaluate_on_frame(a, TangentFrame(vs)) == -base);
    }
}

TEST_CASE("comass of decomposable and Kahler forms") {
    const auto g4 = MetricAtPoint::euclidean(4);
    ComassOptions opts;
    opts.samples = 500;
    CHECK(comass_estimate(DifferentialForm::basis(4, {0, 1}), g4, opts).value == doctest::Approx(1.0).epsilon(1e-6));

    // Coarse Grassmannian grid oracle for dx0^dx1 + dx2^dx3: every sampled
    // 2-plane stays below 1 and the grid maximum approaches 1.
    const auto w = DifferentialForm::basis(4, {0, 1}) + DifferentialForm::basis(4, {2, 3});
    const int m = 12;
    std::vector<Vector> sphere;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < 2 * m; ++l) {
                const double a = M_PI * (i + 0.5) / m, b = M_PI * (j + 0.5) / m, c = M_PI * l / m;
                Vector v(4);
                v << std::cos(a), std::sin(a) * std::cos(b), std::sin(a) * std::sin(b) * std::cos(c),
                    std::sin(a) * std::sin(b) * std::sin(c);
                sphere.push_back(v);
            }
    double grid_max = 0.0;
    for (std::size_t i = 0; i < sphere.size(); i += 7) {
        for (std::size_t j = i + 1; j < sphere.size(); j += 3) {
            Vector u = sphere[i];
            Vector v = sphere[j] - sphere[j].dot(u) * u;
            if (v.norm() < 1e-3) continue;
            v.normalize();
            grid_max = std::max(grid_max, std::abs(oracle_evaluate(w, {u, v})));
        }
    }
    CHECK(grid_max <= 1.0 + 1e-12);
    CHECK(grid_max > 0.98);
    CHECK(comass_estimate(w, g4, opts).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("comass of Re dz123 and metric dependence") {
    const auto vol = catalog::holomorphic_volume(3);
    ComassOptions opts;
    opts.samples = 4000;
    const auto est = comass_estimate(vol.re, MetricAtPoint::euclidean(6), opts);
    CHECK(est.value <= 1.0 + 1e-9);
    CHECK(est.value >= 1.0 - 1e-4);
    CHECK(est.sampled_max <= est.value);
    // The maximizing frame is special Lagrangian: omega and Im vanish on it.
    CHECK(std::abs(evaluate_on_frame(vol.im, est.frame)) < 1e-2);

    // Unit decomposable form in a non-Euclidean metric: dx0^dx1 scaled by its norm.
    Matrix gm = Matrix::Identity(4, 4);
    gm(0, 0) = 4.0;
    gm(1, 1) = 9.0;
    const auto a = DifferentialForm::basis(4, {0, 1}, 6.0);
    CHECK(comass_estimate(a, MetricAtPoint(gm), opts).value == doctest::Approx(1.0).epsilon(1e-6));
}
