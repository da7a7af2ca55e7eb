#include <doctest.h>

#include <set>

#include "calib/catalog.hpp"
#include "calib/orbifold.hpp"
#include "calib/orbifold_io.hpp"

using namespace calib;
namespace cat = calib::catalog;

namespace {

// All points of the 1/q grid in T^n fixed by f.
std::set<RatVector> brute_fixed(const AffineTorusMap& f, int q) {
    const int n = f.dim();
    std::set<RatVector> out;
    std::vector<int> k(static_cast<std::size_t>(n), 0);
    for (;;) {
        RatVector x;
        for (int v : k) x.emplace_back(v, q);
        if (f.apply(x) == x) out.insert(x);
        int pos = 0;
        while (pos < n && ++k[static_cast<std::size_t>(pos)] == q) k[static_cast<std::size_t>(pos++)] = 0;
        if (pos == n) break;
    }
    return out;
}

std::set<RatVector> grid_points_on(const std::vector<AffineSubtorus>& comps, int n, int q) {
    std::set<RatVector> out;
    std::vector<int> k(static_cast<std::size_t>(n), 0);
    for (;;) {
        RatVector x;
        for (int v : k) x.emplace_back(v, q);
        for (const auto& c : comps) {
            if (c.contains(x)) {
                out.insert(x);
                break;
            }
        }
        int pos = 0;
        while (pos < n && ++k[static_cast<std::size_t>(pos)] == q) k[static_cast<std::size_t>(pos++)] = 0;
        if (pos == n) break;
    }
    return out;
}

// Component count for a diagonal +-1 map: the -1 coordinates each solve
// 2x = b (mod 1), counted on the 1/4 grid; +1 coordinates need b = 0.
long long diagonal_count_oracle(const AffineTorusMap& f) {
    long long count = 1;
    for (int i = 0; i < f.dim(); ++i) {
        const Rational b = f.translation()[static_cast<std::size_t>(i)];
        if (f.linear()(i, i) == 1) {
            if (b.numerator() != 0) return 0;
            continue;
        }
        int solutions = 0;
        for (int v = 0; v < 4; ++v) solutions += frac_part(Rational(2 * v, 4) - b).numerator() == 0;
        count *= solutions;
    }
    return count;
}

}  // namespace

TEST_CASE("integer linear algebra") {
    IntMatrix a(3, 3);
    a << 2, 4, 4, -6, 6, 12, 10, -4, -16;
    const SmithForm s = smith_normal_form(a);
    CHECK(s.U * a * s.V == s.S);
    CHECK(s.S(0, 0) == 2);
    CHECK(s.S(1, 1) == 6);
    CHECK(s.S(2, 2) == 12);
    CHECK(std::llabs(determinant(s.U)) == 1);
    CHECK(std::llabs(determinant(s.V)) == 1);
    CHECK(determinant(a) == -144);

    IntMatrix u(2, 2);
    u << 2, 1, 1, 1;
    CHECK(unimodular_inverse(u) * u == IntMatrix::Identity(2, 2));
    CHECK_THROWS_AS(unimodular_inverse(a), std::invalid_argument);

    IntMatrix k(1, 3);
    k << 1, 2, 3;
    const IntMatrix ker = integer_kernel(k);
    CHECK(ker.cols() == 2);
    CHECK((k * ker).isZero());
}

TEST_CASE("compose and group closure") {
    const auto alpha = cat::cy3_alpha();
    CHECK(compose(AffineTorusMap::identity(6), alpha) == alpha);
    CHECK(compose(alpha, alpha).is_identity());

    // On the z1 line: beta o alpha is translation by -1/2 = 1/2 in x1.
    const AffineTorusMap a2(IntMatrix(-IntMatrix::Identity(2, 2)), {Rational(1, 2), 0});
    const AffineTorusMap b2(IntMatrix(-IntMatrix::Identity(2, 2)));
    CHECK(compose(b2, a2) == AffineTorusMap::translation({Rational(-1, 2), 0}));

    const auto g = group_closure({alpha, cat::cy3_beta()});
    CHECK(g.order() == 4);
    CHECK(g.is_abelian());
    CHECK(g.generators_are_involutions());
    CHECK(group_closure({}).order() == 1);
    const auto g7 = group_closure({cat::g2_alpha(), cat::g2_beta(), cat::g2_gamma()});
    CHECK(g7.order() == 8);
    CHECK(g7.is_abelian());
    CHECK(g7.generators_are_involutions());

    IntMatrix shear(2, 2);
    shear << 1, 1, 0, 1;
    CHECK_THROWS_AS(group_closure({AffineTorusMap(shear)}, 64), NonFiniteGroup);
    CHECK_THROWS_AS(AffineTorusMap(IntMatrix(2 * IntMatrix::Identity(2, 2))), std::invalid_argument);
}

TEST_CASE("fixed loci of the threefold involutions") {
    CHECK(fixed_locus(AffineTorusMap::identity(3)).size() == 1);
    CHECK(fixed_locus(AffineTorusMap::identity(3)).front().dim() == 3);

    for (auto convention : {cat::AlphaConvention::AsStated, cat::AlphaConvention::ListedFixedSet}) {
        const auto alpha = cat::cy3_alpha(convention);
        const auto loci = fixed_locus(alpha);
        CHECK(loci.size() == 16);
        for (const auto& c : loci) {
            CHECK(c.dim() == 2);
            // The free directions are x3, y3.
            CHECK(c.directions(4, 0) + c.directions(5, 0) + c.directions(4, 1) + c.directions(5, 1) == 2);
            CHECK(alpha.apply(c.base_point) == c.base_point);
        }
        CHECK(brute_fixed(alpha, 4) == grid_points_on(loci, 6, 4));
    }
    const auto beta = cat::cy3_beta();
    const auto loci_b = fixed_locus(beta);
    CHECK(loci_b.size() == 16);
    CHECK(brute_fixed(beta, 4) == grid_points_on(loci_b, 6, 4));

    // The listed A-set appears in the (z1, z2) base points only under the
    // second convention; B matches beta's (z1, z3) base points.
    const auto listed = cat::cy3_listed_A();
    const auto in_A = [&](const Rational& x, const Rational& y) {
        return std::find(listed.begin(), listed.end(), RatVector{x, y}) != listed.end();
    };
    for (const auto& c : fixed_locus(cat::cy3_alpha(cat::AlphaConvention::ListedFixedSet))) {
        CHECK(in_A(c.base_point[0], c.base_point[1]));
        CHECK(in_A(c.base_point[2], c.base_point[3]));
    }
    int stated_in_A = 0;
    for (const auto& c : fixed_locus(cat::cy3_alpha())) stated_in_A += in_A(c.base_point[0], c.base_point[1]);
    CHECK(stated_in_A == 0);

    CHECK(loci_pairwise_disjoint({cat::cy3_alpha(), beta}).disjoint);
    CHECK(is_free(compose(cat::cy3_alpha(), beta)));
    CHECK_FALSE(is_free(AffineTorusMap::identity(6)));
    CHECK(is_free(AffineTorusMap::translation({Rational(1, 2), 0, 0})));

    const auto same = loci_pairwise_disjoint({beta, beta});
    CHECK_FALSE(same.disjoint);
    REQUIRE_FALSE(same.witnesses.empty());
    CHECK(beta.apply(same.witnesses.front().point) == same.witnesses.front().point);
}

TEST_CASE("fixed loci of the G2 involutions") {
    const std::vector<AffineTorusMap> gens{cat::g2_alpha(), cat::g2_beta(), cat::g2_gamma()};
    for (const auto& g : gens) {
        const auto loci = fixed_locus(g);
        CHECK(static_cast<long long>(loci.size()) == diagonal_count_oracle(g));
        CHECK(loci.size() == 16);
        for (const auto& c : loci) {
            CHECK(c.dim() == 3);
            CHECK(g.apply(c.base_point) == c.base_point);
        }
        CHECK(brute_fixed(g, 4) == grid_points_on(loci, 7, 4));
    }
    CHECK(loci_pairwise_disjoint(gens).disjoint);
    const auto group = group_closure(gens);
    for (const auto& h : group.elements) {
        if (h.is_identity() || std::find(gens.begin(), gens.end(), h) != gens.end()) continue;
        CHECK(is_free(h));
    }
}

TEST_CASE("closed-form component count 2^m") {
    for (int m = 0; m <= 5; ++m) {
        IntMatrix d = IntMatrix::Identity(5, 5);
        for (int i = 0; i < m; ++i) d(i, i) = -1;
        const AffineTorusMap f(d);
        CHECK(fixed_locus(f).size() == (std::size_t{1} << m));
    }
}

TEST_CASE("general congruences and intersections") {
    // Swap map (x, y) -> (y, x): fixed set is the diagonal, one component.
    IntMatrix swap(2, 2);
    swap << 0, 1, 1, 0;
    const auto diag = fixed_locus(AffineTorusMap(swap));
    REQUIRE(diag.size() == 1);
    CHECK(diag.front().dim() == 1);
    // (x, y) -> (-y, x): rotation by 90 degrees, fixed points 2x = 0 with y = -x... two of them.
    IntMatrix rot(2, 2);
    rot << 0, -1, 1, 0;
    const auto rot_fixed = fixed_locus(AffineTorusMap(rot));
    CHECK(rot_fixed.size() == 2);
    CHECK(brute_fixed(AffineTorusMap(rot), 4) == grid_points_on(rot_fixed, 2, 4));

    const AffineSubtorus line_x{{0, Rational(1, 3)}, IntMatrix::Identity(2, 1) * 1};
    IntMatrix ydir(2, 1);
    ydir << 0, 1;
    const AffineSubtorus line_y{{Rational(1, 4), 0}, ydir};
    const auto meet = intersect(line_x, line_y);
    REQUIRE(meet.size() == 1);
    CHECK(meet.front().base_point == RatVector{Rational(1, 4), Rational(1, 3)});
}

TEST_CASE("orbits") {
    const auto g = group_closure({cat::cy3_alpha(), cat::cy3_beta()});
    Eigen::VectorXd p(6);
    p << 0.11, 0.23, 0.37, 0.41, 0.53, 0.67;
    CHECK(orbit(p, g).size() == 4);
    CHECK(g.order() % orbit(p, g).size() == 0);

    const auto t = group_closure({AffineTorusMap::translation({Rational(1, 2), 0})});
    CHECK(orbit(RatVector{0, 0}, t).size() == 2);

    // A point of T^4 with gamma1(p) = alpha'(p) is fixed by gamma1 on the K3
    // quotient; its orbit there has two points.
    const auto alpha = cat::k3_alpha_prime();
    const auto fixed = fixed_locus(compose(inverse(alpha), cat::k3_gamma1()));
    REQUIRE_FALSE(fixed.empty());
    const RatVector q = fixed.front().base_point;
    const auto big = group_closure({alpha, cat::k3_gamma1(), cat::k3_gamma2()});
    const auto small = group_closure({alpha});
    CHECK(orbit(q, big).size() == 4);
    CHECK(orbit_modulo(q, big, small).size() == 2);
}

TEST_CASE("text format round trip") {
    const std::vector<AffineTorusMap> maps{cat::cy3_alpha(), cat::cy3_beta(), cat::g2_beta(), cat::cy3_mu()};
    const std::string text = format_maps(maps);
    const auto parsed = parse_maps("# header\n" + text + "\n");
    REQUIRE(parsed.size() == maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i) {
        CHECK(parsed[i] == maps[i]);
        CHECK(parsed[i].name() == maps[i].name());
    }
    CHECK(format_maps(parsed) == text);

    const auto m = parse_map("f: -1 0 ; 0 1 | -1/2 3/4  # comment");
    CHECK(m.translation() == RatVector{Rational(1, 2), Rational(3, 4)});
    CHECK(parse_map("g: 0 1 ; 1 0").translation() == RatVector{0, 0});

    try {
        parse_maps("ok: 1\nbad: 1 0 ; 0\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_map("h: 2 0 ; 0 1"), ParseError);
    CHECK_THROWS_AS(parse_map("h: 1 0 ; 0 1 | 1/0 0"), ParseError);
    CHECK_THROWS_AS(parse_map("no colon"), ParseError);
}
