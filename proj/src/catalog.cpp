#include "calib/catalog.hpp"

namespace calib::catalog {

namespace {

IntMatrix diag(std::initializer_list<long long> entries) {
    const auto n = static_cast<Eigen::Index>(entries.size());
    IntMatrix d = IntMatrix::Zero(n, n);
    Eigen::Index i = 0;
    for (long long e : entries) d(i, i) = e, ++i;
    return d;
}

Rational half() { return Rational(1, 2); }

DifferentialForm e(int n, std::initializer_list<int> idx, double c = 1.0) {
    return DifferentialForm::basis(n, idx, c);
}

}  // namespace

AffineTorusMap cy3_alpha(AlphaConvention convention) {
    const Rational h = half();
    RatVector b = convention == AlphaConvention::AsStated ? RatVector{h, 0, h, 0, 0, 0} : RatVector{h, h, h, h, 0, 0};
    return AffineTorusMap(diag({-1, -1, -1, -1, 1, 1}), std::move(b), "alpha");
}

AffineTorusMap cy3_beta() { return AffineTorusMap(diag({-1, -1, 1, 1, -1, -1}), "beta"); }

std::vector<RatVector> cy3_listed_A() {
    // (2 + 2i +- 1 +- i) / 4
    std::vector<RatVector> out;
    for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) out.push_back({Rational(2 + sx, 4), Rational(2 + sy, 4)});
    }
    return out;
}

std::vector<RatVector> cy3_listed_B() {
    const Rational h = half();
    return {{0, 0}, {h, 0}, {0, h}, {h, h}};
}

AffineTorusMap g2_alpha() { return AffineTorusMap(diag({-1, -1, -1, -1, 1, 1, 1}), "alpha"); }

AffineTorusMap g2_beta() {
    const Rational h = half();
    return AffineTorusMap(diag({-1, -1, 1, 1, -1, -1, 1}), {h, h, 0, 0, 0, 0, 0}, "beta");
}

AffineTorusMap g2_gamma() {
    const Rational h = half();
    return AffineTorusMap(diag({-1, 1, -1, 1, -1, 1, -1}), {0, 0, h, 0, 0, 0, 0}, "gamma");
}

AffineTorusMap k3_alpha_prime() {
    const Rational h = half();
    return AffineTorusMap(diag({-1, -1, -1, -1}), {-h, 0, -h, 0}, "alpha'");
}

AffineTorusMap k3_gamma1() { return AffineTorusMap::translation({0, half(), 0, 0}, "gamma1"); }

AffineTorusMap k3_gamma2() { return AffineTorusMap::translation({0, 0, 0, half()}, "gamma2"); }

AffineTorusMap cy3_mu() {
    return AffineTorusMap::signed_permutation({0, 3, 2, 1, 4, 5}, {1, -1, 1, 1, 1, 1}, {}, "mu");
}

AffineTorusMap g2_eta() {
    return AffineTorusMap::signed_permutation({0, 3, 2, 1, 4, 5, 6}, {1, -1, 1, 1, 1, 1, 1}, {}, "eta");
}

const DifferentialForm& HyperkahlerTriple::operator[](int i) const {
    switch (i) {
    case 1:
        return omega1;
    case 2:
        return omega2;
    case 3:
        return omega3;
    default:
        throw std::out_of_range("hyperkahler triple index must be 1, 2 or 3");
    }
}

HyperkahlerTriple hyperkahler_triple() { return hyperkahler_triple(4); }

HyperkahlerTriple hyperkahler_triple(int n) {
    if (n < 4) throw std::invalid_argument("hyperkahler triple needs dimension >= 4");
    return {e(n, {0, 1}) + e(n, {2, 3}), e(n, {0, 2}) - e(n, {1, 3}), e(n, {0, 3}) + e(n, {1, 2})};
}

ComplexForm eta(int complex_dim) { return wedge(dz(complex_dim, 0), dz(complex_dim, 1)); }

ComplexForm holomorphic_volume(int complex_dim) {
    ComplexForm out = dz(complex_dim, 0);
    for (int j = 1; j < complex_dim; ++j) out = wedge(out, dz(complex_dim, j));
    return out;
}

DifferentialForm kahler_form(int complex_dim) {
    DifferentialForm out(2 * complex_dim, 2);
    for (int j = 0; j < complex_dim; ++j) out += e(2 * complex_dim, {2 * j, 2 * j + 1});
    return out;
}

CY3Package cy3_package() {
    const ComplexForm phi = wedge(eta(3), dz(3, 2)).times_i();
    return {kahler_form(3), phi.re, phi.im};
}

DifferentialForm g2_delta(int i) {
    if (i < 1 || i > 3) throw std::out_of_range("delta index must be 1, 2 or 3");
    return e(7, {7 - i});
}

DifferentialForm g2_form(const DifferentialForm& w1, const DifferentialForm& w2, const DifferentialForm& w3) {
    const DifferentialForm d1 = g2_delta(1);
    const DifferentialForm d2 = g2_delta(2);
    const DifferentialForm d3 = g2_delta(3);
    return wedge(w1, d1) + wedge(w2, d2) + wedge(w3, d3) + wedge(wedge(d1, d2), d3);
}

HyperkahlerTriple g2_triple() {
    const HyperkahlerTriple t = hyperkahler_triple(7);
    return {-t.omega1, -t.omega2, -t.omega3};
}

DifferentialForm g2_phi0() {
    const HyperkahlerTriple t = g2_triple();
    return g2_form(t.omega1, t.omega2, t.omega3);
}

DifferentialForm g2_phi_star() {
    const HyperkahlerTriple t = g2_triple();
    return g2_form(t.omega3, t.omega2, -t.omega1);
}

std::vector<int> cy3_fiber_axes() { return {1, 3, 5}; }

std::vector<int> g2_fiber_axes() { return {1, 3, 4, 6}; }

}  // namespace calib::catalog
