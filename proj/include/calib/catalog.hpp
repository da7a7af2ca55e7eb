#pragma once

// Named maps and forms of the Borcea-Voisin threefold and the Joyce G2
// example, in real coordinates.
//
// Complex coordinates z_j = x_j + i y_j are stored in the order
// (x1, y1, x2, y2, x3, y3).  On R^7 the coordinates are x1..x7 -> indices 0..6.

#include "calib/forms.hpp"
#include "calib/orbifold.hpp"

namespace calib::catalog {

enum class AlphaConvention {
    /// z -> -z + 1/2 as written for the map.
    AsStated,
    /// z -> -z + (1+i)/2, the translation whose fixed set is the listed A-set.
    ListedFixedSet,
};

AffineTorusMap cy3_alpha(AlphaConvention convention = AlphaConvention::AsStated);
AffineTorusMap cy3_beta();

/// Real form of a point set {x + i y} in T^2, used to compare against the listed A and B sets.
std::vector<RatVector> cy3_listed_A();
std::vector<RatVector> cy3_listed_B();

AffineTorusMap g2_alpha();
AffineTorusMap g2_beta();
AffineTorusMap g2_gamma();

/// Maps on T^4 with coordinates (x1, y1, x2, y2).
AffineTorusMap k3_alpha_prime();
AffineTorusMap k3_gamma1();
AffineTorusMap k3_gamma2();

/// (x1,y1,x2,y2,x3,y3) -> (x1,-y2,x2,y1,x3,y3).
AffineTorusMap cy3_mu();
/// (x1,...,x7) -> (x1,-x4,x3,x2,x5,x6,x7).
AffineTorusMap g2_eta();

struct HyperkahlerTriple {
    DifferentialForm omega1;
    DifferentialForm omega2;
    DifferentialForm omega3;

    const DifferentialForm& operator[](int i) const;
};

/// omega1 = e01 + e23, omega2 = e02 - e13, omega3 = e03 + e12 on R^4 (0-based).
HyperkahlerTriple hyperkahler_triple();

/// The triple embedded in R^n on the first four coordinates.
HyperkahlerTriple hyperkahler_triple(int n);

/// dz1 ^ dz2 on C^2 or C^3 (real dimension 2n).
ComplexForm eta(int complex_dim = 2);
ComplexForm holomorphic_volume(int complex_dim = 3);
DifferentialForm kahler_form(int complex_dim);

struct CY3Package {
    DifferentialForm omega;
    DifferentialForm re_phi;
    DifferentialForm im_phi;
};

/// omega = sum dx_j ^ dy_j and phi = i * eta ^ dz3.
CY3Package cy3_package();

/// delta_i dual to x_{8-i}: delta1 = e6, delta2 = e5, delta3 = e4.
DifferentialForm g2_delta(int i);

/// The triple -omega_i on the first four coordinates of R^7, the handedness
/// for which g2_form is definite (the unnegated triple gives the split form).
HyperkahlerTriple g2_triple();

DifferentialForm g2_form(const DifferentialForm& w1, const DifferentialForm& w2, const DifferentialForm& w3);
DifferentialForm g2_phi0();
/// omega3 ^ delta1 + omega2 ^ delta2 - omega1 ^ delta3 + delta1 ^ delta2 ^ delta3 for the G2 triple.
DifferentialForm g2_phi_star();

/// Tangent axes of the fibers T_{a,b,c}.
std::vector<int> cy3_fiber_axes();  // y1, y2, y3
std::vector<int> g2_fiber_axes();   // x2, x4, x5, x7

}  // namespace calib::catalog
