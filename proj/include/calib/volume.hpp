#pragma once

// Comparison functions and constant-curvature ball volumes for the
// monotonicity bounds vol(L cap B(p, r)) >= vol(B^K(r)).

namespace calib {

/// pi / sqrt(K) for K > 0, +infinity otherwise.
double conjugate_radius(double K);

/// Solution of F'' + K F = 0, F(0) = 0, F(t) = 1.  Needs 0 <= theta <= t and t < conjugate_radius(K).
double comparison_F(double K, double t, double theta);

/// Integral of F_t^{k-1} over [0, t] (adaptive Gauss-Kronrod).
double comparison_alpha(double K, int k, double t);

/// sin(sqrt(K) r) / sqrt(K), r, or sinh(sqrt(-K) r) / sqrt(-K).
double sn_K(double K, double r);

/// Area of the unit sphere S^{k-1} in R^k.
double unit_sphere_area(int k);

/// Volume of a geodesic ball of radius r in the k-dimensional space form of curvature K.
/// Requires r <= conjugate_radius(K).
double space_form_ball_volume(double K, int k, double r);

/// 4 r v / epsilon.
double diameter_bound(double v, double epsilon, double r);

}  // namespace calib
