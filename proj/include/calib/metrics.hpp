#pragma once

// Eguchi-Hanson potentials on C^2 \ {0}, gluing to the flat potential, and
// conformal normalization of the holomorphic 2-form.
//
// With s = sqrt(u^2 + t^2) the potential is
//     f_t(u) = s + t log u - t log(s + t),
// whose derivative is s/u and whose complex Hessian has determinant 1.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "calib/forms.hpp"

namespace calib {

using Hermitian2 = Eigen::Matrix2cd;

double eh_potential(double u, double t);
/// The displayed formula with t^2 in front of both logarithms.
double eh_potential_as_printed(double u, double t);
double eh_potential_du(double u, double t);
double eh_potential_du2(double u, double t);

/// g_{i j-bar} = f' delta_ij + f'' conj(z_i) z_j.
Hermitian2 eh_kahler_matrix(const Eigen::Vector2cd& z, double t);

/// Smooth step: 1 on [0, inner], 0 on [outer, inf), built from exp(-1/x).
double cutoff(double u, double inner, double outer);

struct GluedKahlerData {
    double t = 0.05;
    double r_inner = 0.25;
    double r_outer = 0.5;

    GluedKahlerData() = default;
    GluedKahlerData(double t, double r_inner, double r_outer);
};

/// chi f_t + (1 - chi) u.  t = 0 gives u everywhere.
double glued_potential(double u, const GluedKahlerData& data);

/// Real chart coordinates (x1, y1, x2, y2) <-> (z1, z2).
Eigen::Vector2cd to_complex(const Vector& x);

/// Levi matrix d_i dbar_j Phi(|x|^2) from central second differences with step h.
Hermitian2 numeric_levi_matrix(const std::function<double(double)>& potential, const Vector& x, double h);
double default_hessian_step(double u);

/// Riemannian metric Re h and Kahler form -Im h on R^4 for a Hermitian matrix h.
MetricAtPoint real_metric(const Hermitian2& h);
DifferentialForm kahler_form_of(const Hermitian2& h);

/// The glued Kahler metric on the chart at x (numeric Levi matrix).
Hermitian2 glued_levi_matrix(const Vector& x, const GluedKahlerData& data);

struct ScanGrid {
    int u_samples = 64;
    int direction_samples = 24;
    /// Step scale: h = step_scale * max(1, sqrt(u)).
    double step_scale = 1e-5;
    double u_min = 0.0;  // 0 selects r_inner / 2
    double u_max = 0.0;  // 0 selects 2 r_outer
};

struct ScanPoint {
    double u = 0.0;
    double min_eigenvalue = 0.0;
};

struct PositivityReport {
    double min_eigenvalue = 0.0;
    Vector worst_point;
    bool pass = false;
    std::vector<ScanPoint> profile;  // minimum over directions for each u
};

PositivityReport positivity_scan(const GluedKahlerData& data, const ScanGrid& grid = {});

struct ThresholdReport {
    double t_star = 0.0;  // largest t found passing
    double t_fail = 0.0;  // smallest t found failing
    int iterations = 0;
};

/// Bisection in log t on [t_lo, t_hi]; requires pass at t_lo and failure at t_hi.
ThresholdReport positivity_threshold(double r_inner, double r_outer, double t_lo, double t_hi,
                                     const ScanGrid& grid = {}, int iterations = 30);

class DegenerateForm : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// c with |eta|_{c g} = sqrt(2), i.e. |eta|_g / sqrt(2).  Throws DegenerateForm when |eta|_g = 0.
double conformal_factor(const MetricAtPoint& g, const DifferentialForm& eta);

struct NormalizationReport {
    std::vector<double> factors;
    bool degenerate = false;
    std::size_t degenerate_index = 0;
};

NormalizationReport normalize_to_sqrt2(const std::function<MetricAtPoint(const Point&)>& metric,
                                       const DifferentialForm& eta, const std::vector<Point>& samples);

/// max |omega_i ^ omega_j - 2 delta_ij dx0^dx1^dx2^dx3| over coefficients.
double hyperkahler_residual(const DifferentialForm& w1, const DifferentialForm& w2, const DifferentialForm& w3);

}  // namespace calib
