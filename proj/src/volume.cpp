#include "calib/volume.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace calib {

namespace {

constexpr double pi = boost::math::constants::pi<double>();

void check_time(double K, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("comparison time must be positive");
    if (!(t < conjugate_radius(K)))
        throw std::invalid_argument("comparison time " + std::to_string(t) + " reaches pi/sqrt(K) = " +
                                    std::to_string(conjugate_radius(K)));
}

}  // namespace

double conjugate_radius(double K) { return K > 0.0 ? pi / std::sqrt(K) : std::numeric_limits<double>::infinity(); }

double sn_K(double K, double r) {
    if (K > 0.0) return std::sin(std::sqrt(K) * r) / std::sqrt(K);
    if (K < 0.0) return std::sinh(std::sqrt(-K) * r) / std::sqrt(-K);
    return r;
}

double comparison_F(double K, double t, double theta) {
    check_time(K, t);
    if (!(theta >= 0.0 && theta <= t)) throw std::invalid_argument("comparison_F needs 0 <= theta <= t");
    if (K == 0.0) return theta / t;
    return sn_K(K, theta) / sn_K(K, t);
}

double comparison_alpha(double K, int k, double t) {
    if (k < 1) throw std::invalid_argument("comparison_alpha needs k >= 1");
    check_time(K, t);
    if (K == 0.0) return t / k;
    const double denom = sn_K(K, t);
    const auto f = [&](double theta) { return std::pow(sn_K(K, theta) / denom, k - 1); };
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, t, 15, 1e-14, &error);
}

double unit_sphere_area(int k) {
    if (k < 1) throw std::invalid_argument("unit_sphere_area needs k >= 1");
    return 2.0 * std::pow(pi, 0.5 * k) / std::tgamma(0.5 * k);
}

double space_form_ball_volume(double K, int k, double r) {
    if (k < 1) throw std::invalid_argument("space_form_ball_volume needs k >= 1");
    if (!(r >= 0.0)) throw std::invalid_argument("space_form_ball_volume needs r >= 0");
    if (r > conjugate_radius(K)) throw std::invalid_argument("radius exceeds pi/sqrt(K)");
    if (K == 0.0) return unit_sphere_area(k) * std::pow(r, k) / k;
    const auto f = [&](double rho) { return std::pow(sn_K(K, rho), k - 1); };
    double error = 0.0;
    return unit_sphere_area(k) *
           boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, r, 15, 1e-14, &error);
}

double diameter_bound(double v, double epsilon, double r) {
    if (!(v > 0.0 && epsilon > 0.0 && r > 0.0)) throw std::invalid_argument("diameter_bound needs positive inputs");
    return 4.0 * r * (v / epsilon);
}

}  // namespace calib
