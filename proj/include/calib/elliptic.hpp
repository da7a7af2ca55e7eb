#pragma once

// Weierstrass p-function of the lattice Z + tau Z and loop integrals over
// horizontal circles L_t = {x + t tau} of the torus C / (Z + tau Z).

#include <complex>
#include <vector>

namespace calib {

using Complex = std::complex<double>;

struct EllipticData {
    Complex tau{0.0, 1.0};
    /// Lattice points w with |w| <= N enter the sum directly.
    int N = 40;

    /// Throws std::invalid_argument unless Im tau > 0 and N >= 2.
    void validate() const;
};

/// Normalised Eisenstein series from their q-expansions, q = exp(2 pi i tau).
Complex eisenstein_E2(Complex tau);
Complex eisenstein_E4(Complex tau);
Complex eisenstein_E6(Complex tau);
/// Sum over nonzero lattice points of w^-4 and w^-6.
Complex lattice_G4(Complex tau);
Complex lattice_G6(Complex tau);

/// Truncated lattice sum plus the tail 3 (G4 - G4_N) z^2 + 5 (G6 - G6_N) z^4, evaluated after
/// reducing z to the fundamental parallelogram centred at 0.  Throws std::domain_error when z is
/// within 1e-8 of a lattice point.
Complex weierstrass_p(Complex z, const EllipticData& data);

struct WeierstrassValue {
    Complex value;
    /// |p_N(z) - p_2N(z)|.
    double self_convergence = 0.0;
};
WeierstrassValue weierstrass_p_checked(Complex z, const EllipticData& data);

/// Lattice data with the truncated sums precomputed, for repeated evaluation.
class WeierstrassP {
public:
    explicit WeierstrassP(const EllipticData& data);
    Complex operator()(Complex z) const;
    const EllipticData& data() const { return data_; }

private:
    EllipticData data_;
    std::vector<Complex> lattice_;
    Complex tail4_;
    Complex tail6_;
};

/// Integral of p + c over L_t by the periodic trapezoid rule with the given number of nodes.
Complex loop_integral(const WeierstrassP& p, Complex c, double t, int nodes = 512);

struct LoopConstancyReport {
    std::vector<double> t_values;
    std::vector<Complex> integrals;
    /// max |I(t_i) - I(t_j)|.
    double max_deviation = 0.0;
    /// max over t of |I_nodes(t) - I_2nodes(t)|.
    double quadrature_change = 0.0;
};

/// Throws std::invalid_argument unless every t lies in [0.05, 0.95].
LoopConstancyReport loop_integral_constancy(Complex c, const std::vector<double>& t_values, const EllipticData& data,
                                            int nodes = 512);

/// (1 + i) (max |p| on L_t sampled at `nodes` points + 1): p + c then has no zero on L_t.
Complex choose_offset(const WeierstrassP& p, double t, int nodes = 512);

}  // namespace calib
