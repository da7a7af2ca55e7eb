#pragma once

// Sparse real polynomials in a fixed number of variables, the quartic torus
// and the perturbation p q - eps h.

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace calib {

class RealPolynomial {
public:
    using Exponent = std::vector<int>;

    explicit RealPolynomial(int variables);
    static RealPolynomial constant(int variables, double c);
    /// x_i (0-based).
    static RealPolynomial variable(int variables, int i);

    int variables() const { return n_; }
    const std::map<Exponent, double>& terms() const { return terms_; }
    /// Adds c * x^e; terms that cancel to zero are removed.
    void add_term(const Exponent& e, double c);
    double coefficient(const Exponent& e) const;
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return terms_.empty(); }

    double operator()(const Eigen::VectorXd& x) const;
    double operator()(std::initializer_list<double> x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    /// Variables this polynomial actually depends on.
    std::vector<int> support() const;
    /// The same polynomial in a larger variable set, variable i mapped to slot map[i].
    RealPolynomial embedded(int variables, const std::vector<int>& map) const;

    RealPolynomial& operator+=(const RealPolynomial& o);
    RealPolynomial& operator-=(const RealPolynomial& o);
    RealPolynomial& operator*=(double s);
    friend RealPolynomial operator+(RealPolynomial a, const RealPolynomial& b) { return a += b; }
    friend RealPolynomial operator-(RealPolynomial a, const RealPolynomial& b) { return a -= b; }
    friend RealPolynomial operator*(RealPolynomial a, double s) { return a *= s; }
    friend RealPolynomial operator*(double s, RealPolynomial a) { return a *= s; }
    friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b);
    RealPolynomial pow(int k) const;

    std::string to_string() const;

private:
    void check_same(const RealPolynomial& o) const;

    int n_;
    std::map<Exponent, double> terms_;
};

/// x0^degree p(x1/x0, ..., xn/x0) in n + 1 variables with x0 placed last.
/// Throws std::invalid_argument when degree < p.degree().
RealPolynomial homogenize(const RealPolynomial& p, int degree);

/// Text format: a "vars N" line, then one "coefficient e_1 ... e_N" line per monomial.
/// Coefficients may be decimals or fractions a/b; '#' starts a comment.
RealPolynomial parse_polynomial(const std::string& text);
std::string format_polynomial(const RealPolynomial& p);

/// (3/4 + x^2 + y^2 + z^2)^2 - 4 (x^2 + y^2): the torus with radii 1 and 1/2.
double quartic_torus_eval(double x, double y, double z);
RealPolynomial quartic_torus();
/// ((r - 1)^2 + z^2 - 1/4) ((r + 1)^2 + z^2 - 1/4) with r = sqrt(x^2 + y^2).
double quartic_torus_factored(double x, double y, double z);

/// p q - eps h.  Throws std::invalid_argument on mismatched variable counts or eps < 0.
RealPolynomial viro_perturb(const RealPolynomial& p, const RealPolynomial& q, const RealPolynomial& h, double eps);

/// x_1^2 + ... + x_n^2 - 1.
RealPolynomial unit_sphere(int variables);
/// ((x1 - 1/3)^2 + (x2 - 1/3)^2 - 1/16) ((x1 + 1/3)^2 + (x2 + 1/3)^2 - 1/16) in the given variable count.
RealPolynomial four_circle_h(int variables);

}  // namespace calib
