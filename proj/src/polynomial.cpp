#include "calib/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "calib/orbifold_io.hpp"
#include "calib/parse_error.hpp"

namespace calib {

RealPolynomial::RealPolynomial(int variables) : n_(variables) {
    if (variables < 1) throw std::invalid_argument("a polynomial needs at least one variable");
}

RealPolynomial RealPolynomial::constant(int variables, double c) {
    RealPolynomial p(variables);
    p.add_term(Exponent(static_cast<std::size_t>(variables), 0), c);
    return p;
}

RealPolynomial RealPolynomial::variable(int variables, int i) {
    if (i < 0 || i >= variables) throw std::out_of_range("variable index out of range");
    RealPolynomial p(variables);
    Exponent e(static_cast<std::size_t>(variables), 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.add_term(e, 1.0);
    return p;
}

void RealPolynomial::add_term(const Exponent& e, double c) {
    if (static_cast<int>(e.size()) != n_) throw std::invalid_argument("exponent length does not match variables");
    for (int k : e)
        if (k < 0) throw std::invalid_argument("negative exponent");
    if (c == 0.0) return;
    const auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
}

double RealPolynomial::coefficient(const Exponent& e) const {
    const auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
}

int RealPolynomial::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

namespace {

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace

double RealPolynomial::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw std::invalid_argument("point has the wrong number of coordinates");
    double total = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (int i = 0; i < n_; ++i) m *= ipow(x[i], e[static_cast<std::size_t>(i)]);
        total += m;
    }
    return total;
}

double RealPolynomial::operator()(std::initializer_list<double> x) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
    Eigen::Index i = 0;
    for (double xi : x) v[i++] = xi;
    return (*this)(v);
}

Eigen::VectorXd RealPolynomial::gradient(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw std::invalid_argument("point has the wrong number of coordinates");
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n_);
    for (const auto& [e, c] : terms_) {
        for (int j = 0; j < n_; ++j) {
            const int ej = e[static_cast<std::size_t>(j)];
            if (ej == 0) continue;
            double m = c * ej;
            for (int i = 0; i < n_; ++i) m *= ipow(x[i], e[static_cast<std::size_t>(i)] - (i == j ? 1 : 0));
            g[j] += m;
        }
    }
    return g;
}

std::vector<int> RealPolynomial::support() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
        for (const auto& [e, c] : terms_)
            if (e[static_cast<std::size_t>(i)] > 0) {
                out.push_back(i);
                break;
            }
    return out;
}

RealPolynomial RealPolynomial::embedded(int variables, const std::vector<int>& map) const {
    if (static_cast<int>(map.size()) != n_) throw std::invalid_argument("embedding map needs one slot per variable");
    RealPolynomial out(variables);
    for (const auto& [e, c] : terms_) {
        Exponent f(static_cast<std::size_t>(variables), 0);
        for (int i = 0; i < n_; ++i) {
            const int slot = map[static_cast<std::size_t>(i)];
            if (slot < 0 || slot >= variables) throw std::out_of_range("embedding slot out of range");
            f[static_cast<std::size_t>(slot)] += e[static_cast<std::size_t>(i)];
        }
        out.add_term(f, c);
    }
    return out;
}

void RealPolynomial::check_same(const RealPolynomial& o) const {
    if (o.n_ != n_) throw std::invalid_argument("polynomials have different variable counts");
}

RealPolynomial& RealPolynomial::operator+=(const RealPolynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

RealPolynomial& RealPolynomial::operator-=(const RealPolynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

RealPolynomial& RealPolynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
    a.check_same(b);
    RealPolynomial out(a.n_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            RealPolynomial::Exponent e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

RealPolynomial RealPolynomial::pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative power");
    RealPolynomial out = constant(n_, 1.0);
    for (int i = 0; i < k; ++i) out = out * *this;
    return out;
}

std::string RealPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    out.precision(12);
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        out << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
        first = false;
        const double a = std::abs(c);
        const bool is_const = std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
        if (a != 1.0 || is_const) out << a;
        for (int i = 0; i < n_; ++i) {
            const int k = e[static_cast<std::size_t>(i)];
            if (k == 0) continue;
            out << "x" << i + 1;
            if (k > 1) out << "^" << k;
        }
    }
    return out.str();
}

RealPolynomial homogenize(const RealPolynomial& p, int degree) {
    if (degree < p.degree()) throw std::invalid_argument("homogenize: degree below the polynomial degree");
    RealPolynomial out(p.variables() + 1);
    for (const auto& [e, c] : p.terms()) {
        RealPolynomial::Exponent f = e;
        f.push_back(degree - std::accumulate(e.begin(), e.end(), 0));
        out.add_term(f, c);
    }
    return out;
}

RealPolynomial parse_polynomial(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int n = -1;
    std::optional<RealPolynomial> p;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;
        if (first == "vars") {
            if (p) throw ParseError(line_no, "duplicate 'vars' line");
            if (!(ss >> n) || n < 1) throw ParseError(line_no, "expected 'vars N' with N >= 1");
            p.emplace(n);
        } else {
            if (!p) throw ParseError(line_no, "missing 'vars N' line");
            double c = 0.0;
            try {
                const Rational q = parse_rational(first);
                c = double(q.numerator()) / double(q.denominator());
            } catch (const std::exception&) {
                std::size_t used = 0;
                try {
                    c = std::stod(first, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != first.size()) throw ParseError(line_no, "bad coefficient '" + first + "'");
            }
            RealPolynomial::Exponent e(static_cast<std::size_t>(n));
            for (auto& k : e)
                if (!(ss >> k) || k < 0) throw ParseError(line_no, "expected " + std::to_string(n) + " exponents");
            std::string extra;
            if (ss >> extra) throw ParseError(line_no, "trailing token '" + extra + "'");
            p->add_term(e, c);
        }
    }
    if (!p) throw ParseError(line_no, "missing 'vars N' line");
    return *p;
}

std::string format_polynomial(const RealPolynomial& p) {
    std::ostringstream out;
    out.precision(17);
    out << "vars " << p.variables() << '\n';
    for (const auto& [e, c] : p.terms()) {
        out << c;
        for (int k : e) out << ' ' << k;
        out << '\n';
    }
    return out.str();
}

double quartic_torus_eval(double x, double y, double z) {
    const double s = 0.75 + x * x + y * y + z * z;
    return s * s - 4.0 * (x * x + y * y);
}

RealPolynomial quartic_torus() {
    const auto x = RealPolynomial::variable(3, 0), y = RealPolynomial::variable(3, 1), z = RealPolynomial::variable(3, 2);
    const RealPolynomial s = RealPolynomial::constant(3, 0.75) + x * x + y * y + z * z;
    return s * s - 4.0 * (x * x + y * y);
}

double quartic_torus_factored(double x, double y, double z) {
    const double r = std::hypot(x, y);
    return ((r - 1) * (r - 1) + z * z - 0.25) * ((r + 1) * (r + 1) + z * z - 0.25);
}

RealPolynomial viro_perturb(const RealPolynomial& p, const RealPolynomial& q, const RealPolynomial& h, double eps) {
    if (p.variables() != q.variables() || p.variables() != h.variables())
        throw std::invalid_argument("viro_perturb: variable counts differ");
    if (!(eps >= 0.0)) throw std::invalid_argument("viro_perturb: eps must be nonnegative");
    return p * q - eps * h;
}

RealPolynomial unit_sphere(int variables) {
    RealPolynomial p = RealPolynomial::constant(variables, -1.0);
    for (int i = 0; i < variables; ++i) {
        const auto x = RealPolynomial::variable(variables, i);
        p += x * x;
    }
    return p;
}

RealPolynomial four_circle_h(int variables) {
    if (variables < 2) throw std::invalid_argument("four_circle_h needs at least two variables");
    const auto x1 = RealPolynomial::variable(variables, 0), x2 = RealPolynomial::variable(variables, 1);
    const auto c = [&](double s) { return RealPolynomial::constant(variables, s); };
    const RealPolynomial a = (x1 - c(1.0 / 3)).pow(2) + (x2 - c(1.0 / 3)).pow(2) - c(1.0 / 16);
    const RealPolynomial b = (x1 + c(1.0 / 3)).pow(2) + (x2 + c(1.0 / 3)).pow(2) - c(1.0 / 16);
    return a * b;
}

}  // namespace calib
