#include "calib/orbifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace calib {

namespace {

void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

bool lex_less(const RatVector& a, const RatVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Canonical representative: HNF rows for the directions, base point with
// pivot coordinates slid to zero along the directions.
AffineSubtorus canonical(RatVector base, const IntMatrix& directions) {
    const int n = static_cast<int>(base.size());
    const int d = static_cast<int>(directions.cols());
    AffineSubtorus out;
    if (d == 0) {
        out.base_point = reduce_mod1(std::move(base));
        out.directions = IntMatrix(n, 0);
        return out;
    }
    const HermiteForm hnf = hermite_normal_form(directions.transpose());
    out.directions = hnf.H.topRows(d).transpose();

    std::vector<RatVector> rows;
    for (int k = 0; k < d; ++k) {
        RatVector row(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = Rational(out.directions(i, k));
        rows.push_back(std::move(row));
    }
    const auto pivots = rref(rows);
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        const Rational shift = base[static_cast<std::size_t>(pivots[k])];
        if (shift.numerator() == 0) continue;
        for (int i = 0; i < n; ++i) base[static_cast<std::size_t>(i)] -= shift * rows[k][static_cast<std::size_t>(i)];
    }
    out.base_point = reduce_mod1(std::move(base));
    return out;
}

}  // namespace

// ------------------------------------------------------------ AffineTorusMap

AffineTorusMap::AffineTorusMap(IntMatrix linear, RatVector translation, std::string name)
    : linear_(std::move(linear)), translation_(std::move(translation)), name_(std::move(name)) {
    if (linear_.rows() != linear_.cols()) throw std::invalid_argument("affine map: linear part not square");
    if (translation_.empty()) translation_.assign(static_cast<std::size_t>(linear_.rows()), Rational(0));
    if (static_cast<Eigen::Index>(translation_.size()) != linear_.rows()) {
        throw std::invalid_argument("affine map: translation length mismatch");
    }
    const long long det = determinant(linear_);
    if (det != 1 && det != -1) {
        throw std::invalid_argument("affine map: linear part has determinant " + std::to_string(det));
    }
    translation_ = reduce_mod1(std::move(translation_));
}

AffineTorusMap::AffineTorusMap(IntMatrix linear, std::string name)
    : AffineTorusMap(std::move(linear), RatVector{}, std::move(name)) {}

AffineTorusMap AffineTorusMap::identity(int n) { return AffineTorusMap(IntMatrix::Identity(n, n), "id"); }

AffineTorusMap AffineTorusMap::translation(RatVector b, std::string name) {
    const auto n = static_cast<Eigen::Index>(b.size());
    return AffineTorusMap(IntMatrix::Identity(n, n), std::move(b), std::move(name));
}

AffineTorusMap AffineTorusMap::signed_permutation(const std::vector<int>& source, const std::vector<int>& sign,
                                                  RatVector b, std::string name) {
    const auto n = static_cast<Eigen::Index>(source.size());
    if (sign.size() != source.size()) throw std::invalid_argument("signed_permutation: length mismatch");
    IntMatrix d = IntMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int s = sign[static_cast<std::size_t>(i)];
        if (s != 1 && s != -1) throw std::invalid_argument("signed_permutation: signs must be +-1");
        d(i, source[static_cast<std::size_t>(i)]) = s;
    }
    return AffineTorusMap(std::move(d), std::move(b), std::move(name));
}

AffineTorusMap AffineTorusMap::renamed(std::string name) const {
    AffineTorusMap out = *this;
    out.name_ = std::move(name);
    return out;
}

RatVector AffineTorusMap::apply(const RatVector& x) const {
    RatVector y = mul(linear_, x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += translation_[i];
    return reduce_mod1(std::move(y));
}

Eigen::VectorXd AffineTorusMap::apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = linear_.cast<double>() * x + to_real(translation_);
    return y.array() - y.array().floor();
}

bool AffineTorusMap::is_identity() const {
    return linear_ == IntMatrix::Identity(dim(), dim()) &&
           std::all_of(translation_.begin(), translation_.end(), [](const Rational& q) { return q.numerator() == 0; });
}

AffineTorusMap compose(const AffineTorusMap& f, const AffineTorusMap& g) {
    require_same_dim(f.dim(), g.dim(), "compose");
    RatVector b = mul(f.linear(), g.translation());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += f.translation()[i];
    std::string name;
    if (!f.name().empty() && !g.name().empty()) name = f.name() + "*" + g.name();
    return AffineTorusMap(f.linear() * g.linear(), std::move(b), std::move(name));
}

AffineTorusMap inverse(const AffineTorusMap& f) {
    const IntMatrix inv = unimodular_inverse(f.linear());
    RatVector b = mul(inv, f.translation());
    for (auto& v : b) v = -v;
    return AffineTorusMap(inv, std::move(b), f.name().empty() ? "" : f.name() + "^-1");
}

// ------------------------------------------------------------ AffineSubtorus

std::pair<IntMatrix, RatVector> AffineSubtorus::congruences() const {
    const int n = ambient_dim();
    const int d = dim();
    IntMatrix w;
    if (d == 0) {
        w = IntMatrix::Identity(n, n);
    } else {
        const SmithForm snf = smith_normal_form(directions);
        if (snf.rank != d) throw std::invalid_argument("subtorus directions are linearly dependent");
        w = snf.U.bottomRows(n - d);
    }
    return {w, mul(w, base_point)};
}

bool AffineSubtorus::contains(const RatVector& x) const {
    require_same_dim(ambient_dim(), static_cast<int>(x.size()), "contains");
    const auto [w, c] = congruences();
    const RatVector wx = mul(w, x);
    for (std::size_t i = 0; i < wx.size(); ++i) {
        if (!is_integer(wx[i] - c[i])) return false;
    }
    return true;
}

std::vector<AffineSubtorus> solve_congruence(const IntMatrix& a, const RatVector& b) {
    if (static_cast<Eigen::Index>(b.size()) != a.rows()) throw std::invalid_argument("solve_congruence: shape mismatch");
    const auto n = static_cast<int>(a.cols());
    const SmithForm snf = smith_normal_form(a);
    const RatVector c = mul(snf.U, b);
    const int r = snf.rank;
    for (std::size_t i = static_cast<std::size_t>(r); i < c.size(); ++i) {
        if (!is_integer(c[i])) return {};
    }

    const IntMatrix free_dirs = snf.V.rightCols(n - r);
    std::vector<AffineSubtorus> out;
    // Enumerate y_i = (c_i + k_i) / s_i, k_i in [0, s_i).
    std::vector<long long> k(static_cast<std::size_t>(r), 0);
    for (;;) {
        RatVector y(static_cast<std::size_t>(n), Rational(0));
        for (int i = 0; i < r; ++i) {
            y[static_cast<std::size_t>(i)] = (c[static_cast<std::size_t>(i)] + k[static_cast<std::size_t>(i)]) / snf.S(i, i);
        }
        out.push_back(canonical(mul(snf.V, y), free_dirs));

        int pos = 0;
        while (pos < r) {
            if (++k[static_cast<std::size_t>(pos)] < snf.S(pos, pos)) break;
            k[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == r) break;
    }
    std::sort(out.begin(), out.end(),
              [](const AffineSubtorus& x, const AffineSubtorus& y) { return lex_less(x.base_point, y.base_point); });
    return out;
}

std::vector<AffineSubtorus> fixed_locus(const AffineTorusMap& f) {
    const int n = f.dim();
    return solve_congruence(IntMatrix::Identity(n, n) - f.linear(), f.translation());
}

bool is_free(const AffineTorusMap& f) { return fixed_locus(f).empty(); }

std::vector<AffineSubtorus> intersect(const AffineSubtorus& a, const AffineSubtorus& b) {
    require_same_dim(a.ambient_dim(), b.ambient_dim(), "intersect");
    const auto [wa, ca] = a.congruences();
    const auto [wb, cb] = b.congruences();
    IntMatrix w(wa.rows() + wb.rows(), a.ambient_dim());
    w << wa, wb;
    RatVector c = ca;
    c.insert(c.end(), cb.begin(), cb.end());
    return solve_congruence(w, c);
}

DisjointnessReport loci_pairwise_disjoint(const std::vector<AffineTorusMap>& maps) {
    DisjointnessReport report;
    std::vector<std::vector<AffineSubtorus>> loci;
    for (const auto& m : maps) {
        if (!maps.empty()) require_same_dim(m.dim(), maps.front().dim(), "loci_pairwise_disjoint");
        loci.push_back(fixed_locus(m));
    }
    for (std::size_t i = 0; i < loci.size(); ++i) {
        for (std::size_t j = i + 1; j < loci.size(); ++j) {
            for (std::size_t ci = 0; ci < loci[i].size(); ++ci) {
                for (std::size_t cj = 0; cj < loci[j].size(); ++cj) {
                    ++report.pairs_checked;
                    const auto common = intersect(loci[i][ci], loci[j][cj]);
                    if (!common.empty()) {
                        report.disjoint = false;
                        report.witnesses.push_back({i, ci, j, cj, common.front().base_point});
                    }
                }
            }
        }
    }
    return report;
}

// --------------------------------------------------------------- group action

bool FiniteGroupAction::is_abelian() const {
    for (std::size_t i = 0; i < generators.size(); ++i) {
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            if (!(compose(generators[i], generators[j]) == compose(generators[j], generators[i]))) return false;
        }
    }
    return true;
}

bool FiniteGroupAction::generators_are_involutions() const {
    return std::all_of(generators.begin(), generators.end(),
                       [](const AffineTorusMap& g) { return compose(g, g).is_identity(); });
}

bool FiniteGroupAction::contains(const AffineTorusMap& f) const {
    return std::find(elements.begin(), elements.end(), f) != elements.end();
}

FiniteGroupAction group_closure(const std::vector<AffineTorusMap>& generators, std::size_t cap) {
    FiniteGroupAction group;
    group.generators = generators;
    const int n = generators.empty() ? 0 : generators.front().dim();
    for (const auto& g : generators) require_same_dim(g.dim(), n, "group_closure");
    group.elements.push_back(AffineTorusMap::identity(n));
    for (std::size_t frontier = 0; frontier < group.elements.size(); ++frontier) {
        for (const auto& g : generators) {
            AffineTorusMap h = compose(g, group.elements[frontier]);
            if (group.contains(h)) continue;
            group.elements.push_back(std::move(h));
            if (group.elements.size() > cap) {
                throw NonFiniteGroup("group closure exceeded " + std::to_string(cap) + " elements");
            }
        }
    }
    return group;
}

double torus_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double t = a[i] - b[i];
        t -= std::round(t);
        d = std::max(d, std::abs(t));
    }
    return d;
}

std::vector<Eigen::VectorXd> orbit(const Eigen::VectorXd& p, const FiniteGroupAction& group, double tol) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& g : group.elements) {
        Eigen::VectorXd q = g.apply(p);
        const bool seen = std::any_of(out.begin(), out.end(),
                                      [&](const Eigen::VectorXd& x) { return torus_distance(x, q) <= tol; });
        if (!seen) out.push_back(std::move(q));
    }
    return out;
}

std::vector<RatVector> orbit(const RatVector& p, const FiniteGroupAction& group) {
    std::vector<RatVector> out;
    for (const auto& g : group.elements) {
        RatVector q = g.apply(p);
        if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(std::move(q));
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

std::vector<RatVector> orbit_modulo(const RatVector& p, const FiniteGroupAction& group,
                                    const FiniteGroupAction& subgroup) {
    std::vector<RatVector> classes;
    std::vector<RatVector> covered;
    for (const auto& q : orbit(p, group)) {
        if (std::find(covered.begin(), covered.end(), q) != covered.end()) continue;
        classes.push_back(q);
        for (auto& r : orbit(q, subgroup)) covered.push_back(std::move(r));
    }
    return classes;
}

std::string to_string(const RatVector& x) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) os << ", ";
        os << x[i].numerator();
        if (x[i].denominator() != 1) os << '/' << x[i].denominator();
    }
    os << ')';
    return os.str();
}

RatVector rat_vector(const std::vector<std::pair<long long, long long>>& fractions) {
    RatVector out;
    for (const auto& [num, den] : fractions) out.emplace_back(num, den);
    return out;
}

Eigen::VectorXd to_real(const RatVector& x) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<Eigen::Index>(i)] = boost::rational_cast<double>(x[i]);
    return out;
}

}  // namespace calib
