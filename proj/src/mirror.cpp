#include "calib/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "calib/catalog.hpp"
#include "calib/parse_error.hpp"

namespace calib {

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<long long>> rows) {
    IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (long long v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

bool lex_less(const IntMatrix& a, const IntMatrix& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

Matrix to_double(const IntMatrix& m) { return m.cast<double>(); }

// Rows of K - A^T K A = 0 for every generator, with K flattened column-major.
IntMatrix intertwiner_system(const IntegerRep& rep) {
    const int n = rep.rank();
    const int n2 = n * n;
    IntMatrix system = IntMatrix::Zero(static_cast<Eigen::Index>(n2 * rep.generators().size()), n2);
    for (std::size_t g = 0; g < rep.generators().size(); ++g) {
        const IntMatrix& a = rep.generators()[g];
        for (int col = 0; col < n2; ++col) {
            IntMatrix e = IntMatrix::Zero(n, n);
            e(col % n, col / n) = 1;
            const IntMatrix image = e - a.transpose() * e * a;
            for (int r = 0; r < n2; ++r) system(static_cast<Eigen::Index>(g) * n2 + r, col) = image(r % n, r / n);
        }
    }
    return system;
}

// Echelon Z-basis of the solution lattice with the pivot column of each row.
std::pair<std::vector<IntVector>, std::vector<int>> echelon_kernel(const IntegerRep& rep) {
    std::vector<IntVector> rows;
    std::vector<int> pivots;
    const IntMatrix kernel = integer_kernel(intertwiner_system(rep));
    if (kernel.cols() == 0) return {rows, pivots};
    const HermiteForm h = hermite_normal_form(kernel.transpose());
    for (Eigen::Index i = 0; i < h.H.rows(); ++i) {
        if (h.H.row(i).isZero()) continue;
        rows.push_back(h.H.row(i).transpose());
        pivots.push_back(h.pivot_columns[rows.size() - 1]);
    }
    return {rows, pivots};
}

IntMatrix unflatten(const IntVector& v, int n) {
    IntMatrix k(n, n);
    for (int idx = 0; idx < n * n; ++idx) k(idx % n, idx / n) = v[idx];
    return k;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

IntegerRep::IntegerRep(std::vector<IntMatrix> generators) : generators_(std::move(generators)) {
    if (generators_.empty()) throw std::invalid_argument("a representation needs at least one generator");
    rank_ = static_cast<int>(generators_[0].rows());
    for (const auto& g : generators_) {
        if (g.rows() != rank_ || g.cols() != rank_) throw std::invalid_argument("generators must be square of one rank");
        const long long d = determinant(g);
        if (d != 1 && d != -1) throw std::invalid_argument("generator determinant " + std::to_string(d) + " is not +-1");
    }
}

IntegerRep IntegerRep::from_maps(const std::vector<AffineTorusMap>& maps) {
    std::vector<IntMatrix> gens;
    for (const auto& m : maps) gens.push_back(m.linear());
    return IntegerRep(std::move(gens));
}

std::vector<IntMatrix> IntegerRep::closure(std::size_t cap) const {
    std::vector<AffineTorusMap> maps;
    for (const auto& g : generators_) maps.emplace_back(g);
    std::vector<IntMatrix> out;
    for (const auto& e : group_closure(maps, cap).elements) out.push_back(e.linear());
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

IntMatrix dual_rep(const IntMatrix& a) { return unimodular_inverse(a).transpose(); }

bool is_intertwiner(const IntMatrix& k, const IntegerRep& rep) {
    if (k.rows() != rep.rank() || k.cols() != rep.rank()) return false;
    return std::all_of(rep.generators().begin(), rep.generators().end(),
                       [&](const IntMatrix& a) { return IntMatrix(a.transpose() * k * a) == k; });
}

std::vector<IntMatrix> intertwiner_lattice(const IntegerRep& rep) {
    std::vector<IntMatrix> basis;
    for (const auto& row : echelon_kernel(rep).first) basis.push_back(unflatten(row, rep.rank()));
    return basis;
}

std::vector<IntMatrix> solve_intertwiner(const IntegerRep& rep, int entry_bound) {
    if (entry_bound < 1) throw std::invalid_argument("entry_bound must be at least 1");
    const auto [rows, pivots] = echelon_kernel(rep);
    std::vector<IntMatrix> out;
    if (rows.empty()) return out;
    const long long bound = entry_bound;
    const int n = rep.rank();
    IntVector partial = IntVector::Zero(n * n);
    // Later rows vanish at pivots[i], so once row i is chosen that entry is final.
    const std::function<void(std::size_t)> descend = [&](std::size_t i) {
        if (i == rows.size()) {
            if (partial.cwiseAbs().maxCoeff() > bound) return;
            const IntMatrix k = unflatten(partial, n);
            if (determinant(k) != 0 && is_intertwiner(k, rep)) out.push_back(k);
            return;
        }
        const long long p = rows[i][pivots[i]];
        const long long base = partial[pivots[i]];
        const auto lo = static_cast<long long>(std::ceil(double(-bound - base) / double(p)));
        const auto hi = static_cast<long long>(std::floor(double(bound - base) / double(p)));
        for (long long c = lo; c <= hi; ++c) {
            partial += c * rows[i];
            descend(i + 1);
            partial -= c * rows[i];
        }
    };
    descend(0);
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

bool block_structure_check(const IntMatrix& a) {
    if (a.rows() != 3 || a.cols() != 3) throw std::invalid_argument("block_structure_check needs a 3 x 3 matrix");
    return a(0, 2) == 0 && a(1, 2) == 0 && a(2, 0) == 0 && a(2, 1) == 0 && a(2, 2) == 1;
}

IntegerRep block_form_rep(const std::vector<IntMatrix>& blocks) {
    std::vector<IntMatrix> gens;
    for (const auto& b : blocks) {
        if (b.rows() != 2 || b.cols() != 2) throw std::invalid_argument("blocks must be 2 x 2");
        IntMatrix g = IntMatrix::Zero(3, 3);
        g.topLeftCorner(2, 2) = b;
        g(2, 2) = 1;
        gens.push_back(g);
    }
    return IntegerRep(std::move(gens));
}

std::vector<IntMatrix> sl2z_generators() { return {mat({{0, -1}, {1, 0}}), mat({{1, 1}, {0, 1}})}; }

AffineTorusMap mirror_glue_map(MirrorContext context) {
    return context == MirrorContext::CY3 ? catalog::cy3_mu() : catalog::g2_eta();
}

std::vector<AffineTorusMap> mirror_context_group(MirrorContext context) {
    if (context == MirrorContext::CY3) return {catalog::cy3_alpha(), catalog::cy3_beta()};
    return {catalog::g2_alpha(), catalog::g2_beta(), catalog::g2_gamma()};
}

bool commutes(const AffineTorusMap& f, const AffineTorusMap& g) { return compose(f, g) == compose(g, f); }

std::string to_string(PullbackConvention c) { return c == PullbackConvention::Forward ? "forward" : "inverse"; }

PullbackReport pullback_relations_check(const AffineTorusMap& m, const std::vector<PullbackRelation>& relations,
                                        double tol) {
    PullbackReport report;
    const Matrix forward = to_double(m.linear());
    const Matrix backward = to_double(unimodular_inverse(m.linear()));
    for (auto convention : {PullbackConvention::Forward, PullbackConvention::Inverse}) {
        ConventionResult cr{convention, {}, true};
        const Matrix& jac = convention == PullbackConvention::Forward ? forward : backward;
        for (const auto& rel : relations) {
            if (rel.source.dim() != m.dim() || rel.target.dim() != m.dim())
                throw std::invalid_argument("relation forms live in the wrong dimension");
            if (rel.sign != 1 && rel.sign != -1) throw std::invalid_argument("relation sign must be +-1");
            const DifferentialForm pulled = pullback(jac, rel.source);
            RelationResult r;
            r.label = m.name() + "^*(" + rel.source_name + ") = " + (rel.sign < 0 ? "-" : "") + rel.target_name;
            r.residual = distance(pulled, double(rel.sign) * rel.target);
            r.pass = r.residual <= tol;
            r.computed = pulled.to_string();
            cr.all_pass = cr.all_pass && r.pass;
            cr.relations.push_back(std::move(r));
        }
        if (cr.all_pass && !report.adopted) report.adopted = convention;
        report.conventions.push_back(std::move(cr));
    }
    return report;
}

std::map<std::string, DifferentialForm> relation_forms(MirrorContext context) {
    if (context == MirrorContext::CY3) {
        const ComplexForm e = catalog::eta(3);
        return {{"omega'", DifferentialForm::basis(6, {0, 1}) + DifferentialForm::basis(6, {2, 3})},
                {"Re_eta", e.re},
                {"Im_eta", e.im}};
    }
    const auto t = catalog::g2_triple();
    return {{"omega1", t.omega1}, {"omega2", t.omega2}, {"omega3", t.omega3}};
}

std::vector<PullbackRelation> parse_relations(const std::string& text,
                                              const std::map<std::string, DifferentialForm>& registry) {
    std::vector<PullbackRelation> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    const auto lookup = [&](const std::string& name) -> const DifferentialForm& {
        const auto it = registry.find(name);
        if (it == registry.end()) throw ParseError(line_no, "unknown form '" + name + "'");
        return it->second;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto arrow = line.find("->");
        if (arrow == std::string::npos) throw ParseError(line_no, "expected 'source -> [+|-]target'");
        const std::string source = trim(line.substr(0, arrow));
        std::string target = trim(line.substr(arrow + 2));
        int sign = 1;
        if (!target.empty() && (target[0] == '-' || target[0] == '+')) {
            sign = target[0] == '-' ? -1 : 1;
            target = trim(target.substr(1));
        }
        if (source.empty() || target.empty()) throw ParseError(line_no, "missing form name");
        out.push_back({source, lookup(source), sign, target, lookup(target)});
    }
    return out;
}

std::vector<PullbackRelation> mirror_relations(MirrorContext context) {
    if (context == MirrorContext::CY3)
        return parse_relations("omega' -> Im_eta\nIm_eta -> -omega'\nRe_eta -> Re_eta\n", relation_forms(context));
    return parse_relations("omega1 -> omega3\nomega3 -> -omega1\nomega2 -> omega2\n", relation_forms(context));
}

double period_map_alpha(const DifferentialForm& u, const Vector& v, const CalibrationPackage& pkg,
                        const ImmersedGrid& fiber) {
    if (u.degree() != 1) throw std::invalid_argument("period_map_alpha needs a 1-form u");
    if (fiber.param_dim != 3) throw std::invalid_argument("period_map_alpha needs a 3-dimensional fiber");
    if (u.dim() != pkg.im_phi.dim() || v.size() != pkg.im_phi.dim() || fiber.ambient_dim != pkg.im_phi.dim())
        throw std::invalid_argument("period_map_alpha: dimension mismatch");
    fiber.validate();
    const DifferentialForm integrand = wedge(interior_product(v, pkg.im_phi), u);
    double total = 0.0;
    for (std::size_t i = 0; i < fiber.size(); ++i)
        total += fiber.weights[i] * evaluate_on_frame(integrand, fiber.frames[i], fiber.points[i]);
    return total;
}

void BasisMap::validate() const {
    const auto n = matrix.rows();
    if (matrix.cols() != n || static_cast<std::size_t>(n) != source_labels.size() ||
        static_cast<std::size_t>(n) != target_labels.size())
        throw std::invalid_argument("basis map shape does not match its labels");
    for (Eigen::Index j = 0; j < n; ++j) {
        if (matrix.col(j).cwiseAbs().sum() != 1 || matrix.row(j).cwiseAbs().sum() != 1)
            throw std::invalid_argument("basis map is not a signed permutation");
    }
}

BasisMap reference_rho() {
    BasisMap rho{{"beta^1", "beta^2", "[dy3]"}, {"beta_1", "beta_2", "[S^1]"}, mat({{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}})};
    rho.validate();
    return rho;
}

ProductFrame bad_neighborhood_frame(double a, double b, double c, int resolution) {
    if (resolution < 1) throw std::invalid_argument("resolution must be positive");
    constexpr int x1 = 0, y1 = 1, x2 = 2, y2 = 3, x3 = 4, y3 = 5;
    ProductFrame f;
    const ComplexForm e = catalog::eta(3);
    f.omega_star = e.im + DifferentialForm::basis(6, {x3, y3});

    // Re eta restricted to the (y1, y2) plane is -dy1 ^ dy2, so T is oriented by (d/dy2, d/dy1).
    const std::vector<int> tangent{y2, y1, y3};
    f.cobasis = {DifferentialForm::basis(6, {y2}), DifferentialForm::basis(6, {y1}), DifferentialForm::basis(6, {y3})};
    for (int axis : tangent) f.cycles.push_back(Vector::Unit(6, axis));

    // omega*(v_j, cycle_k) = delta_jk with v_j in span(dx1, dx2, dx3).
    const std::vector<int> normal_axes{x1, x2, x3};
    Matrix pairing(3, 3);
    for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m)
            pairing(k, m) = evaluate_on_frame(
                f.omega_star, TangentFrame({Vector::Unit(6, normal_axes[static_cast<std::size_t>(m)]),
                                            f.cycles[static_cast<std::size_t>(k)]}));
    const Matrix coeffs = pairing.inverse();
    for (int j = 0; j < 3; ++j) {
        Vector v = Vector::Zero(6);
        for (int m = 0; m < 3; ++m) v[normal_axes[static_cast<std::size_t>(m)]] = coeffs(m, j);
        f.normals.push_back(v);
    }

    f.fiber.param_dim = 3;
    f.fiber.ambient_dim = 6;
    const double h = 1.0 / resolution;
    const TangentFrame frame = TangentFrame::coordinate(6, tangent);
    for (int i = 0; i < resolution; ++i)
        for (int j = 0; j < resolution; ++j)
            for (int k = 0; k < resolution; ++k) {
                Point p = Point::Zero(6);
                p[x1] = a;
                p[x2] = b;
                p[x3] = c;
                p[y2] = (i + 0.5) * h;
                p[y1] = (j + 0.5) * h;
                p[y3] = (k + 0.5) * h;
                f.fiber.points.push_back(p);
                f.fiber.frames.push_back(frame);
                f.fiber.weights.push_back(h * h * h);
            }
    return f;
}

SymplecticMirrorReport symplectic_mirror_check(const BasisMap& rho, const CalibrationPackage& pkg,
                                               const ProductFrame& frame, double tol) {
    rho.validate();
    if (rho.matrix.rows() != 3 || frame.cobasis.size() != 3 || frame.cycles.size() != 3 || frame.normals.size() != 3)
        throw std::invalid_argument("symplectic_mirror_check works on a rank-3 product basis");
    double volume = 0.0;
    for (std::size_t i = 0; i < frame.fiber.size(); ++i)
        volume += frame.fiber.weights[i] * frame_volume(frame.fiber.frames[i], MetricAtPoint::euclidean(6));
    if (!(volume > 0.0)) throw std::invalid_argument("fiber has zero volume");

    SymplecticMirrorReport r;
    r.alpha = Matrix(3, 3);
    Matrix xi(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r.alpha(i, j) = period_map_alpha(frame.cobasis[static_cast<std::size_t>(i)],
                                             frame.normals[static_cast<std::size_t>(j)], pkg, frame.fiber);
            xi(i, j) = evaluate_on_frame(frame.omega_star, TangentFrame({frame.normals[static_cast<std::size_t>(j)],
                                                                         frame.cycles[static_cast<std::size_t>(i)]}));
        }
    r.xi_rho = to_double(rho.matrix).transpose() * xi;
    r.max_difference = (r.alpha - r.xi_rho).cwiseAbs().maxCoeff();
    r.pass = r.max_difference <= tol;
    return r;
}

}  // namespace calib
