#include "calib/forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace calib {

namespace {

// Parity of #{(i in a, j in b) : i > j}, the sign of dx_a ^ dx_b -> dx_{a|b}.
int merge_sign(IndexSet a, IndexSet b) {
    int inversions = 0;
    for (IndexSet rest = b; rest != 0; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        inversions += std::popcount(static_cast<IndexSet>(a >> (j + 1)));
    }
    return (inversions & 1) ? -1 : 1;
}

void check_dim(int dim) {
    if (dim < 0 || dim > kMaxDim) {
        throw std::invalid_argument("form dimension out of range: " + std::to_string(dim));
    }
}

double det_small(const Matrix& m) {
    switch (m.rows()) {
    case 0:
        return 1.0;
    case 1:
        return m(0, 0);
    case 2:
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
        return m.partialPivLu().determinant();
    }
}

// Rows I of `columns` as a square matrix.
Matrix restrict_rows(const Matrix& columns, IndexSet rows) {
    const auto idx = indices_of(rows);
    Matrix out(static_cast<Eigen::Index>(idx.size()), columns.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        out.row(static_cast<Eigen::Index>(r)) = columns.row(idx[r]);
    }
    return out;
}

bool lex_less(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

}  // namespace

IndexSet index_set(std::initializer_list<int> indices) {
    return index_set(std::vector<int>(indices));
}

IndexSet index_set(const std::vector<int>& indices) {
    IndexSet set = 0;
    for (int i : indices) {
        if (i < 0 || i >= kMaxDim) throw std::invalid_argument("index out of range");
        set |= IndexSet{1} << i;
    }
    return set;
}

std::vector<int> indices_of(IndexSet set) {
    std::vector<int> out;
    for (; set != 0; set &= set - 1) out.push_back(std::countr_zero(set));
    return out;
}

int set_size(IndexSet set) { return std::popcount(set); }

std::vector<IndexSet> subsets_of_size(int n, int k) {
    std::vector<IndexSet> out;
    if (k < 0 || k > n) return out;
    if (k == 0) return {0};
    // Gosper's hack.
    IndexSet set = (IndexSet{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (set < limit) {
        out.push_back(set);
        const IndexSet c = set & (~set + 1);
        const IndexSet r = set + c;
        if (r == 0) break;
        set = (((r ^ set) >> 2) / c) | r;
    }
    return out;
}

// ---------------------------------------------------------------- Coefficient

Coefficient::Coefficient(double value) : value_(value) {}

Coefficient::Coefficient(Field field) : field_(std::make_shared<const Field>(std::move(field))) {}

double Coefficient::operator()(const Point& p) const { return field_ ? (*field_)(p) : value_; }

Coefficient Coefficient::scaled(double s) const {
    if (is_constant()) return Coefficient(value_ * s);
    auto f = field_;
    return Coefficient(Field([f, s](const Point& p) { return s * (*f)(p); }));
}

Coefficient Coefficient::composed(const Matrix& map) const {
    if (is_constant()) return *this;
    auto f = field_;
    return Coefficient(Field([f, map](const Point& p) { return (*f)(map * p); }));
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    if (a.is_constant() && b.is_constant()) return Coefficient(a.value_ + b.value_);
    return Coefficient(Coefficient::Field([a, b](const Point& p) { return a(p) + b(p); }));
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    if (a.is_constant() && b.is_constant()) return Coefficient(a.value_ * b.value_);
    if (a.is_constant()) return b.scaled(a.value_);
    if (b.is_constant()) return a.scaled(b.value_);
    return Coefficient(Coefficient::Field([a, b](const Point& p) { return a(p) * b(p); }));
}

// ----------------------------------------------------------- DifferentialForm

DifferentialForm::DifferentialForm(int dim, int degree) : dim_(dim), degree_(degree) {
    check_dim(dim);
    if (degree < 0 || degree > dim) {
        throw std::invalid_argument("form degree " + std::to_string(degree) +
                                    " invalid in dimension " + std::to_string(dim));
    }
}

DifferentialForm DifferentialForm::basis(int dim, std::initializer_list<int> indices, double c) {
    return basis(dim, std::vector<int>(indices), c);
}

DifferentialForm DifferentialForm::basis(int dim, const std::vector<int>& indices, double c) {
    DifferentialForm out(dim, static_cast<int>(indices.size()));
    IndexSet set = 0;
    int sign = 1;
    for (int i : indices) {
        if (i < 0 || i >= dim) throw std::invalid_argument("basis index out of range");
        const IndexSet bit = IndexSet{1} << i;
        if (set & bit) return out;  // repeated index: zero form
        sign *= merge_sign(set, bit);
        set |= bit;
    }
    out.add_term(set, c * sign);
    return out;
}

DifferentialForm DifferentialForm::scalar(int dim, double c) {
    DifferentialForm out(dim, 0);
    out.add_term(0, c);
    return out;
}

DifferentialForm DifferentialForm::volume(int dim) {
    DifferentialForm out(dim, dim);
    out.add_term(dim == 32 ? ~IndexSet{0} : (IndexSet{1} << dim) - 1, 1.0);
    return out;
}

bool DifferentialForm::is_constant() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.second.is_constant(); });
}

double DifferentialForm::coefficient(IndexSet set) const {
    auto it = terms_.find(set);
    if (it == terms_.end()) return 0.0;
    if (!it->second.is_constant()) throw std::logic_error("coefficient(): form is not constant");
    return it->second.value();
}

DifferentialForm DifferentialForm::at(const Point& p) const {
    DifferentialForm out(dim_, degree_);
    for (const auto& [set, c] : terms_) out.add_term(set, c(p));
    return out;
}

void DifferentialForm::add_term(IndexSet set, const Coefficient& c) {
    if (set_size(set) != degree_) throw std::invalid_argument("term degree mismatch");
    if (dim_ < 32 && (set >> dim_) != 0) throw std::invalid_argument("term index out of range");
    auto it = terms_.find(set);
    Coefficient sum = it == terms_.end() ? c : it->second + c;
    if (sum.is_constant() && sum.value() == 0.0) {
        if (it != terms_.end()) terms_.erase(it);
        return;
    }
    terms_.insert_or_assign(set, sum);
}

DifferentialForm DifferentialForm::operator-() const {
    DifferentialForm out = *this;
    out *= -1.0;
    return out;
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& other) {
    if (other.dim_ != dim_ || other.degree_ != degree_) {
        throw std::invalid_argument("cannot add forms of different dimension or degree");
    }
    for (const auto& [set, c] : other.terms_) add_term(set, c);
    return *this;
}

DifferentialForm& DifferentialForm::operator-=(const DifferentialForm& other) {
    return *this += -other;
}

DifferentialForm& DifferentialForm::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [set, c] : terms_) c = c.scaled(s);
    return *this;
}

double DifferentialForm::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [set, c] : terms_) {
        if (!c.is_constant()) throw std::logic_error("max_abs_coefficient(): form is not constant");
        m = std::max(m, std::abs(c.value()));
    }
    return m;
}

std::string DifferentialForm::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [set, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (c.is_constant()) {
            os << c.value();
        } else {
            os << "f(p)";
        }
        for (int i : indices_of(set)) os << " dx" << i;
    }
    return os.str();
}

double distance(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.dim() != b.dim() || a.degree() != b.degree()) {
        return std::numeric_limits<double>::infinity();
    }
    return (a - b).max_abs_coefficient();
}

bool approx_equal(const DifferentialForm& a, const DifferentialForm& b, double tol) {
    return distance(a, b) <= tol;
}

ComplexForm wedge(const ComplexForm& a, const ComplexForm& b) {
    return {wedge(a.re, b.re) - wedge(a.im, b.im), wedge(a.re, b.im) + wedge(a.im, b.re)};
}

ComplexForm dz(int complex_dim, int j) {
    const int n = 2 * complex_dim;
    return {DifferentialForm::basis(n, {2 * j}), DifferentialForm::basis(n, {2 * j + 1})};
}

// --------------------------------------------------------------- TangentFrame

TangentFrame::TangentFrame(std::vector<Vector> vectors, bool orthonormal)
    : vectors_(std::move(vectors)), orthonormal_(orthonormal) {
    for (const auto& v : vectors_) {
        if (v.size() != vectors_.front().size()) {
            throw std::invalid_argument("frame vectors have different lengths");
        }
    }
    if (orthonormal_) {
        const Matrix m = as_matrix();
        const Matrix gram = m.transpose() * m;
        const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
        if (err > 1e-12) throw std::invalid_argument("frame flagged orthonormal but Gram error is " +
                                                     std::to_string(err));
    }
}

TangentFrame TangentFrame::coordinate(int dim, std::initializer_list<int> axes) {
    return coordinate(dim, std::vector<int>(axes));
}

TangentFrame TangentFrame::coordinate(int dim, const std::vector<int>& axes) {
    std::vector<Vector> vs;
    for (int a : axes) vs.push_back(Vector::Unit(dim, a));
    return TangentFrame(std::move(vs), true);
}

TangentFrame TangentFrame::from_columns(const Matrix& columns, bool orthonormal) {
    std::vector<Vector> vs;
    for (Eigen::Index c = 0; c < columns.cols(); ++c) vs.emplace_back(columns.col(c));
    return TangentFrame(std::move(vs), orthonormal);
}

Matrix TangentFrame::as_matrix() const {
    Matrix m(dim(), size());
    for (int c = 0; c < size(); ++c) m.col(c) = vectors_[static_cast<std::size_t>(c)];
    return m;
}

// -------------------------------------------------------------- MetricAtPoint

MetricAtPoint::MetricAtPoint(Matrix g) : g_(std::move(g)) {
    if (g_.rows() != g_.cols()) throw std::invalid_argument("metric must be square");
    if (g_ != g_.transpose()) throw DegenerateMetric("metric is not symmetric", 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g_);
    min_eigenvalue_ = g_.rows() == 0 ? 1.0 : es.eigenvalues().minCoeff();
    if (!(min_eigenvalue_ > 0.0)) {
        throw DegenerateMetric("metric is not positive definite (min eigenvalue " +
                                   std::to_string(min_eigenvalue_) + ")",
                               min_eigenvalue_);
    }
    Eigen::LLT<Matrix> llt(g_);
    const Matrix lower = llt.matrixL();
    frame_ = lower.transpose().inverse();
    sqrt_det_ = lower.diagonal().prod();
}

MetricAtPoint MetricAtPoint::euclidean(int dim) { return MetricAtPoint(Matrix::Identity(dim, dim)); }

// ------------------------------------------------------------------ operations

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
    if (a.degree() + b.degree() > a.dim()) return DifferentialForm(a.dim(), a.dim());
    DifferentialForm out(a.dim(), a.degree() + b.degree());
    for (const auto& [ia, ca] : a.terms()) {
        for (const auto& [ib, cb] : b.terms()) {
            if (ia & ib) continue;
            out.add_term(ia | ib, (ca * cb).scaled(merge_sign(ia, ib)));
        }
    }
    return out;
}

DifferentialForm interior_product(const Vector& v, const DifferentialForm& a) {
    if (a.degree() < 1) throw std::invalid_argument("interior_product: degree 0 form");
    if (v.size() != a.dim()) throw std::invalid_argument("interior_product: dimension mismatch");
    DifferentialForm out(a.dim(), a.degree() - 1);
    for (const auto& [set, c] : a.terms()) {
        int position = 0;
        for (int i : indices_of(set)) {
            if (v[i] != 0.0) {
                const double sign = (position & 1) ? -1.0 : 1.0;
                out.add_term(set & ~(IndexSet{1} << i), c.scaled(sign * v[i]));
            }
            ++position;
        }
    }
    return out;
}

DifferentialForm pullback(const Matrix& jacobian, const DifferentialForm& a) {
    if (jacobian.rows() != a.dim()) throw std::invalid_argument("pullback: shape mismatch");
    const int source_dim = static_cast<int>(jacobian.cols());
    if (a.degree() > source_dim) return DifferentialForm(source_dim, std::min(a.degree(), source_dim));
    DifferentialForm out(source_dim, a.degree());
    const auto targets = subsets_of_size(source_dim, a.degree());
    for (const auto& [set, c] : a.terms()) {
        const Matrix rows = restrict_rows(jacobian, set);
        const Coefficient moved = c.composed(jacobian);
        for (IndexSet k : targets) {
            const auto cols = indices_of(k);
            Matrix minor(rows.rows(), static_cast<Eigen::Index>(cols.size()));
            for (std::size_t j = 0; j < cols.size(); ++j) {
                minor.col(static_cast<Eigen::Index>(j)) = rows.col(cols[j]);
            }
            const double d = det_small(minor);
            if (d != 0.0) out.add_term(k, moved.scaled(d));
        }
    }
    return out;
}

DifferentialForm hodge_star(const DifferentialForm& a, const MetricAtPoint& g, int orientation) {
    if (g.dim() != a.dim()) throw std::invalid_argument("hodge_star: dimension mismatch");
    if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +-1");
    const int n = a.dim();
    // Rewrite in an orthonormal coframe theta, where * is combinatorial, then
    // transform back: dx = frame * theta  and  theta = frame^{-1} dx.
    const Matrix& frame = g.orthonormal_frame();
    const DifferentialForm in_theta = pullback(frame, a);
    const IndexSet all = n == 32 ? ~IndexSet{0} : (IndexSet{1} << n) - 1;
    DifferentialForm starred(n, n - a.degree());
    for (const auto& [set, c] : in_theta.terms()) {
        const IndexSet rest = all & ~set;
        starred.add_term(rest, c.scaled(orientation * merge_sign(set, rest)));
    }
    return pullback(frame.inverse(), starred);
}

double form_norm(const DifferentialForm& a, const MetricAtPoint& g) {
    const DifferentialForm in_theta = pullback(g.orthonormal_frame(), a);
    double sum = 0.0;
    for (const auto& [set, c] : in_theta.terms()) {
        if (!c.is_constant()) throw std::logic_error("form_norm: form is not constant");
        sum += c.value() * c.value();
    }
    return std::sqrt(sum);
}

double evaluate_on_frame(const DifferentialForm& a, const TangentFrame& frame, const Point& p) {
    if (frame.size() != a.degree()) throw std::invalid_argument("evaluate_on_frame: frame length mismatch");
    if (frame.size() > 0 && frame.dim() != a.dim()) {
        throw std::invalid_argument("evaluate_on_frame: vector length mismatch");
    }
    // Sorting the vectors first makes swaps of two vectors an exact sign flip.
    std::vector<int> order(static_cast<std::size_t>(frame.size()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return lex_less(frame[i], frame[j]); });
    int sign = 1;
    {
        std::vector<int> perm = order;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            while (perm[i] != static_cast<int>(i)) {
                std::swap(perm[i], perm[static_cast<std::size_t>(perm[i])]);
                sign = -sign;
            }
        }
    }
    Matrix columns(a.dim(), frame.size());
    for (int c = 0; c < frame.size(); ++c) columns.col(c) = frame[order[static_cast<std::size_t>(c)]];

    double sum = 0.0;
    for (const auto& [set, c] : a.terms()) {
        const double coeff = c(p);
        if (coeff == 0.0) continue;
        sum += coeff * det_small(restrict_rows(columns, set));
    }
    return sign * sum;
}

double evaluate_on_frame(const DifferentialForm& a, const TangentFrame& frame) {
    if (!a.is_constant()) throw std::invalid_argument("evaluate_on_frame: position required");
    return evaluate_on_frame(a, frame, Point::Zero(a.dim()));
}

double frame_volume(const TangentFrame& frame, const MetricAtPoint& g) {
    const Matrix v = frame.as_matrix();
    const Matrix gram = v.transpose() * g.matrix() * v;
    return std::sqrt(std::max(0.0, det_small(gram)));
}

// ---------------------------------------------------------------------- comass

namespace {

struct FlatForm {
    int k = 0;
    std::vector<std::vector<int>> rows;
    std::vector<double> coeffs;

    explicit FlatForm(const DifferentialForm& a) : k(a.degree()) {
        for (const auto& [set, c] : a.terms()) {
            rows.push_back(indices_of(set));
            coeffs.push_back(c.value());
        }
    }

    double operator()(const Matrix& v) const {
        double sum = 0.0;
        Matrix m(k, k);
        for (std::size_t t = 0; t < rows.size(); ++t) {
            for (int r = 0; r < k; ++r) m.row(r) = v.row(rows[t][static_cast<std::size_t>(r)]);
            sum += coeffs[t] * det_small(m);
        }
        return sum;
    }

    // d value / d v(i, r)
    Matrix gradient(const Matrix& v) const {
        Matrix g(v.rows(), v.cols());
        Matrix w = v;
        for (Eigen::Index r = 0; r < v.cols(); ++r) {
            for (Eigen::Index i = 0; i < v.rows(); ++i) {
                w.col(r).setZero();
                w(i, r) = 1.0;
                g(i, r) = (*this)(w);
            }
            w.col(r) = v.col(r);
        }
        return g;
    }
};

Matrix polar_orthonormalize(const Matrix& v) {
    Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

ComassEstimate comass_estimate(const DifferentialForm& a, const MetricAtPoint& g,
                               const ComassOptions& options) {
    if (options.samples < 1) throw std::invalid_argument("comass_estimate: samples must be >= 1");
    if (g.dim() != a.dim()) throw std::invalid_argument("comass_estimate: dimension mismatch");
    if (!a.is_constant()) throw std::invalid_argument("comass_estimate: form must be constant");
    const int n = a.dim();
    const int k = a.degree();
    const Matrix& to_chart = g.orthonormal_frame();

    ComassEstimate result;
    result.samples = options.samples;
    if (k == 0) {
        result.value = result.sampled_max = std::abs(a.coefficient(0));
        result.frame = TangentFrame({}, true);
        return result;
    }

    const FlatForm f(pullback(to_chart, a));
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;

    // Keep the best few frames for refinement.
    std::vector<std::pair<double, Matrix>> best;
    const auto keep = static_cast<std::size_t>(std::max(1, options.refine_candidates));
    Matrix v(n, k);
    for (int s = 0; s < options.samples; ++s) {
        for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = normal(rng);
        Eigen::HouseholderQR<Matrix> qr(v);
        const Matrix q = qr.householderQ() * Matrix::Identity(n, k);
        const double val = std::abs(f(q));
        if (best.size() < keep || val > best.back().first) {
            best.emplace_back(val, q);
            std::sort(best.begin(), best.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
            if (best.size() > keep) best.pop_back();
        }
    }
    result.sampled_max = best.front().first;

    double best_value = best.front().first;
    Matrix best_frame = best.front().second;
    for (auto& [val, frame] : best) {
        double current = val;
        Matrix q = frame;
        double step = 0.5;
        for (int it = 0; it < options.refine_steps && step > 1e-14; ++it) {
            const double sign = f(q) >= 0.0 ? 1.0 : -1.0;
            const Matrix grad = f.gradient(q);
            // Project onto the tangent space of the Stiefel manifold.
            const Matrix qtg = q.transpose() * grad;
            const Matrix riem = grad - q * (0.5 * (qtg + qtg.transpose()));
            if (riem.norm() < 1e-15) break;
            bool improved = false;
            while (step > 1e-14) {
                const Matrix candidate = polar_orthonormalize(q + sign * step * riem);
                const double cv = std::abs(f(candidate));
                if (cv > current) {
                    q = candidate;
                    current = cv;
                    improved = true;
                    step = std::min(1.0, step * 2.0);
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        if (current > best_value) {
            best_value = current;
            best_frame = q;
        }
    }
    result.value = best_value;
    result.frame = TangentFrame::from_columns(to_chart * best_frame);
    return result;
}

}  // namespace calib
