#pragma once

// Exterior algebra over flat charts.
//
// A DifferentialForm is a finite sum  sum_I c_I(p) dx_I  where I runs over
// strictly increasing multi-indices in [0, n).  Multi-indices are stored as
// bit masks, so the ordering invariant holds by construction and n is limited
// to 32.  Coefficients are either constants (the common case on flat tori) or
// position callbacks.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace calib {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Point = Eigen::VectorXd;

using IndexSet = std::uint32_t;

inline constexpr int kMaxDim = 32;

IndexSet index_set(std::initializer_list<int> indices);
IndexSet index_set(const std::vector<int>& indices);
std::vector<int> indices_of(IndexSet set);
int set_size(IndexSet set);

/// Enumerates all k-element subsets of [0, n) in increasing mask order.
std::vector<IndexSet> subsets_of_size(int n, int k);

class Coefficient {
public:
    using Field = std::function<double(const Point&)>;

    Coefficient(double value = 0.0);  // NOLINT(google-explicit-constructor)
    explicit Coefficient(Field field);

    bool is_constant() const { return field_ == nullptr; }
    /// Only meaningful when is_constant().
    double value() const { return value_; }
    double operator()(const Point& p) const;

    Coefficient scaled(double s) const;
    /// Precomposes a field coefficient with p -> map * p.  Constants pass through.
    Coefficient composed(const Matrix& map) const;

    friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b);

private:
    double value_ = 0.0;
    std::shared_ptr<const Field> field_;
};

class DifferentialForm {
public:
    DifferentialForm(int dim, int degree);

    /// dx_{i1} ^ ... ^ dx_{ik} scaled by c; indices need not be sorted.
    static DifferentialForm basis(int dim, std::initializer_list<int> indices, double c = 1.0);
    static DifferentialForm basis(int dim, const std::vector<int>& indices, double c = 1.0);
    static DifferentialForm scalar(int dim, double c);
    static DifferentialForm volume(int dim);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;

    const std::map<IndexSet, Coefficient>& terms() const { return terms_; }

    /// Constant coefficient of dx_I (0 when absent).  Throws for field coefficients.
    double coefficient(IndexSet set) const;

    /// Freezes position-dependent coefficients at p.
    DifferentialForm at(const Point& p) const;

    /// Adds c * dx_I.  Exact zero constants are dropped.
    void add_term(IndexSet set, const Coefficient& c);

    DifferentialForm operator-() const;
    DifferentialForm& operator+=(const DifferentialForm& other);
    DifferentialForm& operator-=(const DifferentialForm& other);
    DifferentialForm& operator*=(double s);

    friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
    friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
    friend DifferentialForm operator*(double s, DifferentialForm a) { return a *= s; }
    friend DifferentialForm operator*(DifferentialForm a, double s) { return a *= s; }

    /// Largest |c_I| over constant terms (throws on field coefficients).
    double max_abs_coefficient() const;

    std::string to_string() const;

private:
    int dim_;
    int degree_;
    std::map<IndexSet, Coefficient> terms_;
};

/// Sup-norm of the coefficient difference; both forms must be constant.
double distance(const DifferentialForm& a, const DifferentialForm& b);
bool approx_equal(const DifferentialForm& a, const DifferentialForm& b, double tol = 1e-12);

/// A complex form stored as its real and imaginary parts.
struct ComplexForm {
    DifferentialForm re;
    DifferentialForm im;

    ComplexForm times_i() const { return {-im, re}; }
    ComplexForm conjugate() const { return {re, -im}; }
};

ComplexForm wedge(const ComplexForm& a, const ComplexForm& b);

/// dz_j = dx_j + i dy_j in the real coordinate order (x1, y1, x2, y2, ...).
ComplexForm dz(int complex_dim, int j);

class TangentFrame {
public:
    explicit TangentFrame(std::vector<Vector> vectors, bool orthonormal = false);
    static TangentFrame coordinate(int dim, std::initializer_list<int> axes);
    static TangentFrame coordinate(int dim, const std::vector<int>& axes);
    static TangentFrame from_columns(const Matrix& columns, bool orthonormal = false);

    int size() const { return static_cast<int>(vectors_.size()); }
    int dim() const { return vectors_.empty() ? 0 : static_cast<int>(vectors_.front().size()); }
    bool orthonormal() const { return orthonormal_; }
    const std::vector<Vector>& vectors() const { return vectors_; }
    const Vector& operator[](int i) const { return vectors_[static_cast<std::size_t>(i)]; }
    Matrix as_matrix() const;

private:
    std::vector<Vector> vectors_;
    bool orthonormal_;
};

class DegenerateMetric : public std::invalid_argument {
public:
    DegenerateMetric(const std::string& what, double min_eigenvalue)
        : std::invalid_argument(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class MetricAtPoint {
public:
    /// Throws DegenerateMetric unless the matrix is exactly symmetric and positive definite.
    explicit MetricAtPoint(Matrix g);
    static MetricAtPoint euclidean(int dim);

    int dim() const { return static_cast<int>(g_.rows()); }
    const Matrix& matrix() const { return g_; }
    double min_eigenvalue() const { return min_eigenvalue_; }

    /// Columns map Euclidean-orthonormal coordinates to chart coordinates:
    /// frame()^T g frame() = I.
    const Matrix& orthonormal_frame() const { return frame_; }
    double sqrt_det() const { return sqrt_det_; }

private:
    Matrix g_;
    Matrix frame_;
    double min_eigenvalue_ = 0.0;
    double sqrt_det_ = 1.0;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

/// i_v a, contraction in the first slot.
DifferentialForm interior_product(const Vector& v, const DifferentialForm& a);

/// J^* a for J : R^{n'} -> R^n given as an n x n' matrix.
DifferentialForm pullback(const Matrix& jacobian, const DifferentialForm& a);

DifferentialForm hodge_star(const DifferentialForm& a, const MetricAtPoint& g, int orientation = 1);

/// Pointwise norm |a|_g with the convention |dx_I|^2 = 1 for orthonormal dx.
double form_norm(const DifferentialForm& a, const MetricAtPoint& g);

double evaluate_on_frame(const DifferentialForm& a, const TangentFrame& frame, const Point& p);
double evaluate_on_frame(const DifferentialForm& a, const TangentFrame& frame);

/// Riemannian k-volume of the parallelotope spanned by the frame.
double frame_volume(const TangentFrame& frame, const MetricAtPoint& g);

struct ComassOptions {
    int samples = 2000;
    int refine_steps = 200;
    /// How many of the best random frames receive local ascent.
    int refine_candidates = 8;
    std::uint64_t seed = 0x5eed;
};

struct ComassEstimate {
    double value = 0.0;          // best |a(frame)| after refinement (lower bound)
    double sampled_max = 0.0;    // best |a(frame)| over raw random frames
    TangentFrame frame{{}, false};
    int samples = 0;
};

/// Lower bound on the comass sup_{orthonormal frames} |a(frame)|.
ComassEstimate comass_estimate(const DifferentialForm& a, const MetricAtPoint& g,
                               const ComassOptions& options = {});

}  // namespace calib
