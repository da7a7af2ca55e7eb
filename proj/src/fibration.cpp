#include "calib/fibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "calib/catalog.hpp"

namespace calib {

namespace {

TangentFrame sub_frame(const TangentFrame& frame, std::initializer_list<int> which) {
    Matrix cols(frame.dim(), static_cast<Eigen::Index>(which.size()));
    int c = 0;
    for (int i : which) cols.col(c++) = frame[i];
    return TangentFrame::from_columns(cols);
}

double checked_volume(const TangentFrame& frame, const MetricAtPoint& g, std::size_t index) {
    const double vol = frame_volume(frame, g);
    double scale = 1.0;
    for (const auto& v : frame.vectors()) scale *= std::sqrt(v.dot(g.matrix() * v));
    if (!(vol > 1e-12 * scale) || scale == 0.0) throw RankDeficientFrame(index, vol);
    return vol;
}

double wrap_half(double x) { return x - std::round(x); }

std::vector<int> axis_columns(const IntMatrix& directions) {
    std::vector<int> axes;
    for (Eigen::Index c = 0; c < directions.cols(); ++c) {
        int axis = -1;
        for (Eigen::Index r = 0; r < directions.rows(); ++r) {
            const long long v = directions(r, c);
            if (v == 0) continue;
            if ((v != 1 && v != -1) || axis >= 0) return {};
            axis = static_cast<int>(r);
        }
        if (axis < 0) return {};
        axes.push_back(axis);
    }
    std::sort(axes.begin(), axes.end());
    return axes;
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

Matrix axis_matrix(int n, const std::vector<int>& axes) {
    Matrix m = Matrix::Zero(n, static_cast<Eigen::Index>(axes.size()));
    for (std::size_t i = 0; i < axes.size(); ++i) m(axes[i], static_cast<Eigen::Index>(i)) = 1.0;
    return m;
}

}  // namespace

double ImmersedGrid::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

void ImmersedGrid::validate() const {
    if (param_dim < 1 || param_dim > ambient_dim) throw std::invalid_argument("ImmersedGrid: need 1 <= k <= n");
    if (frames.size() != points.size() || weights.size() != points.size())
        throw std::invalid_argument("ImmersedGrid: points, frames and weights differ in length");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != ambient_dim) throw std::invalid_argument("ImmersedGrid: point of wrong dimension");
        if (frames[i].size() != param_dim || frames[i].dim() != ambient_dim)
            throw std::invalid_argument("ImmersedGrid: frame of wrong shape at " + std::to_string(i));
        if (!(weights[i] > 0.0)) throw std::invalid_argument("ImmersedGrid: non-positive weight at " + std::to_string(i));
    }
}

ImmersedGrid sample_parametrization(const std::function<Point(const Vector&)>& param, const Vector& lower,
                                    const Vector& upper, int resolution, double fd_step) {
    const int k = static_cast<int>(lower.size());
    if (k < 1 || upper.size() != k) throw std::invalid_argument("sample_parametrization: bad box");
    if (resolution < 1) throw std::invalid_argument("sample_parametrization: resolution must be positive");
    const Vector h = (upper - lower) / resolution;
    if ((h.array() <= 0.0).any()) throw std::invalid_argument("sample_parametrization: empty box");

    ImmersedGrid grid;
    grid.param_dim = k;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    const double weight = h.prod();
    for (bool done = false; !done;) {
        Vector s(k);
        for (int i = 0; i < k; ++i) s[i] = lower[i] + (idx[static_cast<std::size_t>(i)] + 0.5) * h[i];
        const Point x = param(s);
        grid.ambient_dim = static_cast<int>(x.size());
        Matrix cols(x.size(), k);
        for (int i = 0; i < k; ++i) {
            Vector sp = s, sm = s;
            sp[i] += fd_step;
            sm[i] -= fd_step;
            cols.col(i) = (param(sp) - param(sm)) / (2 * fd_step);
        }
        grid.points.push_back(x);
        grid.frames.push_back(TangentFrame::from_columns(cols));
        grid.weights.push_back(weight);
        int d = 0;
        while (d < k && ++idx[static_cast<std::size_t>(d)] == resolution) idx[static_cast<std::size_t>(d++)] = 0;
        done = d == k;
    }
    grid.validate();
    return grid;
}

RankDeficientFrame::RankDeficientFrame(std::size_t index, double volume)
    : std::invalid_argument("rank-deficient frame at sample " + std::to_string(index) +
                            " (volume " + std::to_string(volume) + ")"),
      index_(index),
      volume_(volume) {}

CalibrationPackage CalibrationPackage::cy3() {
    const auto p = catalog::cy3_package();
    CalibrationPackage pkg;
    pkg.kind = StructureKind::CalabiYau;
    pkg.omega = p.omega;
    pkg.re_phi = p.re_phi;
    pkg.im_phi = p.im_phi;
    return pkg;
}

CalibrationPackage CalibrationPackage::g2() { return g2(catalog::g2_phi0()); }

CalibrationPackage CalibrationPackage::g2(const DifferentialForm& phi3) {
    CalibrationPackage pkg;
    pkg.kind = StructureKind::G2;
    const auto orbit = g2_orbit_test(phi3);
    if (!orbit.is_g2) throw std::invalid_argument("G2 package: the 3-form is not definite");
    pkg.phi3 = phi3;
    pkg.star_phi = hodge_star(phi3, MetricAtPoint(orbit.metric), orbit.orientation);
    pkg.validate();
    return pkg;
}

int CalibrationPackage::ambient_dim() const { return kind == StructureKind::CalabiYau ? omega.dim() : phi3.dim(); }

void CalibrationPackage::validate() const {
    if (kind == StructureKind::CalabiYau) {
        const int n = omega.dim();
        if (omega.degree() != 2 || re_phi.dim() != n || im_phi.dim() != n || 2 * re_phi.degree() != n ||
            im_phi.degree() != re_phi.degree())
            throw std::invalid_argument("CalabiYau package: inconsistent degrees");
    } else {
        if (phi3.dim() != 7 || phi3.degree() != 3 || star_phi.dim() != 7 || star_phi.degree() != 4)
            throw std::invalid_argument("G2 package: need a 3-form and a 4-form on R^7");
    }
}

MetricField flat_metric(int dim) {
    const auto g = MetricAtPoint::euclidean(dim);
    return [g](const Point&) { return g; };
}

SlagDefect slag_defect(const ImmersedGrid& grid, const CalibrationPackage& pkg) {
    return slag_defect(grid, pkg, flat_metric(grid.ambient_dim));
}

SlagDefect slag_defect(const ImmersedGrid& grid, const CalibrationPackage& pkg, const MetricField& metric) {
    pkg.validate();
    if (pkg.kind != StructureKind::CalabiYau) throw std::invalid_argument("slag_defect needs a Calabi-Yau package");
    if (grid.ambient_dim != pkg.ambient_dim() || 2 * grid.param_dim != grid.ambient_dim)
        throw std::invalid_argument("slag_defect: need a half-dimensional grid in the package's ambient space");
    SlagDefect out;
    const int k = grid.param_dim;
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const auto g = metric(grid.points[s]);
        const auto& frame = grid.frames[s];
        const double vol = checked_volume(frame, g, s);
        const double im = std::abs(evaluate_on_frame(pkg.im_phi, frame, grid.points[s])) / vol;
        if (im > out.max_im_phi) {
            out.max_im_phi = im;
            out.worst_im_phi_index = s;
        }
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const auto pair = sub_frame(frame, {i, j});
                const double w = std::abs(evaluate_on_frame(pkg.omega, pair, grid.points[s])) / checked_volume(pair, g, s);
                if (w > out.max_omega) {
                    out.max_omega = w;
                    out.worst_omega_index = s;
                }
            }
        }
    }
    return out;
}

CalibrationRatio calibration_ratio(const ImmersedGrid& grid, const DifferentialForm& form) {
    return calibration_ratio(grid, form, flat_metric(grid.ambient_dim));
}

CalibrationRatio calibration_ratio(const ImmersedGrid& grid, const DifferentialForm& form, const MetricField& metric) {
    if (form.degree() != grid.param_dim || form.dim() != grid.ambient_dim)
        throw std::invalid_argument("calibration_ratio: form degree must equal the grid dimension");
    if (grid.size() == 0) throw std::invalid_argument("calibration_ratio: empty grid");
    CalibrationRatio out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
    double worst = -1.0;
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const auto g = metric(grid.points[s]);
        const double r = evaluate_on_frame(form, grid.frames[s], grid.points[s]) / checked_volume(grid.frames[s], g, s);
        out.min_ratio = std::min(out.min_ratio, r);
        out.max_ratio = std::max(out.max_ratio, r);
        if (std::abs(r - 1.0) > worst) {
            worst = std::abs(r - 1.0);
            out.worst_index = s;
        }
    }
    return out;
}

CoassocDefect coassoc_defect(const ImmersedGrid& grid, const DifferentialForm& phi3) {
    if (phi3.degree() != 3 || phi3.dim() != grid.ambient_dim || grid.param_dim != 4)
        throw std::invalid_argument("coassoc_defect: need a 4-dimensional grid and a 3-form on the same space");
    const auto g = MetricAtPoint::euclidean(grid.ambient_dim);
    CoassocDefect out;
    for (std::size_t s = 0; s < grid.size(); ++s) {
        checked_volume(grid.frames[s], g, s);
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                for (int l = j + 1; l < 4; ++l) {
                    const auto triple = sub_frame(grid.frames[s], {i, j, l});
                    const double d =
                        std::abs(evaluate_on_frame(phi3, triple, grid.points[s])) / checked_volume(triple, g, s);
                    if (d > out.max_defect) {
                        out.max_defect = d;
                        out.worst_index = s;
                    }
                }
            }
        }
    }
    return out;
}

std::vector<int> fiber_fixed_axes(FiberFamily family) {
    return family == FiberFamily::CY3 ? std::vector<int>{0, 2, 4} : std::vector<int>{0, 2, 5};
}

std::vector<int> fiber_tangent_axes(FiberFamily family) {
    return family == FiberFamily::CY3 ? catalog::cy3_fiber_axes() : catalog::g2_fiber_axes();
}

int fiber_ambient_dim(FiberFamily family) { return family == FiberFamily::CY3 ? 6 : 7; }

namespace {

Vector fiber_base(const FiberParams& params) {
    Vector base = Vector::Zero(fiber_ambient_dim(params.family));
    const auto fixed = fiber_fixed_axes(params.family);
    base[fixed[0]] = params.a;
    base[fixed[1]] = params.b;
    base[fixed[2]] = params.c;
    return base;
}

}  // namespace

ImmersedGrid make_fiber(const FiberParams& params, int resolution) {
    if (resolution < 2) throw std::invalid_argument("make_fiber: resolution must be at least 2");
    const int n = fiber_ambient_dim(params.family);
    const auto axes = fiber_tangent_axes(params.family);
    const int k = static_cast<int>(axes.size());
    const Vector base = fiber_base(params);
    const TangentFrame frame = TangentFrame::coordinate(n, axes);
    const double weight = std::pow(1.0 / resolution, k);

    ImmersedGrid grid;
    grid.param_dim = k;
    grid.ambient_dim = n;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    for (bool done = false; !done;) {
        Point x = base;
        for (int i = 0; i < k; ++i) x[axes[static_cast<std::size_t>(i)]] += double(idx[static_cast<std::size_t>(i)]) / resolution;
        grid.points.push_back(x);
        grid.frames.push_back(frame);
        grid.weights.push_back(weight);
        int d = 0;
        while (d < k && ++idx[static_cast<std::size_t>(d)] == resolution) idx[static_cast<std::size_t>(d++)] = 0;
        done = d == k;
    }
    return grid;
}

double flat_affine_distance(const Vector& p, const Matrix& dp, const Vector& q, const Matrix& dq) {
    const Eigen::Index n = p.size();
    if (q.size() != n || dp.rows() != n || dq.rows() != n)
        throw std::invalid_argument("flat_affine_distance: dimension mismatch");
    Matrix span(n, dp.cols() + dq.cols());
    span << dp, dq;
    Matrix proj = Matrix::Identity(n, n);
    if (span.cols() > 0) {
        Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeFullU);
        const double tol = 1e-12 * std::max(1.0, svd.singularValues().maxCoeff());
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > tol) ++rank;
        const Matrix u = svd.matrixU().leftCols(rank);
        proj -= u * u.transpose();
    }
    Vector r = p - q;
    for (Eigen::Index i = 0; i < n; ++i) r[i] = wrap_half(r[i]);
    // Neighbouring lattice translates cover the non-aligned case.
    double best = (proj * r).norm();
    std::vector<int> shift(static_cast<std::size_t>(n), -1);
    for (bool done = false; !done;) {
        Vector k(n);
        for (Eigen::Index i = 0; i < n; ++i) k[i] = shift[static_cast<std::size_t>(i)];
        best = std::min(best, (proj * (r - k)).norm());
        Eigen::Index d = 0;
        while (d < n && ++shift[static_cast<std::size_t>(d)] == 2) shift[static_cast<std::size_t>(d++)] = -1;
        done = d == n;
    }
    return best;
}

double flat_affine_distance(const AffineSubtorus& a, const AffineSubtorus& b) {
    return flat_affine_distance(to_real(a.base_point), a.directions.cast<double>(), to_real(b.base_point),
                                b.directions.cast<double>());
}

std::vector<LabeledComponent> singular_loci(FiberFamily family) {
    std::vector<std::pair<std::string, AffineTorusMap>> maps;
    if (family == FiberFamily::CY3) {
        maps = {{"alpha", catalog::cy3_alpha()}, {"beta", catalog::cy3_beta()}};
    } else {
        maps = {{"alpha", catalog::g2_alpha()}, {"beta", catalog::g2_beta()}, {"gamma", catalog::g2_gamma()}};
    }
    std::vector<LabeledComponent> out;
    for (const auto& [name, map] : maps) {
        int index = 0;
        for (auto& c : fixed_locus(map)) out.push_back({name, index++, std::move(c)});
    }
    return out;
}

TubeSeparation tube_separation(const std::vector<LabeledComponent>& loci, double radius) {
    TubeSeparation out{true, std::numeric_limits<double>::infinity(), 0, 0};
    for (std::size_t i = 0; i < loci.size(); ++i) {
        for (std::size_t j = i + 1; j < loci.size(); ++j) {
            const double d = flat_affine_distance(loci[i].component, loci[j].component);
            if (d < out.min_distance) out = {true, d, i, j};
        }
    }
    out.disjoint = out.min_distance >= 2 * radius;
    return out;
}

std::vector<FiberHit> fiber_meets_neighborhood(const FiberParams& params, const std::vector<LabeledComponent>& loci,
                                               double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("fiber_meets_neighborhood: radius must be positive");
    const int n = fiber_ambient_dim(params.family);
    const Vector base = fiber_base(params);
    const Matrix dirs = axis_matrix(n, fiber_tangent_axes(params.family));
    std::vector<FiberHit> hits;
    for (std::size_t i = 0; i < loci.size(); ++i) {
        const auto& c = loci[i].component;
        if (c.ambient_dim() != n) throw std::invalid_argument("fiber_meets_neighborhood: locus of wrong dimension");
        const double d = flat_affine_distance(base, dirs, to_real(c.base_point), c.directions.cast<double>());
        if (d < radius) hits.push_back({i, d});
    }
    return hits;
}

ProductSplit product_split(const FiberParams& params, const std::vector<LabeledComponent>& loci,
                           const std::vector<FiberHit>& hits, double radius, int resolution) {
    if (hits.empty()) throw std::invalid_argument("product_split: fiber meets no tube");
    for (const auto& h : hits)
        if (h.locus >= loci.size()) throw std::out_of_range("product_split: hit refers to an unknown locus");
    const auto nearest = std::min_element(hits.begin(), hits.end(),
                                          [](const FiberHit& x, const FiberHit& y) { return x.distance < y.distance; });
    const auto& lead = loci[nearest->locus];
    const auto& comp = lead.component;
    const int n = fiber_ambient_dim(params.family);
    const auto comp_axes = axis_columns(comp.directions);
    if (comp_axes.empty() || comp.ambient_dim() != n || static_cast<int>(comp_axes.size()) != n - 4)
        throw std::invalid_argument("product_split: component must be spanned by n - 4 coordinate axes");

    const auto tangent = fiber_tangent_axes(params.family);
    ProductSplit out;
    for (int a = 0; a < n; ++a) {
        const bool along = contains(comp_axes, a);
        const bool fiber = contains(tangent, a);
        if (!along) (fiber ? out.chart_fiber_axes : out.chart_axes).push_back(a);
        else (fiber ? out.residual_axes : out.fixed_axes).push_back(a);
    }
    out.chart_axes.insert(out.chart_axes.end(), out.chart_fiber_axes.begin(), out.chart_fiber_axes.end());
    std::sort(out.chart_axes.begin(), out.chart_axes.end());

    const Vector base = fiber_base(params);
    const Vector center = to_real(comp.base_point);
    for (const auto& h : hits) {
        const auto& other = loci[h.locus];
        bool same = other.map == lead.map && other.component.directions == comp.directions;
        const Vector c = to_real(other.component.base_point);
        for (int a = 0; a < n && same; ++a)
            if (!contains(tangent, a) && !contains(comp_axes, a)) same = std::abs(wrap_half(c[a] - center[a])) < 1e-12;
        if (!same) throw std::invalid_argument("product_split: fiber meets more than one bad neighbourhood");
        out.components.push_back(h.locus);
    }
    out.chart_offset = Vector::Zero(4);
    std::vector<int> plane;
    for (int i = 0; i < 4; ++i) {
        const int a = out.chart_axes[static_cast<std::size_t>(i)];
        if (contains(tangent, a)) plane.push_back(i);
        else out.chart_offset[i] = wrap_half(base[a] - center[a]);
    }
    if (plane.size() != 2) throw std::invalid_argument("product_split: fiber is not two-dimensional in the chart");

    if (resolution < 2) throw std::invalid_argument("product_split: resolution must be at least 2");
    const double h = 2 * radius / resolution;
    auto& l = out.l_factor;
    l.param_dim = 2;
    l.ambient_dim = 4;
    const TangentFrame frame = TangentFrame::coordinate(4, plane);
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            Point x = out.chart_offset;
            x[plane[0]] += -radius + (i + 0.5) * h;
            x[plane[1]] += -radius + (j + 0.5) * h;
            if (x.norm() > radius) continue;
            l.points.push_back(x);
            l.frames.push_back(frame);
            l.weights.push_back(h * h);
        }
    }
    return out;
}

ImmersedGrid chart_imaginary_plane(double extent, int resolution) {
    if (!(extent > 0.0) || resolution < 1) throw std::invalid_argument("chart_imaginary_plane: bad grid");
    Vector lo(2), hi(2);
    lo << -extent, -extent;
    hi << extent, extent;
    ImmersedGrid grid = sample_parametrization(
        [](const Vector& s) {
            Point x = Point::Zero(4);
            x[1] = s[0];
            x[3] = s[1];
            return x;
        },
        lo, hi, resolution);
    for (auto& f : grid.frames) f = TangentFrame::coordinate(4, {1, 3});
    return grid;
}

ChartSlagReport chart_slag_check(const ImmersedGrid& surface, const GluedKahlerData& data, double u_min) {
    if (surface.ambient_dim != 4 || surface.param_dim != 2)
        throw std::invalid_argument("chart_slag_check: need a surface in the 4-dimensional chart");
    const auto eta = catalog::eta(2);
    ChartSlagReport out{0.0, 0.0, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0,
                        0};
    for (std::size_t s = 0; s < surface.size(); ++s) {
        const Point& x = surface.points[s];
        if (x.squaredNorm() < u_min) {
            ++out.excluded;
            continue;
        }
        const Hermitian2 h = glued_levi_matrix(x, data);
        const auto g = real_metric(h);
        const auto& frame = surface.frames[s];
        const double vol = checked_volume(frame, g, s);
        out.max_omega = std::max(out.max_omega, std::abs(evaluate_on_frame(kahler_form_of(h), frame)) / vol);
        out.max_im_eta = std::max(out.max_im_eta, std::abs(evaluate_on_frame(eta.im, frame)) / vol);
        const double c = conformal_factor(g, eta.re);
        const double ratio = evaluate_on_frame(eta.re, frame) / (c * vol);
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
        ++out.sampled;
    }
    return out;
}

G2OrbitReport g2_orbit_test(const DifferentialForm& phi) {
    G2OrbitReport out;
    out.induced_bilinear = Matrix::Zero(7, 7);
    if (phi.dim() != 7 || phi.degree() != 3) return out;
    const IndexSet top = index_set({0, 1, 2, 3, 4, 5, 6});
    std::vector<DifferentialForm> contractions;
    for (int i = 0; i < 7; ++i) contractions.push_back(interior_product(Vector::Unit(7, i), phi));
    for (int i = 0; i < 7; ++i) {
        for (int j = i; j < 7; ++j) {
            const double b = wedge(wedge(contractions[static_cast<std::size_t>(i)], contractions[static_cast<std::size_t>(j)]), phi)
                                 .coefficient(top);
            out.induced_bilinear(i, j) = out.induced_bilinear(j, i) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.induced_bilinear, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) return out;
    const double tol = 1e-9 * scale;
    if (ev.minCoeff() > tol) out.orientation = 1;
    else if (ev.maxCoeff() < -tol) out.orientation = -1;
    else return out;
    out.is_g2 = true;
    const Matrix b = out.orientation * out.induced_bilinear;
    // B = 6 sqrt(det g) g.
    const double root_det = std::pow(b.determinant() / std::pow(6.0, 7), 1.0 / 9.0);
    out.metric = b / (6.0 * root_det);
    return out;
}

}  // namespace calib
