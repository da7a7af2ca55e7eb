#pragma once

// Sampled submanifolds, calibration defects, and the affine torus fibers
// T_{a,b,c} of the Borcea-Voisin threefold and the Joyce G2 example.

#include <functional>
#include <string>
#include <vector>

#include "calib/forms.hpp"
#include "calib/metrics.hpp"
#include "calib/orbifold.hpp"

namespace calib {

/// Sample points of a k-dimensional parametrized submanifold of R^n together
/// with tangent frames and quadrature weights.
struct ImmersedGrid {
    int param_dim = 0;
    int ambient_dim = 0;
    std::vector<Point> points;
    std::vector<TangentFrame> frames;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
    double total_weight() const;
    /// Throws std::invalid_argument on shape mismatches or non-positive weights.
    void validate() const;
};

/// Cell-centred grid on the box [lower, upper] with frames from central differences.
ImmersedGrid sample_parametrization(const std::function<Point(const Vector&)>& param, const Vector& lower,
                                    const Vector& upper, int resolution, double fd_step = 1e-6);

class RankDeficientFrame : public std::invalid_argument {
public:
    RankDeficientFrame(std::size_t index, double volume);
    std::size_t index() const { return index_; }
    double volume() const { return volume_; }

private:
    std::size_t index_;
    double volume_;
};

enum class StructureKind { CalabiYau, G2 };

struct CalibrationPackage {
    StructureKind kind = StructureKind::CalabiYau;
    DifferentialForm omega{6, 2};
    DifferentialForm re_phi{6, 3};
    DifferentialForm im_phi{6, 3};
    DifferentialForm phi3{7, 3};
    DifferentialForm star_phi{7, 4};

    /// omega, Re phi, Im phi for phi = i dz1^dz2^dz3 on R^6.
    static CalibrationPackage cy3();
    /// phi0 and its Hodge dual for the metric and orientation phi0 induces.
    static CalibrationPackage g2();
    static CalibrationPackage g2(const DifferentialForm& phi3);

    int ambient_dim() const;
    void validate() const;
};

using MetricField = std::function<MetricAtPoint(const Point&)>;
MetricField flat_metric(int dim);

struct SlagDefect {
    double max_omega = 0.0;
    double max_im_phi = 0.0;
    std::size_t worst_omega_index = 0;
    std::size_t worst_im_phi_index = 0;
};

/// Largest |omega(v_i, v_j)| / area and |Im phi(frame)| / volume over the grid.
SlagDefect slag_defect(const ImmersedGrid& grid, const CalibrationPackage& pkg);
SlagDefect slag_defect(const ImmersedGrid& grid, const CalibrationPackage& pkg, const MetricField& metric);

struct CalibrationRatio {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::size_t worst_index = 0;  // index of the ratio farthest from 1
};

/// form(frame) / vol_g(frame) at every sample.
CalibrationRatio calibration_ratio(const ImmersedGrid& grid, const DifferentialForm& form);
CalibrationRatio calibration_ratio(const ImmersedGrid& grid, const DifferentialForm& form, const MetricField& metric);

struct CoassocDefect {
    double max_defect = 0.0;
    std::size_t worst_index = 0;
};

/// Largest |phi(v_i, v_j, v_l)| / vol over frame triples.
CoassocDefect coassoc_defect(const ImmersedGrid& grid, const DifferentialForm& phi3);

enum class FiberFamily { CY3, G2 };

struct FiberParams {
    FiberFamily family = FiberFamily::CY3;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Coordinates held fixed at (a, b, c): x1, x2, x3 on T^6 and x1, x3, x6 on T^7.
std::vector<int> fiber_fixed_axes(FiberFamily family);
std::vector<int> fiber_tangent_axes(FiberFamily family);
int fiber_ambient_dim(FiberFamily family);

/// Uniform periodic grid with resolution^k points and exact coordinate frames.
ImmersedGrid make_fiber(const FiberParams& params, int resolution);

/// Euclidean distance on R^n / Z^n between p + span(dp) and q + span(dq).
/// Exact when all directions are coordinate axes.
double flat_affine_distance(const Vector& p, const Matrix& dp, const Vector& q, const Matrix& dq);
double flat_affine_distance(const AffineSubtorus& a, const AffineSubtorus& b);

struct LabeledComponent {
    std::string map;
    int index = 0;
    AffineSubtorus component;
};

/// Fixed components of the generating involutions (alpha, beta for CY3; alpha, beta, gamma for G2).
std::vector<LabeledComponent> singular_loci(FiberFamily family);

inline constexpr double kDefaultTubeRadius = 0.125;

struct TubeSeparation {
    bool disjoint = false;
    double min_distance = 0.0;
    std::size_t first = 0;
    std::size_t second = 0;
};

/// Open tubes of the given radius about the components are pairwise disjoint
/// iff every pair is at least 2 radius apart.
TubeSeparation tube_separation(const std::vector<LabeledComponent>& loci, double radius);

struct FiberHit {
    std::size_t locus = 0;  // index into the loci list
    double distance = 0.0;
};

/// Components whose open tube of the given radius the fiber enters.
std::vector<FiberHit> fiber_meets_neighborhood(const FiberParams& params, const std::vector<LabeledComponent>& loci,
                                               double radius);

struct ProductSplit {
    /// Chart axes: the four coordinates normal to the component, in ambient order.
    std::vector<int> chart_axes;
    /// Fiber directions inside the chart (two of them).
    std::vector<int> chart_fiber_axes;
    /// Fiber directions along the component: the residual torus T_c.
    std::vector<int> residual_axes;
    /// Component directions the fiber holds fixed.
    std::vector<int> fixed_axes;
    /// Fiber position in chart coordinates relative to the nearest component.
    Vector chart_offset;
    /// Loci indices of the bad neighbourhood: the components met by the fiber,
    /// all of one map and differing only along fiber directions.
    std::vector<std::size_t> components;
    /// The L factor sampled in the chart ball of the tube radius.
    ImmersedGrid l_factor;
};

/// Requires the hits to form a single bad neighbourhood; components must be
/// spanned by coordinate axes.
ProductSplit product_split(const FiberParams& params, const std::vector<LabeledComponent>& loci,
                           const std::vector<FiberHit>& hits, double radius = kDefaultTubeRadius,
                           int resolution = 32);

struct ChartSlagReport {
    double max_omega = 0.0;
    double max_im_eta = 0.0;
    /// Re eta(frame) / vol in the conformally normalized metric.
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::size_t sampled = 0;
    std::size_t excluded = 0;
};

/// SLag test of a chart surface for the glued Kahler form and eta = dz1 ^ dz2.
/// Samples with |x|^2 < u_min are skipped.
ChartSlagReport chart_slag_check(const ImmersedGrid& surface, const GluedKahlerData& data, double u_min = 1e-3);

/// The imaginary plane {Re z1 = Re z2 = 0} of the chart on the square [-extent, extent]^2.
ImmersedGrid chart_imaginary_plane(double extent, int resolution);

struct G2OrbitReport {
    bool is_g2 = false;
    int orientation = 0;  // sign of definiteness
    Matrix induced_bilinear;  // B_ij = coefficient of (i_i phi ^ i_j phi ^ phi)
    Matrix metric;            // induced metric, empty unless is_g2
};

G2OrbitReport g2_orbit_test(const DifferentialForm& phi);

}  // namespace calib
