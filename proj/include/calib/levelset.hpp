#pragma once

// Connected components of real zero sets on cubical grids, and curve counts
// of {h = 0} on the unit sphere.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "calib/polynomial.hpp"

namespace calib {

/// Signs of f on the vertices of a grid of resolution^n cells over [lower, upper].
class CubicalLevelSet {
public:
    /// Throws std::invalid_argument unless resolution >= 2 on every axis and the box is non-empty.
    CubicalLevelSet(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd lower,
                    Eigen::VectorXd upper, std::vector<int> resolution);
    CubicalLevelSet(const RealPolynomial& f, Eigen::VectorXd lower, Eigen::VectorXd upper, int resolution);

    int dim() const { return static_cast<int>(resolution_.size()); }
    const std::vector<int>& resolution() const { return resolution_; }
    const Eigen::VectorXd& lower() const { return lower_; }
    const Eigen::VectorXd& upper() const { return upper_; }
    std::size_t cell_count() const;
    std::size_t vertex_count() const { return signs_.size(); }
    /// +1 where f >= 0, -1 where f < 0.
    std::int8_t sign(std::size_t vertex) const { return signs_[vertex]; }
    /// True when the cell's corner signs differ.
    bool cell_marked(std::size_t cell) const;
    Eigen::VectorXd cell_center(std::size_t cell) const;

private:
    std::vector<std::size_t> cell_coords(std::size_t cell) const;

    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
    std::vector<int> resolution_;
    std::vector<std::int8_t> signs_;
};

struct ComponentReport {
    int count = 0;
    /// Marked cells per component, largest first.
    std::vector<std::size_t> sizes;
    std::size_t marked_cells = 0;
};

/// Components of the marked cells under face adjacency (union-find).
ComponentReport component_count(const CubicalLevelSet& grid);
/// Builds the grid and counts; resolution must be at least 16.
ComponentReport component_count(const RealPolynomial& f, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                int resolution);

/// Counts of {p q - eps h = 0} at a coarse and a fine resolution.
struct StabilityRow {
    double eps = 0.0;
    int coarse = 0;
    int fine = 0;
    bool stable() const { return coarse == fine; }
};
std::vector<StabilityRow> viro_stability_scan(const RealPolynomial& p, const RealPolynomial& q, const RealPolynomial& h,
                                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                              const std::vector<double>& eps_values, int coarse, int fine);

/// Centres of marked cells, one "x1,...,xn" line each, for external plotting.
void write_marked_cells(std::ostream& out, const CubicalLevelSet& grid);

struct SphereCurveReport {
    int count = 0;
    /// A sign change sits where the tangential gradient of h is tiny compared with |grad h|.
    bool transversal = true;
    double min_tangential_gradient = 0.0;
    std::size_t marked_cells = 0;
};

/// Closed curves of {h = 0} on the unit sphere S^2 in R^3, from a latitude-longitude grid
/// (cells sharing a pole count as adjacent).  h may use at most 3 variables.
SphereCurveReport sphere_circle_count(const RealPolynomial& h, int resolution = 256);

/// h composed with a rotation of R^3.
RealPolynomial rotate_polynomial(const RealPolynomial& h, const Eigen::Matrix3d& rotation);

}  // namespace calib
