#pragma once

// Simplicial meshes of k-dimensional submanifolds of R^n or of the flat torus
// R^n / Z^n, intrinsic and extrinsic geodesic balls, and the ball comparison.

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "calib/forms.hpp"

namespace calib {

class MeshedSubmanifold {
public:
    using Face = std::vector<int>;

    /// Throws std::invalid_argument on bad indices, degenerate faces, or a disconnected edge graph.
    MeshedSubmanifold(int simplex_dim, std::vector<Point> vertices, std::vector<Face> faces, bool periodic = false);

    int simplex_dim() const { return k_; }
    int ambient_dim() const { return n_; }
    bool periodic() const { return periodic_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t face_count() const { return faces_.size(); }
    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Face>& faces() const { return faces_; }
    double face_area(std::size_t f) const { return areas_[f]; }
    double total_area() const { return total_area_; }

    struct Edge {
        int to;
        double length;
    };
    const std::vector<std::vector<Edge>>& adjacency() const { return adjacency_; }
    const std::vector<std::vector<int>>& vertex_faces() const { return vertex_faces_; }

    /// a - b, reduced to the nearest image on the torus when periodic.
    Vector displacement(const Point& a, const Point& b) const;
    double ambient_distance(const Point& a, const Point& b) const { return displacement(a, b).norm(); }
    /// Face vertices placed next to the first one (unwrapped copies on the torus).
    std::vector<Point> face_positions(std::size_t f) const;
    int nearest_vertex(const Point& p) const;

private:
    int k_;
    int n_;
    bool periodic_;
    std::vector<Point> vertices_;
    std::vector<Face> faces_;
    std::vector<double> areas_;
    double total_area_ = 0.0;
    std::vector<std::vector<Edge>> adjacency_;
    std::vector<std::vector<int>> vertex_faces_;
};

/// Volume of the simplex spanned by the given points.
double simplex_volume(const std::vector<Point>& points);

/// Triangulated image of the box [lower, upper] under a map R^2 -> R^n, two triangles per cell.
/// With a keep predicate, triangles whose vertices are not all kept are dropped.
MeshedSubmanifold parametric_surface_mesh(const std::function<Point(double, double)>& param, std::array<double, 2> lower,
                                          std::array<double, 2> upper, int resolution,
                                          const std::function<bool(double, double)>& keep = {});

/// The graph {(z, z^2) : |z| <= 1} in C^2 = R^4 on a resolution x resolution grid of [-1, 1]^2.
MeshedSubmanifold holomorphic_graph_mesh(int resolution);

/// Unit square in R^2 on a resolution x resolution grid.
MeshedSubmanifold flat_square_mesh(int resolution);

/// Icosahedron subdivided `levels` times and projected to the sphere of the given radius.
MeshedSubmanifold icosphere_mesh(int levels, double radius = 1.0);

/// Closed torus of revolution in R^3 with radii R and r (the zero set of the quartic torus for
/// R = 1, r = 1/2), resolution x resolution cells in the two angles.
MeshedSubmanifold torus_of_revolution_mesh(int resolution, double R = 1.0, double r = 0.5);

/// Periodic Kuhn triangulation (6 tetrahedra per cube) of the torus spanned by the
/// coordinate axes through base in R^n / Z^n.
MeshedSubmanifold flat_torus_mesh(const Point& base, const std::vector<int>& axes, int resolution);

enum class DistanceMethod {
    /// Dijkstra over mesh edges.
    EdgeGraph,
    /// Dijkstra-ordered front propagation with triangle unfolding; surfaces only.
    FastMarching,
};

/// Intrinsic distances from vertex p.  Throws on a mesh the method does not support.
std::vector<double> intrinsic_distances(const MeshedSubmanifold& mesh, int p,
                                        DistanceMethod method = DistanceMethod::EdgeGraph);

struct BallMeasure {
    double volume = 0.0;
    /// Total volume of leaf simplices cut by the ball boundary: a bound on the counting error.
    double straddle_volume = 0.0;
};

struct BallOptions {
    /// Refinement levels applied to simplices cut by the boundary (2^k children per level).
    int refine_levels = 3;
};

/// Volume of {x in L : |x - p| <= r}; leaf simplices count by their fraction of vertices inside.
BallMeasure extrinsic_ball_volume(const MeshedSubmanifold& mesh, const Point& p, double r, const BallOptions& opt = {});

/// Volume of {x in L : d_L(p, x) <= r} with distances interpolated linearly inside faces.
BallMeasure intrinsic_ball_volume(const MeshedSubmanifold& mesh, int p, double r,
                                  DistanceMethod method = DistanceMethod::EdgeGraph, const BallOptions& opt = {});
BallMeasure ball_volume_from_distances(const MeshedSubmanifold& mesh, const std::vector<double>& distances, double r,
                                       const BallOptions& opt = {});

enum class BallMode { Extrinsic, Intrinsic };

struct BallComparison {
    double measured = 0.0;
    double model = 0.0;  // space-form ball volume
    double margin = 0.0;
    double allowance = 0.0;
    double straddle_volume = 0.0;
    bool pass = false;
};

/// margin = measured - vol(B^K(r)); pass iff margin >= -allowance.  A negative allowance
/// selects the straddle volume.
BallComparison verify_ball_comparison(const MeshedSubmanifold& mesh, int p, double r, double K, BallMode mode,
                                      double allowance = -1.0, DistanceMethod method = DistanceMethod::FastMarching);

/// Largest finite intrinsic distance over the given sources (all vertices when empty).
double graph_diameter(const MeshedSubmanifold& mesh, const std::vector<int>& sources = {},
                      DistanceMethod method = DistanceMethod::EdgeGraph);

/// Text format:
///   mesh <n> <k> [periodic]
///   v <x1> ... <xn>
///   f <i0> ... <ik>
/// with '#' comments.  Errors carry the line number.
MeshedSubmanifold read_mesh(std::istream& in);
MeshedSubmanifold read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const MeshedSubmanifold& mesh);

}  // namespace calib
