#include "calib/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "calib/parse_error.hpp"
#include "calib/volume.hpp"

namespace calib {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

double simplex_volume(const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("simplex_volume: no points");
    const int k = static_cast<int>(points.size()) - 1;
    if (k == 0) return 1.0;
    Matrix e(points[0].size(), k);
    for (int i = 0; i < k; ++i) e.col(i) = points[static_cast<std::size_t>(i) + 1] - points[0];
    const double det = (e.transpose() * e).determinant();
    return std::sqrt(std::max(0.0, det)) / factorial(k);
}

MeshedSubmanifold::MeshedSubmanifold(int simplex_dim, std::vector<Point> vertices, std::vector<Face> faces,
                                     bool periodic)
    : k_(simplex_dim), n_(0), periodic_(periodic), vertices_(std::move(vertices)), faces_(std::move(faces)) {
    if (k_ < 1) throw std::invalid_argument("mesh: simplex dimension must be at least 1");
    if (vertices_.empty() || faces_.empty()) throw std::invalid_argument("mesh: no vertices or faces");
    n_ = static_cast<int>(vertices_[0].size());
    if (k_ > n_) throw std::invalid_argument("mesh: simplex dimension exceeds ambient dimension");
    for (const auto& v : vertices_)
        if (v.size() != n_) throw std::invalid_argument("mesh: vertices of mixed dimension");

    const int nv = static_cast<int>(vertices_.size());
    vertex_faces_.assign(vertices_.size(), {});
    std::set<std::pair<int, int>> edges;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& face = faces_[f];
        if (static_cast<int>(face.size()) != k_ + 1)
            throw std::invalid_argument("mesh: face " + std::to_string(f) + " does not have k + 1 vertices");
        for (int v : face)
            if (v < 0 || v >= nv) throw std::invalid_argument("mesh: face " + std::to_string(f) + " has a bad index");
        std::set<int> distinct(face.begin(), face.end());
        if (static_cast<int>(distinct.size()) != k_ + 1)
            throw std::invalid_argument("mesh: face " + std::to_string(f) + " repeats a vertex");
        const auto pos = face_positions(f);
        double scale = 0.0;
        for (std::size_t i = 1; i < pos.size(); ++i) scale = std::max(scale, (pos[i] - pos[0]).norm());
        const double area = simplex_volume(pos);
        if (!(area > 1e-12 * std::pow(scale, k_))) throw std::invalid_argument("mesh: face " + std::to_string(f) + " is degenerate");
        areas_.push_back(area);
        total_area_ += area;
        for (std::size_t i = 0; i < face.size(); ++i) {
            vertex_faces_[static_cast<std::size_t>(face[i])].push_back(static_cast<int>(f));
            for (std::size_t j = i + 1; j < face.size(); ++j)
                edges.insert({std::min(face[i], face[j]), std::max(face[i], face[j])});
        }
    }
    adjacency_.assign(vertices_.size(), {});
    for (const auto& [a, b] : edges) {
        const double len = ambient_distance(vertices_[static_cast<std::size_t>(a)], vertices_[static_cast<std::size_t>(b)]);
        adjacency_[static_cast<std::size_t>(a)].push_back({b, len});
        adjacency_[static_cast<std::size_t>(b)].push_back({a, len});
    }
    std::vector<char> seen(vertices_.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& e : adjacency_[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(e.to)]) {
                seen[static_cast<std::size_t>(e.to)] = 1;
                ++reached;
                stack.push_back(e.to);
            }
        }
    }
    if (reached != vertices_.size())
        throw std::invalid_argument("mesh: edge graph is disconnected (" + std::to_string(reached) + " of " +
                                    std::to_string(vertices_.size()) + " vertices reachable)");
}

Vector MeshedSubmanifold::displacement(const Point& a, const Point& b) const {
    Vector d = a - b;
    if (periodic_)
        for (Eigen::Index i = 0; i < d.size(); ++i) d[i] -= std::round(d[i]);
    return d;
}

std::vector<Point> MeshedSubmanifold::face_positions(std::size_t f) const {
    const auto& face = faces_[f];
    std::vector<Point> pos;
    const Point& base = vertices_[static_cast<std::size_t>(face[0])];
    for (int v : face) pos.push_back(base + displacement(vertices_[static_cast<std::size_t>(v)], base));
    return pos;
}

int MeshedSubmanifold::nearest_vertex(const Point& p) const {
    int best = 0;
    double best_d = inf;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const double d = ambient_distance(vertices_[i], p);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

MeshedSubmanifold parametric_surface_mesh(const std::function<Point(double, double)>& param, std::array<double, 2> lower,
                                          std::array<double, 2> upper, int resolution,
                                          const std::function<bool(double, double)>& keep) {
    if (resolution < 1) throw std::invalid_argument("parametric_surface_mesh: resolution must be positive");
    const int m = resolution + 1;
    const auto coord = [&](int i, int axis) { return lower[axis] + (upper[axis] - lower[axis]) * i / resolution; };
    std::vector<char> kept(static_cast<std::size_t>(m * m), 1);
    if (keep)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) kept[static_cast<std::size_t>(i * m + j)] = keep(coord(i, 0), coord(j, 1));

    std::vector<MeshedSubmanifold::Face> faces;
    const auto id = [m](int i, int j) { return i * m + j; };
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            const std::array<MeshedSubmanifold::Face, 2> tris{
                MeshedSubmanifold::Face{id(i, j), id(i + 1, j), id(i + 1, j + 1)},
                MeshedSubmanifold::Face{id(i, j), id(i + 1, j + 1), id(i, j + 1)}};
            for (const auto& t : tris) {
                if (std::all_of(t.begin(), t.end(), [&](int v) { return kept[static_cast<std::size_t>(v)] != 0; }))
                    faces.push_back(t);
            }
        }
    }
    std::vector<int> remap(static_cast<std::size_t>(m * m), -1);
    std::vector<Point> vertices;
    for (auto& f : faces) {
        for (int& v : f) {
            auto& r = remap[static_cast<std::size_t>(v)];
            if (r < 0) {
                r = static_cast<int>(vertices.size());
                vertices.push_back(param(coord(v / m, 0), coord(v % m, 1)));
            }
            v = r;
        }
    }
    return MeshedSubmanifold(2, std::move(vertices), std::move(faces));
}

MeshedSubmanifold holomorphic_graph_mesh(int resolution) {
    return parametric_surface_mesh(
        [](double x, double y) {
            Point p(4);
            p << x, y, x * x - y * y, 2 * x * y;
            return p;
        },
        {-1.0, -1.0}, {1.0, 1.0}, resolution, [](double x, double y) { return x * x + y * y <= 1.0 + 1e-12; });
}

MeshedSubmanifold flat_square_mesh(int resolution) {
    return parametric_surface_mesh(
        [](double x, double y) {
            Point p(2);
            p << x, y;
            return p;
        },
        {0.0, 0.0}, {1.0, 1.0}, resolution);
}

MeshedSubmanifold torus_of_revolution_mesh(int resolution, double R, double r) {
    if (resolution < 3) throw std::invalid_argument("torus_of_revolution_mesh: resolution must be >= 3");
    if (!(R > r && r > 0)) throw std::invalid_argument("torus_of_revolution_mesh: need R > r > 0");
    const int m = resolution;
    const double step = 2 * std::acos(-1.0) / m;
    std::vector<Point> vertices;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double u = i * step, v = j * step;
            Point p(3);
            p << (R + r * std::cos(v)) * std::cos(u), (R + r * std::cos(v)) * std::sin(u), r * std::sin(v);
            vertices.push_back(p);
        }
    const auto id = [m](int i, int j) { return ((i + m) % m) * m + (j + m) % m; };
    std::vector<MeshedSubmanifold::Face> faces;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return MeshedSubmanifold(2, std::move(vertices), std::move(faces));
}

MeshedSubmanifold icosphere_mesh(int levels, double radius) {
    if (levels < 0 || !(radius > 0.0)) throw std::invalid_argument("icosphere_mesh: bad parameters");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Point> v;
    for (const auto& c : std::vector<std::array<double, 3>>{{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                                                            {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                                                            {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}}) {
        Point p(3);
        p << c[0], c[1], c[2];
        v.push_back(p.normalized());
    }
    std::vector<MeshedSubmanifold::Face> faces{
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int level = 0; level < levels; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        const auto mid = [&](int a, int b) {
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            const auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
            return midpoint[key] = static_cast<int>(v.size()) - 1;
        };
        std::vector<MeshedSubmanifold::Face> next;
        for (const auto& f : faces) {
            const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        faces = std::move(next);
    }
    for (auto& p : v) p *= radius;
    return MeshedSubmanifold(2, std::move(v), std::move(faces));
}

MeshedSubmanifold flat_torus_mesh(const Point& base, const std::vector<int>& axes, int resolution) {
    const int k = static_cast<int>(axes.size());
    if (k < 1 || resolution < 3) throw std::invalid_argument("flat_torus_mesh: need axes and resolution >= 3");
    const int n = static_cast<int>(base.size());
    for (int a : axes)
        if (a < 0 || a >= n) throw std::invalid_argument("flat_torus_mesh: axis out of range");
    const auto count = static_cast<std::size_t>(std::pow(resolution, k));
    std::vector<Point> vertices;
    vertices.reserve(count);
    const auto decode = [&](std::size_t idx) {
        std::vector<int> c(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            c[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(resolution));
            idx /= static_cast<std::size_t>(resolution);
        }
        return c;
    };
    const auto encode = [&](const std::vector<int>& c) {
        std::size_t idx = 0;
        for (int i = k - 1; i >= 0; --i)
            idx = idx * static_cast<std::size_t>(resolution) +
                  static_cast<std::size_t>((c[static_cast<std::size_t>(i)] % resolution + resolution) % resolution);
        return static_cast<int>(idx);
    };
    for (std::size_t idx = 0; idx < count; ++idx) {
        const auto c = decode(idx);
        Point p = base;
        for (int i = 0; i < k; ++i) {
            p[axes[static_cast<std::size_t>(i)]] += double(c[static_cast<std::size_t>(i)]) / resolution;
            p[axes[static_cast<std::size_t>(i)]] -= std::floor(p[axes[static_cast<std::size_t>(i)]]);
        }
        vertices.push_back(p);
    }
    std::vector<MeshedSubmanifold::Face> faces;
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (std::size_t idx = 0; idx < count; ++idx) {
        const auto corner = decode(idx);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            MeshedSubmanifold::Face f{static_cast<int>(idx)};
            auto c = corner;
            for (int step : perm) {
                ++c[static_cast<std::size_t>(step)];
                f.push_back(encode(c));
            }
            faces.push_back(std::move(f));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return MeshedSubmanifold(k, std::move(vertices), std::move(faces), true);
}

namespace {

std::vector<double> dijkstra(const MeshedSubmanifold& mesh, int p) {
    std::vector<double> dist(mesh.vertex_count(), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(p)] = 0.0;
    queue.push({0.0, p});
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[static_cast<std::size_t>(v)]) continue;
        for (const auto& e : mesh.adjacency()[static_cast<std::size_t>(v)]) {
            const double nd = d + e.length;
            if (nd < dist[static_cast<std::size_t>(e.to)]) {
                dist[static_cast<std::size_t>(e.to)] = nd;
                queue.push({nd, e.to});
            }
        }
    }
    return dist;
}

// Distance at c from a virtual source seen through edge ab, found by
// unfolding the triangle into the plane.  Infinite when the straight
// ray misses the edge.
double unfold(const Point& a, double ta, const Point& b, double tb, const Point& c) {
    const Vector u = b - a;
    const Vector w = c - a;
    const double len = u.norm();
    const double cx = w.dot(u) / len;
    const double cy = std::sqrt(std::max(0.0, w.squaredNorm() - cx * cx));
    const double xs = (ta * ta - tb * tb + len * len) / (2 * len);
    const double ys2 = ta * ta - xs * xs;
    if (ys2 < 0.0 || cy <= 0.0) return inf;
    const double ys = -std::sqrt(ys2);
    const double xi = xs + (-ys) * (cx - xs) / (cy - ys);
    if (xi < 0.0 || xi > len) return inf;
    return std::hypot(cx - xs, cy - ys);
}

std::vector<double> fast_marching(const MeshedSubmanifold& mesh, int p) {
    std::vector<double> dist(mesh.vertex_count(), inf);
    std::vector<char> alive(mesh.vertex_count(), 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(p)] = 0.0;
    queue.push({0.0, p});
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (alive[static_cast<std::size_t>(v)] || d > dist[static_cast<std::size_t>(v)]) continue;
        alive[static_cast<std::size_t>(v)] = 1;
        for (int f : mesh.vertex_faces()[static_cast<std::size_t>(v)]) {
            const auto& face = mesh.faces()[static_cast<std::size_t>(f)];
            const auto pos = mesh.face_positions(static_cast<std::size_t>(f));
            int iv = 0;
            while (face[static_cast<std::size_t>(iv)] != v) ++iv;
            for (int ic = 0; ic < 3; ++ic) {
                const int c = face[static_cast<std::size_t>(ic)];
                if (ic == iv || alive[static_cast<std::size_t>(c)]) continue;
                const int iw = 3 - iv - ic;
                const int w = face[static_cast<std::size_t>(iw)];
                double cand = d + (pos[static_cast<std::size_t>(ic)] - pos[static_cast<std::size_t>(iv)]).norm();
                if (alive[static_cast<std::size_t>(w)]) {
                    cand = std::min(cand, unfold(pos[static_cast<std::size_t>(iv)], d, pos[static_cast<std::size_t>(iw)],
                                                 dist[static_cast<std::size_t>(w)], pos[static_cast<std::size_t>(ic)]));
                }
                if (cand < dist[static_cast<std::size_t>(c)]) {
                    dist[static_cast<std::size_t>(c)] = cand;
                    queue.push({cand, c});
                }
            }
        }
    }
    return dist;
}

// Subsimplices by edge midpoints: 2 segments, 4 triangles, or 8 tetrahedra.
const std::vector<std::vector<int>>& children(int k) {
    // Vertices 0..k are the corners; midpoints follow in the order of mid_pairs(k).
    static const std::vector<std::vector<int>> seg{{0, 2}, {2, 1}};
    static const std::vector<std::vector<int>> tri{{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}};
    // Midpoint ids: 4=m01 5=m02 6=m03 7=m12 8=m13 9=m23.
    static const std::vector<std::vector<int>> tet{{0, 4, 5, 6}, {4, 1, 7, 8}, {5, 7, 2, 9}, {6, 8, 9, 3},
                                                   {4, 5, 6, 8}, {4, 5, 7, 8}, {5, 6, 8, 9}, {5, 7, 8, 9}};
    static const std::vector<std::vector<int>> none;
    switch (k) {
        case 1: return seg;
        case 2: return tri;
        case 3: return tet;
        default: return none;
    }
}

std::vector<std::pair<int, int>> mid_pairs(int k) {
    switch (k) {
        case 1: return {{0, 1}};
        case 2: return {{0, 1}, {1, 2}, {2, 0}};
        case 3: return {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        default: return {};
    }
}

struct BallAccumulator {
    double r;
    int levels;
    // Returns the value at a new midpoint; extrinsic evaluates, intrinsic averages.
    std::function<double(const Point&, double, double)> midpoint_value;
    bool extrinsic;
    BallMeasure out;

    void visit(const std::vector<Point>& pos, const std::vector<double>& val, double vol, int level) {
        const double lo = *std::min_element(val.begin(), val.end());
        const double hi = *std::max_element(val.begin(), val.end());
        if (hi <= r) {
            out.volume += vol;
            return;
        }
        double slack = 0.0;
        if (extrinsic)
            for (std::size_t i = 0; i < pos.size(); ++i)
                for (std::size_t j = i + 1; j < pos.size(); ++j) slack = std::max(slack, (pos[i] - pos[j]).norm());
        if (lo - slack > r) return;
        const int k = static_cast<int>(pos.size()) - 1;
        if (level >= levels || children(k).empty()) {
            const auto inside = std::count_if(val.begin(), val.end(), [&](double d) { return d <= r; });
            out.volume += vol * static_cast<double>(inside) / static_cast<double>(pos.size());
            out.straddle_volume += vol;
            return;
        }
        std::vector<Point> p = pos;
        std::vector<double> v = val;
        for (const auto& [a, b] : mid_pairs(k)) {
            const Point m = 0.5 * (pos[static_cast<std::size_t>(a)] + pos[static_cast<std::size_t>(b)]);
            v.push_back(midpoint_value(m, val[static_cast<std::size_t>(a)], val[static_cast<std::size_t>(b)]));
            p.push_back(m);
        }
        const double child_vol = vol / std::pow(2.0, k);
        std::vector<Point> cp(pos.size());
        std::vector<double> cv(pos.size());
        for (const auto& child : children(k)) {
            for (std::size_t i = 0; i < child.size(); ++i) {
                cp[i] = p[static_cast<std::size_t>(child[i])];
                cv[i] = v[static_cast<std::size_t>(child[i])];
            }
            visit(cp, cv, child_vol, level + 1);
        }
    }
};

}  // namespace

std::vector<double> intrinsic_distances(const MeshedSubmanifold& mesh, int p, DistanceMethod method) {
    if (p < 0 || static_cast<std::size_t>(p) >= mesh.vertex_count())
        throw std::out_of_range("intrinsic_distances: source vertex out of range");
    if (method == DistanceMethod::FastMarching) {
        if (mesh.simplex_dim() != 2) throw std::invalid_argument("fast marching needs a triangle mesh");
        return fast_marching(mesh, p);
    }
    return dijkstra(mesh, p);
}

BallMeasure extrinsic_ball_volume(const MeshedSubmanifold& mesh, const Point& p, double r, const BallOptions& opt) {
    if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
    if (p.size() != mesh.ambient_dim()) throw std::invalid_argument("ball centre has the wrong dimension");
    BallAccumulator acc{r, opt.refine_levels,
                        [&](const Point& x, double, double) { return mesh.ambient_distance(x, p); }, true, {}};
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        const auto pos = mesh.face_positions(f);
        std::vector<double> val;
        for (const auto& x : pos) val.push_back(mesh.ambient_distance(x, p));
        acc.visit(pos, val, mesh.face_area(f), 0);
    }
    return acc.out;
}

BallMeasure ball_volume_from_distances(const MeshedSubmanifold& mesh, const std::vector<double>& distances, double r,
                                       const BallOptions& opt) {
    if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
    if (distances.size() != mesh.vertex_count()) throw std::invalid_argument("one distance per vertex expected");
    BallAccumulator acc{r, opt.refine_levels, [](const Point&, double a, double b) { return 0.5 * (a + b); }, false, {}};
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        std::vector<double> val;
        for (int v : mesh.faces()[f]) val.push_back(distances[static_cast<std::size_t>(v)]);
        acc.visit(mesh.face_positions(f), val, mesh.face_area(f), 0);
    }
    return acc.out;
}

BallMeasure intrinsic_ball_volume(const MeshedSubmanifold& mesh, int p, double r, DistanceMethod method,
                                  const BallOptions& opt) {
    return ball_volume_from_distances(mesh, intrinsic_distances(mesh, p, method), r, opt);
}

BallComparison verify_ball_comparison(const MeshedSubmanifold& mesh, int p, double r, double K, BallMode mode,
                                      double allowance, DistanceMethod method) {
    if (p < 0 || static_cast<std::size_t>(p) >= mesh.vertex_count())
        throw std::out_of_range("verify_ball_comparison: vertex out of range");
    BallMeasure m;
    if (mode == BallMode::Extrinsic) {
        m = extrinsic_ball_volume(mesh, mesh.vertices()[static_cast<std::size_t>(p)], r);
    } else {
        if (method == DistanceMethod::FastMarching && mesh.simplex_dim() != 2) method = DistanceMethod::EdgeGraph;
        m = intrinsic_ball_volume(mesh, p, r, method);
    }
    BallComparison out;
    out.measured = m.volume;
    out.straddle_volume = m.straddle_volume;
    out.model = space_form_ball_volume(K, mesh.simplex_dim(), r);
    out.margin = out.measured - out.model;
    out.allowance = allowance < 0.0 ? m.straddle_volume : allowance;
    out.pass = out.margin >= -out.allowance;
    return out;
}

double graph_diameter(const MeshedSubmanifold& mesh, const std::vector<int>& sources, DistanceMethod method) {
    std::vector<int> src = sources;
    if (src.empty()) {
        src.resize(mesh.vertex_count());
        std::iota(src.begin(), src.end(), 0);
    }
    double best = 0.0;
    for (int s : src) {
        for (double d : intrinsic_distances(mesh, s, method))
            if (std::isfinite(d)) best = std::max(best, d);
    }
    return best;
}

MeshedSubmanifold read_mesh(std::istream& in) {
    std::string line;
    int line_no = 0;
    int n = -1, k = -1;
    bool periodic = false;
    std::vector<Point> vertices;
    std::vector<MeshedSubmanifold::Face> faces;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "mesh") {
            if (n >= 0) throw ParseError(line_no, "duplicate mesh header");
            if (!(ss >> n >> k) || n < 1 || k < 1 || k > n) throw ParseError(line_no, "expected 'mesh <n> <k> [periodic]'");
            std::string flag;
            if (ss >> flag) {
                if (flag != "periodic") throw ParseError(line_no, "unknown mesh flag '" + flag + "'");
                periodic = true;
            }
        } else if (n < 0) {
            throw ParseError(line_no, "missing 'mesh <n> <k>' header");
        } else if (tag == "v") {
            Point p(n);
            for (int i = 0; i < n; ++i)
                if (!(ss >> p[i])) throw ParseError(line_no, "vertex needs " + std::to_string(n) + " coordinates");
            vertices.push_back(p);
        } else if (tag == "f") {
            MeshedSubmanifold::Face f(static_cast<std::size_t>(k) + 1);
            for (auto& v : f)
                if (!(ss >> v)) throw ParseError(line_no, "face needs " + std::to_string(k + 1) + " vertex indices");
            for (int v : f)
                if (v < 0 || static_cast<std::size_t>(v) >= vertices.size())
                    throw ParseError(line_no, "face refers to undefined vertex " + std::to_string(v));
            faces.push_back(std::move(f));
        } else {
            throw ParseError(line_no, "unknown record '" + tag + "'");
        }
        std::string extra;
        if (ss >> extra) throw ParseError(line_no, "trailing token '" + extra + "'");
    }
    if (n < 0) throw ParseError(line_no, "empty mesh file");
    try {
        return MeshedSubmanifold(k, std::move(vertices), std::move(faces), periodic);
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
    }
}

MeshedSubmanifold read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file " + path);
    return read_mesh(in);
}

void write_mesh(std::ostream& out, const MeshedSubmanifold& mesh) {
    out << "mesh " << mesh.ambient_dim() << ' ' << mesh.simplex_dim() << (mesh.periodic() ? " periodic" : "") << '\n';
    const auto old = out.precision(17);
    for (const auto& v : mesh.vertices()) {
        out << 'v';
        for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << v[i];
        out << '\n';
    }
    for (const auto& f : mesh.faces()) {
        out << 'f';
        for (int v : f) out << ' ' << v;
        out << '\n';
    }
    out.precision(old);
}

}  // namespace calib
