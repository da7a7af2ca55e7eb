#include "calib/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include <boost/pending/disjoint_sets.hpp>

namespace calib {

namespace {

// Union-find over a dense index range; only marked entries are ever touched.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : rank_(n, 0), parent_(n), sets_(rank_.data(), parent_.data()) {}
    void make(std::size_t i) { sets_.make_set(i); }
    void join(std::size_t a, std::size_t b) { sets_.union_set(a, b); }
    std::size_t find(std::size_t i) { return sets_.find_set(i); }

private:
    std::vector<std::size_t> rank_;
    std::vector<std::size_t> parent_;
    boost::disjoint_sets<std::size_t*, std::size_t*> sets_;
};

ComponentReport summarize(UnionFind& uf, const std::vector<std::size_t>& marked) {
    std::map<std::size_t, std::size_t> sizes;
    for (std::size_t c : marked) ++sizes[uf.find(c)];
    ComponentReport r;
    r.count = static_cast<int>(sizes.size());
    r.marked_cells = marked.size();
    for (const auto& [root, size] : sizes) r.sizes.push_back(size);
    std::sort(r.sizes.rbegin(), r.sizes.rend());
    return r;
}

}  // namespace

CubicalLevelSet::CubicalLevelSet(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd lower,
                                 Eigen::VectorXd upper, std::vector<int> resolution)
    : lower_(std::move(lower)), upper_(std::move(upper)), resolution_(std::move(resolution)) {
    const auto n = static_cast<Eigen::Index>(resolution_.size());
    if (n < 1 || lower_.size() != n || upper_.size() != n) throw std::invalid_argument("level set box has the wrong shape");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (resolution_[static_cast<std::size_t>(i)] < 2) throw std::invalid_argument("level set resolution must be >= 2");
        if (!(upper_[i] > lower_[i])) throw std::invalid_argument("level set box is empty");
    }
    std::size_t count = 1;
    for (int r : resolution_) count *= static_cast<std::size_t>(r) + 1;
    signs_.resize(count);
    Eigen::VectorXd x(n);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t v = 0; v < count; ++v) {
        for (Eigen::Index i = 0; i < n; ++i)
            x[i] = lower_[i] + (upper_[i] - lower_[i]) * idx[static_cast<std::size_t>(i)] / resolution_[static_cast<std::size_t>(i)];
        signs_[v] = f(x) >= 0.0 ? 1 : -1;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (++idx[i] <= resolution_[i]) break;
            idx[i] = 0;
        }
    }
}

CubicalLevelSet::CubicalLevelSet(const RealPolynomial& f, Eigen::VectorXd lower, Eigen::VectorXd upper, int resolution)
    : CubicalLevelSet([&f](const Eigen::VectorXd& x) { return f(x); }, std::move(lower), std::move(upper),
                      std::vector<int>(static_cast<std::size_t>(f.variables()), resolution)) {}

std::size_t CubicalLevelSet::cell_count() const {
    std::size_t count = 1;
    for (int r : resolution_) count *= static_cast<std::size_t>(r);
    return count;
}

std::vector<std::size_t> CubicalLevelSet::cell_coords(std::size_t cell) const {
    std::vector<std::size_t> c(resolution_.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = cell % static_cast<std::size_t>(resolution_[i]);
        cell /= static_cast<std::size_t>(resolution_[i]);
    }
    return c;
}

bool CubicalLevelSet::cell_marked(std::size_t cell) const {
    const auto c = cell_coords(cell);
    const std::size_t n = c.size();
    bool pos = false, neg = false;
    for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
        std::size_t v = 0, stride = 1;
        for (std::size_t i = 0; i < n; ++i) {
            v += (c[i] + ((corner >> i) & 1U)) * stride;
            stride *= static_cast<std::size_t>(resolution_[i]) + 1;
        }
        (signs_[v] > 0 ? pos : neg) = true;
        if (pos && neg) return true;
    }
    return false;
}

Eigen::VectorXd CubicalLevelSet::cell_center(std::size_t cell) const {
    const auto c = cell_coords(cell);
    Eigen::VectorXd x(dim());
    for (int i = 0; i < dim(); ++i)
        x[i] = lower_[i] + (upper_[i] - lower_[i]) * (double(c[static_cast<std::size_t>(i)]) + 0.5) / resolution_[static_cast<std::size_t>(i)];
    return x;
}

ComponentReport component_count(const CubicalLevelSet& grid) {
    const std::size_t cells = grid.cell_count();
    std::vector<char> marked(cells, 0);
    std::vector<std::size_t> list;
    for (std::size_t c = 0; c < cells; ++c)
        if (grid.cell_marked(c)) {
            marked[c] = 1;
            list.push_back(c);
        }
    UnionFind uf(cells);
    for (std::size_t c : list) uf.make(c);
    const auto& res = grid.resolution();
    for (std::size_t c : list) {
        std::size_t stride = 1, rest = c;
        for (std::size_t i = 0; i < res.size(); ++i) {
            const auto coord = rest % static_cast<std::size_t>(res[i]);
            rest /= static_cast<std::size_t>(res[i]);
            if (coord + 1 < static_cast<std::size_t>(res[i]) && marked[c + stride]) uf.join(c, c + stride);
            stride *= static_cast<std::size_t>(res[i]);
        }
    }
    return summarize(uf, list);
}

ComponentReport component_count(const RealPolynomial& f, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                int resolution) {
    if (resolution < 16) throw std::invalid_argument("component_count needs resolution >= 16");
    return component_count(CubicalLevelSet(f, lower, upper, resolution));
}

std::vector<StabilityRow> viro_stability_scan(const RealPolynomial& p, const RealPolynomial& q, const RealPolynomial& h,
                                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                              const std::vector<double>& eps_values, int coarse, int fine) {
    std::vector<StabilityRow> rows;
    for (double eps : eps_values) {
        const RealPolynomial f = viro_perturb(p, q, h, eps);
        rows.push_back({eps, component_count(f, lower, upper, coarse).count, component_count(f, lower, upper, fine).count});
    }
    return rows;
}

void write_marked_cells(std::ostream& out, const CubicalLevelSet& grid) {
    const auto old = out.precision(10);
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        if (!grid.cell_marked(c)) continue;
        const auto x = grid.cell_center(c);
        for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
        out << '\n';
    }
    out.precision(old);
}

SphereCurveReport sphere_circle_count(const RealPolynomial& h, int resolution) {
    if (resolution < 16) throw std::invalid_argument("sphere_circle_count needs resolution >= 16");
    for (int v : h.support())
        if (v >= 3) throw std::invalid_argument("sphere_circle_count: h depends on more than 3 variables");
    std::vector<int> slots(static_cast<std::size_t>(h.variables()));
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = std::min<int>(static_cast<int>(i), 2);
    const RealPolynomial h3 = h.embedded(3, slots);

    const int rows = resolution / 2;  // theta cells
    const int cols = resolution;      // phi cells, periodic
    const double pi = std::acos(-1.0);
    const auto point = [&](double theta, double phi) {
        return Eigen::Vector3d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
    };
    std::vector<std::int8_t> sign(static_cast<std::size_t>((rows + 1) * cols));
    for (int i = 0; i <= rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const Eigen::VectorXd p = point(pi * i / rows, 2 * pi * j / cols);
            sign[static_cast<std::size_t>(i * cols + j)] = h3(p) >= 0.0 ? 1 : -1;
        }
    const auto cell = [cols](int i, int j) { return static_cast<std::size_t>(i * cols + (j + cols) % cols); };
    std::vector<char> marked(static_cast<std::size_t>(rows * cols), 0);
    std::vector<std::size_t> list;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const int s = sign[cell(i, j)] + sign[cell(i + 1, j)] + sign[cell(i, j + 1)] + sign[cell(i + 1, j + 1)];
            if (s != 4 && s != -4) {
                marked[cell(i, j)] = 1;
                list.push_back(cell(i, j));
            }
        }
    UnionFind uf(marked.size());
    for (std::size_t c : list) uf.make(c);
    std::size_t first_top = marked.size(), first_bottom = marked.size();
    for (std::size_t c : list) {
        const int i = static_cast<int>(c) / cols, j = static_cast<int>(c) % cols;
        if (marked[cell(i, j + 1)]) uf.join(c, cell(i, j + 1));
        if (i + 1 < rows && marked[cell(i + 1, j)]) uf.join(c, cell(i + 1, j));
        // Cells around a pole all touch it.
        if (i == 0) first_top == marked.size() ? void(first_top = c) : uf.join(c, first_top);
        if (i == rows - 1) first_bottom == marked.size() ? void(first_bottom = c) : uf.join(c, first_bottom);
    }
    const ComponentReport comps = summarize(uf, list);

    SphereCurveReport r;
    r.count = comps.count;
    r.marked_cells = list.size();
    double min_t = std::numeric_limits<double>::infinity(), max_t = 0.0;
    for (std::size_t c : list) {
        const int i = static_cast<int>(c) / cols, j = static_cast<int>(c) % cols;
        const Eigen::Vector3d n = point(pi * (i + 0.5) / rows, 2 * pi * (j + 0.5) / cols);
        const Eigen::Vector3d g = h3.gradient(n);
        const double t = (g - g.dot(n) * n).norm();
        min_t = std::min(min_t, t);
        max_t = std::max(max_t, t);
    }
    r.min_tangential_gradient = list.empty() ? 0.0 : min_t;
    r.transversal = list.empty() || min_t >= 4.0 * (pi / rows) * max_t;
    return r;
}

RealPolynomial rotate_polynomial(const RealPolynomial& h, const Eigen::Matrix3d& rotation) {
    if (h.variables() != 3) throw std::invalid_argument("rotate_polynomial works on 3 variables");
    std::vector<RealPolynomial> lin;
    for (int i = 0; i < 3; ++i) {
        RealPolynomial l(3);
        for (int j = 0; j < 3; ++j) l += rotation(i, j) * RealPolynomial::variable(3, j);
        lin.push_back(l);
    }
    RealPolynomial out(3);
    for (const auto& [e, c] : h.terms()) {
        RealPolynomial term = RealPolynomial::constant(3, c);
        for (int i = 0; i < 3; ++i) term = term * lin[static_cast<std::size_t>(i)].pow(e[static_cast<std::size_t>(i)]);
        out += term;
    }
    return out;
}

}  // namespace calib
