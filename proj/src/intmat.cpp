#include "calib/intmat.hpp"

#include <cstdlib>
#include <stdexcept>

namespace calib {

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Position of the smallest nonzero |S(i,j)| with i, j >= t, or (-1,-1).
std::pair<Eigen::Index, Eigen::Index> smallest_entry(const IntMatrix& s, Eigen::Index t) {
    std::pair<Eigen::Index, Eigen::Index> best{-1, -1};
    long long best_abs = 0;
    for (Eigen::Index j = t; j < s.cols(); ++j) {
        for (Eigen::Index i = t; i < s.rows(); ++i) {
            const long long v = std::llabs(s(i, j));
            if (v != 0 && (best_abs == 0 || v < best_abs)) {
                best_abs = v;
                best = {i, j};
            }
        }
    }
    return best;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    SmithForm out;
    out.S = a;
    out.U = IntMatrix::Identity(m, m);
    out.V = IntMatrix::Identity(n, n);
    IntMatrix& s = out.S;

    Eigen::Index t = 0;
    for (; t < std::min(m, n); ++t) {
        if (smallest_entry(s, t).first < 0) break;
        for (;;) {
            const auto [pi, pj] = smallest_entry(s, t);
            s.row(t).swap(s.row(pi));
            out.U.row(t).swap(out.U.row(pi));
            s.col(t).swap(s.col(pj));
            out.V.col(t).swap(out.V.col(pj));

            bool clean = true;
            const long long p = s(t, t);
            for (Eigen::Index i = t + 1; i < m; ++i) {
                const long long q = s(i, t) / p;
                if (q != 0) {
                    s.row(i) -= q * s.row(t);
                    out.U.row(i) -= q * out.U.row(t);
                }
                clean = clean && s(i, t) == 0;
            }
            for (Eigen::Index j = t + 1; j < n; ++j) {
                const long long q = s(t, j) / p;
                if (q != 0) {
                    s.col(j) -= q * s.col(t);
                    out.V.col(j) -= q * out.V.col(t);
                }
                clean = clean && s(t, j) == 0;
            }
            if (!clean) continue;

            // Enforce divisibility of the remaining block by the pivot.
            bool divisible = true;
            for (Eigen::Index i = t + 1; i < m && divisible; ++i) {
                for (Eigen::Index j = t + 1; j < n; ++j) {
                    if (s(i, j) % p != 0) {
                        s.row(t) += s.row(i);
                        out.U.row(t) += out.U.row(i);
                        divisible = false;
                        break;
                    }
                }
            }
            if (divisible) break;
        }
        if (s(t, t) < 0) {
            s.row(t) *= -1;
            out.U.row(t) *= -1;
        }
    }
    out.rank = static_cast<int>(t);
    return out;
}

HermiteForm hermite_normal_form(const IntMatrix& a) {
    const Eigen::Index m = a.rows();
    HermiteForm out;
    out.H = a;
    out.W = IntMatrix::Identity(m, m);
    IntMatrix& h = out.H;
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < a.cols() && r < m; ++c) {
        for (;;) {
            Eigen::Index best = -1;
            for (Eigen::Index i = r; i < m; ++i) {
                if (h(i, c) != 0 && (best < 0 || std::llabs(h(i, c)) < std::llabs(h(best, c)))) best = i;
            }
            if (best < 0) break;
            h.row(r).swap(h.row(best));
            out.W.row(r).swap(out.W.row(best));
            bool done = true;
            for (Eigen::Index i = r + 1; i < m; ++i) {
                const long long q = h(i, c) / h(r, c);
                if (q != 0) {
                    h.row(i) -= q * h.row(r);
                    out.W.row(i) -= q * out.W.row(r);
                }
                done = done && h(i, c) == 0;
            }
            if (done) break;
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) {
            h.row(r) *= -1;
            out.W.row(r) *= -1;
        }
        for (Eigen::Index i = 0; i < r; ++i) {
            const long long q = floor_div(h(i, c), h(r, c));
            if (q != 0) {
                h.row(i) -= q * h.row(r);
                out.W.row(i) -= q * out.W.row(r);
            }
        }
        out.pivot_columns.push_back(static_cast<int>(c));
        ++r;
    }
    return out;
}

long long determinant(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    const Eigen::Index n = a.rows();
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> m = a.cast<__int128>();
    __int128 prev = 1;
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            Eigen::Index swap_row = -1;
            for (Eigen::Index i = k + 1; i < n; ++i) {
                if (m(i, k) != 0) {
                    swap_row = i;
                    break;
                }
            }
            if (swap_row < 0) return 0;
            m.row(k).swap(m.row(swap_row));
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            for (Eigen::Index j = k + 1; j < n; ++j) {
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
            }
        }
        prev = m(k, k);
    }
    return sign * static_cast<long long>(m(n - 1, n - 1));
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
    const long long det = determinant(a);
    if (det != 1 && det != -1) {
        throw std::invalid_argument("matrix is not unimodular (det = " + std::to_string(det) + ")");
    }
    // A = U^{-1} S V^{-1} with S = diag(+-1), so A^{-1} = V S U.
    const SmithForm snf = smith_normal_form(a);
    return snf.V * snf.S * snf.U;
}

IntMatrix integer_kernel(const IntMatrix& a) {
    const SmithForm snf = smith_normal_form(a);
    return snf.V.rightCols(a.cols() - snf.rank);
}

std::vector<int> rref(std::vector<RatVector>& rows) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    const std::size_t n = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c].numerator() == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        const Rational inv = 1 / rows[r][c];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].numerator() == 0) continue;
            const Rational f = rows[i][c];
            for (std::size_t j = 0; j < n; ++j) rows[i][j] -= f * rows[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

Rational frac_part(const Rational& q) {
    const long long fl = floor_div(q.numerator(), q.denominator());
    return q - fl;
}

bool is_integer(const Rational& q) { return q.denominator() == 1; }

RatVector mul(const IntMatrix& a, const RatVector& x) {
    if (static_cast<std::size_t>(a.cols()) != x.size()) throw std::invalid_argument("mul: shape mismatch");
    RatVector out(static_cast<std::size_t>(a.rows()), Rational(0));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (a(i, j) != 0) out[static_cast<std::size_t>(i)] += a(i, j) * x[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

RatVector reduce_mod1(RatVector x) {
    for (auto& v : x) v = frac_part(v);
    return x;
}

}  // namespace calib
