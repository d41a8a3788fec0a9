#pragma once

// Dense real linear algebra and a small two-phase simplex solver.
// Everything here is self-contained; the rest of the library builds on it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gramlax {

class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A structural error means the input violated a mathematical property the
// operation relies on (e.g. a sign pattern), not a malformed argument.
class structural_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class internal_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    double rank_tol = 1e-10;      // singular-value cutoff, relative with absolute floor
    double lp_pivot_tol = 1e-9;   // simplex pivot / feasibility tolerance
    double residual_tol = 1e-8;   // generic residual acceptance
    double psd_tol = 1e-9;        // eigenvalue negativity allowance, scaled by trace

    void validate() const {
        if (rank_tol <= 0 || lp_pivot_tol <= 0 || residual_tol <= 0 || psd_tol <= 0)
            throw input_error("tolerances must be strictly positive");
    }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Mat: dense row-major matrix. Zero-width matrices are allowed so that an
// empty nullspace basis has a natural representation.
// ---------------------------------------------------------------------------

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;  // row-major, size rows*cols

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {
        if (r < 0 || c < 0) throw input_error("matrix dimensions must be non-negative");
    }

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat from_rows(const std::vector<std::vector<double>>& rows_in) {
        if (rows_in.empty() || rows_in[0].empty())
            throw input_error("matrix must have at least one row and one column");
        Mat m(static_cast<int>(rows_in.size()), static_cast<int>(rows_in[0].size()));
        for (int i = 0; i < m.rows; ++i) {
            if (static_cast<int>(rows_in[i].size()) != m.cols)
                throw input_error("ragged rows in matrix literal");
            for (int j = 0; j < m.cols; ++j) m(i, j) = rows_in[i][j];
        }
        m.check_finite();
        return m;
    }

    static Mat from_cols(const std::vector<std::vector<double>>& cols_in) {
        if (cols_in.empty() || cols_in[0].empty())
            throw input_error("matrix must have at least one row and one column");
        Mat m(static_cast<int>(cols_in[0].size()), static_cast<int>(cols_in.size()));
        for (int j = 0; j < m.cols; ++j) {
            if (static_cast<int>(cols_in[j].size()) != m.rows)
                throw input_error("ragged columns in matrix literal");
            for (int i = 0; i < m.rows; ++i) m(i, j) = cols_in[j][i];
        }
        m.check_finite();
        return m;
    }

    void check_finite() const {
        for (double x : a)
            if (!std::isfinite(x)) throw input_error("matrix entries must be finite");
    }

    std::vector<double> col(int j) const {
        std::vector<double> v(rows);
        for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }

    std::vector<double> row(int i) const {
        std::vector<double> v(cols);
        for (int j = 0; j < cols; ++j) v[j] = (*this)(i, j);
        return v;
    }
};

inline Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

inline Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw input_error("matrix product dimension mismatch");
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double xik = x(i, k);
            if (xik == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
        }
    return z;
}

inline std::vector<double> mat_vec(const Mat& m, const std::vector<double>& v) {
    if (m.cols != static_cast<int>(v.size())) throw input_error("matrix-vector dimension mismatch");
    std::vector<double> r(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

// Largest absolute entry; 0 for empty matrices.
inline double max_abs(const Mat& m) {
    double r = 0.0;
    for (double x : m.a) r = std::max(r, std::abs(x));
    return r;
}

inline double max_abs(const std::vector<double>& v) {
    double r = 0.0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

inline double trace(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < std::min(m.rows, m.cols); ++i) s += m(i, i);
    return s;
}

// ---------------------------------------------------------------------------
// Singular value decomposition by one-sided Jacobi rotations. Accurate and
// simple for the small dense matrices this library works with.
// ---------------------------------------------------------------------------

struct Svd {
    Mat u;                      // m x n, columns orthonormal where sigma > 0
    std::vector<double> sigma;  // descending, size n
    Mat v;                      // n x n orthogonal, M = U diag(sigma) V^T
};

inline Svd svd_jacobi(Mat m) {
    const int nr = m.rows, nc = m.cols;
    Mat v = Mat::identity(nc);
    const double conv = 1e-15;

    for (int sweep = 0; sweep < 64; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < nc - 1; ++p) {
            for (int q = p + 1; q < nc; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (int i = 0; i < nr; ++i) {
                    app += m(i, p) * m(i, p);
                    aqq += m(i, q) * m(i, q);
                    apq += m(i, p) * m(i, q);
                }
                if (std::abs(apq) <= conv * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < nr; ++i) {
                    const double xp = m(i, p), xq = m(i, q);
                    m(i, p) = c * xp - s * xq;
                    m(i, q) = s * xp + c * xq;
                }
                for (int i = 0; i < nc; ++i) {
                    const double xp = v(i, p), xq = v(i, q);
                    v(i, p) = c * xp - s * xq;
                    v(i, q) = s * xp + c * xq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(nc);
    for (int j = 0; j < nc; ++j) {
        double s = 0;
        for (int i = 0; i < nr; ++i) s += m(i, j) * m(i, j);
        sigma[j] = std::sqrt(s);
    }

    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return sigma[i] > sigma[j]; });

    Svd out;
    out.u = Mat(nr, nc);
    out.v = Mat(nc, nc);
    out.sigma.resize(nc);
    for (int j = 0; j < nc; ++j) {
        const int src = order[j];
        out.sigma[j] = sigma[src];
        const double inv = sigma[src] > 0 ? 1.0 / sigma[src] : 0.0;
        for (int i = 0; i < nr; ++i) out.u(i, j) = m(i, src) * inv;
        for (int i = 0; i < nc; ++i) out.v(i, j) = v(i, src);
    }
    return out;
}

// Relative threshold with an absolute floor; certificates mix O(1) and
// O(eps) entries, so a purely relative cutoff would misjudge tiny matrices.
inline double rank_threshold(double sigma_max, const Tolerances& tol) {
    return tol.rank_tol * std::max(sigma_max, 1.0);
}

inline int numeric_rank(const Mat& m, const Tolerances& tol = {}) {
    if (m.cols == 0 || m.rows == 0) return 0;
    const Svd s = svd_jacobi(m);
    const double thr = rank_threshold(s.sigma[0], tol);
    int r = 0;
    for (double x : s.sigma)
        if (x > thr) ++r;
    return r;
}

// Orthonormal basis of the column span. Input error on (numerically) zero input.
inline Mat orthonormal_basis(const Mat& m, const Tolerances& tol = {}) {
    if (m.cols == 0) throw input_error("orthonormal_basis: empty input");
    const Svd s = svd_jacobi(m);
    const double thr = rank_threshold(s.sigma[0], tol);
    int r = 0;
    for (double x : s.sigma)
        if (x > thr) ++r;
    if (r == 0) throw input_error("orthonormal_basis: input has rank 0");
    Mat b(m.rows, r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < m.rows; ++i) b(i, j) = s.u(i, j);
    return b;
}

// Orthonormal basis of {x : Mx = 0}. May be zero-width.
inline Mat nullspace(const Mat& m, const Tolerances& tol = {}) {
    if (m.cols == 0) return Mat(0, 0);
    const Svd s = svd_jacobi(m);
    const double thr = rank_threshold(s.sigma[0], tol);
    int r = 0;
    for (double x : s.sigma)
        if (x > thr) ++r;
    Mat b(m.cols, m.cols - r);
    for (int j = r; j < m.cols; ++j)
        for (int i = 0; i < m.cols; ++i) b(i, j - r) = s.v(i, j);
    return b;
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver: Householder tridiagonalization followed by QL with
// implicit shifts. Returns the full spectrum in ascending order.
// ---------------------------------------------------------------------------

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Mat vectors;                 // columns are eigenvectors, M = V diag V^T
};

namespace detail {

inline void tred2(Mat& z, std::vector<double>& d, std::vector<double>& e) {
    const int n = z.rows;
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) z(j, i) = z(i, j) = 0.0;
    }
}

inline double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

inline void tql2(Mat& z, std::vector<double>& d, std::vector<double>& e) {
    const int n = z.rows;
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter == 50) throw internal_error("symmetric eigensolver failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

inline SymmetricEigen symmetric_eigen(const Mat& m, const Tolerances& tol = {}) {
    if (m.rows != m.cols || m.rows == 0) throw input_error("symmetric_eigen: matrix must be square");
    double asym = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = i + 1; j < m.cols; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    if (asym > tol.residual_tol * std::max(1.0, max_abs(m)))
        throw input_error("symmetric_eigen: matrix is not symmetric within tolerance");

    const int n = m.rows;
    Mat z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = 0.5 * (m(i, j) + m(j, i));

    std::vector<double> d(n, 0.0), e(n, 0.0);
    detail::tred2(z, d, e);
    detail::tql2(z, d, e);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (int i = 0; i < n; ++i) out.vectors(i, j) = z(i, order[j]);
    }
    return out;
}

inline std::vector<double> symmetric_eigenvalues(const Mat& m, const Tolerances& tol = {}) {
    return symmetric_eigen(m, tol).values;
}

// ---------------------------------------------------------------------------
// Linear programming: minimize c.x subject to row constraints and variable
// bounds. Dense two-phase simplex with Bland's anti-cycling rule; instances
// in this library are tiny, so simplicity wins over sparse machinery.
// ---------------------------------------------------------------------------

enum class RowSense { LE, EQ, GE };
enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpProblem {
    std::vector<double> objective;  // minimize
    Mat constraints;                // m x n
    std::vector<double> rhs;        // m
    std::vector<RowSense> senses;   // m
    std::vector<double> lower;      // n, -inf allowed
    std::vector<double> upper;      // n, +inf allowed

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rhs.size()); }

    void validate() const {
        const int n = num_vars(), mr = num_rows();
        if (n == 0) throw input_error("lp: no variables");
        if (constraints.rows != mr || (mr > 0 && constraints.cols != n))
            throw input_error("lp: constraint matrix dimensions inconsistent");
        if (static_cast<int>(senses.size()) != mr) throw input_error("lp: senses size mismatch");
        if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n)
            throw input_error("lp: bounds size mismatch");
        for (int j = 0; j < n; ++j)
            if (lower[j] > upper[j]) throw input_error("lp: lower bound exceeds upper bound");
    }
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;           // when Optimal
    std::vector<double> x;            // when Optimal, original variables
    std::vector<double> ray;          // when Unbounded: direction with c.ray < 0
    double infeasibility = 0.0;       // phase-1 optimum when Infeasible
    // Final vertex basis over the standard form, for independent re-checking:
    std::vector<int> basis_cols;      // standard-form column per kept row
    std::vector<int> basis_rows;      // indices of kept standard-form rows
};

// Standard form: A x = b, x >= 0, b >= 0, minimize c.x + obj_offset.
struct LpStandardForm {
    Mat a;
    std::vector<double> b;
    std::vector<double> c;
    double obj_offset = 0.0;

    // Original variable j maps to: kind 0 -> off + x[col0]; kind 1 -> off - x[col0];
    // kind 2 -> x[col0] - x[col1].
    struct VarMap {
        int kind = 0;
        int col0 = -1, col1 = -1;
        double off = 0.0;
    };
    std::vector<VarMap> vmap;
    int num_structural = 0;  // columns before slack/surplus

    std::vector<double> recover(const std::vector<double>& xstd) const {
        std::vector<double> x(vmap.size());
        for (size_t j = 0; j < vmap.size(); ++j) {
            const VarMap& vm = vmap[j];
            if (vm.kind == 0) x[j] = vm.off + xstd[vm.col0];
            else if (vm.kind == 1) x[j] = vm.off - xstd[vm.col0];
            else x[j] = xstd[vm.col0] - xstd[vm.col1];
        }
        return x;
    }

    std::vector<double> recover_direction(const std::vector<double>& dstd) const {
        std::vector<double> d(vmap.size());
        for (size_t j = 0; j < vmap.size(); ++j) {
            const VarMap& vm = vmap[j];
            if (vm.kind == 0) d[j] = dstd[vm.col0];
            else if (vm.kind == 1) d[j] = -dstd[vm.col0];
            else d[j] = dstd[vm.col0] - dstd[vm.col1];
        }
        return d;
    }
};

inline LpStandardForm lp_standardize(const LpProblem& p) {
    p.validate();
    const int n = p.num_vars();
    const int mr = p.num_rows();

    LpStandardForm f;
    f.vmap.resize(n);
    int col = 0;
    // extra rows for two-sided finite bounds
    std::vector<std::pair<int, double>> bound_rows;  // (column, width)
    for (int j = 0; j < n; ++j) {
        auto& vm = f.vmap[j];
        const double lo = p.lower[j], hi = p.upper[j];
        if (std::isfinite(lo)) {
            vm.kind = 0;
            vm.off = lo;
            vm.col0 = col++;
            if (std::isfinite(hi)) bound_rows.emplace_back(vm.col0, hi - lo);
        } else if (std::isfinite(hi)) {
            vm.kind = 1;
            vm.off = hi;
            vm.col0 = col++;
        } else {
            vm.kind = 2;
            vm.col0 = col++;
            vm.col1 = col++;
        }
    }
    f.num_structural = col;

    const int total_rows = mr + static_cast<int>(bound_rows.size());
    // one slack/surplus column per non-EQ row
    int slack_count = static_cast<int>(bound_rows.size());
    for (int i = 0; i < mr; ++i)
        if (p.senses[i] != RowSense::EQ) ++slack_count;

    f.a = Mat(total_rows, col + slack_count);
    f.b.assign(total_rows, 0.0);
    f.c.assign(col + slack_count, 0.0);

    // objective through the variable map
    for (int j = 0; j < n; ++j) {
        const auto& vm = f.vmap[j];
        const double cj = p.objective[j];
        if (vm.kind == 0) {
            f.c[vm.col0] += cj;
            f.obj_offset += cj * vm.off;
        } else if (vm.kind == 1) {
            f.c[vm.col0] -= cj;
            f.obj_offset += cj * vm.off;
        } else {
            f.c[vm.col0] += cj;
            f.c[vm.col1] -= cj;
        }
    }

    int slack_col = col;
    for (int i = 0; i < mr; ++i) {
        double rhs = p.rhs[i];
        std::vector<double> coef(col, 0.0);
        for (int j = 0; j < n; ++j) {
            const double aij = p.constraints(i, j);
            if (aij == 0.0) continue;
            const auto& vm = f.vmap[j];
            if (vm.kind == 0) {
                coef[vm.col0] += aij;
                rhs -= aij * vm.off;
            } else if (vm.kind == 1) {
                coef[vm.col0] -= aij;
                rhs -= aij * vm.off;
            } else {
                coef[vm.col0] += aij;
                coef[vm.col1] -= aij;
            }
        }
        RowSense sense = p.senses[i];
        if (rhs < 0) {
            rhs = -rhs;
            for (double& x : coef) x = -x;
            if (sense == RowSense::LE) sense = RowSense::GE;
            else if (sense == RowSense::GE) sense = RowSense::LE;
        }
        for (int j = 0; j < col; ++j) f.a(i, j) = coef[j];
        f.b[i] = rhs;
        if (sense == RowSense::LE) f.a(i, slack_col++) = 1.0;
        else if (sense == RowSense::GE) f.a(i, slack_col++) = -1.0;
    }
    for (size_t k = 0; k < bound_rows.size(); ++k) {
        const int r = mr + static_cast<int>(k);
        f.a(r, bound_rows[k].first) = 1.0;
        f.b[r] = bound_rows[k].second;
        f.a(r, slack_col++) = 1.0;
    }
    return f;
}

namespace detail {

// Gaussian elimination with partial pivoting; returns false when singular.
inline bool solve_square(Mat a, std::vector<double> b, std::vector<double>& x) {
    const int n = a.rows;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) < 1e-300) return false;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = a(i, k) / a(k, k);
            if (m == 0.0) continue;
            for (int j = k; j < n; ++j) a(i, j) -= m * a(k, j);
            b[i] -= m * b[k];
        }
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return true;
}

struct SimplexTableau {
    Mat t;                    // m x (ncols+1), last column is rhs
    std::vector<int> basis;   // basic column per row
    int ncols = 0;

    double rhs(int r) const { return t(r, ncols); }
};

// One Bland-rule phase: minimize cost over the tableau. cost is a full row
// of reduced costs plus objective value in the last slot (negated running value).
inline LpStatus simplex_phase(SimplexTableau& tab, std::vector<double>& cost,
                              std::vector<double>* aux_cost, double pivot_tol,
                              int* ray_col, long long* iter_budget) {
    const int m = tab.t.rows;
    const int n = tab.ncols;
    while (true) {
        if (--(*iter_budget) < 0)
            throw internal_error("simplex iteration cap exceeded (cycling?)");
        int enter = -1;
        for (int j = 0; j < n; ++j) {
            if (cost[j] < -pivot_tol) { enter = j; break; }  // Bland: lowest index
        }
        if (enter < 0) return LpStatus::Optimal;

        int leave = -1;
        double best_ratio = 0.0;
        for (int r = 0; r < m; ++r) {
            const double a = tab.t(r, enter);
            if (a > pivot_tol) {
                const double ratio = tab.rhs(r) / a;
                if (leave < 0 || ratio < best_ratio - 1e-300 ||
                    (std::abs(ratio - best_ratio) <= 1e-12 * (1.0 + std::abs(best_ratio)) &&
                     tab.basis[r] < tab.basis[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) {
            if (ray_col) *ray_col = enter;
            return LpStatus::Unbounded;
        }

        // pivot
        const double piv = tab.t(leave, enter);
        for (int j = 0; j <= n; ++j) tab.t(leave, j) /= piv;
        tab.t(leave, enter) = 1.0;
        for (int r = 0; r < m; ++r) {
            if (r == leave) continue;
            const double f = tab.t(r, enter);
            if (f == 0.0) continue;
            for (int j = 0; j <= n; ++j) tab.t(r, j) -= f * tab.t(leave, j);
            tab.t(r, enter) = 0.0;
        }
        const double cf = cost[enter];
        if (cf != 0.0) {
            for (int j = 0; j <= n; ++j) cost[j] -= cf * tab.t(leave, j);
            cost[enter] = 0.0;
        }
        if (aux_cost) {
            const double af = (*aux_cost)[enter];
            if (af != 0.0) {
                for (int j = 0; j <= n; ++j) (*aux_cost)[j] -= af * tab.t(leave, j);
                (*aux_cost)[enter] = 0.0;
            }
        }
        tab.basis[leave] = enter;
    }
}

}  // namespace detail

inline LpSolution lp_solve(const LpProblem& p, const Tolerances& tol = {}) {
    tol.validate();
    const LpStandardForm f = lp_standardize(p);
    const int m = f.a.rows;
    const int nstd = f.a.cols;
    const double ptol = tol.lp_pivot_tol;

    LpSolution sol;

    if (m == 0) {
        // No constraints: each standard variable sits at 0 unless its cost is
        // negative, in which case the problem is unbounded along it.
        for (int j = 0; j < nstd; ++j) {
            if (f.c[j] < -ptol) {
                sol.status = LpStatus::Unbounded;
                std::vector<double> d(nstd, 0.0);
                d[j] = 1.0;
                sol.ray = f.recover_direction(d);
                return sol;
            }
        }
        sol.status = LpStatus::Optimal;
        sol.x = f.recover(std::vector<double>(nstd, 0.0));
        sol.objective = f.obj_offset;
        return sol;
    }

    // Phase 1 tableau with artificial columns.
    detail::SimplexTableau tab;
    tab.ncols = nstd + m;
    tab.t = Mat(m, tab.ncols + 1);
    tab.basis.resize(m);
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < nstd; ++j) tab.t(r, j) = f.a(r, j);
        tab.t(r, nstd + r) = 1.0;
        tab.t(r, tab.ncols) = f.b[r];
        tab.basis[r] = nstd + r;
    }

    std::vector<double> phase1(tab.ncols + 1, 0.0);
    for (int r = 0; r < m; ++r) phase1[nstd + r] = 1.0;
    // reduce over the artificial basis
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= tab.ncols; ++j) phase1[j] -= tab.t(r, j);
    // do not allow artificials to re-enter once the phase-2 cost row exists
    std::vector<double> phase2(tab.ncols + 1, 0.0);
    for (int j = 0; j < nstd; ++j) phase2[j] = f.c[j];

    long long iter_budget = 1000000;
    detail::simplex_phase(tab, phase1, &phase2, ptol, nullptr, &iter_budget);

    const double p1val = -phase1[tab.ncols];
    double bscale = 1.0;
    for (double x : f.b) bscale = std::max(bscale, std::abs(x));
    if (p1val > ptol * bscale) {
        sol.status = LpStatus::Infeasible;
        sol.infeasibility = p1val;
        return sol;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    std::vector<bool> row_kept(m, true);
    for (int r = 0; r < m; ++r) {
        if (tab.basis[r] < nstd) continue;
        int piv = -1;
        for (int j = 0; j < nstd; ++j) {
            if (std::abs(tab.t(r, j)) > ptol) { piv = j; break; }
        }
        if (piv < 0) {
            row_kept[r] = false;  // redundant constraint
            continue;
        }
        const double pv = tab.t(r, piv);
        for (int j = 0; j <= tab.ncols; ++j) tab.t(r, j) /= pv;
        for (int r2 = 0; r2 < m; ++r2) {
            if (r2 == r) continue;
            const double fct = tab.t(r2, piv);
            if (fct == 0.0) continue;
            for (int j = 0; j <= tab.ncols; ++j) tab.t(r2, j) -= fct * tab.t(r, j);
            tab.t(r2, piv) = 0.0;
        }
        const double cf = phase2[piv];
        if (cf != 0.0) {
            for (int j = 0; j <= tab.ncols; ++j) phase2[j] -= cf * tab.t(r, j);
            phase2[piv] = 0.0;
        }
        tab.basis[r] = piv;
    }

    // Compact to kept rows and structural+slack columns only.
    std::vector<int> kept;
    for (int r = 0; r < m; ++r)
        if (row_kept[r]) kept.push_back(r);
    detail::SimplexTableau tab2;
    tab2.ncols = nstd;
    tab2.t = Mat(static_cast<int>(kept.size()), nstd + 1);
    tab2.basis.resize(kept.size());
    for (size_t r = 0; r < kept.size(); ++r) {
        for (int j = 0; j < nstd; ++j) tab2.t(static_cast<int>(r), j) = tab.t(kept[r], j);
        tab2.t(static_cast<int>(r), nstd) = tab.t(kept[r], tab.ncols);
        tab2.basis[r] = tab.basis[kept[r]];
    }
    std::vector<double> cost2(nstd + 1);
    for (int j = 0; j <= nstd; ++j) cost2[j] = phase2[j == nstd ? tab.ncols : j];

    int ray_col = -1;
    const LpStatus st =
        detail::simplex_phase(tab2, cost2, nullptr, ptol, &ray_col, &iter_budget);

    if (st == LpStatus::Unbounded) {
        sol.status = LpStatus::Unbounded;
        std::vector<double> d(nstd, 0.0);
        d[ray_col] = 1.0;
        for (size_t r = 0; r < tab2.basis.size(); ++r)
            d[tab2.basis[r]] = -tab2.t(static_cast<int>(r), ray_col);
        for (double& x : d)
            if (std::abs(x) < 1e-14) x = 0.0;
        sol.ray = f.recover_direction(d);
        return sol;
    }

    // Refine the vertex by re-solving the basic system from the original data.
    const int mk = static_cast<int>(kept.size());
    std::vector<double> xstd(nstd, 0.0);
    bool refined = false;
    if (mk > 0) {
        Mat bmat(mk, mk);
        std::vector<double> brhs(mk);
        for (int r = 0; r < mk; ++r) {
            for (int c2 = 0; c2 < mk; ++c2) bmat(r, c2) = f.a(kept[r], tab2.basis[c2]);
            brhs[r] = f.b[kept[r]];
        }
        std::vector<double> xb;
        if (detail::solve_square(bmat, brhs, xb)) {
            for (int c2 = 0; c2 < mk; ++c2) xstd[tab2.basis[c2]] = std::max(0.0, xb[c2]);
            // Keep the refined vertex only if it actually satisfies the rows.
            double resid = 0.0, scale = 1.0;
            for (int r = 0; r < m; ++r) {
                double s = -f.b[r];
                for (int j = 0; j < nstd; ++j) s += f.a(r, j) * xstd[j];
                resid = std::max(resid, std::abs(s));
                scale = std::max(scale, std::abs(f.b[r]));
            }
            refined = resid <= 1e-6 * scale;
        }
    }
    if (!refined) {
        std::fill(xstd.begin(), xstd.end(), 0.0);
        for (int r = 0; r < mk; ++r) xstd[tab2.basis[r]] = std::max(0.0, tab2.t(r, nstd));
    }

    sol.status = LpStatus::Optimal;
    sol.x = f.recover(xstd);
    double obj = f.obj_offset;
    for (int j = 0; j < nstd; ++j) obj += f.c[j] * xstd[j];
    sol.objective = obj;
    sol.basis_rows = kept;
    sol.basis_cols.assign(tab2.basis.begin(), tab2.basis.end());
    return sol;
}

// ---------------------------------------------------------------------------
// LpBuilder: incremental construction of LpProblem instances. Absolute-value
// constructs are compiled here so callers can state programs in |.| form.
// ---------------------------------------------------------------------------

class LpBuilder {
public:
    using Terms = std::vector<std::pair<int, double>>;

    int add_var(double lo, double hi) {
        lower_.push_back(lo);
        upper_.push_back(hi);
        return static_cast<int>(lower_.size()) - 1;
    }

    void add_row(const Terms& terms, RowSense sense, double rhs) {
        rows_.push_back(terms);
        senses_.push_back(sense);
        rhs_.push_back(rhs);
    }

    // Signed split x = plus - minus, plus/minus >= 0; |x| <= plus + minus,
    // tight wherever the optimum presses on the gauge.
    std::pair<int, int> add_split_var() {
        const int plus = add_var(0.0, kInf);
        const int minus = add_var(0.0, kInf);
        return {plus, minus};
    }

    // Adds t >= |expr| via the pair of rows expr - t <= 0 and -expr - t <= 0.
    // Exact for |.| terms that an optimum pushes against.
    int add_abs_var(const Terms& expr) {
        const int t = add_var(0.0, kInf);
        Terms up = expr;
        up.emplace_back(t, -1.0);
        add_row(up, RowSense::LE, 0.0);
        Terms dn;
        dn.reserve(expr.size() + 1);
        for (const auto& [j, c] : expr) dn.emplace_back(j, -c);
        dn.emplace_back(t, -1.0);
        add_row(dn, RowSense::LE, 0.0);
        return t;
    }

    void set_objective(const Terms& terms, bool maximize = false) {
        obj_ = terms;
        maximize_ = maximize;
    }

    LpProblem build() const {
        LpProblem p;
        const int n = static_cast<int>(lower_.size());
        const int m = static_cast<int>(rows_.size());
        p.objective.assign(n, 0.0);
        for (const auto& [j, c] : obj_) p.objective[j] += maximize_ ? -c : c;
        p.constraints = Mat(std::max(m, 0), n);
        p.rhs = rhs_;
        p.senses = senses_;
        p.lower = lower_;
        p.upper = upper_;
        for (int i = 0; i < m; ++i)
            for (const auto& [j, c] : rows_[i]) p.constraints(i, j) += c;
        return p;
    }

    // The built problem minimizes; a maximizing caller negates the optimum.
    bool maximizing() const { return maximize_; }

private:
    std::vector<double> lower_, upper_;
    std::vector<Terms> rows_;
    std::vector<RowSense> senses_;
    std::vector<double> rhs_;
    Terms obj_;
    bool maximize_ = false;
};

}  // namespace gramlax
