#pragma once

// The rank-2 machinery: optimal planar configurations, the cyclic
// tridiagonal-with-corners dependency matrix P, the positive diagonal
// rescaling Lambda, the dual matrix Q, and the PSD symmetrization
// Q' = (Q + Q^T)/2 that closes the argument.

#include <gramlax/duality.hpp>
#include <gramlax/geometry.hpp>
#include <gramlax/numerics.hpp>
#include <gramlax/types.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gramlax {

struct PStruct {
    int n = 0;
    Mat p;                             // n x n, unit diagonal, cyclic support
    std::vector<double> a;             // a[i] = P(i, i+1), a[n-1] = P(n-1, 0)
    std::vector<double> b;             // b[i] = P(i+1, i), b[n-1] = P(0, n-1)
    std::vector<double> eps_per_index; // dependency ratio per column
    double support_residual = 0.0;     // max off-pattern magnitude
};

struct LambdaResult {
    std::vector<double> lambda;   // strictly positive, min = 1
    double cycle_residual = 0.0;  // relative closure defect of the propagation
    bool fallback_used = false;
};

struct Rank2Report {
    int n = 0;
    double eps = 0.0;
    PointConfig config;
    PStruct p;
    std::vector<double> lambda;
    Mat q;
    Mat q_prime;
    double r_p_support = 0.0;
    double r_lambda_cycle = 0.0;
    double r_pl_symmetry = 0.0;
    double r_annihilation = 0.0;
    int pl_rank = 0;
    std::vector<double> eigenvalues;
    bool psd = false;
};

// Unit vectors at angles (k-1)pi/n: the extremal planar lines.
inline PointConfig optimal_config(int n) {
    if (n < 2) throw input_error("optimal_config: n must be at least 2");
    const double pi = std::acos(-1.0);
    PointConfig c;
    c.d = 2;
    c.points.resize(n);
    c.angles.resize(n);
    for (int k = 0; k < n; ++k) {
        const double th = k * pi / n;
        c.points[k] = {std::cos(th), std::sin(th)};
        c.angles[k] = th;
    }
    return c;
}

namespace detail {

// Cyclic neighbor with the antipodal identification w_{0} := -w_n and
// w_{n+1} := -w_1 (the boundary segment of H(S_i) runs between them).
inline std::vector<double> neighbor_point(const PointConfig& s, int i, int step) {
    const int n = s.n();
    const int j = (i + step + n) % n;
    std::vector<double> p = s.points[j];
    const bool wraps = (step < 0 && i + step < 0) || (step > 0 && i + step >= n);
    if (wraps) {
        p[0] = -p[0];
        p[1] = -p[1];
    }
    return p;
}

struct NeighborDep {
    double x = 0.0, y = 0.0;  // w_i = x * u_prev + y * u_next
    double eps = 0.0;         // 1 / (x + y)
};

inline NeighborDep solve_neighbor(const PointConfig& s, int i) {
    const std::vector<double> up = neighbor_point(s, i, -1);
    const std::vector<double> un = neighbor_point(s, i, +1);
    const std::vector<double>& w = s.points[i];
    const double det = cross2(up, un);
    const double scale = std::hypot(up[0], up[1]) * std::hypot(un[0], un[1]);
    if (std::abs(det) <= 1e-14 * scale)
        throw structural_error("p_matrix: neighbor vectors are parallel");
    NeighborDep d;
    d.x = cross2(w, un) / det;
    d.y = cross2(up, w) / det;
    d.eps = 1.0 / (d.x + d.y);
    return d;
}

}  // namespace detail

// Per-column dependency eps_i for a strictly convex normalized config,
// without building P. Returns an empty vector when a solve degenerates or a
// coefficient has the wrong sign (used by the optimizers as a soft check).
inline std::vector<double> neighbor_eps(const PointConfig& s) {
    const int n = s.n();
    std::vector<double> eps(n);
    for (int i = 0; i < n; ++i) {
        try {
            const auto d = detail::solve_neighbor(s, i);
            if (d.x <= 0.0 || d.y <= 0.0) return {};
            eps[i] = d.eps;
        } catch (const structural_error&) {
            return {};
        }
    }
    return eps;
}

// Lemma-9 structure: column i of P encodes the unique dependency
// eps_i w_i = mu_prev u_prev + mu_next u_next, with p_ii = 1 and the sign
// pattern that flips at the antipodal wrap.
inline PStruct p_matrix(const PointConfig& s, const Tolerances& tol = {}) {
    if (s.d != 2 || !s.normalized())
        throw input_error("p_matrix: config must be planar and normalized");
    const int n = s.n();
    if (n < 3) throw input_error("p_matrix: need at least 3 points");
    if (!is_strictly_convex_antipodal(s, tol))
        throw structural_error("p_matrix: config is not strictly convex antipodal");

    PStruct ps;
    ps.n = n;
    ps.p = Mat(n, n);
    ps.a.resize(n);
    ps.b.resize(n);
    ps.eps_per_index.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto dep = detail::solve_neighbor(s, i);
        if (dep.x <= 0.0 || dep.y <= 0.0)
            throw structural_error("p_matrix: dependency coefficients violate the sign pattern");
        ps.eps_per_index[i] = dep.eps;
        const int prev = (i + n - 1) % n;
        const int next = (i + 1) % n;
        const double sign_prev = (i == 0) ? -1.0 : 1.0;
        const double sign_next = (i == n - 1) ? -1.0 : 1.0;
        ps.p(i, i) = 1.0;
        ps.p(prev, i) = -dep.x * sign_prev;
        ps.p(next, i) = -dep.y * sign_next;
    }
    for (int i = 0; i < n; ++i) {
        ps.a[i] = ps.p(i, (i + 1) % n);
        ps.b[i] = ps.p((i + 1) % n, i);
    }
    for (int i = 0; i < n - 1; ++i)
        if (ps.a[i] >= 0.0 || ps.b[i] >= 0.0)
            throw structural_error("p_matrix: interior off-diagonals must be negative");
    if (ps.a[n - 1] <= 0.0 || ps.b[n - 1] <= 0.0)
        throw structural_error("p_matrix: corner entries must be positive");
    return ps;
}

// Positive weights lambda >= 1 with sum_i lambda_i m_i = 0, minimizing the
// total weight. Infeasibility means the Farkas-type hypothesis fails.
inline std::vector<double> positive_kernel_weights(const std::vector<Mat>& m,
                                                   const Tolerances& tol = {}) {
    if (m.empty()) throw input_error("positive_kernel_weights: need at least one matrix");
    const int rows = m[0].rows, cols = m[0].cols;
    for (const Mat& mi : m)
        if (mi.rows != rows || mi.cols != cols)
            throw input_error("positive_kernel_weights: matrices must share dimensions");

    const int n = static_cast<int>(m.size());
    LpBuilder lb;
    std::vector<int> lvar(n);
    LpBuilder::Terms obj;
    for (int i = 0; i < n; ++i) {
        lvar[i] = lb.add_var(1.0, kInf);
        obj.emplace_back(lvar[i], 1.0);
    }
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            LpBuilder::Terms row;
            for (int i = 0; i < n; ++i)
                if (m[i](r, c) != 0.0) row.emplace_back(lvar[i], m[i](r, c));
            if (row.empty()) continue;
            lb.add_row(row, RowSense::EQ, 0.0);
        }
    lb.set_objective(obj);

    const LpSolution sol = lp_solve(lb.build(), tol);
    if (sol.status == LpStatus::Infeasible)
        throw structural_error("positive_kernel_weights: no positive combination vanishes");
    if (sol.status != LpStatus::Optimal)
        throw internal_error("positive_kernel_weights: LP cannot be unbounded");
    std::vector<double> lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = sol.x[lvar[i]];
    return lambda;
}

// Diagonal rescaling making P Lambda symmetric: propagate along the band and
// check that the cycle closes; fall back to the Farkas LP if it does not.
inline LambdaResult lambda_matrix(const PStruct& ps, const Tolerances& tol = {}) {
    const int n = ps.n;
    if (n < 3) throw input_error("lambda_matrix: need at least 3 indices");

    LambdaResult res;
    res.lambda.assign(n, 1.0);
    for (int i = 0; i + 1 < n; ++i)
        res.lambda[i + 1] = res.lambda[i] * ps.b[i] / ps.a[i];

    const double lhs = ps.b[n - 1] * res.lambda[n - 1];  // (P Lambda)_{1,n}
    const double rhs = ps.a[n - 1] * res.lambda[0];      // (P Lambda)_{n,1}
    res.cycle_residual = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});

    if (res.cycle_residual > tol.residual_tol) {
        // Lemma-16 route: positive lambda with sum lambda_i (p_i e_i^T - e_i p_i^T) = 0
        res.fallback_used = true;
        std::vector<Mat> skews(n, Mat(n, n));
        for (int i = 0; i < n; ++i)
            for (int r = 0; r < n; ++r) {
                skews[i](r, i) += ps.p(r, i);
                skews[i](i, r) -= ps.p(r, i);
            }
        try {
            res.lambda = positive_kernel_weights(skews, tol);
        } catch (const structural_error&) {
            throw structural_error("lambda_matrix: no positive Lambda (input not optimal)");
        }
    }

    const double lo = *std::min_element(res.lambda.begin(), res.lambda.end());
    if (lo <= 0.0) throw internal_error("lambda_matrix: nonpositive weight slipped through");
    for (double& l : res.lambda) l /= lo;
    return res;
}

namespace detail {

// Sign conditions forced by <q_i, p_i> = 0: on the support of column p_i the
// dual row i has magnitude eps_i and sign opposite to P.
inline void check_sign_conditions(const Mat& q, const PStruct& ps, const Tolerances& tol) {
    const int n = ps.n;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            if (k == i || ps.p(k, i) == 0.0) continue;
            const double qik = q(i, k);
            if (ps.p(k, i) * qik > 0.0)
                throw structural_error("q_from_config: sign condition violated at the P support");
            if (std::abs(std::abs(qik) - ps.eps_per_index[i]) > tol.residual_tol)
                throw structural_error("q_from_config: |Q_ij| does not match eps_i on the support");
        }
    }
}

}  // namespace detail

// Q = dualize(nullspace(S)).G, post-checked against the Lemma-14 sign
// conditions at the support of P.
inline Mat q_from_config(const PointConfig& s, const Tolerances& tol = {}) {
    if (!s.normalized()) throw input_error("q_from_config: config must be normalized");
    if (s.n() <= 2) throw input_error("q_from_config: need n > 2");
    const PStruct ps = p_matrix(s, tol);
    const Subspace a = nullspace_of_config(s, tol);
    const OffCertificate cert = dualize(a, tol);
    detail::check_sign_conditions(cert.g, ps, tol);
    return cert.g;
}

// S = P Lambda; residuals, rank, spectrum of Q' = (Q + Q^T)/2, PSD verdict.
inline Rank2Report symmetrize(const Mat& q, const PStruct& ps, const std::vector<double>& lambda,
                              const Tolerances& tol = {}) {
    const int n = ps.n;
    if (q.rows != n || q.cols != n || static_cast<int>(lambda.size()) != n)
        throw input_error("symmetrize: dimension mismatch");

    Rank2Report rep;
    rep.n = n;
    rep.p = ps;
    rep.lambda = lambda;
    rep.q = q;
    rep.eps = *std::max_element(ps.eps_per_index.begin(), ps.eps_per_index.end());
    rep.r_p_support = ps.support_residual;

    Mat s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = ps.p(i, j) * lambda[j];

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            rep.r_pl_symmetry = std::max(rep.r_pl_symmetry, std::abs(s(i, j) - s(j, i)));
    rep.r_annihilation = std::max(max_abs(q * s), max_abs(s * q));
    rep.pl_rank = numeric_rank(s, tol);

    rep.q_prime = Mat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rep.q_prime(i, j) = 0.5 * (q(i, j) + q(j, i));
    rep.eigenvalues = symmetric_eigenvalues(rep.q_prime, tol);
    const double tr = trace(rep.q_prime);
    rep.psd = rep.eigenvalues.front() >= -tol.psd_tol * std::max(tr, 1.0);
    return rep;
}

namespace detail {

template <typename F>
auto run_stage(const char* stage, F&& f) {
    try {
        return f();
    } catch (const input_error& e) {
        throw input_error(std::string("rank2_pipeline[") + stage + "]: " + e.what());
    } catch (const structural_error& e) {
        throw structural_error(std::string("rank2_pipeline[") + stage + "]: " + e.what());
    } catch (const internal_error& e) {
        throw internal_error(std::string("rank2_pipeline[") + stage + "]: " + e.what());
    }
}

}  // namespace detail

// optimal_config -> p_matrix -> lambda_matrix -> q_from_config -> symmetrize.
// Stage errors propagate with a stage label; the final closed-form and PSD
// assertions are left to the caller (see rank2_pipeline).
inline Rank2Report rank2_report(int n, const Tolerances& tol = {}) {
    if (n < 3) throw input_error("rank2_pipeline: n must be at least 3");
    const PointConfig s = detail::run_stage("optimal_config", [&] { return optimal_config(n); });
    const PStruct ps = detail::run_stage("p_matrix", [&] { return p_matrix(s, tol); });
    const LambdaResult lam = detail::run_stage("lambda_matrix", [&] { return lambda_matrix(ps, tol); });
    const Mat q = detail::run_stage("q_from_config", [&] { return q_from_config(s, tol); });
    Rank2Report rep =
        detail::run_stage("symmetrize", [&] { return symmetrize(q, ps, lam.lambda, tol); });
    rep.config = s;
    rep.r_lambda_cycle = lam.cycle_residual;
    return rep;
}

inline bool rank2_matches_closed_form(const Rank2Report& rep) {
    const double target = std::cos(std::acos(-1.0) / rep.n);
    return std::abs(rep.eps - target) <= 1e-9 && rep.psd;
}

// The full pipeline with the closed-form optimum and PSD verdict asserted.
inline Rank2Report rank2_pipeline(int n, const Tolerances& tol = {}) {
    Rank2Report rep = rank2_report(n, tol);
    const double target = std::cos(std::acos(-1.0) / n);
    if (std::abs(rep.eps - target) > 1e-9)
        throw structural_error("rank2_pipeline: eps deviates from cos(pi/n) beyond 1e-9");
    if (!rep.psd) throw structural_error("rank2_pipeline: Q' failed the PSD verdict");
    return rep;
}

}  // namespace gramlax
