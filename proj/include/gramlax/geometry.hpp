#pragma once

// Point configurations S in R^d \ {0}, the symmetric convex body H(S), the
// per-index quantities alpha_i(S), and the planar structure checks the rank-2
// machinery relies on.

#include <gramlax/alignment.hpp>
#include <gramlax/numerics.hpp>
#include <gramlax/types.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

namespace gramlax {

struct AlphaCertificate {
    int index = 0;                // 1-based
    double value = 0.0;           // r with r*s_i on the boundary of H(S_i)
    std::vector<double> witness;  // lambda over j != i, dense length n, 0 at index
};

struct AlphaTable {
    std::vector<double> values;
    double max_value = 0.0;
    std::vector<AlphaCertificate> certificates;
};

// alpha_i(S): maximize r subject to r*s_i = sum_{j != i} lambda_j s_j with
// sum |lambda_j| <= 1. H(S_i) is compact, so the LP is never unbounded.
inline AlphaCertificate alpha_index(const PointConfig& s, int index, const Tolerances& tol = {}) {
    const int n = s.n();
    if (n < 2) throw input_error("alpha_index: need at least two points");
    if (index < 1 || index > n) throw input_error("alpha_index: index out of range");
    const int i = index - 1;

    LpBuilder lb;
    const int rvar = lb.add_var(0.0, kInf);
    std::vector<int> lp(n, -1), lm(n, -1);
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        std::tie(lp[j], lm[j]) = lb.add_split_var();
    }
    for (int axis = 0; axis < s.d; ++axis) {
        LpBuilder::Terms row;
        row.emplace_back(rvar, -s.points[i][axis]);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double c = s.points[j][axis];
            if (c == 0.0) continue;
            row.emplace_back(lp[j], c);
            row.emplace_back(lm[j], -c);
        }
        lb.add_row(row, RowSense::EQ, 0.0);
    }
    LpBuilder::Terms gauge;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        gauge.emplace_back(lp[j], 1.0);
        gauge.emplace_back(lm[j], 1.0);
    }
    lb.add_row(gauge, RowSense::LE, 1.0);
    lb.set_objective({{rvar, 1.0}}, /*maximize=*/true);

    const LpSolution sol = lp_solve(lb.build(), tol);
    if (sol.status != LpStatus::Optimal)
        throw internal_error("alpha LP must be bounded and feasible (H(S_i) is compact)");

    AlphaCertificate cert;
    cert.index = index;
    cert.value = std::max(0.0, -sol.objective);
    cert.witness.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        double v = sol.x[lp[j]] - sol.x[lm[j]];
        if (std::abs(v) < 1e-12) v = 0.0;  // structural zero
        cert.witness[j] = v;
    }
    return cert;
}

inline AlphaTable alpha_all(const PointConfig& s, const Tolerances& tol = {}) {
    AlphaTable t;
    t.values.reserve(s.n());
    for (int i = 1; i <= s.n(); ++i) {
        t.certificates.push_back(alpha_index(s, i, tol));
        t.values.push_back(t.certificates.back().value);
    }
    t.max_value = *std::max_element(t.values.begin(), t.values.end());
    return t;
}

// Flips every vector into the upper half plane (angle in [0, pi)) and sorts
// by angle. alpha values are invariant under both moves.
inline PointConfig normalize_antipodal(const PointConfig& s) {
    if (s.d != 2) throw input_error("normalize_antipodal: requires d = 2");
    const double pi = std::acos(-1.0);
    const int n = s.n();
    std::vector<std::vector<double>> pts = s.points;
    std::vector<double> ang(n);
    for (int j = 0; j < n; ++j) {
        double th = std::atan2(pts[j][1], pts[j][0]);
        if (th < 0) {
            pts[j][0] = -pts[j][0];
            pts[j][1] = -pts[j][1];
            th += pi;
        }
        if (th >= pi) {  // atan2 returns exactly pi on the negative x-axis
            pts[j][0] = -pts[j][0];
            pts[j][1] = -pts[j][1];
            th -= pi;
        }
        ang[j] = th;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });

    PointConfig out;
    out.d = 2;
    out.points.reserve(n);
    out.angles.reserve(n);
    for (int j : order) {
        out.points.push_back(pts[j]);
        out.angles.push_back(ang[j]);
    }
    return out;
}

inline double cross2(const std::vector<double>& a, const std::vector<double>& b) {
    return a[0] * b[1] - a[1] * b[0];
}

// True iff w_1..w_n, -w_1..-w_n are, in that cyclic order, the vertices of a
// strictly convex polygon and no two directions coincide.
inline bool is_strictly_convex_antipodal(const PointConfig& s, const Tolerances& = {}) {
    if (!s.normalized()) throw input_error("is_strictly_convex_antipodal: config must be normalized");
    const int n = s.n();
    if (n < 2) return false;
    const double pi = std::acos(-1.0);
    const double angle_tol = 1e-12;
    for (int j = 0; j + 1 < n; ++j)
        if (s.angles[j + 1] - s.angles[j] <= angle_tol) return false;
    if (s.angles[0] + pi - s.angles[n - 1] <= angle_tol) return false;

    auto vertex = [&](int k) {
        std::vector<double> p = s.points[k % n];
        if ((k / n) % 2 == 1) {
            p[0] = -p[0];
            p[1] = -p[1];
        }
        return p;
    };
    for (int k = 0; k < 2 * n; ++k) {
        const auto a = vertex(k), b = vertex(k + 1), c = vertex(k + 2);
        const std::vector<double> e1 = {b[0] - a[0], b[1] - a[1]};
        const std::vector<double> e2 = {c[0] - b[0], c[1] - b[1]};
        const double cr = cross2(e1, e2);
        if (cr <= 1e-12 * std::sqrt((e1[0] * e1[0] + e1[1] * e1[1]) *
                                    (e2[0] * e2[0] + e2[1] * e2[1])))
            return false;
    }
    return true;
}

// Space of linear dependencies {a : sum a_i s_i = 0}; dimension n - rank(W).
inline Subspace nullspace_of_config(const PointConfig& s, const Tolerances& tol = {}) {
    const Mat w = config_matrix(s);
    const Mat ns = nullspace(w, tol);
    return Subspace{s.n(), ns.cols, ns};
}

}  // namespace gramlax
