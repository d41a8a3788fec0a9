#pragma once

// Alignment of vectors and subspaces: Al_i(a) = |a_i| / sum_{j != i} |a_j|,
// its maximum over a subspace (computed as an LP), and the conversions that
// tie alignment to the SL and off quantities.

#include <gramlax/numerics.hpp>
#include <gramlax/types.hpp>

#include <cmath>
#include <vector>

namespace gramlax {

struct AlignmentCertificate {
    int index = 0;                // 1-based
    ExtReal value;
    std::vector<double> witness;  // vector in the subspace, unit max-norm
};

struct SubspaceAlignment {
    ExtReal value;
    std::vector<AlignmentCertificate> certificates;  // one per index
};

inline ExtReal align_index_vector(const std::vector<double>& a, int index) {
    const int n = static_cast<int>(a.size());
    if (index < 1 || index > n) throw input_error("alignment index out of range");
    double num = 0.0, den = 0.0;
    bool nonzero = false;
    for (int j = 0; j < n; ++j) {
        if (a[j] != 0.0) nonzero = true;
        if (j == index - 1) num = std::abs(a[j]);
        else den += std::abs(a[j]);
    }
    if (!nonzero) throw input_error("alignment of the zero vector is undefined");
    if (den == 0.0) return ExtReal::inf();
    return ExtReal::finite(num / den);
}

// Max of (Bc)_i subject to sum_{j != i} |(Bc)_j| <= 1, solved in both sign
// directions. Unboundedness certifies an infinite alignment.
inline AlignmentCertificate align_index_subspace(const Subspace& a, int index,
                                                 const Tolerances& tol = {}) {
    validate_subspace(a, tol);
    if (index < 1 || index > a.n) throw input_error("alignment index out of range");
    const int i = index - 1;
    const Mat& b = a.basis;

    struct Dir {
        LpStatus status = LpStatus::Infeasible;
        double value = 0.0;
        std::vector<double> coeff;  // c, or a ray when unbounded
    };
    auto solve_dir = [&](double sign) -> Dir {
        LpBuilder lb;
        std::vector<int> cvar(a.k);
        for (int l = 0; l < a.k; ++l) cvar[l] = lb.add_var(-kInf, kInf);
        LpBuilder::Terms total;
        for (int j = 0; j < a.n; ++j) {
            if (j == i) continue;
            LpBuilder::Terms expr;
            for (int l = 0; l < a.k; ++l)
                if (b(j, l) != 0.0) expr.emplace_back(cvar[l], b(j, l));
            total.emplace_back(lb.add_abs_var(expr), 1.0);
        }
        lb.add_row(total, RowSense::LE, 1.0);
        LpBuilder::Terms obj;
        for (int l = 0; l < a.k; ++l) obj.emplace_back(cvar[l], sign * b(i, l));
        lb.set_objective(obj, /*maximize=*/true);
        const LpSolution sol = lp_solve(lb.build(), tol);
        Dir d;
        d.status = sol.status;
        if (sol.status == LpStatus::Optimal) {
            d.value = -sol.objective;
            d.coeff.assign(a.k, 0.0);
            for (int l = 0; l < a.k; ++l) d.coeff[l] = sign * sol.x[cvar[l]];
        } else if (sol.status == LpStatus::Unbounded) {
            d.coeff.assign(a.k, 0.0);
            for (int l = 0; l < a.k; ++l) d.coeff[l] = sign * sol.ray[cvar[l]];
        } else {
            throw internal_error("alignment LP reported infeasible; it always has c = 0");
        }
        return d;
    };

    const Dir pos = solve_dir(1.0);
    const Dir neg = solve_dir(-1.0);

    AlignmentCertificate cert;
    cert.index = index;

    auto witness_from = [&](const std::vector<double>& c) {
        std::vector<double> w = mat_vec(b, c);
        const double scale = max_abs(w);
        if (scale > 0)
            for (double& x : w) x /= scale;
        return w;
    };

    if (pos.status == LpStatus::Unbounded || neg.status == LpStatus::Unbounded) {
        cert.value = ExtReal::inf();
        cert.witness = witness_from(pos.status == LpStatus::Unbounded ? pos.coeff : neg.coeff);
        return cert;
    }

    const Dir& best = (neg.value > pos.value) ? neg : pos;
    cert.value = ExtReal::finite(std::max(0.0, best.value));
    if (cert.value.value > 0.0) {
        cert.witness = witness_from(best.coeff);
    } else {
        // Every vector in the subspace has a zero i-th coordinate; any basis
        // column is a (trivial) maximizer.
        cert.witness = witness_from([&] {
            std::vector<double> e(a.k, 0.0);
            e[0] = 1.0;
            return e;
        }());
    }
    return cert;
}

inline SubspaceAlignment align_subspace(const Subspace& a, const Tolerances& tol = {}) {
    SubspaceAlignment out;
    out.value = ExtReal::finite(0.0);
    out.certificates.reserve(a.n);
    for (int i = 1; i <= a.n; ++i) {
        out.certificates.push_back(align_index_subspace(a, i, tol));
        out.value = ext_max(out.value, out.certificates.back().value);
    }
    return out;
}

// SL(n, k) = (1 + 1/Align) / n; an infinite alignment degenerates to 1/n.
inline double sl_from_align(int n, const ExtReal& align) {
    if (n < 1) throw input_error("sl_from_align: n must be positive");
    if (align.infinite) return 1.0 / n;
    if (align.value <= 0.0) throw input_error("sl_from_align: alignment must be positive");
    return (1.0 + 1.0 / align.value) / n;
}

// off = 1 / (n * SL - 1).
inline double off_from_sl(int n, double sl) {
    if (n < 1) throw input_error("off_from_sl: n must be positive");
    if (n * sl <= 1.0) throw input_error("off_from_sl: requires n * sl > 1");
    return 1.0 / (n * sl - 1.0);
}

// L(uniform over X) for a spanning multiset X in R^k, evaluated through the
// subspace picture: the column span of the matrix whose rows are the points.
inline double script_l_uniform(const PointConfig& x, const Tolerances& tol = {}) {
    const int n = x.n(), k = x.d;
    Mat m(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) m(i, j) = x.points[i][j];
    if (numeric_rank(m, tol) != k)
        throw input_error("script_l_uniform: points do not span R^k");
    const Subspace a = make_subspace(m, tol);
    const SubspaceAlignment al = align_subspace(a, tol);
    return sl_from_align(n, al.value);
}

}  // namespace gramlax
