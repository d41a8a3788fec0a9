#pragma once

// Constructive duality: builds the annihilating matrix G row by row through
// Chebyshev-norm LPs (the finite-dimensional face of the Hahn-Banach
// extension) and verifies off/theta certificates against their definitions.

#include <gramlax/alignment.hpp>
#include <gramlax/numerics.hpp>
#include <gramlax/types.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gramlax {

enum class CertSource { Dualized, Searched, Constructed };

inline const char* cert_source_name(CertSource s) {
    switch (s) {
        case CertSource::Dualized: return "dualized";
        case CertSource::Searched: return "searched";
        default: return "constructed";
    }
}

struct CertResiduals {
    double diag = 0.0;          // max |G_ii - 1|
    double offdiag = 0.0;       // max excess of |G_ij| over eps
    double rank = 0.0;          // (d+1)-th singular value
    double annihilation = 0.0;  // max |G B| over the subspace basis (when known)
};

struct OffCertificate {
    int n = 0;
    int d = 0;
    Mat g;
    double eps = 0.0;
    double rank_residual = 0.0;
    CertSource source = CertSource::Constructed;
    CertResiduals residuals;
};

struct ThetaCertificate {
    OffCertificate off;
    double smallest_eigenvalue = 0.0;
    Mat u;  // d x n, unit columns, G ~= U^T U
};

struct VerificationReport {
    struct Entry {
        std::string name;
        double residual = 0.0;
        double threshold = 0.0;
        bool pass = false;
    };
    std::vector<Entry> entries;

    bool passed() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

struct DualRow {
    std::vector<double> v;
    double t = 0.0;
};

// Minimize t subject to v_i = 1, |v_j| <= t for j != i, and B^T v = 0. The
// optimum equals Al_i(A); that equality is property-tested, not assumed.
inline DualRow dual_row(const Subspace& a, int index, const Tolerances& tol = {}) {
    if (a.k > 0) validate_subspace(a, tol);
    if (index < 1 || index > a.n) throw input_error("dual_row: index out of range");
    const int i = index - 1;
    const int n = a.n;

    LpBuilder lb;
    std::vector<int> vvar(n, -1);
    for (int j = 0; j < n; ++j)
        if (j != i) vvar[j] = lb.add_var(-kInf, kInf);
    const int tvar = lb.add_var(0.0, kInf);

    for (int l = 0; l < a.k; ++l) {
        LpBuilder::Terms row;
        for (int j = 0; j < n; ++j) {
            if (j == i || a.basis(j, l) == 0.0) continue;
            row.emplace_back(vvar[j], a.basis(j, l));
        }
        lb.add_row(row, RowSense::EQ, -a.basis(i, l));
    }
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        lb.add_row({{vvar[j], 1.0}, {tvar, -1.0}}, RowSense::LE, 0.0);
        lb.add_row({{vvar[j], -1.0}, {tvar, -1.0}}, RowSense::LE, 0.0);
    }
    lb.set_objective({{tvar, 1.0}});

    const LpSolution sol = lp_solve(lb.build(), tol);
    if (sol.status == LpStatus::Infeasible)
        throw input_error("dual_row: index " + std::to_string(index) +
                          " has infinite alignment (no orthogonal extension exists)");
    if (sol.status != LpStatus::Optimal)
        throw internal_error("dual_row LP cannot be unbounded (t >= 0)");

    DualRow out;
    out.t = sol.objective;
    out.v.assign(n, 0.0);
    out.v[i] = 1.0;
    for (int j = 0; j < n; ++j)
        if (j != i) out.v[j] = sol.x[vvar[j]];
    return out;
}

// Assembles G from the n dual rows and post-checks the construction: G must
// annihilate the subspace and have rank at most n - k.
inline OffCertificate dualize(const Subspace& a, const Tolerances& tol = {}) {
    const int n = a.n;
    if (n < 1) throw input_error("dualize: empty subspace ambient dimension");

    OffCertificate cert;
    cert.n = n;
    cert.d = n - a.k;
    cert.g = Mat(n, n);
    cert.source = CertSource::Dualized;
    cert.eps = 0.0;
    for (int i = 0; i < n; ++i) {
        const DualRow row = dual_row(a, i + 1, tol);
        for (int j = 0; j < n; ++j) cert.g(i, j) = row.v[j];
        cert.eps = std::max(cert.eps, row.t);
    }

    for (int i = 0; i < n; ++i) {
        cert.residuals.diag = std::max(cert.residuals.diag, std::abs(cert.g(i, i) - 1.0));
        for (int j = 0; j < n; ++j)
            if (j != i)
                cert.residuals.offdiag =
                    std::max(cert.residuals.offdiag, std::abs(cert.g(i, j)) - cert.eps);
    }
    cert.residuals.offdiag = std::max(0.0, cert.residuals.offdiag);
    if (a.k > 0) cert.residuals.annihilation = max_abs(cert.g * a.basis);
    if (cert.residuals.annihilation > tol.residual_tol)
        throw internal_error("dualize: assembled G fails to annihilate the subspace");

    const Svd s = svd_jacobi(cert.g);
    cert.rank_residual = cert.d < n ? s.sigma[cert.d] : 0.0;
    cert.residuals.rank = cert.rank_residual;
    int rank = 0;
    const double thr = rank_threshold(s.sigma[0], tol);
    for (double x : s.sigma)
        if (x > thr) ++rank;
    if (rank > cert.d)
        throw internal_error("dualize: assembled G exceeds the guaranteed rank bound");
    return cert;
}

inline VerificationReport verify_off_certificate(const OffCertificate& c,
                                                 const Tolerances& tol = {}) {
    VerificationReport rep;
    const int n = c.g.rows;

    double diag = 0.0, offd = 0.0;
    for (int i = 0; i < n; ++i) {
        diag = std::max(diag, std::abs(c.g(i, i) - 1.0));
        for (int j = 0; j < n; ++j)
            if (j != i) offd = std::max(offd, std::abs(c.g(i, j)) - c.eps);
    }
    offd = std::max(0.0, offd);
    rep.entries.push_back({"unit diagonal", diag, tol.residual_tol, diag <= tol.residual_tol});
    rep.entries.push_back({"off-diagonal bound", offd, tol.residual_tol, offd <= tol.residual_tol});

    const Svd s = svd_jacobi(c.g);
    const double thr = rank_threshold(s.sigma[0], tol);
    int rank = 0;
    for (double x : s.sigma)
        if (x > thr) ++rank;
    const double rank_res = c.d < n ? s.sigma[c.d] : 0.0;
    rep.entries.push_back({"rank", rank_res, thr, rank <= c.d});
    return rep;
}

inline VerificationReport verify_theta_certificate(const ThetaCertificate& c,
                                                   const Tolerances& tol = {}) {
    VerificationReport rep = verify_off_certificate(c.off, tol);
    const Mat& g = c.off.g;
    const int n = g.rows;

    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(g(i, j) - g(j, i)));
    rep.entries.push_back({"symmetry", asym, tol.residual_tol, asym <= tol.residual_tol});

    // spectrum of the symmetric part; the symmetry entry reports any skew
    Mat sym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (g(i, j) + g(j, i));
    const auto ev = symmetric_eigenvalues(sym, tol);
    const double tr = trace(sym);
    const double neg = std::max(0.0, -ev.front());
    rep.entries.push_back({"positive semidefinite", neg, tol.psd_tol * std::max(tr, 1.0),
                           ev.front() >= -tol.psd_tol * std::max(tr, 1.0)});

    double fact = 0.0;
    if (c.u.rows > 0) {
        const Mat utu = transpose(c.u) * c.u;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) fact = std::max(fact, std::abs(g(i, j) - utu(i, j)));
    } else {
        fact = kInf;
    }
    rep.entries.push_back({"gram factorization", fact, tol.residual_tol, fact <= tol.residual_tol});

    double unit = kInf;
    if (c.u.rows > 0) {
        unit = 0.0;
        for (int j = 0; j < c.u.cols; ++j) {
            double norm = 0.0;
            for (int i = 0; i < c.u.rows; ++i) norm += c.u(i, j) * c.u(i, j);
            unit = std::max(unit, std::abs(std::sqrt(norm) - 1.0));
        }
    }
    rep.entries.push_back({"unit columns", unit, tol.residual_tol, unit <= tol.residual_tol});
    return rep;
}

// Builds a theta certificate from a symmetric Gram-like matrix: the top-d
// spectral factor supplies U.
inline ThetaCertificate make_theta_certificate(const Mat& g, int d, const Tolerances& tol = {}) {
    if (g.rows != g.cols || g.rows < 1) throw input_error("theta certificate needs a square matrix");
    const int n = g.rows;
    if (d < 1 || d > n) throw input_error("theta certificate dimension out of range");

    ThetaCertificate cert;
    cert.off.n = n;
    cert.off.d = d;
    cert.off.g = g;
    cert.off.source = CertSource::Constructed;
    double eps = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) eps = std::max(eps, std::abs(g(i, j)));
    cert.off.eps = eps;

    Mat sym(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (g(i, j) + g(j, i));
    const SymmetricEigen se = symmetric_eigen(sym, tol);
    cert.smallest_eigenvalue = se.values.front();
    cert.u = Mat(d, n);
    for (int r = 0; r < d; ++r) {
        const int src = n - 1 - r;  // descending
        const double scale = std::sqrt(std::max(0.0, se.values[src]));
        for (int j = 0; j < n; ++j) cert.u(r, j) = scale * se.vectors(j, src);
    }

    const Svd s = svd_jacobi(g);
    cert.off.rank_residual = d < n ? s.sigma[d] : 0.0;
    cert.off.residuals.rank = cert.off.rank_residual;
    for (int i = 0; i < n; ++i)
        cert.off.residuals.diag = std::max(cert.off.residuals.diag, std::abs(g(i, i) - 1.0));
    return cert;
}

}  // namespace gramlax
