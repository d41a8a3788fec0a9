#pragma once

// JSON schemas for every object the CLI reads or emits. Field order is fixed
// by construction (ordered_json) so identical invocations produce identical
// bytes; reals serialize as shortest round-trip decimals.

#include <gramlax/duality.hpp>
#include <gramlax/geometry.hpp>
#include <gramlax/rank2.hpp>
#include <gramlax/search.hpp>
#include <gramlax/types.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace gramlax {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// primitives
// ---------------------------------------------------------------------------

inline ordered_json mat_rows_json(const Mat& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ordered_json mat_flat_json(const Mat& m) {
    ordered_json flat = ordered_json::array();
    for (double x : m.a) flat.push_back(x);
    return flat;
}

inline ordered_json ext_real_json(const ExtReal& v) {
    if (v.infinite) return ordered_json("inf");
    return ordered_json(v.value);
}

// ---------------------------------------------------------------------------
// input schemas
// ---------------------------------------------------------------------------

// {"n": int, "basis": [[...], ...]} with basis columns as inner arrays
inline Subspace subspace_from_json(const ordered_json& j, const Tolerances& tol = {}) {
    if (!j.is_object() || !j.contains("n") || !j.contains("basis"))
        throw input_error("subspace file must be an object with fields n and basis");
    const int n = j.at("n").get<int>();
    const auto& basis = j.at("basis");
    if (n < 1 || !basis.is_array() || basis.empty())
        throw input_error("subspace file: n must be positive and basis non-empty");
    std::vector<std::vector<double>> cols;
    for (const auto& col : basis) {
        std::vector<double> c = col.get<std::vector<double>>();
        if (static_cast<int>(c.size()) != n)
            throw input_error("subspace file: basis column length must equal n");
        cols.push_back(std::move(c));
    }
    return make_subspace(Mat::from_cols(cols), tol);
}

// {"d": int, "points": [[...], ...]}
inline PointConfig config_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("points"))
        throw input_error("config file must be an object with fields d and points");
    const int d = j.at("d").get<int>();
    std::vector<std::vector<double>> pts;
    for (const auto& p : j.at("points")) pts.push_back(p.get<std::vector<double>>());
    return make_config(d, std::move(pts));
}

// ---------------------------------------------------------------------------
// certificates
// ---------------------------------------------------------------------------

inline ordered_json off_certificate_json(const OffCertificate& c) {
    ordered_json j;
    j["n"] = c.n;
    j["d"] = c.d;
    j["eps"] = c.eps;
    j["G"] = mat_flat_json(c.g);
    j["source"] = cert_source_name(c.source);
    j["residuals"] = {{"diag", c.residuals.diag},
                      {"offdiag", c.residuals.offdiag},
                      {"rank", c.residuals.rank},
                      {"annihilation", c.residuals.annihilation}};
    return j;
}

inline OffCertificate off_certificate_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("d") || !j.contains("eps") ||
        !j.contains("G"))
        throw input_error("certificate file must carry fields n, d, eps, G");
    OffCertificate c;
    c.n = j.at("n").get<int>();
    c.d = j.at("d").get<int>();
    c.eps = j.at("eps").get<double>();
    if (c.n < 1 || c.d < 1) throw input_error("certificate file: n and d must be positive");
    const std::vector<double> flat = j.at("G").get<std::vector<double>>();
    if (static_cast<int>(flat.size()) != c.n * c.n)
        throw input_error("certificate file: G must hold n*n row-major entries");
    c.g = Mat(c.n, c.n);
    c.g.a = flat;
    c.g.check_finite();
    if (j.contains("source")) {
        const std::string s = j.at("source").get<std::string>();
        c.source = s == "dualized"   ? CertSource::Dualized
                   : s == "searched" ? CertSource::Searched
                                     : CertSource::Constructed;
    }
    if (j.contains("residuals")) {
        const auto& r = j.at("residuals");
        if (r.contains("diag")) c.residuals.diag = r.at("diag").get<double>();
        if (r.contains("offdiag")) c.residuals.offdiag = r.at("offdiag").get<double>();
        if (r.contains("rank")) {
            c.residuals.rank = r.at("rank").get<double>();
            c.rank_residual = c.residuals.rank;
        }
        if (r.contains("annihilation"))
            c.residuals.annihilation = r.at("annihilation").get<double>();
    }
    return c;
}

inline ordered_json verification_report_json(const VerificationReport& rep) {
    ordered_json j;
    j["passed"] = rep.passed();
    ordered_json checks = ordered_json::array();
    for (const auto& e : rep.entries) {
        ordered_json c;
        c["name"] = e.name;
        c["residual"] = e.residual;
        c["threshold"] = e.threshold;
        c["pass"] = e.pass;
        checks.push_back(std::move(c));
    }
    j["checks"] = std::move(checks);
    return j;
}

// ---------------------------------------------------------------------------
// alignment / alpha
// ---------------------------------------------------------------------------

inline ordered_json alignment_certificate_json(const AlignmentCertificate& c) {
    ordered_json j;
    j["index"] = c.index;
    j["value"] = ext_real_json(c.value);
    j["witness"] = c.witness;
    return j;
}

inline ordered_json subspace_alignment_json(const Subspace& a, const SubspaceAlignment& al) {
    ordered_json j;
    j["n"] = a.n;
    j["k"] = a.k;
    j["value"] = ext_real_json(al.value);
    ordered_json certs = ordered_json::array();
    for (const auto& c : al.certificates) certs.push_back(alignment_certificate_json(c));
    j["certificates"] = std::move(certs);
    return j;
}

inline ordered_json alpha_table_json(const PointConfig& s, const AlphaTable& t) {
    ordered_json j;
    j["n"] = s.n();
    j["d"] = s.d;
    j["values"] = t.values;
    j["max"] = t.max_value;
    ordered_json certs = ordered_json::array();
    for (const auto& c : t.certificates) {
        ordered_json cj;
        cj["index"] = c.index;
        cj["value"] = c.value;
        cj["witness"] = c.witness;
        certs.push_back(std::move(cj));
    }
    j["certificates"] = std::move(certs);
    return j;
}

// ---------------------------------------------------------------------------
// rank-2 report: n, eps, residuals, pl_rank, eigenvalues, psd, then matrices
// ---------------------------------------------------------------------------

inline ordered_json rank2_report_json(const Rank2Report& rep) {
    ordered_json j;
    j["n"] = rep.n;
    j["eps"] = rep.eps;
    j["residuals"] = {{"p_support", rep.r_p_support},
                      {"lambda_cycle", rep.r_lambda_cycle},
                      {"pl_symmetry", rep.r_pl_symmetry},
                      {"annihilation", rep.r_annihilation}};
    j["pl_rank"] = rep.pl_rank;
    j["eigenvalues"] = rep.eigenvalues;
    j["psd"] = rep.psd;
    ordered_json pts = ordered_json::array();
    for (const auto& p : rep.config.points) pts.push_back(p);
    j["points"] = std::move(pts);
    j["P"] = mat_flat_json(rep.p.p);
    j["lambda"] = rep.lambda;
    j["Q"] = mat_flat_json(rep.q);
    j["Q_prime"] = mat_flat_json(rep.q_prime);
    return j;
}

// ---------------------------------------------------------------------------
// search results
// ---------------------------------------------------------------------------

inline ordered_json search_result_json(const SearchResult& res, int n, int d) {
    ordered_json j;
    j["n"] = n;
    j["d"] = d;
    j["eps"] = res.certificate.eps;
    j["converged"] = res.converged;
    j["iterations"] = res.iterations;
    j["certificate"] = off_certificate_json(res.certificate);
    if (res.planar) {
        ordered_json pts = ordered_json::array();
        for (const auto& p : res.config.points) pts.push_back(p);
        j["config"] = {{"d", 2}, {"points", std::move(pts)}};
    } else {
        ordered_json cols = ordered_json::array();
        for (int c = 0; c < res.subspace.k; ++c) cols.push_back(res.subspace.basis.col(c));
        j["subspace"] = {{"n", res.subspace.n}, {"basis", std::move(cols)}};
    }
    j["history"] = res.history;
    return j;
}

}  // namespace gramlax
