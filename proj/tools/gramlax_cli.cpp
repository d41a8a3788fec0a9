// gramlax command-line front end: alignment, alpha tables, dual certificates,
// the rank-2 pipeline, optimizers, verification, and closed-form bounds, all
// with reproducible JSON/CSV output.

#include <gramlax/alignment.hpp>
#include <gramlax/duality.hpp>
#include <gramlax/geometry.hpp>
#include <gramlax/oracle.hpp>
#include <gramlax/rank2.hpp>
#include <gramlax/search.hpp>
#include <gramlax/serialize.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace gramlax;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInputError = 2;

ordered_json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return ordered_json::parse(buf.str());  // parse_error carries line/column
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

struct TolFlags {
    double rank_tol = -1, lp_tol = -1, residual_tol = -1, psd_tol = -1;

    Tolerances resolve() const {
        Tolerances t;
        if (const char* env = std::getenv("GRAMLAX_TOL")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end == env || v <= 0) throw input_error("GRAMLAX_TOL must be a positive real");
            t.residual_tol = v;
        }
        if (rank_tol > 0) t.rank_tol = rank_tol;
        if (lp_tol > 0) t.lp_pivot_tol = lp_tol;
        if (residual_tol > 0) t.residual_tol = residual_tol;  // flag beats env
        if (psd_tol > 0) t.psd_tol = psd_tol;
        t.validate();
        return t;
    }
};

std::string format_ext(const ExtReal& v) {
    if (v.infinite) return "inf";
    return ordered_json(v.value).dump();
}

int cmd_align(const std::string& path, int index, const std::string& format,
              const Tolerances& tol) {
    const Subspace a = subspace_from_json(load_json(path), tol);
    if (index > 0) {
        const AlignmentCertificate cert = align_index_subspace(a, index, tol);
        if (format == "pretty") {
            std::cout << "Al_" << cert.index << "(A) = " << format_ext(cert.value) << "\n";
        } else {
            emit(alignment_certificate_json(cert));
        }
        return kExitOk;
    }
    const SubspaceAlignment al = align_subspace(a, tol);
    if (format == "pretty") {
        std::cout << "Al(A) = " << format_ext(al.value) << "\n";
        for (const auto& c : al.certificates)
            std::cout << "  Al_" << c.index << " = " << format_ext(c.value) << "\n";
    } else {
        emit(subspace_alignment_json(a, al));
    }
    return kExitOk;
}

int cmd_alpha(const std::string& path, bool emit_polygon, const std::string& format,
              const Tolerances& tol) {
    const PointConfig s = config_from_json(load_json(path));
    const AlphaTable t = alpha_all(s, tol);
    if (format == "pretty") {
        for (size_t i = 0; i < t.values.size(); ++i)
            std::cout << "alpha_" << i + 1 << " = " << ordered_json(t.values[i]).dump() << "\n";
        std::cout << "max = " << ordered_json(t.max_value).dump() << "\n";
        return kExitOk;
    }
    ordered_json j = alpha_table_json(s, t);
    if (emit_polygon) {
        if (s.d != 2) throw input_error("--emit-polygon requires a planar config");
        ordered_json polys = ordered_json::array();
        for (int i = 0; i < s.n(); ++i) {
            std::vector<oracle::Pt> pts;
            for (int k = 0; k < s.n(); ++k) {
                if (k == i) continue;
                pts.push_back({s.points[k][0], s.points[k][1]});
                pts.push_back({-s.points[k][0], -s.points[k][1]});
            }
            ordered_json poly = ordered_json::array();
            for (const auto& p : oracle::convex_hull(pts))
                poly.push_back(std::vector<double>{p[0], p[1]});
            polys.push_back(std::move(poly));
        }
        j["polygons"] = std::move(polys);
    }
    emit(j);
    return kExitOk;
}

int cmd_dualize(const std::string& path, const Tolerances& tol) {
    const Subspace a = subspace_from_json(load_json(path), tol);
    emit(off_certificate_json(dualize(a, tol)));
    return kExitOk;
}

int cmd_rank2(int n, const Tolerances& tol) {
    const Rank2Report rep = rank2_report(n, tol);
    emit(rank2_report_json(rep));
    return rank2_matches_closed_form(rep) ? kExitOk : kExitVerificationFailure;
}

int cmd_solve(int n, int d, const SearchConfig& cfg, const std::string& history_csv) {
    if (d < 1 || d > n) throw input_error("solve: requires 1 <= d <= n");
    SearchResult res;
    if (d == 2) res = optimize_d2(n, cfg);
    else res = optimize_general(n, d, cfg);
    if (!history_csv.empty()) {
        std::ofstream out(history_csv);
        if (!out) throw input_error("cannot write history file: " + history_csv);
        out << "iteration,max_alpha\n";
        for (size_t i = 0; i < res.history.size(); ++i)
            out << i << "," << ordered_json(res.history[i]).dump() << "\n";
    }
    emit(search_result_json(res, n, d));
    return kExitOk;
}

int cmd_verify(const std::string& path, bool theta, const Tolerances& tol) {
    const ordered_json j = load_json(path);
    const OffCertificate cert = off_certificate_from_json(j);
    VerificationReport rep;
    if (theta) {
        ThetaCertificate tc;
        if (j.contains("U")) {
            tc.off = cert;
            const std::vector<double> flat = j.at("U").get<std::vector<double>>();
            if (static_cast<int>(flat.size()) != cert.d * cert.n)
                throw input_error("certificate file: U must hold d*n row-major entries");
            tc.u = Mat(cert.d, cert.n);
            tc.u.a = flat;
            Mat sym(cert.n, cert.n);
            for (int r = 0; r < cert.n; ++r)
                for (int c = 0; c < cert.n; ++c) sym(r, c) = 0.5 * (cert.g(r, c) + cert.g(c, r));
            tc.smallest_eigenvalue = symmetric_eigenvalues(sym, tol).front();
        } else {
            tc = make_theta_certificate(cert.g, cert.d, tol);
            tc.off.eps = cert.eps;
        }
        rep = verify_theta_certificate(tc, tol);
    } else {
        rep = verify_off_certificate(cert, tol);
    }
    emit(verification_report_json(rep));
    return rep.passed() ? kExitOk : kExitVerificationFailure;
}

int cmd_table(int d, int n_from, int n_to, const SearchConfig& cfg) {
    if (d != 2) throw input_error("table: only d = 2 is supported");
    if (n_from < 3 || n_to < n_from) throw input_error("table: requires 3 <= n-from <= n-to");
    std::cout << "n,eps,cos_pi_over_n,welch,gap\n";
    for (int n = n_from; n <= n_to; ++n) {
        const SearchResult res = optimize_d2(n, cfg);
        const double exact = theta_d2_exact(n).value;
        std::cout << n << "," << ordered_json(res.certificate.eps).dump() << ","
                  << ordered_json(exact).dump() << ","
                  << ordered_json(welch_bound(n, 2)).dump() << ","
                  << ordered_json(res.certificate.eps - exact).dump() << "\n";
    }
    return kExitOk;
}

int cmd_welch(int n, int d) {
    std::cout << ordered_json(welch_bound(n, d)).dump() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bukh-Cox off(n,d) relaxation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // tolerance flags may follow the subcommand

    TolFlags tf;
    app.add_option("--rank-tol", tf.rank_tol, "singular value cutoff");
    app.add_option("--lp-tol", tf.lp_tol, "simplex pivot tolerance");
    app.add_option("--residual-tol", tf.residual_tol, "residual acceptance tolerance");
    app.add_option("--psd-tol", tf.psd_tol, "PSD eigenvalue tolerance (scaled by trace)");

    std::string subspace_path, config_path, cert_path, history_csv;
    std::string format = "json";
    int index = 0, n = 0, d = 0, n_from = 3, n_to = 8;
    bool emit_polygon = false, theta = false;
    SearchConfig scfg;

    auto* align = app.add_subcommand("align", "alignment certificates of a subspace");
    align->add_option("--subspace", subspace_path, "subspace JSON file")->required();
    align->add_option("--index", index, "1-based index (omit for all)");
    align->add_option("--format", format, "json|pretty");

    auto* alpha = app.add_subcommand("alpha", "alpha table of a point config");
    alpha->add_option("--config", config_path, "config JSON file")->required();
    alpha->add_flag("--emit-polygon", emit_polygon, "include H(S_i) hull vertices");
    alpha->add_option("--format", format, "json|pretty");

    auto* dual = app.add_subcommand("dualize", "dual certificate of a subspace");
    dual->add_option("--subspace", subspace_path, "subspace JSON file")->required();

    auto* rank2 = app.add_subcommand("rank2", "rank-2 symmetrization pipeline");
    rank2->add_option("--n", n, "number of lines (>= 3)")->required();

    auto* solve = app.add_subcommand("solve", "search for a low-coherence certificate");
    solve->add_option("--n", n, "number of vectors")->required();
    solve->add_option("--d", d, "target rank")->required();
    solve->add_option("--restarts", scfg.restarts, "random restarts");
    solve->add_option("--iters", scfg.max_iters, "iterations per restart");
    solve->add_option("--seed", scfg.seed, "RNG seed");
    solve->add_option("--history-csv", history_csv, "write best-so-far history CSV");

    auto* verify = app.add_subcommand("verify", "re-check a certificate file");
    verify->add_option("--certificate", cert_path, "certificate JSON file")->required();
    verify->add_flag("--theta", theta, "also check symmetry, PSD, and the Gram factor");

    auto* table = app.add_subcommand("table", "CSV of found eps vs closed forms");
    table->add_option("--d", d, "dimension (must be 2)")->required();
    table->add_option("--n-from", n_from, "first n");
    table->add_option("--n-to", n_to, "last n");
    table->add_option("--restarts", scfg.restarts, "random restarts");
    table->add_option("--iters", scfg.max_iters, "iterations per restart");
    table->add_option("--seed", scfg.seed, "RNG seed");

    auto* welch = app.add_subcommand("welch", "Welch bound sqrt((n-d)/(d(n-1)))");
    welch->add_option("--n", n, "number of vectors")->required();
    welch->add_option("--d", d, "dimension")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        const Tolerances tol = tf.resolve();
        scfg.tol = tol;
        if (format != "json" && format != "pretty")
            throw input_error("unknown --format (expected json or pretty)");
        if (align->parsed()) return cmd_align(subspace_path, index, format, tol);
        if (alpha->parsed()) return cmd_alpha(config_path, emit_polygon, format, tol);
        if (dual->parsed()) return cmd_dualize(subspace_path, tol);
        if (rank2->parsed()) return cmd_rank2(n, tol);
        if (solve->parsed()) return cmd_solve(n, d, scfg, history_csv);
        if (verify->parsed()) return cmd_verify(cert_path, theta, tol);
        if (table->parsed()) return cmd_table(d, n_from, n_to, scfg);
        if (welch->parsed()) return cmd_welch(n, d);
        return kExitInputError;
    } catch (const ordered_json::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";  // includes line/column
        return kExitInputError;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const structural_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
