#pragma once

// Optimizers hunting for low-alignment configurations: the planar
// length-equalization move, a random-restart planar local search converging
// to cos(pi/n), a heuristic subspace search for general d (upper bounds
// only), and the closed-form bounds they are measured against.

#include <gramlax/duality.hpp>
#include <gramlax/geometry.hpp>
#include <gramlax/numerics.hpp>
#include <gramlax/rank2.hpp>
#include <gramlax/types.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace gramlax {

struct SearchConfig {
    int restarts = 8;
    int max_iters = 2000;
    double step0 = 0.25;   // initial shrink/perturbation scale
    double shrink = 0.5;   // decay factor for the step schedule
    std::uint64_t seed = 1;
    Tolerances tol;

    void validate() const {
        if (restarts < 1) throw input_error("search: restarts must be at least 1");
        if (step0 <= 0.0 || step0 >= 1.0) throw input_error("search: step0 must lie in (0,1)");
        if (shrink <= 0.0 || shrink >= 1.0) throw input_error("search: shrink must lie in (0,1)");
        tol.validate();
    }
};

struct SearchResult {
    OffCertificate certificate;
    PointConfig config;           // planar search output
    Subspace subspace;            // general search output
    bool planar = false;
    std::vector<double> history;  // best-so-far objective per iteration
    int iterations = 0;
    bool converged = false;
};

inline double welch_bound(int n, int d) {
    if (d < 1 || n <= d) throw input_error("welch_bound: requires n > d >= 1");
    return std::sqrt((n - d) / static_cast<double>(d) / (n - 1));
}

struct ThetaExact {
    double value = 0.0;
    PointConfig lines;
};

// theta(n,2) = cos(pi/n), attained by lines at angles k*pi/n.
inline ThetaExact theta_d2_exact(int n) {
    if (n < 2) throw input_error("theta_d2_exact: n must be at least 2");
    return ThetaExact{std::cos(std::acos(-1.0) / n), optimal_config(n)};
}

namespace detail {

// max_i alpha_i for a strictly convex planar config via the neighbor solves;
// a large sentinel when the trial config leaves the convex regime.
inline double planar_objective(const PointConfig& s) {
    const std::vector<double> eps = neighbor_eps(s);
    if (eps.empty()) return 1e300;
    return *std::max_element(eps.begin(), eps.end());
}

}  // namespace detail

namespace detail {

// Strict lexicographic decrease of the sorted-descending alpha vector. The
// repeated Lemma-10 application lowers the tied maxima one at a time, so a
// plain max comparison would stall on ties.
inline bool lex_improves(const std::vector<double>& next, const std::vector<double>& cur) {
    std::vector<double> a = next, b = cur;
    std::sort(a.rbegin(), a.rend());
    std::sort(b.rbegin(), b.rend());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-15) return true;
        if (a[i] > b[i] + 1e-15) return false;
    }
    return false;
}

}  // namespace detail

// Lemma-10 move: repeatedly shrink the lower-alpha cyclic neighbor of the
// current argmax by (1 - delta), halving delta whenever the step fails to
// improve (lexicographically) or would break convexity. Stops when the
// spread closes, the step floors out, or the iteration cap is reached.
inline PointConfig equalize_lengths(const PointConfig& s, const SearchConfig& cfg) {
    cfg.validate();
    if (s.d != 2 || !s.normalized())
        throw input_error("equalize_lengths: config must be planar and normalized");
    if (!is_strictly_convex_antipodal(s, cfg.tol))
        throw input_error("equalize_lengths: config must be strictly convex antipodal");
    const int n = s.n();
    if (n < 3) return s;  // two orthogonal-ish lines have nothing to equalize

    PointConfig cur = s;
    std::vector<double> eps = neighbor_eps(cur);
    if (eps.empty()) throw internal_error("equalize_lengths: convex input rejected by solver");
    double delta = cfg.step0;

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const double mx = *std::max_element(eps.begin(), eps.end());
        const double mn = *std::min_element(eps.begin(), eps.end());
        if (mx - mn <= cfg.tol.residual_tol) break;  // already uniform
        const int m = static_cast<int>(std::max_element(eps.begin(), eps.end()) - eps.begin());
        const int prev = (m + n - 1) % n;
        const int next = (m + 1) % n;
        const int j = eps[prev] <= eps[next] ? prev : next;

        PointConfig trial = cur;
        trial.points[j][0] *= 1.0 - delta;
        trial.points[j][1] *= 1.0 - delta;

        bool improved = false;
        if (is_strictly_convex_antipodal(trial, cfg.tol)) {
            const std::vector<double> teps = neighbor_eps(trial);
            if (!teps.empty() && detail::lex_improves(teps, eps) &&
                *std::max_element(teps.begin(), teps.end()) <= mx + 1e-15) {
                cur = std::move(trial);
                eps = teps;
                improved = true;
            }
        }
        if (!improved) {
            delta *= cfg.shrink;
            if (delta < 1e-14) break;
        }
    }
    return cur;
}

namespace detail {

inline double golden_min(double lo, double hi, const std::function<double(double)>& f,
                         double* best_x) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (f1 <= f2 && f1 <= fm) {
        *best_x = x1;
        return f1;
    }
    if (f2 <= fm) {
        *best_x = x2;
        return f2;
    }
    *best_x = xm;
    return fm;
}

struct PlanarState {
    PointConfig config;
    double value = 1e300;
};

inline void set_angle(PointConfig& s, int i, double th) {
    const double len = std::hypot(s.points[i][0], s.points[i][1]);
    s.points[i] = {len * std::cos(th), len * std::sin(th)};
    s.angles[i] = th;
}

// One pass of coordinate descent over the angles, each within the open
// window between its neighbors.
inline bool angle_sweep(PlanarState& st) {
    const int n = st.config.n();
    const double pi = std::acos(-1.0);
    bool improved = false;
    for (int i = 0; i < n; ++i) {
        const double prev = i > 0 ? st.config.angles[i - 1] : st.config.angles[n - 1] - pi;
        const double next = i + 1 < n ? st.config.angles[i + 1] : st.config.angles[0] + pi;
        double lo = prev + 1e-9, hi = next - 1e-9;
        if (i == 0) lo = std::max(lo, 0.0);
        if (i == n - 1) hi = std::min(hi, pi - 1e-12);
        if (hi - lo < 1e-9) continue;
        PointConfig scratch = st.config;
        auto eval = [&](double th) {
            set_angle(scratch, i, th);
            return planar_objective(scratch);
        };
        double best_th = st.config.angles[i];
        const double best_val = golden_min(lo, hi, eval, &best_th);
        if (best_val < st.value - 1e-15) {
            set_angle(st.config, i, best_th);
            st.value = best_val;
            improved = true;
        }
    }
    return improved;
}

// Damped Jacobi smoothing of the gap structure: every angle moves halfway
// toward the midpoint of its cyclic neighbors. The damping matters: the
// undamped move merely swaps alternating gaps (its worst mode has eigenvalue
// -1), which is exactly the stall pure coordinate descent gets stuck in.
inline bool smoothing_passes(PlanarState& st, int cap) {
    const int n = st.config.n();
    const double pi = std::acos(-1.0);
    bool improved = false;
    for (int round = 0; round < cap; ++round) {
        std::vector<double> target(n);
        for (int i = 0; i < n; ++i) {
            const double prev = i > 0 ? st.config.angles[i - 1] : st.config.angles[n - 1] - pi;
            const double next = i + 1 < n ? st.config.angles[i + 1] : st.config.angles[0] + pi;
            target[i] = 0.5 * (st.config.angles[i] + 0.5 * (prev + next));
        }
        PointConfig trial = st.config;
        for (int i = 0; i < n; ++i) set_angle(trial, i, target[i]);
        trial = normalize_antipodal(trial);  // damped midpoints may cross 0
        const double val = planar_objective(trial);
        if (val < st.value - 1e-15) {
            st.config = std::move(trial);
            st.value = val;
            improved = true;
        } else {
            break;
        }
    }
    return improved;
}

}  // namespace detail

// Random-restart planar local search: angle coordinate descent with
// golden-section line search, midpoint smoothing, and length equalization,
// alternated until stationary. Certified through dualize at the end.
inline SearchResult optimize_d2(int n, const SearchConfig& cfg) {
    cfg.validate();
    if (n < 2) throw input_error("optimize_d2: n must be at least 2");

    SearchResult out;
    out.planar = true;

    if (n == 2) {
        out.config = optimal_config(2);
        out.certificate = dualize(nullspace_of_config(out.config, cfg.tol), cfg.tol);
        out.history = {0.0};
        out.iterations = 1;
        out.converged = true;
        return out;
    }

    const double pi = std::acos(-1.0);
    detail::PlanarState best;
    bool best_converged = false;
    double global_best = 1e300;

    for (int r = 0; r < cfg.restarts; ++r) {
        std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(r));
        std::uniform_real_distribution<double> uang(0.0, pi);

        detail::PlanarState st;
        for (int attempt = 0; attempt < 256; ++attempt) {
            std::vector<double> ang(n);
            for (double& a : ang) a = uang(rng);
            std::sort(ang.begin(), ang.end());
            double min_gap = ang[0] + pi - ang[n - 1];
            for (int i = 0; i + 1 < n; ++i) min_gap = std::min(min_gap, ang[i + 1] - ang[i]);
            if (min_gap < 0.02 * pi / n) continue;
            std::vector<std::vector<double>> pts(n);
            for (int i = 0; i < n; ++i) pts[i] = {std::cos(ang[i]), std::sin(ang[i])};
            st.config = normalize_antipodal(make_config(2, pts));
            break;
        }
        if (st.config.n() != n) throw internal_error("optimize_d2: failed to seed a start");
        st.value = detail::planar_objective(st.config);

        bool converged = false;
        for (int round = 0; round < cfg.max_iters; ++round) {
            bool improved = detail::angle_sweep(st);
            improved |= detail::smoothing_passes(st, 64);
            const PointConfig eq = equalize_lengths(st.config, cfg);
            const double eq_val = detail::planar_objective(eq);
            if (eq_val < st.value - 1e-15) {
                st.config = eq;
                st.value = eq_val;
                improved = true;
            }
            global_best = std::min(global_best, st.value);
            out.history.push_back(global_best);
            ++out.iterations;
            if (!improved) {
                converged = true;
                break;
            }
        }
        if (st.value < best.value) {
            best = st;
            best_converged = converged;
        }
    }

    out.config = best.config;
    out.converged = best_converged;
    out.certificate = dualize(nullspace_of_config(best.config, cfg.tol), cfg.tol);
    out.certificate.source = CertSource::Searched;
    return out;
}

namespace detail {

// Per-index alignments with infinities mapped to a large sentinel; the
// k = 1 short-cut avoids the LPs entirely.
inline std::vector<double> subspace_alignments(const Subspace& a, const Tolerances& tol) {
    std::vector<double> vals(a.n, 0.0);
    if (a.k == 1) {
        double total = 0.0;
        for (int i = 0; i < a.n; ++i) total += std::abs(a.basis(i, 0));
        for (int i = 0; i < a.n; ++i) {
            const double num = std::abs(a.basis(i, 0));
            const double den = total - num;
            vals[i] = den <= 0.0 ? 1e300 : num / den;
        }
        return vals;
    }
    for (int i = 1; i <= a.n; ++i) {
        const AlignmentCertificate cert = align_index_subspace(a, i, tol);
        vals[i - 1] = cert.value.infinite ? 1e300 : cert.value.value;
    }
    return vals;
}

inline double subspace_objective(const Subspace& a, const Tolerances& tol) {
    const std::vector<double> vals = subspace_alignments(a, tol);
    return *std::max_element(vals.begin(), vals.end());
}

// Pattern descent on the sorted alignment vector: entry-wise probes first,
// then random joint directions at the same scale, halving the step when both
// stall. Lexicographic acceptance walks along tied-maximum ridges where a
// plain max comparison sticks, and the joint probes cross the ridges that
// single-entry moves cannot see.
inline void pattern_polish(Subspace& sub, double& val, const Tolerances& tol, int budget,
                           std::mt19937_64& rng) {
    const int n = sub.n, k = sub.k;
    std::normal_distribution<double> g;
    std::vector<double> cur = subspace_alignments(sub, tol);

    auto try_candidate = [&](const Mat& pb) -> bool {
        Subspace prop;
        try {
            prop = make_subspace(pb, tol);
        } catch (const input_error&) {
            return false;
        }
        if (prop.k != k) return false;
        const std::vector<double> pv = subspace_alignments(prop, tol);
        const double pmax = *std::max_element(pv.begin(), pv.end());
        if (lex_improves(pv, cur) && pmax <= val + 1e-15) {
            sub = std::move(prop);
            cur = pv;
            val = pmax;
            return true;
        }
        return false;
    };

    // V-cycles over the step scale: curved ridges need repeated passes from
    // coarse to fine, not a single monotone shrink.
    while (budget > 0) {
        const double at_entry = val;
        double sigma = 0.05;
        while (sigma > 1e-10 && budget > 0) {
            bool improved = false;
            for (int i = 0; i < n && budget > 0; ++i)
                for (int l = 0; l < k && budget > 0; ++l)
                    for (double sgn : {1.0, -1.0}) {
                        --budget;
                        Mat pb = sub.basis;
                        pb(i, l) += sgn * sigma;
                        if (try_candidate(pb)) {
                            improved = true;
                            break;
                        }
                    }
            if (!improved) {
                // 2-sparse joint moves cross the ridges invisible to single
                // entries; sign patterns (+,+), (+,-) with both orders
                const int nk = n * k;
                for (int e1 = 0; e1 < nk && !improved && budget > 0; ++e1)
                    for (int e2 = e1 + 1; e2 < nk && !improved && budget > 0; ++e2)
                        for (int pat = 0; pat < 4 && budget > 0; ++pat) {
                            --budget;
                            Mat pb = sub.basis;
                            pb.a[e1] += (pat & 1) ? -sigma : sigma;
                            pb.a[e2] += (pat & 2) ? -sigma : sigma;
                            if (try_candidate(pb)) {
                                improved = true;
                                break;
                            }
                        }
            }
            if (!improved) {
                for (int probe = 0; probe < 10 * n * k && budget > 0; ++probe) {
                    --budget;
                    Mat pb = sub.basis;
                    for (double& x : pb.a) x += sigma * g(rng);
                    if (try_candidate(pb)) {
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) sigma *= 0.5;
        }
        if (val >= at_entry - 1e-12) break;  // a whole cycle stalled
    }
}

}  // namespace detail

// Heuristic annealing over (n-d)-dimensional subspaces: perturb the basis,
// re-orthonormalize, accept downhill moves and occasional uphill ones under
// a shrinking temperature, then polish entry-wise. The result is an upper
// bound on off(n,d); no optimality is claimed.
inline SearchResult optimize_general(int n, int d, const SearchConfig& cfg) {
    cfg.validate();
    if (d < 1 || d >= n) throw input_error("optimize_general: requires 1 <= d < n");
    const int k = n - d;

    SearchResult out;
    out.planar = false;

    Subspace best_sub;
    double best_val = 1e300;
    bool best_converged = false;
    double global_best = 1e300;

    // The planar specialist seeds the first restart when it applies: the
    // k = n-2 annealing landscape carries strict local minima within ~1e-4
    // of the optimum, which isotropic restarts essentially never beat.
    Subspace planar_seed;
    if (d == 2 && n >= 3) {
        SearchConfig inner = cfg;
        inner.restarts = std::max(1, cfg.restarts / 2);
        inner.max_iters = std::max(64, cfg.max_iters / 4);
        planar_seed = nullspace_of_config(optimize_d2(n, inner).config, cfg.tol);
    }

    for (int r = 0; r < cfg.restarts; ++r) {
        std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(r));
        std::normal_distribution<double> g;
        std::uniform_real_distribution<double> u(0.0, 1.0);

        Subspace cur;
        if (r == 0 && planar_seed.k == k) {
            cur = planar_seed;
        } else {
            Mat b(n, k);
            for (double& x : b.a) x = g(rng);
            cur = make_subspace(b, cfg.tol);
        }
        double cur_val = detail::subspace_objective(cur, cfg.tol);
        Subspace local_best = cur;
        double local_best_val = cur_val;
        int last_improvement = 0;

        for (int t = 0; t < cfg.max_iters; ++t) {
            // moderate cooling; the pattern polish below owns the fine tail
            const double sigma =
                cfg.step0 * std::pow(cfg.shrink, 14.0 * t / std::max(1, cfg.max_iters));
            Mat pb = cur.basis;
            for (double& x : pb.a) x += sigma * g(rng);
            Subspace prop;
            try {
                prop = make_subspace(pb, cfg.tol);
            } catch (const input_error&) {
                continue;  // degenerate perturbation
            }
            if (prop.k != k) continue;
            const double pv = detail::subspace_objective(prop, cfg.tol);
            const double temp = 0.02 * sigma;
            if (pv < cur_val || (temp > 0 && std::exp(-(pv - cur_val) / temp) > u(rng))) {
                cur = std::move(prop);
                cur_val = pv;
                if (cur_val < local_best_val - 1e-13) {
                    local_best = cur;
                    local_best_val = cur_val;
                    last_improvement = t;
                }
            }
            global_best = std::min(global_best, local_best_val);
            out.history.push_back(global_best);
            ++out.iterations;
        }
        if (local_best_val < 1e300)
            detail::pattern_polish(local_best, local_best_val, cfg.tol,
                                   std::max(cfg.max_iters, 600 * n * k), rng);
        global_best = std::min(global_best, local_best_val);
        if (!out.history.empty()) out.history.back() = global_best;
        if (local_best_val < best_val) {
            best_sub = local_best;
            best_val = local_best_val;
            best_converged = last_improvement < (3 * cfg.max_iters) / 4;
        }
    }

    if (best_val >= 1e300)
        throw internal_error("optimize_general: every restart hit infinite alignment");
    out.subspace = best_sub;
    out.converged = best_converged;
    out.certificate = dualize(best_sub, cfg.tol);
    out.certificate.source = CertSource::Searched;
    return out;
}

}  // namespace gramlax
