#pragma once

// Brute-force reference computations used to validate the LP-based paths on
// small instances. Deliberately shares no hull or solver code with the main
// modules, so agreement between the two is evidence rather than tautology.

#include <gramlax/numerics.hpp>
#include <gramlax/types.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace gramlax::oracle {

struct GridSpec {
    int samples_per_dim = 180;
    double angular_resolution = 1e-3;  // radians, used for the k = 2 sweep

    void validate() const {
        if (samples_per_dim < 3) throw input_error("grid needs at least 3 samples per dimension");
        if (angular_resolution <= 0) throw input_error("angular resolution must be positive");
    }
};

using Pt = std::array<double, 2>;

inline double cross(const Pt& a, const Pt& b) { return a[0] * b[1] - a[1] * b[0]; }

// Convex hull, counter-clockwise, vertices only (monotone-chain scan).
inline std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const int n = static_cast<int>(pts.size());
    if (n <= 2) return pts;
    std::vector<Pt> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && cross({h[k - 1][0] - h[k - 2][0], h[k - 1][1] - h[k - 2][1]},
                               {pts[i][0] - h[k - 2][0], pts[i][1] - h[k - 2][1]}) <= 0)
            --k;
        h[k++] = pts[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && cross({h[k - 1][0] - h[k - 2][0], h[k - 1][1] - h[k - 2][1]},
                                   {pts[i][0] - h[k - 2][0], pts[i][1] - h[k - 2][1]}) <= 0)
            --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// alpha_i computed with no LP: hull of {+-s_j : j != i}, then a ray-edge
// intersection sweep along r * s_i, r >= 0.
inline double alpha_brute_d2(const PointConfig& s, int index, const Tolerances& = {}) {
    if (s.d != 2) throw input_error("alpha_brute_d2: requires d = 2");
    const int n = s.n();
    if (n < 2) throw input_error("alpha_brute_d2: need at least two points");
    if (index < 1 || index > n) throw input_error("alpha_brute_d2: index out of range");
    const int i = index - 1;
    const Pt si{s.points[i][0], s.points[i][1]};

    std::vector<Pt> pts;
    pts.reserve(2 * (n - 1));
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        pts.push_back({s.points[j][0], s.points[j][1]});
        pts.push_back({-s.points[j][0], -s.points[j][1]});
    }

    // collinear degenerate case: the hull is a symmetric segment
    bool collinear = true;
    const Pt dir = pts[0];
    for (const Pt& p : pts)
        if (std::abs(cross(dir, p)) > 1e-12 * (std::hypot(dir[0], dir[1]) * std::hypot(p[0], p[1]) + 1e-300)) {
            collinear = false;
            break;
        }
    if (collinear) {
        if (std::abs(cross(dir, si)) > 1e-10 * std::hypot(dir[0], dir[1]) * std::hypot(si[0], si[1]))
            return 0.0;  // ray leaves the segment immediately
        double best = 0.0;
        const double slen2 = si[0] * si[0] + si[1] * si[1];
        for (const Pt& p : pts) {
            const double t = (p[0] * si[0] + p[1] * si[1]) / slen2;
            best = std::max(best, t);
        }
        return best;
    }

    const std::vector<Pt> hull = convex_hull(pts);
    const int m = static_cast<int>(hull.size());
    double best = 0.0;
    for (int e = 0; e < m; ++e) {
        const Pt& a = hull[e];
        const Pt& b = hull[(e + 1) % m];
        // solve t*si = a + u*(b - a)
        const Pt ab{b[0] - a[0], b[1] - a[1]};
        const double det = cross(si, {-ab[0], -ab[1]});
        if (std::abs(det) < 1e-300) continue;  // edge parallel to the ray
        const double t = cross(a, {-ab[0], -ab[1]}) / det;
        const double u = cross(si, a) / det;
        if (u >= -1e-12 && u <= 1.0 + 1e-12 && t >= -1e-12) best = std::max(best, t);
    }
    return std::max(0.0, best);
}

// Dense sweep of the unit sphere of A (k <= 3); a lower bound on Al_i(A).
inline double align_brute(const Subspace& a, int index, const GridSpec& grid = {}) {
    grid.validate();
    if (a.k < 1 || a.k > 3) throw input_error("align_brute: supported only for k <= 3");
    if (index < 1 || index > a.n) throw input_error("align_brute: index out of range");
    const int i = index - 1;

    auto evaluate = [&](const std::vector<double>& coeff) -> double {
        const std::vector<double> v = mat_vec(a.basis, coeff);
        double num = 0.0, den = 0.0;
        for (int j = 0; j < a.n; ++j) {
            if (j == i) num = std::abs(v[j]);
            else den += std::abs(v[j]);
        }
        if (den == 0.0)
            return num > 0 ? std::numeric_limits<double>::infinity() : 0.0;
        return num / den;
    };

    const double pi = std::acos(-1.0);
    double best = 0.0;
    if (a.k == 1) {
        best = evaluate({1.0});
    } else if (a.k == 2) {
        const int steps = static_cast<int>(std::ceil(pi / grid.angular_resolution));
        double best_th = 0.0;
        for (int t = 0; t < steps; ++t) {
            const double th = t * pi / steps;
            const double v = evaluate({std::cos(th), std::sin(th)});
            if (v > best) {
                best = v;
                best_th = th;
            }
        }
        // local refinement around the best sample (still pure sampling)
        double h = pi / steps;
        for (int round = 0; round < 10 && std::isfinite(best); ++round) {
            double center = best_th;
            for (int t = -16; t <= 16; ++t) {
                const double th = center + t * h / 16.0;
                const double v = evaluate({std::cos(th), std::sin(th)});
                if (v > best) {
                    best = v;
                    best_th = th;
                }
            }
            h /= 8.0;
        }
    } else {
        const int m = grid.samples_per_dim;
        auto at = [&](double psi, double phi) {
            return evaluate({std::sin(psi) * std::cos(phi), std::sin(psi) * std::sin(phi),
                             std::cos(psi)});
        };
        // coarse pass over the half sphere (alignment is even), keeping the
        // top cells for refinement
        struct Cell {
            double value, psi, phi;
        };
        std::vector<Cell> top;
        for (int u = 0; u <= m; ++u) {
            const double psi = 0.5 * pi * u / m;
            for (int t = 0; t < 2 * m; ++t) {
                const double phi = pi * t / m;
                const double v = at(psi, phi);
                if (v == std::numeric_limits<double>::infinity()) return v;
                top.push_back({v, psi, phi});
            }
        }
        std::partial_sort(top.begin(), top.begin() + std::min<size_t>(24, top.size()), top.end(),
                          [](const Cell& x, const Cell& y) { return x.value > y.value; });
        top.resize(std::min<size_t>(24, top.size()));
        best = top.front().value;
        for (const Cell& cell : top) {
            double cpsi = cell.psi, cphi = cell.phi;
            double local = cell.value;
            double h = 0.5 * pi / m;  // coarse spacing; window spans +-3h
            for (int round = 0; round < 9; ++round) {
                double npsi = cpsi, nphi = cphi;
                for (int du = -12; du <= 12; ++du)
                    for (int dt = -12; dt <= 12; ++dt) {
                        const double psi = cpsi + du * h / 4.0;
                        const double phi = cphi + dt * h / 4.0;
                        const double v = at(psi, phi);
                        if (v > local) {
                            local = v;
                            npsi = psi;
                            nphi = phi;
                        }
                    }
                cpsi = npsi;
                cphi = nphi;
                h /= 4.0;
            }
            best = std::max(best, local);
        }
    }
    return best;
}

namespace detail {

inline double det_cofactor(const Mat& m) {
    const int n = m.rows;
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double sum = 0.0, sign = 1.0;
    for (int c = 0; c < n; ++c) {
        Mat sub(n - 1, n - 1);
        for (int i = 1; i < n; ++i) {
            int cc = 0;
            for (int j = 0; j < n; ++j) {
                if (j == c) continue;
                sub(i - 1, cc++) = m(i, j);
            }
        }
        sum += sign * m(0, c) * det_cofactor(sub);
        sign = -sign;
    }
    return sum;
}

}  // namespace detail

// PSD test via all principal minors, each evaluated by cofactor expansion.
inline bool psd_brute(const Mat& m) {
    if (m.rows != m.cols) throw input_error("psd_brute: matrix must be square");
    const int n = m.rows;
    if (n > 8) throw input_error("psd_brute: supported only for n <= 8");
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    if (asym > 1e-8 * std::max(1.0, max_abs(m)))
        throw input_error("psd_brute: matrix must be symmetric");

    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) idx.push_back(i);
        Mat sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
        for (size_t r = 0; r < idx.size(); ++r)
            for (size_t c = 0; c < idx.size(); ++c)
                sub(static_cast<int>(r), static_cast<int>(c)) = m(idx[r], idx[c]);
        if (detail::det_cofactor(sub) < -1e-9) return false;
    }
    return true;
}

}  // namespace gramlax::oracle
