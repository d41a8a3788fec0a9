#pragma once

// Domain types shared across modules: subspaces with orthonormal bases,
// planar point configurations, and extended reals for alignments that can
// be infinite.

#include <gramlax/numerics.hpp>

#include <cmath>
#include <vector>

namespace gramlax {

struct Subspace {
    int n = 0;       // ambient dimension
    int k = 0;       // subspace dimension; 0 is the degenerate trivial space
    Mat basis;       // n x k, orthonormal columns
};

// Canonicalizes any spanning set into an orthonormal basis. The alignment
// LPs are conditioned on this.
inline Subspace make_subspace(const Mat& spanning, const Tolerances& tol = {}) {
    const Mat b = orthonormal_basis(spanning, tol);
    return Subspace{spanning.rows, b.cols, b};
}

inline void validate_subspace(const Subspace& a, const Tolerances& tol = {}) {
    if (a.k < 1 || a.k > a.n) throw input_error("subspace dimension must satisfy 1 <= k <= n");
    if (a.basis.rows != a.n || a.basis.cols != a.k)
        throw input_error("subspace basis has wrong dimensions");
    const Mat g = transpose(a.basis) * a.basis;
    for (int i = 0; i < a.k; ++i)
        for (int j = 0; j < a.k; ++j)
            if (std::abs(g(i, j) - (i == j ? 1.0 : 0.0)) > tol.residual_tol)
                throw input_error("subspace basis is not orthonormal");
}

// Non-negative real extended with +infinity. Kept as an explicit sum type so
// serialized output never leans on IEEE infinities.
struct ExtReal {
    double value = 0.0;
    bool infinite = false;

    static ExtReal inf() { return ExtReal{0.0, true}; }
    static ExtReal finite(double v) { return ExtReal{v, false}; }
};

inline bool ext_less(const ExtReal& a, const ExtReal& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
}

inline ExtReal ext_max(const ExtReal& a, const ExtReal& b) { return ext_less(a, b) ? b : a; }

// n nonzero vectors in R^d. For d = 2 the angles are populated once the
// configuration has been antipodally normalized (all directions in [0, pi),
// sorted ascending).
struct PointConfig {
    int d = 0;
    std::vector<std::vector<double>> points;
    std::vector<double> angles;  // empty unless normalized planar

    int n() const { return static_cast<int>(points.size()); }
    bool normalized() const { return d == 2 && angles.size() == points.size(); }
};

inline PointConfig make_config(int d, std::vector<std::vector<double>> pts) {
    if (d < 1) throw input_error("config dimension must be at least 1");
    if (pts.empty()) throw input_error("config must contain at least one point");
    for (const auto& p : pts) {
        if (static_cast<int>(p.size()) != d) throw input_error("config point has wrong dimension");
        double norm = 0.0;
        for (double x : p) {
            if (!std::isfinite(x)) throw input_error("config point entries must be finite");
            norm += x * x;
        }
        if (norm == 0.0) throw input_error("config points must be nonzero");
    }
    PointConfig c;
    c.d = d;
    c.points = std::move(pts);
    return c;
}

// d x n matrix whose columns are the configuration's points.
inline Mat config_matrix(const PointConfig& s) {
    Mat w(s.d, s.n());
    for (int j = 0; j < s.n(); ++j)
        for (int i = 0; i < s.d; ++i) w(i, j) = s.points[j][i];
    return w;
}

}  // namespace gramlax
