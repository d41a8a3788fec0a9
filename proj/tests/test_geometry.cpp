#include <gramlax/geometry.hpp>
#include <gramlax/oracle.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace gramlax;
using Catch::Approx;

namespace {

PointConfig regular_lines(int n) {
    const double pi = std::acos(-1.0);
    std::vector<std::vector<double>> pts(n);
    for (int k = 0; k < n; ++k) pts[k] = {std::cos(k * pi / n), std::sin(k * pi / n)};
    return normalize_antipodal(make_config(2, pts));
}

void check_alpha_certificate(const PointConfig& s, const AlphaCertificate& cert,
                             const Tolerances& tol) {
    const int i = cert.index - 1;
    double gauge = 0.0;
    std::vector<double> combo(s.d, 0.0);
    for (int j = 0; j < s.n(); ++j) {
        if (j == i) continue;
        gauge += std::abs(cert.witness[j]);
        for (int axis = 0; axis < s.d; ++axis) combo[axis] += cert.witness[j] * s.points[j][axis];
    }
    CHECK(gauge <= 1.0 + tol.residual_tol);
    for (int axis = 0; axis < s.d; ++axis)
        CHECK(std::abs(cert.value * s.points[i][axis] - combo[axis]) <= tol.residual_tol);
}

}  // namespace

TEST_CASE("alpha_index on hand-computed planar cases", "[geometry]") {
    const Tolerances tol;

    SECTION("orthogonal pair: each H(S_i) is a segment missing the other axis") {
        const PointConfig s = make_config(2, {{1, 0}, {0, 1}});
        CHECK(alpha_index(s, 1, tol).value == Approx(0.0).margin(1e-10));
        CHECK(alpha_index(s, 2, tol).value == Approx(0.0).margin(1e-10));
    }

    SECTION("three lines at angles 0, pi/3, 2pi/3: chord-ray value 1/2") {
        const PointConfig s = regular_lines(3);
        const auto cert = alpha_index(s, 2, tol);
        CHECK(cert.value == Approx(0.5).margin(1e-10));
        check_alpha_certificate(s, cert, tol);
    }

    SECTION("parallel pair: the hull of the longer vector covers twice s_1") {
        const PointConfig s = make_config(2, {{1, 0}, {2, 0}});
        CHECK(alpha_index(s, 1, tol).value == Approx(2.0).margin(1e-10));
        CHECK(alpha_index(s, 2, tol).value == Approx(0.5).margin(1e-10));
    }
}

TEST_CASE("alpha_all tables", "[geometry]") {
    const Tolerances tol;

    const auto t3 = alpha_all(regular_lines(3), tol);
    for (double v : t3.values) CHECK(v == Approx(0.5).margin(1e-10));
    CHECK(t3.max_value == Approx(0.5).margin(1e-10));

    const auto t2 = alpha_all(make_config(2, {{1, 0}, {0, 1}}), tol);
    CHECK(t2.values[0] == Approx(0.0).margin(1e-10));
    CHECK(t2.values[1] == Approx(0.0).margin(1e-10));

    // regular five lines: chord-ray intersection gives cos(pi/5) at every index
    const double pi = std::acos(-1.0);
    const auto t5 = alpha_all(regular_lines(5), tol);
    for (double v : t5.values) CHECK(v == Approx(std::cos(pi / 5)).margin(1e-9));
    CHECK(t5.max_value == Approx(0.8090169943749475).margin(1e-9));
}

TEST_CASE("normalize_antipodal flips and sorts", "[geometry]") {
    const PointConfig a = normalize_antipodal(make_config(2, {{0, -1}, {1, 0}}));
    CHECK(a.points[0][0] == Approx(1.0));
    CHECK(a.points[0][1] == Approx(0.0).margin(1e-15));
    CHECK(a.points[1][0] == Approx(0.0).margin(1e-15));
    CHECK(a.points[1][1] == Approx(1.0));

    // idempotence
    const PointConfig b = normalize_antipodal(a);
    for (int i = 0; i < 2; ++i)
        for (int axis = 0; axis < 2; ++axis)
            CHECK(b.points[i][axis] == Approx(a.points[i][axis]).margin(1e-15));

    const PointConfig c = normalize_antipodal(make_config(2, {{-1, -0.1}, {1, 0}}));
    CHECK(c.points[0][0] == Approx(1.0));
    CHECK(c.points[0][1] == Approx(0.0).margin(1e-15));
    CHECK(c.points[1][0] == Approx(1.0));
    CHECK(c.points[1][1] == Approx(0.1));

    CHECK_THROWS_AS(normalize_antipodal(make_config(3, {{1, 0, 0}})), input_error);
}

TEST_CASE("alpha values are invariant under antipodal normalization", "[geometry]") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    const Tolerances tol;
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        std::vector<std::vector<double>> pts(n);
        for (auto& p : pts) {
            p = {g(rng), g(rng)};
            if (std::hypot(p[0], p[1]) < 1e-3) p = {1.0, 0.5};
        }
        const PointConfig raw = make_config(2, pts);
        const PointConfig norm = normalize_antipodal(raw);
        auto va = alpha_all(raw, tol).values;
        auto vb = alpha_all(norm, tol).values;
        std::sort(va.begin(), va.end());
        std::sort(vb.begin(), vb.end());
        for (int i = 0; i < n; ++i) CHECK(va[i] == Approx(vb[i]).margin(1e-8));
    }
}

TEST_CASE("is_strictly_convex_antipodal", "[geometry]") {
    CHECK(is_strictly_convex_antipodal(regular_lines(3)));
    CHECK(is_strictly_convex_antipodal(regular_lines(8)));

    const PointConfig dup = normalize_antipodal(make_config(2, {{1, 0}, {2, 0}, {0, 1}}));
    CHECK_FALSE(is_strictly_convex_antipodal(dup));

    // convexity depends on lengths: a long middle vector keeps the polygon
    // convex, a short one caves it in
    const PointConfig longmid = normalize_antipodal(make_config(2, {{1, 0}, {10, 10}, {0, 1}}));
    CHECK(is_strictly_convex_antipodal(longmid));
    const PointConfig shortmid = normalize_antipodal(make_config(2, {{1, 0}, {0.1, 0.1}, {0, 1}}));
    CHECK_FALSE(is_strictly_convex_antipodal(shortmid));

    CHECK_THROWS_AS(is_strictly_convex_antipodal(make_config(2, {{1, 0}, {0, 1}})), input_error);
}

TEST_CASE("nullspace_of_config", "[geometry]") {
    const Tolerances tol;

    const Subspace a = nullspace_of_config(make_config(2, {{1, 0}, {0, 1}, {1, 1}}), tol);
    REQUIRE(a.k == 1);
    const double sign = a.basis(0, 0) > 0 ? 1.0 : -1.0;
    CHECK(sign * a.basis(0, 0) == Approx(1.0 / std::sqrt(3.0)).margin(1e-10));
    CHECK(sign * a.basis(1, 0) == Approx(1.0 / std::sqrt(3.0)).margin(1e-10));
    CHECK(sign * a.basis(2, 0) == Approx(-1.0 / std::sqrt(3.0)).margin(1e-10));

    const Subspace b = nullspace_of_config(regular_lines(3), tol);
    REQUIRE(b.k == 1);
    const double s2 = b.basis(0, 0) > 0 ? 1.0 : -1.0;
    CHECK(s2 * b.basis(0, 0) == Approx(1.0 / std::sqrt(3.0)).margin(1e-10));
    CHECK(s2 * b.basis(1, 0) == Approx(-1.0 / std::sqrt(3.0)).margin(1e-10));
    CHECK(s2 * b.basis(2, 0) == Approx(1.0 / std::sqrt(3.0)).margin(1e-10));

    CHECK(nullspace_of_config(make_config(2, {{1, 0}, {0, 1}}), tol).k == 0);
}

TEST_CASE("theorem 7: alpha equals alignment of the dependency space", "[geometry]") {
    std::mt19937_64 rng(22);
    std::normal_distribution<double> g;
    const Tolerances tol;

    // planar strictly convex plus general-position configs up to d = 4
    for (int trial = 0; trial < 25; ++trial) {
        PointConfig s;
        if (trial % 2 == 0) {
            s = testsupport::random_convex_config(rng, 3 + static_cast<int>(rng() % 6));
        } else {
            const int d = 2 + static_cast<int>(rng() % 3);
            const int n = d + 1 + static_cast<int>(rng() % (8 - d));
            std::vector<std::vector<double>> pts(n, std::vector<double>(d));
            for (auto& p : pts)
                for (double& x : p) x = g(rng);
            s = make_config(d, pts);
        }
        const Subspace a = nullspace_of_config(s, tol);
        if (a.k == 0) continue;
        for (int i = 1; i <= s.n(); ++i) {
            const auto alpha = alpha_index(s, i, tol);
            const auto align = align_index_subspace(a, i, tol);
            REQUIRE_FALSE(align.value.infinite);
            CHECK(alpha.value == Approx(align.value.value).margin(1e-7));
        }
    }
}

TEST_CASE("alpha invariance under sign flips and global scaling", "[geometry]") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> cdist(0.2, 3.0);
    const Tolerances tol;
    for (int trial = 0; trial < 15; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 2);
        const int n = 3 + static_cast<int>(rng() % 4);
        std::vector<std::vector<double>> pts(n, std::vector<double>(d));
        for (auto& p : pts)
            for (double& x : p) x = g(rng);
        const PointConfig s = make_config(d, pts);

        const double c = (rng() % 2 ? 1.0 : -1.0) * cdist(rng);
        std::vector<std::vector<double>> flipped = pts;
        for (auto& p : flipped) {
            const double sigma = (rng() % 2) ? 1.0 : -1.0;
            for (double& x : p) x *= c * sigma;
        }
        const PointConfig s2 = make_config(d, flipped);
        for (int i = 1; i <= n; ++i)
            CHECK(alpha_index(s, i, tol).value ==
                  Approx(alpha_index(s2, i, tol).value).margin(1e-8));
    }
}

TEST_CASE("alpha witness sits on the cyclic neighbors for convex configs", "[geometry]") {
    std::mt19937_64 rng(24);
    const Tolerances tol;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const PointConfig s = testsupport::random_convex_config(rng, n);
        for (int i = 0; i < n; ++i) {
            const auto cert = alpha_index(s, i + 1, tol);
            CHECK(cert.value < 1.0);
            check_alpha_certificate(s, cert, tol);
            const int prev = (i + n - 1) % n;
            const int next = (i + 1) % n;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                if (j != prev && j != next) {
                    CHECK(std::abs(cert.witness[j]) <= 1e-9);
                    continue;
                }
                // strictly positive coefficient on the neighbor, with the sign
                // flipped when the neighbor wraps around the antipode
                const bool wraps = (j == prev && i == 0) || (j == next && i == n - 1);
                if (wraps) CHECK(cert.witness[j] < -1e-9);
                else CHECK(cert.witness[j] > 1e-9);
            }
        }
    }
}
