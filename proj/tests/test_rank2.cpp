#include <gramlax/rank2.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace gramlax;
using Catch::Approx;

namespace {

const double pi = std::acos(-1.0);

// angle between w_i and w_{i+1}, with the antipodal wrap at the top
double neighbor_angle(const PointConfig& s, int i) {
    const int n = s.n();
    if (i + 1 < n) return s.angles[i + 1] - s.angles[i];
    return s.angles[0] + pi - s.angles[n - 1];
}

}  // namespace

TEST_CASE("optimal_config produces the extremal lines", "[rank2]") {
    const PointConfig c3 = optimal_config(3);
    CHECK(c3.points[0][0] == Approx(1.0));
    CHECK(c3.points[0][1] == Approx(0.0).margin(1e-15));
    CHECK(c3.points[1][0] == Approx(0.5));
    CHECK(c3.points[1][1] == Approx(std::sqrt(3.0) / 2));
    CHECK(c3.points[2][0] == Approx(-0.5));
    CHECK(c3.points[2][1] == Approx(std::sqrt(3.0) / 2));
    CHECK(is_strictly_convex_antipodal(c3));

    const PointConfig c2 = optimal_config(2);
    const auto t2 = alpha_all(c2);
    CHECK(t2.values[0] == Approx(0.0).margin(1e-10));
    CHECK(t2.values[1] == Approx(0.0).margin(1e-10));

    const auto t4 = alpha_all(optimal_config(4));
    for (double v : t4.values) CHECK(v == Approx(std::cos(pi / 4)).margin(1e-9));

    CHECK_THROWS_AS(optimal_config(1), input_error);
}

TEST_CASE("p_matrix on the optimal configs", "[rank2]") {
    const Tolerances tol;

    SECTION("n = 3 closed form") {
        const PStruct ps = p_matrix(optimal_config(3), tol);
        const Mat expect = Mat::from_rows({{1, -1, 1}, {-1, 1, -1}, {1, -1, 1}});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(ps.p(i, j) == Approx(expect(i, j)).margin(1e-12));
        for (double e : ps.eps_per_index) CHECK(e == Approx(0.5).margin(1e-12));
    }

    SECTION("n = 4: eps and dependency residuals") {
        const PointConfig s = optimal_config(4);
        const PStruct ps = p_matrix(s, tol);
        const Mat w = config_matrix(s);
        for (int i = 0; i < 4; ++i) {
            CHECK(ps.eps_per_index[i] == Approx(std::cos(pi / 4)).margin(1e-12));
            // column support is {i-1, i, i+1} cyclically
            for (int j = 0; j < 4; ++j) {
                const bool on = j == i || j == (i + 1) % 4 || j == (i + 3) % 4;
                if (!on) CHECK(ps.p(j, i) == 0.0);
            }
            // each column is a genuine dependency of the points
            const std::vector<double> img = mat_vec(w, ps.p.col(i));
            CHECK(max_abs(img) < 1e-12);
        }
    }

    SECTION("shrunk vector breaks uniformity but not structure") {
        PointConfig s = optimal_config(5);
        for (double& x : s.points[0]) x *= 0.9;
        s = normalize_antipodal(s);
        const PStruct ps = p_matrix(s, tol);
        double lo = 1e300, hi = 0;
        for (int i = 0; i < 5; ++i) {
            lo = std::min(lo, ps.eps_per_index[i]);
            hi = std::max(hi, ps.eps_per_index[i]);
            CHECK(ps.eps_per_index[i] == Approx(alpha_index(s, i + 1, tol).value).margin(1e-9));
        }
        CHECK(hi - lo > 1e-3);
    }

    SECTION("rejects structurally bad inputs") {
        CHECK_THROWS_AS(p_matrix(normalize_antipodal(make_config(2, {{1, 0}, {2, 0}, {0, 1}})), tol),
                        structural_error);
        // caving the middle vector in breaks strict convexity
        CHECK_THROWS_AS(
            p_matrix(normalize_antipodal(make_config(2, {{1, 0}, {0.1, 0.1}, {0, 1}})), tol),
            structural_error);
        PointConfig no_angles = make_config(2, {{1, 0}, {0, 1}, {-1, 1}});
        CHECK_THROWS_AS(p_matrix(no_angles, tol), input_error);
    }
}

TEST_CASE("p_matrix support and sign pattern on random convex configs", "[rank2]") {
    std::mt19937_64 rng(51);
    const Tolerances tol;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 7);
        const PointConfig s = testsupport::random_convex_config(rng, n);
        const PStruct ps = p_matrix(s, tol);
        CHECK(ps.support_residual < 1e-8);
        for (int i = 0; i < n - 1; ++i) {
            CHECK(ps.a[i] < 0.0);
            CHECK(ps.b[i] < 0.0);
        }
        CHECK(ps.a[n - 1] > 0.0);
        CHECK(ps.b[n - 1] > 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const bool on = j == i || j == (i + 1) % n || j == (i + n - 1) % n;
                if (!on) CHECK(ps.p(i, j) == 0.0);
            }
    }
}

TEST_CASE("lambda_matrix on symmetric and generic configs", "[rank2]") {
    const Tolerances tol;

    SECTION("regular configs need no rescaling") {
        for (int n : {3, 5, 8}) {
            const PStruct ps = p_matrix(optimal_config(n), tol);
            const LambdaResult lr = lambda_matrix(ps, tol);
            CHECK_FALSE(lr.fallback_used);
            for (double l : lr.lambda) CHECK(l == Approx(1.0).margin(1e-12));
            Mat s(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s(i, j) = ps.p(i, j) * lr.lambda[j];
            double asym = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
            CHECK(asym < 1e-12);
        }
    }

    SECTION("perturbed convex configs still close the cycle") {
        // The cycle closure is a geometric identity (sine-rule telescoping),
        // so valid dependency structures always admit the propagated Lambda.
        std::mt19937_64 rng(52);
        for (int trial = 0; trial < 20; ++trial) {
            const PointConfig s = testsupport::random_convex_config(rng, 4 + static_cast<int>(rng() % 5));
            const PStruct ps = p_matrix(s, tol);
            const LambdaResult lr = lambda_matrix(ps, tol);
            CHECK_FALSE(lr.fallback_used);
            CHECK(lr.cycle_residual < 1e-10);
            const int n = ps.n;
            double mn = 1e300;
            for (double l : lr.lambda) {
                CHECK(l > 0.0);
                mn = std::min(mn, l);
            }
            CHECK(mn == Approx(1.0));
            Mat pl(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) pl(i, j) = ps.p(i, j) * lr.lambda[j];
            double asym = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) asym = std::max(asym, std::abs(pl(i, j) - pl(j, i)));
            CHECK(asym < 1e-10);
        }
    }

    SECTION("inconsistent hand-built P fails through the fallback") {
        PStruct ps = p_matrix(optimal_config(4), tol);
        ps.p(1, 0) *= 1.5;  // break the geometric consistency
        ps.b[0] *= 1.5;
        CHECK_THROWS_AS(lambda_matrix(ps, tol), structural_error);
    }
}

TEST_CASE("positive_kernel_weights", "[rank2]") {
    const Tolerances tol;

    const auto w1 = positive_kernel_weights({Mat::from_rows({{1}}), Mat::from_rows({{-1}})}, tol);
    CHECK(w1[0] == Approx(1.0).margin(1e-10));
    CHECK(w1[1] == Approx(1.0).margin(1e-10));

    CHECK_THROWS_AS(positive_kernel_weights({Mat::from_rows({{1}}), Mat::from_rows({{1}})}, tol),
                    structural_error);

    // rank-one products q_i p_i^T from the optimal 4-line pipeline: symmetry
    // forces equal weights
    const PointConfig s = optimal_config(4);
    const PStruct ps = p_matrix(s, tol);
    const Mat q = q_from_config(s, tol);
    std::vector<Mat> prods;
    for (int i = 0; i < 4; ++i) {
        Mat m(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m(r, c) = q(i, r) * ps.p(c, i);
        prods.push_back(m);
    }
    const auto w2 = positive_kernel_weights(prods, tol);
    for (double l : w2) CHECK(l == Approx(w2[0]).margin(1e-8));
}

TEST_CASE("q_from_config on regular configs", "[rank2]") {
    const Tolerances tol;

    SECTION("n = 3 gram closed form") {
        const Mat q = q_from_config(optimal_config(3), tol);
        const Mat expect = Mat::from_rows({{1, 0.5, -0.5}, {0.5, 1, 0.5}, {-0.5, 0.5, 1}});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(q(i, j) == Approx(expect(i, j)).margin(1e-9));
        // Q annihilates the dependency columns
        const PStruct ps = p_matrix(optimal_config(3), tol);
        CHECK(max_abs(q * ps.p) < 1e-9);
    }

    SECTION("n = 4: cosine structure and symmetry") {
        const Mat q = q_from_config(optimal_config(4), tol);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(q(i, j) == Approx(std::cos((i - j) * pi / 4)).margin(1e-9));
        double asym = 0, offmax = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                asym = std::max(asym, std::abs(q(i, j) - q(j, i)));
                if (i != j) offmax = std::max(offmax, std::abs(q(i, j)));
            }
        CHECK(asym < 1e-9);
        CHECK(offmax == Approx(std::cos(pi / 4)).margin(1e-9));
    }
}

TEST_CASE("symmetrize outputs the full report", "[rank2]") {
    const Tolerances tol;

    SECTION("n = 3: Q already symmetric") {
        const PointConfig s = optimal_config(3);
        const PStruct ps = p_matrix(s, tol);
        const Mat q = q_from_config(s, tol);
        const auto lam = lambda_matrix(ps, tol);
        const Rank2Report rep = symmetrize(q, ps, lam.lambda, tol);
        CHECK(rep.eps == Approx(0.5).margin(1e-9));
        CHECK(rep.r_pl_symmetry < 1e-10);
        CHECK(rep.r_annihilation < 1e-9);
        CHECK(rep.pl_rank == 1);  // n - 2
        CHECK(rep.eigenvalues[0] == Approx(0.0).margin(1e-9));
        CHECK(rep.eigenvalues[1] == Approx(1.5).margin(1e-9));
        CHECK(rep.eigenvalues[2] == Approx(1.5).margin(1e-9));
        CHECK(rep.psd);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(rep.q_prime(i, j) == Approx(q(i, j)).margin(1e-9));
    }

    SECTION("n = 6: rank-2 PSD gram of the hexagonal lines") {
        const PointConfig s = optimal_config(6);
        const PStruct ps = p_matrix(s, tol);
        const Rank2Report rep = symmetrize(q_from_config(s, tol), ps, lambda_matrix(ps, tol).lambda, tol);
        CHECK(rep.psd);
        CHECK(numeric_rank(rep.q_prime, tol) == 2);
        double offmax = 0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                if (i != j) offmax = std::max(offmax, std::abs(rep.q_prime(i, j)));
        CHECK(offmax == Approx(std::cos(pi / 6)).margin(1e-9));
    }

    SECTION("asymmetric noise surfaces in the annihilation residual") {
        const PointConfig s = optimal_config(5);
        const PStruct ps = p_matrix(s, tol);
        Mat q = q_from_config(s, tol);
        std::mt19937_64 rng(53);
        std::uniform_real_distribution<double> u(-1e-3, 1e-3);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                if (i != j) q(i, j) += u(rng);
        const Rank2Report rep = symmetrize(q, ps, lambda_matrix(ps, tol).lambda, tol);
        CHECK(rep.r_annihilation > 1e-5);
        CHECK(rep.r_annihilation < 2e-2);
    }
}

TEST_CASE("lemma 10: uniform eps at the optimum", "[rank2]") {
    const Tolerances tol;
    for (int n : {3, 4, 7, 11}) {
        const PStruct ps = p_matrix(optimal_config(n), tol);
        for (double e : ps.eps_per_index)
            CHECK(e == Approx(ps.eps_per_index[0]).margin(1e-12));
    }
}

TEST_CASE("lemma 14 product and angle identities on random configs", "[rank2]") {
    std::mt19937_64 rng(54);
    const Tolerances tol;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 7);
        const PointConfig s = testsupport::random_convex_config(rng, n);
        const PStruct ps = p_matrix(s, tol);
        const auto lam = lambda_matrix(ps, tol);

        // scaled off-diagonals of P Lambda: c_i = a_i lambda_{i+1}, d_i = b_i lambda_i
        std::vector<double> c(n), d(n);
        for (int i = 0; i < n; ++i) {
            c[i] = ps.a[i] * lam.lambda[(i + 1) % n];
            d[i] = ps.b[i] * lam.lambda[i];
        }
        double log_prod_c = 0, log_prod_d = 0;
        for (int i = 0; i < n; ++i) {
            log_prod_c += std::log(std::abs(c[i]));
            log_prod_d += std::log(std::abs(d[i]));
        }
        CHECK(std::exp(log_prod_c - log_prod_d) == Approx(1.0).epsilon(1e-8));

        // |d_i| / |c_{i-1}| = |w_{i-1}| sin(phi_{i-1}) / (|w_{i+1}| sin(phi_i)),
        // with angles taken cyclically through the antipode
        for (int i = 0; i < n; ++i) {
            const int prev = (i + n - 1) % n;
            const int next = (i + 1) % n;
            const double lhs = std::abs(d[i]) / std::abs(c[prev]);
            const double wl = std::hypot(s.points[prev][0], s.points[prev][1]);
            const double wr = std::hypot(s.points[next][0], s.points[next][1]);
            const double rhs =
                wl * std::sin(neighbor_angle(s, prev)) / (wr * std::sin(neighbor_angle(s, i)));
            CHECK(lhs == Approx(rhs).epsilon(1e-8));
        }
    }
}

TEST_CASE("rank2_pipeline reproduces the closed form", "[rank2]") {
    const Tolerances tol;

    const Rank2Report r3 = rank2_pipeline(3, tol);
    CHECK(r3.eps == Approx(0.5).margin(1e-9));
    CHECK(r3.psd);

    const Rank2Report r5 = rank2_pipeline(5, tol);
    CHECK(r5.eps == Approx(0.8090169943749475).margin(1e-9));
    CHECK(r5.psd);
    CHECK(numeric_rank(r5.q_prime, tol) == 2);

    const Rank2Report r12 = rank2_pipeline(12, tol);
    CHECK(r12.eps == Approx(0.9659258262890683).margin(1e-9));
    CHECK(r12.psd);

    CHECK_THROWS_AS(rank2_pipeline(2, tol), input_error);
}

TEST_CASE("rank2_pipeline invariants for n = 3..12", "[rank2]") {
    const Tolerances tol;
    for (int n = 3; n <= 12; ++n) {
        const Rank2Report rep = rank2_pipeline(n, tol);
        CHECK(rep.eps == Approx(std::cos(pi / n)).margin(1e-9));
        CHECK(rep.psd);
        CHECK(rep.eigenvalues.front() >= -1e-9 * n);
        CHECK(numeric_rank(rep.q_prime, tol) == 2);
        CHECK(rep.pl_rank >= n - 2);
        CHECK(rep.r_pl_symmetry <= 1e-8);
        CHECK(std::abs(trace(rep.q_prime) - n) <= 1e-10 * n);
        // the two possibly nonzero eigenvalues are nonnegative and sum to n
        CHECK(rep.eigenvalues[n - 1] + rep.eigenvalues[n - 2] == Approx(double(n)).margin(1e-8));
    }
}

TEST_CASE("cross-formulation agreement", "[rank2]") {
    const Tolerances tol;
    for (int n : {5, 7}) {
        const PointConfig s = optimal_config(n);
        const Rank2Report rep = rank2_pipeline(n, tol);
        const OffCertificate cert = dualize(nullspace_of_config(s, tol), tol);
        const auto alpha = alpha_all(s, tol);
        CHECK(rep.eps == Approx(cert.eps).margin(1e-9));
        CHECK(rep.eps == Approx(alpha.max_value).margin(1e-9));
    }
}
