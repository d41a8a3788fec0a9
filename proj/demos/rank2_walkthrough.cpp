// Walks the rank-2 machinery end to end for a handful of n and prints the
// proof objects next to the closed form.

#include <gramlax/rank2.hpp>
#include <gramlax/search.hpp>

#include <cmath>
#include <cstdio>

using namespace gramlax;

int main() {
    const double pi = std::acos(-1.0);
    std::printf("%3s  %-12s %-12s %-12s %6s %5s\n", "n", "eps", "cos(pi/n)", "welch", "rankQ'",
                "psd");
    for (int n = 3; n <= 10; ++n) {
        const Rank2Report rep = rank2_pipeline(n);
        std::printf("%3d  %.10f %.10f %.10f %6d %5s\n", n, rep.eps, std::cos(pi / n),
                    welch_bound(n, 2), numeric_rank(rep.q_prime), rep.psd ? "yes" : "no");
    }

    // show the n = 4 proof objects in full
    const Rank2Report rep = rank2_pipeline(4);
    std::printf("\nn = 4 proof objects (P, lambda, Q', spectrum):\n");
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) std::printf("%9.5f ", rep.p.p(i, j));
        std::printf("\n");
    }
    std::printf("lambda:");
    for (double l : rep.lambda) std::printf(" %.5f", l);
    std::printf("\nQ':\n");
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) std::printf("%9.5f ", rep.q_prime(i, j));
        std::printf("\n");
    }
    std::printf("eigenvalues:");
    for (double e : rep.eigenvalues) std::printf(" %.10f", e);
    std::printf("\n");
    return 0;
}
