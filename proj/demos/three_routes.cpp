// Pushes one planar configuration through all three formulations and prints
// the agreeing values: alpha_i (geometry), Al_i of the dependency space
// (alignment LPs), the dual certificate bound (Chebyshev LPs), and the
// hull-walking oracle.

#include <gramlax/duality.hpp>
#include <gramlax/geometry.hpp>
#include <gramlax/oracle.hpp>
#include <gramlax/rank2.hpp>

#include <cstdio>

using namespace gramlax;

int main() {
    // a deliberately lopsided five-point configuration; it is not convex
    // (the first point lies inside the hull of the others, so alpha_1 > 1),
    // which none of the three routes requires
    PointConfig s = normalize_antipodal(make_config(
        2, {{1.0, 0.05}, {0.8, 0.7}, {-0.1, 1.2}, {-0.9, 0.8}, {-1.1, -0.3}}));

    const AlphaTable alpha = alpha_all(s);
    const Subspace a = nullspace_of_config(s);
    const SubspaceAlignment al = align_subspace(a);
    const OffCertificate cert = dualize(a);

    std::printf("%3s  %-14s %-14s %-14s\n", "i", "alpha_i (LP)", "Al_i (LP)", "hull oracle");
    for (int i = 1; i <= s.n(); ++i)
        std::printf("%3d  %.12f %.12f %.12f\n", i, alpha.values[i - 1],
                    al.certificates[i - 1].value.value, oracle::alpha_brute_d2(s, i));
    std::printf("\nmax alpha      = %.12f\n", alpha.max_value);
    std::printf("Al(A)          = %.12f\n", al.value.value);
    std::printf("dual cert eps  = %.12f\n", cert.eps);
    std::printf("cert verifies  = %s\n", verify_off_certificate(cert).passed() ? "yes" : "no");
    return 0;
}
