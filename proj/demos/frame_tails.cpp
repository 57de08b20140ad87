// Frame tail profiles q_n = sup_f sum_{|x| > R_n} |<f, k_x>|^2 for a family
// of monomials in the Bergman and Fock spaces.

#include <kolmo/frames.hpp>

#include <cmath>
#include <cstdio>

int main()
{
    using namespace kolmo;
    std::vector<FunctionRep> family;
    for (int j = 0; j <= 6; ++j) {
        std::vector<Complex> c(j + 1, 0.0);
        c[j] = 1.0;
        family.push_back(FunctionRep::from_coeffs(c));
    }
    const auto bergman = FrameSpec::bergman();
    const auto bp = family_tail_profile(bergman, family, Exhaustion::default_for(bergman, 12), 12);
    std::printf("Bergman, e_0..e_6\n%4s %10s %14s %14s\n", "n", "R_n", "q_n", "1-R^14");
    for (std::size_t n = 0; n < bp.values.size(); ++n) {
        const double R = bp.levels[n];
        std::printf("%4zu %10.6f %14.6e %14.6e\n", n + 1, R, bp.values[n], 1.0 - std::pow(R, 14));
    }

    const auto fock = FrameSpec::fock();
    const auto fp = family_tail_profile(fock, family, Exhaustion::default_for(fock, 8), 8);
    std::printf("\nFock, z^0..z^6\n%4s %10s %14s %8s\n", "n", "R_n", "q_n", "argmax");
    for (std::size_t n = 0; n < fp.values.size(); ++n)
        std::printf("%4zu %10.4f %14.6e %8zu\n", n + 1, fp.levels[n], fp.values[n], fp.argmax[n]);
    return 0;
}
