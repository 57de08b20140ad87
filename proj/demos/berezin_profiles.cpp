// Berezin boundary profiles of two Toeplitz operators on the Bergman space:
// T_{1-|w|^2} (compact) and the identity T_1 (not compact).

#include <kolmo/operators.hpp>

#include <cstdio>

int main()
{
    using namespace kolmo;
    const std::vector<double> radii{0.5, 0.75, 0.9, 0.95, 0.99};
    const auto compact = toeplitz_matrix(SymbolField::parse("1-|z|^2"), 64);
    const auto identity = toeplitz_matrix(SymbolField::parse("1"), 64);
    const auto pc = berezin_boundary_profile(compact, radii);
    const auto pi_ = berezin_boundary_profile(identity, radii);

    std::printf("%6s  %14s  %14s  %14s\n", "r", "B[1-|w|^2]", "u(r)", "B[1]");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        std::printf("%6.2f  %14.6e  %14.6e  %14.6e\n", r, pc[i].max_abs, 1.0 - r * r, pi_[i].max_abs);
    }
    std::printf("\nsigma_k of the deg-64 section\n%6s  %14s  %14s\n", "k", "1-|w|^2", "1/(k+2)");
    for (int k : {0, 4, 16, 32, 64})
        std::printf("%6d  %14.6e  %14.6e\n", k, essential_surrogate(compact, k), 1.0 / (k + 2));
    return 0;
}
