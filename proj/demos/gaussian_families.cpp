// Translated Gaussians stay precompact in L^2(R); modulated ones leak their
// Fourier mass to infinity.

#include <kolmo/euclid.hpp>

#include <cstdio>

int main()
{
    using namespace kolmo;
    const std::vector<double> radii{1.0, 2.0, 5.0, 10.0};
    const auto translated = family_tails(translated_gaussians(11), radii, false);
    const auto modulated = family_tails(modulated_gaussians(20), radii, false);

    std::printf("%6s  %12s %12s   %12s %12s\n", "R", "trans x", "trans xi", "mod x", "mod xi");
    for (std::size_t i = 0; i < radii.size(); ++i)
        std::printf("%6.1f  %12.4e %12.4e   %12.4e %12.4e\n", radii[i], translated[i].spatial,
                    translated[i].fourier, modulated[i].spatial, modulated[i].fourier);

    const auto g = SampledSignal::from_function(normalized_gaussian);
    std::printf("\nshift h   ||g(.-h) - g||^2\n");
    for (int m : {1, 8, 64, 256})
        std::printf("%7.4f   %.6e\n", m * g.spacing, translation_modulus(g, m * g.spacing));
    return 0;
}
