#include <kolmo/euclid.hpp>

#include "support.hpp"

#include <gtest/gtest.h>

using namespace kolmo;

namespace {

// int |g|^2 over |x| > R for g = e^{-pi x^2}: erfc(sqrt(2 pi) R) / sqrt(2).
double gaussian_tail_oracle(double R) { return std::erfc(std::sqrt(2.0 * pi) * R) / std::sqrt(2.0); }

// S_phi phi(a, b) for the unit Gaussian by composite Gauss-Legendre on [-12, 12].
Complex ambiguity_by_quadrature(double a, double b)
{
    static const auto g = build_interval_grid(96, 16, -12.0, 12.0);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.nodes()[i].real();
        acc += g.weights()[i] * normalized_gaussian(x) * normalized_gaussian(x - a) *
               std::polar(1.0, -2.0 * pi * b * x);
    }
    return acc;
}

SampledSignal wide_band_limited(double a, double shift = 0.0)
{
    return SampledSignal::band_limited(
        [shift](double xi) { return std::polar(1.0, -2.0 * pi * xi * shift); }, a, 32768, 160.0);
}

} // namespace

TEST(Euclid, SignalValidation)
{
    EXPECT_THROW(SampledSignal({1.0, 2.0}, 0.0, 0.0), ParameterError);
    EXPECT_THROW(SampledSignal({1.0}, 0.1, 0.0), ParameterError);
    EXPECT_THROW(SampledSignal({1.0, Complex(NAN, 0.0)}, 0.1, 0.0), NumericError);
    const auto f = SampledSignal::from_function(gaussian);
    EXPECT_EQ(f.size(), 4096u);
    EXPECT_DOUBLE_EQ(f.x_min(), -20.0);
    EXPECT_NEAR(f.spacing, 40.0 / 4096.0, 1e-15);
}

TEST(Euclid, SpatialTail)
{
    const auto box = SampledSignal::from_function(
        [](double x) { return std::abs(x) <= 1.0 ? Complex(1.0) : Complex(0.0); });
    EXPECT_EQ(l2_tail(box, 2.0), 0.0);

    const auto g = SampledSignal::from_function(gaussian);
    EXPECT_NEAR(l2_tail(g, 1.0), gaussian_tail_oracle(1.0), 1e-5);
    EXPECT_NEAR(l2_tail(g, 0.0), l2_norm_sq(g), 1e-15);
    EXPECT_NEAR(l2_norm_sq(g), 1.0 / std::sqrt(2.0), 1e-12);

    double prev = l2_tail(g, 0.0);
    for (double R = 0.25; R <= 10.0; R += 0.25) {
        const double t = l2_tail(g, R);
        EXPECT_LE(t, prev);
        prev = t;
    }

    EXPECT_THROW(l2_tail(g, 25.0), WindowError);
    EXPECT_THROW(l2_tail(g, -1.0), ParameterError);
}

TEST(Euclid, TranslationModulus)
{
    const auto g = SampledSignal::from_function(gaussian, 4000, 20.0);
    ASSERT_NEAR(g.spacing, 0.01, 1e-15);
    EXPECT_EQ(translation_modulus(g, 0.0), 0.0);
    // ||g(. - h) - g||^2 = sqrt(2) (1 - e^{-pi h^2 / 2})
    for (double h : {0.01, 0.05, 0.1, 0.5, 2.0, -0.3}) {
        const double oracle = std::sqrt(2.0) * (1.0 - std::exp(-pi * h * h / 2.0));
        EXPECT_NEAR(translation_modulus(g, h), oracle, 1e-10 + 1e-8 * oracle) << h;
    }
    EXPECT_GE(translation_modulus(g, 0.1) / translation_modulus(g, 0.01), 50.0);

    double prev = 0.0;
    for (int m = 1; m <= 50; ++m) {
        const double t = translation_modulus(g, m * g.spacing);
        EXPECT_GT(t, prev);
        prev = t;
    }

    std::vector<Complex> s(512);
    for (auto &v : s)
        v = testing_support::random_complex(1.0);
    const SampledSignal r(s, 0.05, -12.8);
    for (int m : {1, 7, 100, 600})
        EXPECT_LE(translation_modulus(r, m * 0.05), 4.0 * l2_norm_sq(r) * (1.0 + 1e-12));

    EXPECT_THROW(translation_modulus(g, 0.015), ParameterError);
}

TEST(Euclid, FourierTail)
{
    const auto g = SampledSignal::from_function(gaussian);
    EXPECT_NEAR(fourier_tail(g, 1.0), l2_tail(g, 1.0), 1e-5);
    EXPECT_NEAR(fourier_tail(g, 1.0), gaussian_tail_oracle(1.0), 1e-5);

    const auto mod = SampledSignal::from_function(
        [](double x) { return std::polar(1.0, 2.0 * pi * 20.0 * x) * gaussian(x); });
    // Spectrum e^{-pi (xi - 20)^2}: mass beyond |xi| > 10 is all but erfc(sqrt(2 pi) 10) / 2.
    EXPECT_GE(fourier_tail(mod, 10.0), 0.99 * l2_norm_sq(mod));

    const auto bl = SampledSignal::band_limited([](double) { return Complex(1.0); }, 2.0);
    EXPECT_LE(fourier_tail(bl, 2.5), 1e-8);

    double prev = fourier_tail(g, 0.0);
    for (double R = 0.5; R <= 20.0; R += 0.5) {
        const double t = fourier_tail(g, R);
        EXPECT_LE(t, prev);
        prev = t;
    }
    EXPECT_THROW(fourier_tail(g, 60.0), WindowError);
}

TEST(Euclid, Plancherel)
{
    std::vector<Complex> s(1000);
    for (auto &v : s)
        v = testing_support::random_complex(1.0);
    const SampledSignal r(s, 0.03, -7.0);
    const double spatial = l2_norm_sq(r);
    EXPECT_NEAR(fourier_tail(r, 0.0), spatial, 1e-10 * spatial);
}

TEST(Euclid, StftGaussianAmbiguity)
{
    const auto phi = SampledSignal::from_function(normalized_gaussian);
    const auto field = stft_field(phi);
    EXPECT_FALSE(field.window_renormalized);
    const auto &A = field.a_axis;
    const auto &B = field.b_axis;
    ASSERT_EQ(A.size(), 129u);
    ASSERT_EQ(B.size(), 513u);
    for (std::size_t ia = 0; ia < A.size(); ia += 9)
        for (std::size_t ib = 200; ib < 320; ib += 7) {
            const double a = A.at(ia), b = B.at(ib);
            const double got = std::norm(field.at(ia, ib));
            EXPECT_NEAR(got, std::exp(-pi * (a * a + b * b)), 1e-6) << a << "," << b;
            EXPECT_NEAR(got, std::norm(ambiguity_by_quadrature(a, b)), 1e-6) << a << "," << b;
        }
}

TEST(Euclid, Moyal)
{
    const auto phi = SampledSignal::from_function(normalized_gaussian);
    EXPECT_NEAR(stft_mass(stft_field(phi)), l2_norm_sq(phi), 1e-6);
    const auto g = SampledSignal::from_function(gaussian);
    const auto field = stft_field(g);
    EXPECT_NEAR(stft_mass(field), l2_norm_sq(g), 1e-6);
    EXPECT_NEAR(stft_tail(field, 0.0), stft_mass(field), 1e-15);

    const auto mod = SampledSignal::from_function(
        [](double x) { return std::polar(1.0, 2.0 * pi * 7.0 * x) * gaussian(x - 1.5); });
    EXPECT_NEAR(stft_mass(stft_field(mod)), l2_norm_sq(mod), 1e-6);
}

TEST(Euclid, StftTailAndFamily)
{
    const auto phi = SampledSignal::from_function(normalized_gaussian);
    const auto field = stft_field(phi);
    const double box = std::erf(2.0 * std::sqrt(pi));
    EXPECT_NEAR(stft_tail(field, 2.0), 1.0 - box * box, 1e-4);
    EXPECT_THROW(stft_tail(field, 9.0), WindowError);

    double prev = stft_tail(field, 0.0);
    for (double R = 0.5; R <= 8.0; R += 0.5) {
        const double t = stft_tail(field, R);
        EXPECT_LE(t, prev);
        prev = t;
    }

    const auto fam = modulated_gaussians(20);
    const auto rows = family_tails(fam, {5.0}, true);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_GE(rows[0].stft, 0.9);
    EXPECT_GE(stft_tail(stft_field(fam[20]), 5.0), 0.9);
}

TEST(Euclid, StftZeroAndCovariance)
{
    const auto zero = SampledSignal::from_function([](double) { return Complex(0.0); });
    for (const auto &v : stft_field(zero).values)
        EXPECT_EQ(v, Complex(0.0));

    const auto phi = SampledSignal::from_function(normalized_gaussian);
    const auto shifted =
        SampledSignal::from_function([](double x) { return normalized_gaussian(x - 0.5); });
    const auto f0 = stft_field(phi);
    const auto f1 = stft_field(shifted);
    const std::size_t nb = f0.b_axis.size();
    for (std::size_t ia = 0; ia + 4 < f0.a_axis.size(); ++ia)
        for (std::size_t ib = 0; ib < nb; ib += 5)
            EXPECT_NEAR(std::abs(f1.at(ia + 4, ib)), std::abs(f0.at(ia, ib)), 1e-8);
}

TEST(Euclid, WindowNormalization)
{
    StftWindow w{gaussian, 6.0, "unnormalized gaussian"};
    const auto g = SampledSignal::from_function(gaussian);
    const auto field = stft_field(g, w);
    EXPECT_TRUE(field.window_renormalized);
    EXPECT_NEAR(stft_mass(field), l2_norm_sq(g), 1e-6);
    EXPECT_THROW(stft_field(g, StftWindow{[](double) { return Complex(0.0); }, 1.0, "zero"}),
                 ParameterError);
    EXPECT_THROW(stft_field(g, StftWindow::gaussian(), Axis{-1.0, 1.0, 0.3}), ParameterError);
}

TEST(Euclid, PaleyWienerTail)
{
    const auto sinc = wide_band_limited(0.5);
    EXPECT_NEAR(l2_norm_sq(sinc), 1.0, 4e-3);
    const double t20 = pw_tail(sinc, 0.5, 20.0);
    EXPECT_LE(t20, 0.04);
    // int_{|x| > R} sinc^2 is about 1 / (pi^2 R) for large R.
    EXPECT_NEAR(t20, 1.0 / (pi * pi * 20.0), 0.2 / (pi * pi * 20.0));
    EXPECT_LT(pw_tail(sinc, 0.5, 40.0), t20);

    const auto far = wide_band_limited(0.5, 100.0);
    EXPECT_GE(pw_tail(far, 0.5, 5.0), 0.95 * l2_norm_sq(far));

    const auto g = SampledSignal::from_function(gaussian);
    EXPECT_THROW(pw_tail(g, 0.5, 5.0), PreconditionError);
    EXPECT_THROW(pw_tail(g, 0.0, 5.0), ParameterError);
}

TEST(Euclid, GaussianFamilyDichotomy)
{
    const auto translated = family_tails(translated_gaussians(11), {10.0}, false);
    EXPECT_LT(translated[0].spatial, 1e-6);
    EXPECT_LT(translated[0].fourier, 1e-6);
    EXPECT_LT(translated[0].stft, 0.0);

    const auto modulated = family_tails(modulated_gaussians(20), {10.0}, false);
    EXPECT_LT(modulated[0].spatial, 1e-6);
    EXPECT_GT(modulated[0].fourier, 0.9);
    EXPECT_GE(modulated[0].fourier_argmax, 13u);

    EXPECT_THROW(family_tails({}, {1.0}, false), ParameterError);
}
