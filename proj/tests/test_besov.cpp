#include <kolmo/besov.hpp>

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kolmo;
using testing_support::random_coeffs;

namespace {

FunctionRep monomial(int m, Complex c = 1.0)
{
    std::vector<Complex> a(m + 1, 0.0);
    a[m] = c;
    return FunctionRep::from_coeffs(a);
}

/// int_{a}^{1} g(r) dr by composite Simpson with n panels.
template <class G>
double simpson(G g, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = g(a) + g(b);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
    return s * h / 3.0;
}

} // namespace

TEST(BesovNorm, Examples)
{
    // Normalized Bergman e_3 = 2 z^3.
    EXPECT_NEAR(besov_norm(BesovSpec::bergman(), monomial(3, 2.0)), 1.0, 1e-10);

    BesovSpec s1 = BesovSpec::dirichlet(3.0, 1);
    for (double p : {1.5, 2.0, 3.0}) {
        BesovSpec s;
        s.p = p;
        s.order = 1;
        s.weight = WeightDescriptor::radial_power(0.5);
        EXPECT_NEAR(besov_norm(s, FunctionRep::from_coeffs({Complex(0.6, -0.8) * 2.5})), 2.5, 1e-14);
    }
    EXPECT_NEAR(besov_norm(s1, FunctionRep::from_coeffs({Complex(-3.0)})), 3.0, 1e-14);

    const auto hardy = BesovSpec::hardy(1);
    for (int m = 1; m <= 30; ++m)
        EXPECT_NEAR(besov_norm(hardy, monomial(m)), std::sqrt(m / (m + 1.0)), 1e-8) << m;
}

TEST(BesovNorm, HardyPresetSquaredNormInHalfOpenInterval)
{
    const auto hardy = BesovSpec::hardy(1);
    for (int m = 1; m <= 30; ++m) {
        const double sq = std::pow(besov_norm(hardy, monomial(m)), 2);
        EXPECT_NEAR(sq, m / (m + 1.0), 1e-8);
        EXPECT_GE(sq, 0.5 - 1e-12);
        EXPECT_LT(sq, 1.0);
    }
}

TEST(BesovNorm, HigherOrderHardyPreset)
{
    // J = 2: sigma = (1-|w|^2)^3, f = z^m. Oracle: |m(m-1)|^2 int r^{2m-4}(1-r^2)^3 2r dr
    // = (m(m-1))^2 B(m-1, 4) = (m(m-1))^2 * 6 / ((m-1)m(m+1)(m+2)).
    const auto s = BesovSpec::hardy(2);
    for (int m = 2; m <= 12; ++m) {
        const double mm = m * (m - 1.0);
        const double oracle = mm * mm * 6.0 / ((m - 1.0) * m * (m + 1.0) * (m + 2.0));
        EXPECT_NEAR(std::pow(besov_norm(s, monomial(m)), 2), oracle, 1e-9 * oracle) << m;
    }
    // Point terms: |f(0)|^2 + |f'(0)|^2.
    const auto f = FunctionRep::from_coeffs({Complex(1.0, 1.0), Complex(0.0, 2.0)});
    EXPECT_NEAR(std::pow(besov_norm(s, f), 2), 2.0 + 4.0, 1e-13);
}

TEST(BesovNorm, NonPolynomialWeightUsesGradedRule)
{
    // sigma = (1-|w|^2)^{-1/2}, J = 0, f = z: int r^2 (1-r^2)^{-1/2} 2r dr = 4/3.
    const auto s = BesovSpec::weighted_bergman(2.0, -0.5);
    EXPECT_NEAR(std::pow(besov_norm(s, monomial(1)), 2), 4.0 / 3.0, 1e-9);
    // p = 3, sigma = 1, f = z: int r^3 2r dr = 2/5.
    EXPECT_NEAR(std::pow(besov_norm(BesovSpec::bergman(3.0), monomial(1)), 3), 0.4, 1e-10);
}

TEST(BesovNorm, SampledInputs)
{
    const auto coeffs = random_coeffs(5);
    const auto poly = FunctionRep::from_coeffs(coeffs);
    const auto d1 = detail::derivative_coeffs(coeffs, 1);
    Sampler f = [c = coeffs](Complex z) { return testing_support::horner(c, z); };
    Sampler df = [d = d1](Complex z) { return testing_support::horner(d, z); };
    const auto s = BesovSpec::hardy(1);
    EXPECT_THROW(besov_norm(s, FunctionRep::from_sampler(f)), ParameterError);
    const auto sampled = FunctionRep::from_sampler(f, {df});
    BesovQuadrature q;
    q.n_angular = 32;
    EXPECT_NEAR(besov_norm(s, sampled, q), besov_norm(s, poly, q), 1e-12);
}

TEST(BesovNorm, ScalingIsExact)
{
    const auto f = FunctionRep::from_coeffs(random_coeffs(7));
    for (const auto &s : {BesovSpec::hardy(1), BesovSpec::bergman(), BesovSpec::dirichlet(2.0, 1)}) {
        const double base = besov_norm(s, f);
        for (Complex c : {Complex(2.0), Complex(0.0, -0.5), Complex(3.0, 4.0)})
            EXPECT_NEAR(besov_norm(s, f.scaled(c)), std::abs(c) * base, 1e-12 * std::abs(c) * base);
    }
}

TEST(BesovNorm, Errors)
{
    EXPECT_THROW(BesovSpec::hardy(0), ParameterError);
    BesovSpec s;
    s.p = 0.5;
    EXPECT_THROW(besov_norm(s, monomial(1)), ParameterError);
    s = BesovSpec::bergman();
    s.weight = WeightDescriptor::radial_power(-1.0);
    EXPECT_THROW(besov_norm(s, monomial(1)), ParameterError);
    s = BesovSpec::bergman();
    s.dim = 2;
    EXPECT_THROW(besov_norm(s, monomial(1)), ParameterError);
    s = BesovSpec::bergman();
    s.z0 = 1.0;
    EXPECT_THROW(besov_norm(s, monomial(1)), DomainError);
}

TEST(BesovTail, Examples)
{
    const auto hardy = BesovSpec::hardy(1);
    EXPECT_EQ(besov_tail(hardy, FunctionRep::from_coeffs({Complex(4.0)}), 0.5), 0.0);
    EXPECT_NEAR(besov_tail(BesovSpec::bergman(), monomial(0), 0.5), 0.75, 1e-8);
    // Dirichlet p = 2, J = 1: sigma = 1, f = z^m, tail = m (1 - (1-delta)^{2m}).
    const auto dir = BesovSpec::dirichlet(2.0, 1);
    EXPECT_NEAR(besov_tail(dir, monomial(1), 0.5), 0.75, 1e-8);
    for (int m = 1; m <= 10; ++m)
        for (double d : {0.1, 0.3, 0.7})
            EXPECT_NEAR(besov_tail(dir, monomial(m), d), m * (1.0 - std::pow(1.0 - d, 2 * m)), 1e-10);
    EXPECT_THROW(besov_tail(hardy, monomial(1), 1.0), ParameterError);
    EXPECT_THROW(besov_tail(hardy, monomial(1), 0.0), ParameterError);
}

TEST(BesovTail, FullAnnulusRecoversIntegralPart)
{
    const auto f = FunctionRep::from_coeffs(random_coeffs(6));
    for (const auto &s : {BesovSpec::hardy(1), BesovSpec::hardy(2), BesovSpec::bergman(),
                          BesovSpec::weighted_bergman(2.0, -0.5)}) {
        const double whole = std::pow(besov_norm(s, f), s.p) - besov_point_terms(s, f);
        EXPECT_NEAR(besov_tail(s, f, 1.0 - 1e-12), whole, 1e-8 * std::max(1.0, whole));
    }
}

TEST(BesovTail, MonotoneAndBoundedByNorm)
{
    const auto deltas = dyadic_deltas(20);
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = FunctionRep::from_coeffs(random_coeffs(8));
        for (const auto &s : {BesovSpec::hardy(1), BesovSpec::dirichlet(2.0, 1), BesovSpec::bergman(3.0)}) {
            const double normp = std::pow(besov_norm(s, f), s.p);
            double prev = INFINITY;
            for (double d : deltas) {
                const double t = besov_tail(s, f, d);
                EXPECT_LE(t, normp * (1.0 + 1e-12));
                EXPECT_LE(t, prev * (1.0 + 1e-12) + 1e-300);
                prev = t;
            }
        }
    }
}

TEST(BesovProfile, HardyFamilyMatchesRadialOracle)
{
    // Hardy preset tail of z^m: m^2 int_{1-d}^1 r^{2m-2}(1-r^2) 2r dr.
    const auto s = BesovSpec::hardy(1);
    std::vector<FunctionRep> fam;
    for (int m = 1; m <= 20; ++m)
        fam.push_back(monomial(m));
    const auto deltas = dyadic_deltas(12);
    const auto prof = family_besov_profile(s, fam, deltas);
    ASSERT_EQ(prof.values.size(), deltas.size());
    for (std::size_t n = 0; n < deltas.size(); ++n) {
        double best = 0.0;
        for (int m = 1; m <= 20; ++m) {
            const double v = m * m * simpson(
                                         [m](double r) {
                                             return std::pow(r, 2 * m - 2) * (1 - r * r) * 2 * r;
                                         },
                                         1.0 - deltas[n], 1.0, 2000);
            best = std::max(best, v);
        }
        EXPECT_NEAR(prof.values[n], best, 1e-7) << n;
        EXPECT_FALSE(prof.grid_ids[n].empty());
    }
    // Small annuli are dominated by the highest power.
    EXPECT_EQ(prof.argmax.back(), 19u);
}

TEST(BesovProfile, ZeroAndEmptyFamilies)
{
    const auto s = BesovSpec::hardy(1);
    const auto prof = family_besov_profile(s, {FunctionRep::from_coeffs({0.0, 0.0})}, dyadic_deltas(5));
    for (double v : prof.values)
        EXPECT_EQ(v, 0.0);
    EXPECT_THROW(family_besov_profile(s, {}, dyadic_deltas(5)), ParameterError);
}

TEST(BesovProfile, NormalizedBergmanMatchesFrameTails)
{
    // J = 0, sigma = 1: the tail over |z| > R equals the Bergman frame tail at R.
    // Power coefficients a_j relate to orthonormal ones by c_j = a_j / sqrt(j+1).
    const auto s = BesovSpec::bergman();
    const auto fr = FrameSpec::bergman();
    for (int trial = 0; trial < 4; ++trial) {
        const auto a = random_coeffs(9);
        std::vector<Complex> c(a.size());
        for (std::size_t j = 0; j < a.size(); ++j)
            c[j] = a[j] / std::sqrt(j + 1.0);
        const auto fa = FunctionRep::from_coeffs(a);
        const auto fc = FunctionRep::from_coeffs(c);
        for (double d : dyadic_deltas(10))
            EXPECT_NEAR(besov_tail(s, fa, d), tail_mass_beyond(fr, fc, 1.0 - d), 1e-8);
    }
}

TEST(BpAdmissibility, Examples)
{
    const auto t0 = bp_admissibility(2.0, WeightDescriptor::radial_power(0.0));
    EXPECT_NEAR(t0.sigma_integral, 1.0, 1e-12);
    EXPECT_NEAR(t0.dual_integral, 1.0, 1e-12);
    EXPECT_TRUE(t0.admissible_hint);

    const auto t05 = bp_admissibility(2.0, WeightDescriptor::radial_power(0.5));
    EXPECT_NEAR(t05.sigma_integral, 2.0 / 3.0, 1e-8);
    EXPECT_NEAR(t05.dual_integral, 2.0, 1e-4);
    EXPECT_TRUE(t05.admissible_hint);

    const auto t15 = bp_admissibility(2.0, WeightDescriptor::radial_power(1.5));
    EXPECT_TRUE(t15.sigma_converged);
    EXPECT_FALSE(t15.dual_converged);
    EXPECT_FALSE(t15.admissible_hint);

    // p = 3: dual power -1/2, t = 1.5 gives (1-r^2)^{-3/4}, integral 4.
    const auto p3 = bp_admissibility(3.0, WeightDescriptor::radial_power(1.5));
    EXPECT_TRUE(p3.admissible_hint);
    EXPECT_NEAR(p3.dual_integral, 4.0, 1e-3);

    EXPECT_THROW(bp_admissibility(1.0, WeightDescriptor::radial_power(0.0)), ParameterError);
}

TEST(BpAdmissibility, FieldWeight)
{
    const auto w = WeightDescriptor::from_field([](Complex z) { return 1.0 + 0.5 * std::real(z); });
    const auto r = bp_admissibility(2.0, w);
    EXPECT_NEAR(r.sigma_integral, 1.0, 1e-10);
    EXPECT_TRUE(r.admissible_hint);
}

TEST(PointEvaluation, StableAcrossRefinement)
{
    for (double t : {0.0, 1.0, 0.5}) {
        const auto w = WeightDescriptor::radial_power(t);
        const double c1 = point_evaluation_constant(w, 0.5, 10, 64);
        const double c2 = point_evaluation_constant(w, 0.5, 10, 128);
        EXPECT_GT(c1, 0.0);
        EXPECT_NEAR(c1, c2, 0.1 * c2) << t;
    }
    // sigma = 1: the extremal constant is the truncated Bergman kernel
    // sum_{j<=10} (j+1) |z|^{2j} at |z| = 0.5.
    double oracle = 0.0;
    for (int j = 0; j <= 10; ++j)
        oracle += (j + 1) * std::pow(0.25, j);
    EXPECT_NEAR(point_evaluation_constant(WeightDescriptor::radial_power(0.0), 0.5, 10), oracle,
                1e-9 * oracle);
}

TEST(PointEvaluation, BoundHoldsForRandomPolynomials)
{
    const auto w = WeightDescriptor::radial_power(1.0);
    const double C = point_evaluation_constant(w, 0.5, 10);
    BesovSpec s;
    s.weight = w;
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_coeffs(10);
        const double integral = std::pow(besov_norm(s, FunctionRep::from_coeffs(a)), 2);
        double sup = 0.0;
        for (int k = 0; k < 256; ++k) {
            const Complex z = std::polar(0.5, 2 * pi * k / 256);
            sup = std::max(sup, std::norm(testing_support::horner(a, z)));
        }
        EXPECT_LE(sup, C * integral * (1.0 + 1e-9));
    }
}

TEST(MultiIndices, Enumerates)
{
    EXPECT_EQ(multi_indices(1, 3).size(), 1u);
    EXPECT_EQ(multi_indices(2, 3).size(), 4u);
    EXPECT_EQ(multi_indices(3, 2).size(), 6u);
    for (const auto &a : multi_indices(3, 4)) {
        int sum = 0;
        for (int v : a)
            sum += v;
        EXPECT_EQ(sum, 4);
    }
    EXPECT_THROW(multi_indices(0, 1), ParameterError);
}
