#include <kolmo/operators.hpp>

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kolmo;
using testing_support::uniform;

namespace {

SymbolField sym(const std::string &s) { return SymbolField::parse(s); }

/// Random symbol sum c_ab z^a conj(z)^b, a + b <= 4, |c_ab| <= 1/4.
SymbolField random_symbol()
{
    PolySymbol p;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            p.add(a, b, testing_support::random_complex(0.25));
    return SymbolField::from_poly(p);
}

double sup_on_disk(const SymbolField &u)
{
    double m = 0.0;
    for (int i = 0; i <= 40; ++i)
        for (int k = 0; k < 64; ++k)
            m = std::max(m, std::abs(u(std::polar(i / 40.0, 2 * pi * k / 64))));
    return m;
}

/// (1-x) sum_j x^j / ((j+1)(j+2)): Berezin transform of 1-|w|^2 at |z|^2 = x.
double berezin_one_minus_r2(double x)
{
    double s = 0.0, xp = 1.0;
    for (int j = 0; j < 200000 && xp > 1e-20; ++j) {
        s += xp / ((j + 1.0) * (j + 2.0));
        xp *= x;
    }
    return (1.0 - x) * s;
}

} // namespace

TEST(Toeplitz, Examples)
{
    const auto I = toeplitz_matrix(sym("1"), 64);
    EXPECT_LE(I.matrix.max_abs_diff(DenseComplexMatrix::identity(65)), 1e-12);

    const auto R = toeplitz_matrix(sym("|z|^2"), 64);
    for (int i = 0; i <= 64; ++i)
        for (int j = 0; j <= 64; ++j) {
            const Complex want = i == j ? Complex((j + 1.0) / (j + 2.0)) : Complex(0.0);
            EXPECT_NEAR(std::abs(R.matrix(i, j) - want), 0.0, 1e-10) << i << "," << j;
        }

    const auto S = toeplitz_matrix(sym("z"), 40);
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            const Complex want = i == j + 1 ? Complex(std::sqrt((j + 1.0) / (j + 2.0))) : Complex(0.0);
            EXPECT_NEAR(std::abs(S.matrix(i, j) - want), 0.0, 1e-10) << i << "," << j;
        }
    EXPECT_NE(S.grid_id.find("disk"), std::string::npos);
}

TEST(Toeplitz, HermitianAndRadialStructure)
{
    const auto H = toeplitz_matrix(sym("1 + 0.3*z + 0.3*conj(z) - |z|^4"), 48);
    EXPECT_LE(H.matrix.max_abs_diff(H.matrix.adjoint()), 1e-12);
    for (const char *radial : {"1-|z|^2", "|z|^6 - 2*|z|^2", "3"}) {
        const auto D = toeplitz_matrix(sym(radial), 48);
        double off = 0.0;
        for (int i = 0; i <= 48; ++i)
            for (int j = 0; j <= 48; ++j)
                if (i != j)
                    off = std::max(off, std::abs(D.matrix(i, j)));
        EXPECT_LE(off, 1e-10) << radial;
    }
}

TEST(Toeplitz, ProductsAndErrors)
{
    const auto A = toeplitz_matrix(sym("z"), 10);
    const auto B = toeplitz_matrix(sym("conj(z)"), 10);
    // T_conj(z) T_z = T_|z|^2; the section loses the last column's image.
    const auto P = B * A;
    for (int j = 0; j < 10; ++j)
        EXPECT_NEAR(P.matrix(j, j).real(), (j + 1.0) / (j + 2.0), 1e-10);
    EXPECT_NEAR(std::abs(P.matrix(10, 10)), 0.0, 1e-12);
    EXPECT_THROW(toeplitz_matrix(sym("1"), -1), ParameterError);
    EXPECT_THROW(toeplitz_matrix(sym("1"), 300), ParameterError);
    EXPECT_THROW(toeplitz_matrix(sym("1"), 64, build_disk_grid(64, 64, 1.0, Measure::normalized_area)),
                 ResolutionError);
    const auto bad = SymbolField::from_function(
        [](Complex z) { return std::abs(z) > 0.5 ? Complex(INFINITY) : Complex(1.0); }, "blows up");
    EXPECT_THROW(toeplitz_matrix(bad, 4, build_disk_grid(8, 16, 1.0, Measure::normalized_area)),
                 NumericError);
    EXPECT_THROW(A * toeplitz_matrix(sym("z"), 11), ParameterError);
}

TEST(Berezin, SymbolRouteExamples)
{
    for (Complex z : {Complex(0.0), Complex(0.5, 0.2), Complex(-0.9, 0.1), Complex(0.0, 0.995)})
        EXPECT_NEAR(std::abs(berezin_symbol(sym("1"), z) - 1.0), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(berezin_symbol(sym("|z|^2"), 0.0) - 0.5), 0.0, 1e-10);
    for (double r : {0.0, 0.3, 0.6, 0.9, 0.99})
        EXPECT_NEAR(berezin_symbol(sym("1-|z|^2"), r).real(), berezin_one_minus_r2(r * r), 2e-6) << r;
    for (int k = 0; k < 20; ++k) {
        const Complex z = testing_support::random_in_disk(0.99);
        const double v = berezin_symbol(sym("1 - |z|^2*0.5 + 0.25*z*z*conj(z)*conj(z)"), z).real();
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_THROW(berezin_symbol(sym("1"), 0.996), DomainError);
}

TEST(Berezin, OperatorRouteExamples)
{
    const int N = 64;
    const auto I = TruncatedOperator::identity(N);
    for (double r : {0.0, 0.3, 0.6, 0.8, 0.9}) {
        const double x = r * r;
        // (1-x)^2 sum_{j<=N} (j+1) x^j
        const double oracle = 1.0 - (N + 2) * std::pow(x, N + 1) + (N + 1) * std::pow(x, N + 2);
        const auto b = berezin_operator(I, std::polar(r, 0.7));
        EXPECT_NEAR(b.value.real(), oracle, 1e-8) << r;
        EXPECT_NEAR(b.truncation_remainder, 1.0 - oracle, 1e-8);
    }
    EXPECT_EQ(berezin_operator(TruncatedOperator::zero(N), 0.5).value, Complex(0.0));
    EXPECT_NEAR(std::abs(berezin_operator(toeplitz_matrix(sym("|z|^2"), N), 0.0).value - 0.5), 0.0, 1e-9);
    EXPECT_FALSE(berezin_operator(I, 0.9).beyond_recommended);
    EXPECT_TRUE(berezin_operator(I, 0.96).beyond_recommended);
}

TEST(Berezin, DualRouteWithinTruncationBound)
{
    // |<T_u k, k> - <T_u P k, P k>| <= sup|u| (2 sqrt(rho) + rho), rho the
    // kernel mass beyond the section; at |z| <= 0.8 that is below 1e-9.
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_symbol();
        const double bound_u = sup_on_disk(u) * 1.01;
        const auto T = toeplitz_matrix(u, 64);
        for (int k = 0; k < 6; ++k) {
            const Complex z = testing_support::random_in_disk(0.9);
            const auto b = berezin_operator(T, z);
            const double rho = b.truncation_remainder;
            const double diff = std::abs(b.value - berezin_symbol(u, z));
            EXPECT_LE(diff, bound_u * (2.0 * std::sqrt(rho) + rho) + 1e-9);
            if (std::abs(z) <= 0.8)
                EXPECT_LE(diff, 1e-6);
        }
    }
}

TEST(Berezin, BoundBySingularValue)
{
    for (int trial = 0; trial < 5; ++trial) {
        const auto T = toeplitz_matrix(random_symbol(), 32);
        const double s0 = singular_values(T.matrix)[0];
        for (int k = 0; k < 20; ++k) {
            const auto b = berezin_operator(T, testing_support::random_in_disk(0.95));
            EXPECT_LE(std::abs(b.value), s0 + b.truncation_remainder + 1e-12);
        }
    }
}

TEST(Berezin, BoundaryProfiles)
{
    const std::vector<double> radii{0.5, 0.75, 0.9, 0.99};
    for (const auto &pt : berezin_boundary_profile(sym("1"), radii)) {
        EXPECT_NEAR(pt.max_abs, 1.0, 1e-10);
        EXPECT_NEAR(pt.min_abs, 1.0, 1e-10);
    }
    const auto u = sym("1-|z|^2");
    const auto coarse = berezin_boundary_profile(u, radii);
    const auto fine = berezin_boundary_profile(u, radii, build_disk_grid(512, 1024, 1.0, Measure::normalized_area));
    for (std::size_t i = 0; i < radii.size(); ++i) {
        EXPECT_NEAR(coarse[i].max_abs, fine[i].max_abs, 1e-4);
        EXPECT_NEAR(coarse[i].max_abs, coarse[i].min_abs, 1e-10);
        if (i)
            EXPECT_LT(coarse[i].max_abs, coarse[i - 1].max_abs);
    }
    EXPECT_LE(coarse.back().max_abs, coarse.front().max_abs / 5.0);
    EXPECT_THROW(berezin_boundary_profile(u, {0.9, 0.5}), ParameterError);
    EXPECT_THROW(berezin_boundary_profile(u, {}), ParameterError);

    const auto op = berezin_boundary_profile(toeplitz_matrix(u, 64), {0.5, 0.9});
    EXPECT_NEAR(op[0].max_abs, berezin_one_minus_r2(0.25), 1e-9);
}

TEST(EssentialSurrogate, Examples)
{
    EXPECT_NEAR(essential_surrogate(TruncatedOperator::identity(20), 7), 1.0, 1e-14);
    EXPECT_EQ(essential_surrogate(TruncatedOperator::zero(20), 0), 0.0);
    const auto T = toeplitz_matrix(sym("1-|z|^2"), 64);
    for (int k = 0; k <= 64; ++k)
        EXPECT_NEAR(essential_surrogate(T, k), 1.0 / (k + 2.0), 1e-10);
    EXPECT_LT(essential_surrogate(T, 32), 0.1);
    EXPECT_THROW(essential_surrogate(T, 65), ParameterError);
    EXPECT_THROW(essential_surrogate(T, -1), ParameterError);
}

TEST(Localization, ZeroOperatorAndErrors)
{
    const auto Z = TruncatedOperator::zero(16);
    const auto li = localization_integrals(Z, Complex(0.3, 0.2), 2.0, 0.0, 1.0);
    EXPECT_EQ(li.rows, 0.0);
    EXPECT_EQ(li.columns, 0.0);
    EXPECT_EQ(li.complements, 0.0);
    EXPECT_DOUBLE_EQ(li.delta, 1.0);
    EXPECT_DOUBLE_EQ(li.exponent_columns, 0.5);
    const auto I = TruncatedOperator::identity(16);
    EXPECT_THROW(localization_integrals(I, 0.0, 1.0, 0.5, 1.0), ParameterError);
    EXPECT_THROW(localization_integrals(I, 0.0, 2.0, 2.0, 1.0), ParameterError);
    EXPECT_THROW(localization_integrals(I, 0.0, 2.0, 1.0, 0.0), ParameterError);
    EXPECT_THROW(localization_integrals(I, 0.995, 2.0, 1.0, 1.0), ParameterError);
    EXPECT_DOUBLE_EQ(default_localization_delta(3.0), 0.75);
}

TEST(Localization, ComplementsDecreaseInR)
{
    const auto T = toeplitz_matrix(sym("1-|z|^2"), 64);
    for (Complex z : {Complex(0.0), Complex(0.5, 0.0), Complex(-0.3, 0.6)}) {
        double prev = INFINITY;
        double prev_coarse = INFINITY;
        for (double R : {1.0, 2.0, 3.0}) {
            const double v = localization_integrals(T, z, 2.0, 1.0, R, {128, 128}).complements;
            const double c = localization_integrals(T, z, 2.0, 1.0, R, {64, 64}).complements;
            EXPECT_LE(v, prev + 1e-4);
            EXPECT_LE(c, prev_coarse + 1e-4);
            EXPECT_NEAR(v, c, 1e-4 + 1e-3 * v);
            prev = v;
            prev_coarse = c;
        }
    }
}

TEST(Localization, IdentityRowsStable)
{
    const auto I = TruncatedOperator::identity(64);
    for (Complex z : {Complex(0.0), Complex(0.6, -0.2), Complex(0.0, 0.9)}) {
        const double a = localization_integrals(I, z, 2.0, 0.0, 1.0, {64, 64}).rows;
        const double b = localization_integrals(I, z, 2.0, 0.0, 1.0, {128, 128}).rows;
        EXPECT_TRUE(std::isfinite(a));
        EXPECT_GT(a, 0.0);
        EXPECT_NEAR(a, b, 0.05 * b);
    }
}

TEST(Localization, ColumnsAtOriginClosedForm)
{
    // T = I, z = 0: <k_0, k_w> = 1 - |w|^2 exactly at any truncation, so
    // columns = int_{|w| > tanh R} (1-|w|^2)^{1+a} dlambda = (1 - tanh^2 R)^a / a.
    const auto I = TruncatedOperator::identity(8);
    for (double R : {0.5, 1.0, 2.0}) {
        const double a = 0.5;
        const double th = std::tanh(R);
        const double oracle = std::pow(1.0 - th * th, a) / a;
        EXPECT_NEAR(localization_integrals(I, 0.0, 2.0, 1.0, R).columns, oracle, 1e-8 * oracle) << R;
    }
}

TEST(Hankel, Examples)
{
    const auto Z = hankel_matrix(SymbolField::from_fourier({0.0}), 8);
    EXPECT_EQ(Z.matrix.max_abs_diff(DenseComplexMatrix(9, 9)), 0.0);
    EXPECT_TRUE(Z.conjugate_linear);

    const auto H = hankel_matrix(SymbolField::from_fourier({0.0, 0.0, 1.0}), 16);
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j <= 16; ++j)
            EXPECT_NEAR(std::abs(H.matrix(i, j) - (i + j == 2 ? 1.0 : 0.0)), 0.0, 1e-10);
    const auto sv = singular_values(H.matrix);
    int count = 0;
    for (double s : sv)
        count += s > 1e-10;
    EXPECT_EQ(count, 3);

    EXPECT_THROW(hankel_matrix(SymbolField::from_fourier({1.0}), 16, 32), ParameterError);
}

TEST(Hankel, QuadratureMatchesOracle)
{
    for (int deg = 1; deg <= 16; ++deg) {
        const auto c = testing_support::random_coeffs(deg);
        const auto H = hankel_matrix(SymbolField::from_fourier(c), deg, 4 * deg);
        EXPECT_LE(H.matrix.max_abs_diff(hankel_oracle(c, deg)), 1e-8) << deg;
        // constant along anti-diagonals
        double spread = 0.0;
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; j < deg; ++j)
                if (i + 1 <= deg)
                    spread = std::max(spread, std::abs(H.matrix(i + 1, j) - H.matrix(i, j + 1)));
        EXPECT_LE(spread, 1e-8);
    }
    const auto g = SymbolField::from_fourier(testing_support::random_coeffs(8));
    EXPECT_LE(hankel_matrix(g, 8).matrix.max_abs_diff(hankel_oracle(*g.fourier, 8)), 1e-8);
}

TEST(Hankel, OracleExamples)
{
    const auto E = hankel_oracle({1.0}, 3);
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j)
            EXPECT_EQ(E(i, j), Complex(i == 0 && j == 0 ? 1.0 : 0.0));
    std::vector<Complex> h;
    for (int k = 0; k <= 4; ++k)
        h.push_back(1.0 / (k + 1.0));
    const auto Hm = hankel_oracle(h, 2);
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j)
            EXPECT_EQ(Hm(i, j), Complex(1.0 / (i + j + 1.0)));
    const auto c = testing_support::random_coeffs(10);
    const auto A = hankel_oracle(c, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            EXPECT_EQ(A(i + 1, j), A(i, j + 1));
}

TEST(Vmo, Examples)
{
    EXPECT_EQ(vmo_modulus(SymbolField::from_fourier({2.0}), 0.4), 0.0);
    const auto w = SymbolField::from_fourier({0.0, 1.0});
    EXPECT_LE(vmo_modulus(w, 0.1), vmo_modulus(w, 0.4) / 10.0);
    const auto g = SymbolField::from_fourier(testing_support::random_coeffs(6));
    auto shifted = g;
    shifted.eval = [g](Complex z) { return g(z) + Complex(3.0, -2.0); };
    for (double r : {0.8, 0.4, 0.1})
        EXPECT_NEAR(vmo_modulus(g, r), vmo_modulus(shifted, r), 1e-12);
    EXPECT_THROW(vmo_modulus(w, 1e-3), ResolutionError);
    EXPECT_THROW(vmo_modulus(w, 1.5), ParameterError);
    EXPECT_THROW(vmo_modulus(w, 0.0), ParameterError);
}

TEST(Vmo, RotationInvariance)
{
    const auto g = SymbolField::from_fourier(testing_support::random_coeffs(5));
    const int n = default_vmo_boundary_nodes;
    for (int shift : {1, 37, 1000, 4096}) {
        auto rot = g;
        const Complex e = std::polar(1.0, 2.0 * pi * shift / n);
        rot.eval = [g, e](Complex z) { return g(z * e); };
        for (double r : {0.6, 0.2})
            EXPECT_NEAR(vmo_modulus(g, r), vmo_modulus(rot, r), 1e-9);
    }
}

TEST(Report, ToeplitzVerdicts)
{
    ToeplitzReportOptions o;
    o.sup_radii = 4;
    o.sup_angles = 4;
    const auto one = toeplitz_report(sym("1"), o);
    EXPECT_EQ(one.verdict, Verdict::noncompact_evidence);
    for (double s : one.singular_values)
        EXPECT_GE(s, 0.99);
    const auto damp = toeplitz_report(sym("1-|z|^2"), o);
    EXPECT_EQ(damp.verdict, Verdict::compact_evidence);
    EXPECT_LT(damp.singular_values[32], 0.1);
    ASSERT_EQ(damp.localization.size(), 3u);
    EXPECT_TRUE(damp.has_localization);
    EXPECT_FALSE(damp.localization_grid_id.empty());
    EXPECT_FALSE(damp.operator_profile.empty());
    o.verdict_radius = 0.9;
    o.compact_below = 0.01;
    o.noncompact_above = 0.9;
    EXPECT_EQ(toeplitz_report(sym("1-|z|^2"), o).verdict, Verdict::inconclusive);
}

TEST(Report, HankelVerdicts)
{
    const auto r = hankel_report(SymbolField::from_fourier({0.0, 0.0, 1.0}));
    EXPECT_EQ(r.verdict, Verdict::compact_evidence);
    EXPECT_EQ(r.numerical_rank, 3u);
    ASSERT_EQ(r.vmo.size(), 4u);
    for (std::size_t i = 1; i < r.vmo.size(); ++i)
        EXPECT_LT(r.vmo[i].modulus, r.vmo[i - 1].modulus);
    // Coefficients 1/(k+1): a Hilbert-type matrix, numerically of high rank
    // but with fast singular-value decay.
    std::vector<Complex> c;
    for (int k = 0; k <= 40; ++k)
        c.push_back(1.0 / (k + 1.0));
    const auto h = hankel_report(SymbolField::from_fourier(c));
    EXPECT_GT(h.numerical_rank, 8u);
    EXPECT_LT(h.sv_ratio, 0.1);
    EXPECT_EQ(h.verdict, Verdict::compact_evidence);
}
