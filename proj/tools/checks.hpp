#pragma once

// Oracle checks shared by `kolmo-lab selftest` and the acceptance runner.
// Every check draws its random inputs from its own generator seeded by
// (seed, id), so results are reproducible one check at a time.

#include <kolmo/besov.hpp>
#include <kolmo/euclid.hpp>
#include <kolmo/frames.hpp>
#include <kolmo/operators.hpp>
#include <kolmo/spaces.hpp>
#include <kolmo/symbol.hpp>

#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace kolmo::checks {

struct Result
{
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

class Rng
{
public:
    Rng(std::uint64_t seed, int id) : gen_(seed * 1000003ULL + static_cast<std::uint64_t>(id)) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    Complex complex(double scale) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

    Complex in_disk(double radius)
    {
        const double r = radius * std::sqrt(uniform(0.0, 1.0));
        return std::polar(r, uniform(0.0, 2.0 * pi));
    }

    std::vector<Complex> coeffs(int degree, double scale = 1.0)
    {
        std::vector<Complex> c(degree + 1);
        for (auto &v : c)
            v = complex(scale);
        return c;
    }

private:
    std::mt19937_64 gen_;
};

inline std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

namespace detail {

inline Complex horner(const std::vector<Complex> &c, Complex z)
{
    Complex acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

/// sum c_ab z^a conj(z)^b over a + b <= 4 with |Re c|, |Im c| <= 1/4.
inline SymbolField random_symbol(Rng &rng)
{
    PolySymbol p;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            p.add(a, b, rng.complex(0.25));
    return SymbolField::from_poly(p);
}

/// (1-x) sum_j x^j / ((j+1)(j+2)): Berezin transform of 1 - |w|^2 at |z|^2 = x.
inline double berezin_one_minus_r2(double x)
{
    double s = 0.0, xp = 1.0;
    for (int j = 0; j < 200000 && xp > 1e-20; ++j) {
        s += xp / ((j + 1.0) * (j + 2.0));
        xp *= x;
    }
    return (1.0 - x) * s;
}

inline Result finish(int id, std::string name, double measured, double tol, std::string detail = {})
{
    return {id, std::move(name), measured <= tol, measured, tol, std::move(detail)};
}

} // namespace detail

inline Result reproducing_property(std::uint64_t seed)
{
    Rng rng(seed, 1);
    const auto s = SpaceSpec::bergman();
    const auto &grid = default_disk_grid();
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = rng.coeffs(static_cast<int>(rng.uniform(0.0, 11.0)));
        const Complex w = rng.in_disk(0.9);
        const auto f = FunctionRep::from_sampler([&](Complex z) { return detail::horner(c, z); });
        const auto kw = FunctionRep::from_sampler([&](Complex z) { return kernel_eval(s, z, w); });
        worst = std::max(worst, std::abs(inner_product(s, f, kw, grid) - detail::horner(c, w)));
    }
    return detail::finish(1, "reproducing property, Bergman, deg <= 10, |w| <= 0.9", worst, 1e-8,
                          "100 random (f, w) on " + grid.id());
}

inline Result frame_tail_closed_form(std::uint64_t)
{
    const auto fr = FrameSpec::bergman();
    double worst = 0.0;
    for (int j = 0; j <= 20; ++j)
        for (double R : {0.5, 0.9, 0.99})
            worst = std::max(worst, std::abs(tail_mass_beyond(fr, FunctionRep::basis(j), R) -
                                             (1.0 - std::pow(R, 2 * j + 2))));
    return detail::finish(2, "frame tail of e_j = 1 - R^(2j+2)", worst, 1e-8, "j <= 20, R in {0.5, 0.9, 0.99}");
}

inline Result mazur_identity(std::uint64_t seed)
{
    Rng rng(seed, 3);
    const auto fr = FrameSpec::bergman();
    const auto ex = Exhaustion::ball(8);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = FunctionRep::from_coeffs(rng.coeffs(static_cast<int>(rng.uniform(0.0, 12.0))));
        for (int n = 1; n <= 8; ++n)
            worst = std::max(worst, std::abs(mazur_form(fr, f, ex, n) + tail_mass(fr, f, ex, n)));
    }
    return detail::finish(3, "Mazur form = -tail mass", worst, 1e-6, "20 random polynomials x 8 levels");
}

inline Result toeplitz_oracles(std::uint64_t)
{
    const auto I = toeplitz_matrix(SymbolField::parse("1"), 64);
    const double e1 = I.matrix.max_abs_diff(DenseComplexMatrix::identity(65));
    const auto D = toeplitz_matrix(SymbolField::parse("|z|^2"), 20);
    DenseComplexMatrix oracle(21, 21);
    for (int j = 0; j <= 20; ++j)
        oracle(j, j) = (j + 1.0) / (j + 2.0);
    const double e2 = D.matrix.max_abs_diff(oracle);
    Result r{4, "Toeplitz oracles: u = 1 and u = |w|^2, worst err/tol", e1 <= 1e-12 && e2 <= 1e-10,
             std::max(e1 / 1e-12, e2 / 1e-10), 1.0,
             "identity err " + sci(e1) + " (tol 1e-12), diagonal err " + sci(e2) + " (tol 1e-10)"};
    return r;
}

inline Result berezin_dual_route(std::uint64_t seed)
{
    Rng rng(seed, 5);
    double worst = 0.0;
    double worst_r = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = detail::random_symbol(rng);
        const auto T = toeplitz_matrix(u, 64);
        std::vector<Complex> zs{0.0, std::polar(0.9, rng.uniform(0.0, 2.0 * pi))};
        for (int k = 0; k < 4; ++k)
            zs.push_back(rng.in_disk(0.9));
        for (const Complex z : zs) {
            const double d = std::abs(berezin_operator(T, z).value - berezin_symbol(u, z));
            if (d > worst) {
                worst = d;
                worst_r = std::abs(z);
            }
        }
    }
    double one = 0.0;
    const auto u1 = SymbolField::parse("1");
    for (double r : {0.0, 0.5, 0.9, 0.99})
        one = std::max(one, std::abs(berezin_symbol(u1, std::polar(r, 1.0)) - 1.0));
    Result res{5, "Berezin dual route, deg 64, |z| <= 0.9", worst <= 1e-6 && one <= 1e-10, worst, 1e-6,
               "worst at |z| = " + sci(worst_r) + "; u = 1 Berezin err " + sci(one) + " (tol 1e-10)"};
    return res;
}

inline Result compactness_dichotomy(std::uint64_t)
{
    ToeplitzReportOptions o;
    o.localization = false;
    const std::vector<double> radii{0.5, 0.75, 0.9, 0.95, 0.99};
    o.radii = radii;

    const auto u = SymbolField::parse("1-|w|^2");
    const auto rc = toeplitz_report(u, o);
    const auto fine = berezin_boundary_profile(u, radii, build_disk_grid(512, 1024, 1.0, Measure::normalized_area));
    double resolution = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i)
        resolution = std::max(resolution, std::abs(rc.berezin_profile[i].max_abs - fine[i].max_abs));
    const double ratio = rc.berezin_profile.back().max_abs / rc.berezin_profile.front().max_abs;
    const double s32 = rc.singular_values[32];

    const auto rn = toeplitz_report(SymbolField::parse("1"), o);
    double flat = 0.0;
    for (const auto &pt : rn.berezin_profile)
        flat = std::max({flat, std::abs(pt.max_abs - 1.0), std::abs(pt.min_abs - 1.0)});
    const double smin = *std::min_element(rn.singular_values.begin(), rn.singular_values.end());

    const bool pass = ratio <= 0.2 && resolution <= 1e-4 && s32 < 0.1 &&
                      rc.verdict == Verdict::compact_evidence && flat <= 1e-10 && smin >= 0.99 &&
                      rn.verdict == Verdict::noncompact_evidence;
    return {6, "compactness dichotomy: 1 - |w|^2 vs 1", pass, ratio, 0.2,
            "B(.99)/B(.5) = " + sci(ratio) + ", resolution diff " + sci(resolution) + ", sigma_32 = " +
                sci(s32) + ", verdict " + to_string(rc.verdict) + "; u = 1: profile err " + sci(flat) +
                ", min sigma " + sci(smin) + ", verdict " + to_string(rn.verdict)};
}

inline Result hankel_equivalence(std::uint64_t seed)
{
    Rng rng(seed, 7);
    double worst = 0.0;
    for (int deg = 1; deg <= 16; ++deg) {
        const auto c = rng.coeffs(deg);
        const auto H = hankel_matrix(SymbolField::from_fourier(c), deg);
        worst = std::max(worst, H.matrix.max_abs_diff(hankel_oracle(c, deg)));
    }
    const auto sv = singular_values(hankel_matrix(SymbolField::from_fourier({0.0, 0.0, 1.0}), 16).matrix);
    int rank = 0;
    for (double s : sv)
        rank += s > 1e-10;
    return {7, "Hankel quadrature = oracle; g = w^2 rank", worst <= 1e-8 && rank == 3, worst, 1e-8,
            "rank of H_{w^2} at deg 16: " + std::to_string(rank) + " (expected 3)"};
}

inline Result hardy_norm_identity(std::uint64_t)
{
    const auto s = BesovSpec::hardy(1);
    double worst = 0.0;
    for (int m = 1; m <= 30; ++m) {
        std::vector<Complex> c(m + 1);
        c[m] = 1.0;
        const double n = besov_norm(s, FunctionRep::from_coeffs(c));
        worst = std::max(worst, std::abs(n * n - m / (m + 1.0)));
    }
    return detail::finish(8, "Hardy derivative norm^2 of z^m = m/(m+1)", worst, 1e-8, "1 <= m <= 30");
}

inline Result fourier_dichotomy(std::uint64_t)
{
    const auto t = family_tails(translated_gaussians(11), {10.0}, false)[0];
    const auto m = family_tails(modulated_gaussians(20), {10.0}, false)[0];
    const bool pass = t.spatial < 1e-6 && t.fourier < 1e-6 && m.fourier > 0.9;
    return {9, "translated vs modulated Gaussians at R = 10", pass, std::max(t.spatial, t.fourier), 1e-6,
            "translated: spatial " + sci(t.spatial) + ", Fourier " + sci(t.fourier) +
                "; modulated Fourier " + sci(m.fourier) + " (need > 0.9)"};
}

inline Result moyal_plancherel(std::uint64_t seed)
{
    Rng rng(seed, 10);
    double moyal = 0.0;
    const std::vector<std::function<Complex(double)>> fs{
        normalized_gaussian,
        [](double x) { return std::polar(1.0, 2.0 * pi * 3.0 * x) * gaussian(x - 1.5); },
        [](double x) { return gaussian(x + 2.0) - Complex(0.0, 0.5) * gaussian(2.0 * (x - 1.0)); },
    };
    for (const auto &fn : fs) {
        const auto f = SampledSignal::from_function(fn);
        moyal = std::max(moyal, std::abs(stft_mass(stft_field(f)) - l2_norm_sq(f)));
    }
    std::vector<Complex> s(2048);
    for (auto &v : s)
        v = rng.complex(1.0);
    const SampledSignal r(s, 1.0 / 1024.0, -1.0);
    const double spatial = l2_norm_sq(r);
    const double planch = std::abs(fourier_tail(r, 0.0) - spatial) / spatial;
    return {10, "Moyal and Plancherel", moyal <= 1e-6 && planch <= 1e-10, moyal, 1e-6,
            "Plancherel relative err " + sci(planch) + " (tol 1e-10)"};
}

inline Result umbrella_capacity_check(std::uint64_t seed)
{
    Rng rng(seed, 11);
    const auto fr = FrameSpec::bergman();
    const auto zero = umbrella_capacity(fr, [](Complex) { return 0.0; }, 0.1, Exhaustion::ball(10), 0.04);
    bool ok = zero.bound == 1;
    const auto ex = Exhaustion::ball(14);
    int violations = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = FunctionRep::from_coeffs(rng.coeffs(4));
        const double scale = rng.uniform(0.2, 0.9);
        auto U = [&](Complex z) { return std::abs(frame_coeff(fr, f, z)); };
        auto V = [&](Complex z) { return scale * U(z); };
        const auto a = umbrella_capacity(fr, U, 0.3, ex, 0.1);
        const auto b = umbrella_capacity(fr, V, 0.3, ex, 0.1);
        const auto d = umbrella_capacity(fr, U, 0.6, ex, 0.1);
        if (b.log10_bound > a.log10_bound || d.log10_bound > a.log10_bound)
            ++violations;
        if (!a.saturated && (b.bound > a.bound || d.bound > a.bound))
            ++violations;
    }
    ok = ok && violations == 0;
    return {11, "umbrella capacity: zero -> 1, monotone", ok, static_cast<double>(violations), 0.0,
            "zero umbrella bound " + std::to_string(zero.bound) + "; 5 random umbrellas"};
}

inline Result besov_tails(std::uint64_t seed)
{
    Rng rng(seed, 12);
    const auto hardy = BesovSpec::hardy(1);
    std::vector<FunctionRep> fam;
    for (int m = 1; m <= 10; ++m) {
        std::vector<Complex> c(m + 1);
        c[m] = 1.0;
        fam.push_back(FunctionRep::from_coeffs(c));
    }
    const auto prof = family_besov_profile(hardy, fam, dyadic_deltas(12));
    bool monotone = true;
    for (std::size_t i = 1; i < prof.values.size(); ++i)
        monotone = monotone && prof.values[i] <= prof.values[i - 1];

    const auto s = BesovSpec::bergman();
    const auto fr = FrameSpec::bergman();
    double worst = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
        const auto a = rng.coeffs(9);
        std::vector<Complex> c(a.size());
        for (std::size_t j = 0; j < a.size(); ++j)
            c[j] = a[j] / std::sqrt(j + 1.0);
        for (double d : dyadic_deltas(10))
            worst = std::max(worst, std::abs(besov_tail(s, FunctionRep::from_coeffs(a), d) -
                                             tail_mass_beyond(fr, FunctionRep::from_coeffs(c), 1.0 - d)));
    }
    const auto bad = bp_admissibility(2.0, WeightDescriptor::radial_power(1.5));
    const auto good = bp_admissibility(2.0, WeightDescriptor::radial_power(0.5));
    const bool pass = monotone && worst <= 1e-8 && !bad.admissible_hint && good.admissible_hint;
    return {12, "Besov tails: monotone, J = 0 = frame tails, B_p flags", pass, worst, 1e-8,
            std::string("monotone ") + (monotone ? "yes" : "no") + "; t = 1.5 " +
                (bad.admissible_hint ? "admissible" : "inadmissible") + ", t = 0.5 " +
                (good.admissible_hint ? "admissible" : "inadmissible")};
}

/// Criteria checks in order; index i holds the check with id i + 1.
inline std::vector<std::function<Result(std::uint64_t)>> criteria()
{
    return {reproducing_property, frame_tail_closed_form, mazur_identity, toeplitz_oracles,
            berezin_dual_route,   compactness_dichotomy,  hankel_equivalence, hardy_norm_identity,
            fourier_dichotomy,    moyal_plancherel,       umbrella_capacity_check, besov_tails};
}

/// Smaller invariants run by selftest after the criteria; ids start at 101.
inline std::vector<std::function<Result(std::uint64_t)>> extras()
{
    return {
        [](std::uint64_t) {
            std::size_t off = 0;
            try {
                parse_symbol("1-");
            } catch (const ParseError &e) {
                off = e.offset();
            }
            return Result{101, "symbol parse error offset", off == 2, static_cast<double>(off), 2.0,
                          "'1-' fails at offset " + std::to_string(off)};
        },
        [](std::uint64_t) {
            const double m = hyperbolic_ball_measure(0.0, 0.5 * std::log(3.0));
            return detail::finish(102, "hyperbolic ball lambda-mass", std::abs(m - 1.0 / 3.0), 1e-6);
        },
        [](std::uint64_t) {
            const auto T = toeplitz_matrix(SymbolField::parse("1-|z|^2"), 64);
            double worst = 0.0;
            for (int k = 0; k <= 64; ++k)
                worst = std::max(worst, std::abs(essential_surrogate(T, k) - 1.0 / (k + 2.0)));
            return detail::finish(103, "essential surrogate of T_{1-|w|^2} = 1/(k+2)", worst, 1e-10);
        },
        [](std::uint64_t) {
            double worst = 0.0;
            for (double r : {0.3, 0.6, 0.9})
                worst = std::max(worst, std::abs(berezin_symbol(SymbolField::parse("1-|z|^2"), r).real() -
                                                 detail::berezin_one_minus_r2(r * r)));
            return detail::finish(104, "Berezin of 1 - |w|^2 vs series", worst, 2e-6);
        },
        [](std::uint64_t) {
            const auto g = SampledSignal::from_function(gaussian);
            const double oracle = std::erfc(std::sqrt(2.0 * pi)) / std::sqrt(2.0);
            const double e = std::max(std::abs(l2_tail(g, 1.0) - oracle), std::abs(fourier_tail(g, 1.0) - oracle));
            return detail::finish(105, "Gaussian spatial and Fourier tails at R = 1", e, 1e-5);
        },
        [](std::uint64_t) {
            const auto g = SampledSignal::from_function(gaussian, 4000, 20.0);
            double worst = 0.0;
            for (double h : {0.01, 0.1, 0.5})
                worst = std::max(worst, std::abs(translation_modulus(g, h) -
                                                 std::sqrt(2.0) * (1.0 - std::exp(-pi * h * h / 2.0))));
            return detail::finish(106, "translation modulus of the Gaussian", worst, 1e-10);
        },
        [](std::uint64_t) {
            const auto w = SymbolField::from_fourier({0.0, 1.0});
            const double a = vmo_modulus(w, 0.4), b = vmo_modulus(w, 0.1);
            return Result{107, "VMO modulus of w shrinks with the arc", b <= a / 10.0, b / a, 0.1, {}};
        },
    };
}

inline std::string format_line(const Result &r)
{
    char id[16];
    if (r.id > 100)
        std::snprintf(id, sizeof id, "X%02d", r.id - 100);
    else
        std::snprintf(id, sizeof id, "C%02d", r.id);
    std::string line = std::string(r.pass ? "PASS" : "FAIL") + " [" + id + "] " + r.name +
                       ": measured " + sci(r.measured) + ", tolerance " + sci(r.tolerance);
    if (!r.detail.empty())
        line += " (" + r.detail + ")";
    return line;
}

} // namespace kolmo::checks
