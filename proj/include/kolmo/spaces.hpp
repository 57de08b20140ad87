#pragma once

// Concrete reproducing-kernel spaces: Bergman and Hardy spaces of the ball,
// Fock space of the plane and the Paley-Wiener space of the line. Kernels,
// orthonormal reference bases, norms and the hyperbolic geometry of the ball.

#include <kolmo/errors.hpp>
#include <kolmo/numerics.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kolmo {

enum class SpaceKind
{
    bergman,
    hardy,
    fock,
    paley_wiener,
    besov_sobolev,
};

inline const char *to_string(SpaceKind k)
{
    switch (k) {
    case SpaceKind::bergman: return "bergman";
    case SpaceKind::hardy: return "hardy";
    case SpaceKind::fock: return "fock";
    case SpaceKind::paley_wiener: return "paley_wiener";
    case SpaceKind::besov_sobolev: return "besov_sobolev";
    }
    return "?";
}

struct SpaceSpec
{
    SpaceKind kind = SpaceKind::bergman;
    int dim = 1;
    double p = 2.0;
    double t = 0.0;              ///< Bergman radial weight exponent, (1-|z|^2)^t
    double band = 0.5;           ///< Paley-Wiener half-width a: supp f^ in [-a, a]
    double fock_c = pi / 2.0;    ///< Fock weight phi(z) = c |z|^2
    int order = 0;               ///< Besov-Sobolev derivative order J

    static SpaceSpec bergman(double t = 0.0, double p = 2.0, int n = 1)
    {
        SpaceSpec s;
        s.kind = SpaceKind::bergman;
        s.t = t;
        s.p = p;
        s.dim = n;
        s.validate();
        return s;
    }

    static SpaceSpec hardy(int n = 1)
    {
        SpaceSpec s;
        s.kind = SpaceKind::hardy;
        s.dim = n;
        s.validate();
        return s;
    }

    static SpaceSpec fock(double c = pi / 2.0, int n = 1)
    {
        SpaceSpec s;
        s.kind = SpaceKind::fock;
        s.fock_c = c;
        s.dim = n;
        s.validate();
        return s;
    }

    static SpaceSpec paley_wiener(double a)
    {
        SpaceSpec s;
        s.kind = SpaceKind::paley_wiener;
        s.band = a;
        s.validate();
        return s;
    }

    static SpaceSpec besov_sobolev(double p, int J, int n = 1)
    {
        SpaceSpec s;
        s.kind = SpaceKind::besov_sobolev;
        s.p = p;
        s.order = J;
        s.dim = n;
        s.validate();
        return s;
    }

    void validate() const
    {
        if (dim < 1)
            throw ParameterError("SpaceSpec: dimension must be at least 1");
        if (!(p >= 1.0) || !std::isfinite(p))
            throw ParameterError("SpaceSpec: exponent p must be >= 1");
        if (kind == SpaceKind::bergman && !(t > -1.0))
            throw ParameterError("SpaceSpec: Bergman weight needs t > -1");
        if (kind == SpaceKind::paley_wiener && !(band > 0.0))
            throw ParameterError("SpaceSpec: Paley-Wiener band must be positive");
        if (kind == SpaceKind::paley_wiener && dim != 1)
            throw ParameterError("SpaceSpec: Paley-Wiener space is one-dimensional here");
        if (kind == SpaceKind::fock && !(fock_c > 0.0))
            throw ParameterError("SpaceSpec: Fock parameter must be positive");
        if (order < 0)
            throw ParameterError("SpaceSpec: derivative order must be >= 0");
    }

    bool on_ball() const
    {
        return kind == SpaceKind::bergman || kind == SpaceKind::hardy ||
               kind == SpaceKind::besov_sobolev;
    }
};

using Sampler = std::function<Complex(Complex)>;

/// A function given by coefficients in the space's reference orthonormal
/// basis, by an evaluation map, or both. Sampled functions may carry exact
/// derivative samplers (derivatives[k-1] evaluates the k-th derivative).
struct FunctionRep
{
    std::optional<std::vector<Complex>> coeffs;
    Sampler sampler;
    std::vector<Sampler> derivatives;

    static FunctionRep from_coeffs(std::vector<Complex> c)
    {
        FunctionRep f;
        f.coeffs = std::move(c);
        return f;
    }

    static FunctionRep from_sampler(Sampler s, std::vector<Sampler> derivs = {})
    {
        if (!s)
            throw ParameterError("FunctionRep: empty sampler");
        FunctionRep f;
        f.sampler = std::move(s);
        f.derivatives = std::move(derivs);
        return f;
    }

    /// The j-th reference basis vector.
    static FunctionRep basis(int j)
    {
        if (j < 0)
            throw ParameterError("FunctionRep::basis: negative index");
        std::vector<Complex> c(j + 1);
        c[j] = 1.0;
        return from_coeffs(std::move(c));
    }

    bool has_coeffs() const { return coeffs.has_value(); }

    FunctionRep scaled(Complex s) const
    {
        FunctionRep out;
        if (coeffs) {
            out.coeffs = *coeffs;
            for (auto &c : *out.coeffs)
                c *= s;
        }
        if (sampler) {
            auto inner = sampler;
            out.sampler = [inner, s](Complex z) { return s * inner(z); };
        }
        for (const auto &d : derivatives) {
            auto inner = d;
            out.derivatives.push_back([inner, s](Complex z) { return s * inner(z); });
        }
        return out;
    }

    /// Euclidean norm of the coefficient vector.
    double coeff_norm() const
    {
        if (!coeffs)
            throw ParameterError("FunctionRep: no coefficients");
        std::vector<double> sq;
        sq.reserve(coeffs->size());
        for (auto c : *coeffs)
            sq.push_back(std::norm(c));
        return std::sqrt(pairwise_sum(sq));
    }
};

//----------------------------------------------------------------------------
// Hyperbolic geometry of the ball
//----------------------------------------------------------------------------

using PointN = std::vector<Complex>;

namespace detail {

inline Complex dot(std::span<const Complex> z, std::span<const Complex> w)
{
    if (z.size() != w.size())
        throw ParameterError("point dimensions differ");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        acc += z[i] * std::conj(w[i]);
    return acc;
}

inline double norm_sq(std::span<const Complex> z)
{
    double acc = 0.0;
    for (auto v : z)
        acc += std::norm(v);
    return acc;
}

inline void require_in_disk(Complex z, const char *who)
{
    if (!(std::norm(z) < 1.0))
        throw DomainError(std::string(who) + ": point not inside the unit disk");
}

/// Integer or principal real power of a base with positive real part.
inline Complex power(Complex base, double e)
{
    const double r = std::round(e);
    if (std::abs(e - r) < 1e-14 && std::abs(r) <= 1e6) {
        const int k = static_cast<int>(r);
        Complex acc = 1.0;
        Complex b = k >= 0 ? base : 1.0 / base;
        for (int i = 0; i < std::abs(k); ++i)
            acc *= b;
        return acc;
    }
    return std::pow(base, e);
}

} // namespace detail

/// phi_a(w) = (a - w) / (1 - conj(a) w), the involution of the disk
/// exchanging a and 0.
inline Complex mobius(Complex a, Complex w)
{
    detail::require_in_disk(a, "mobius");
    if (!(std::norm(w) <= 1.0))
        throw DomainError("mobius: point outside the closed unit disk");
    return (a - w) / (1.0 - std::conj(a) * w);
}

/// Ball automorphism phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>),
/// s_a = sqrt(1 - |a|^2), P_a the projection onto span(a), Q_a = I - P_a.
inline PointN mobius(std::span<const Complex> a, std::span<const Complex> z)
{
    const double a2 = detail::norm_sq(a);
    if (!(a2 < 1.0))
        throw DomainError("mobius: center not inside the unit ball");
    if (!(detail::norm_sq(z) <= 1.0))
        throw DomainError("mobius: point outside the closed unit ball");
    const std::size_t n = a.size();
    if (z.size() != n)
        throw ParameterError("mobius: dimension mismatch");
    const Complex za = detail::dot(z, a);
    const double s = std::sqrt(1.0 - a2);
    PointN out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex pz = a2 > 0.0 ? za * a[i] / a2 : Complex(0.0);
        const Complex qz = z[i] - pz;
        out[i] = (a[i] - pz - s * qz) / (1.0 - za);
    }
    return out;
}

/// beta(z, w) = atanh |phi_z(w)|.
inline double bergman_distance(Complex z, Complex w)
{
    detail::require_in_disk(z, "bergman_distance");
    detail::require_in_disk(w, "bergman_distance");
    const double q = std::abs(mobius(z, w));
    return 0.5 * std::log((1.0 + q) / (1.0 - q));
}

inline double bergman_distance(std::span<const Complex> z, std::span<const Complex> w)
{
    if (!(detail::norm_sq(z) < 1.0) || !(detail::norm_sq(w) < 1.0))
        throw DomainError("bergman_distance: point not inside the unit ball");
    const double q = std::sqrt(detail::norm_sq(mobius(z, w)));
    return 0.5 * std::log((1.0 + q) / (1.0 - q));
}

/// Euclidean description of the hyperbolic disk D(z, r) = {beta(z, .) < r}.
struct EuclideanDisk
{
    Complex center;
    double radius;
};

inline EuclideanDisk hyperbolic_disk(Complex z, double r)
{
    detail::require_in_disk(z, "hyperbolic_disk");
    if (!(r > 0.0))
        throw ParameterError("hyperbolic_disk: radius must be positive");
    const double s = std::tanh(r);
    const double s2 = s * s;
    const double z2 = std::norm(z);
    const double denom = 1.0 - s2 * z2;
    return {z * (1.0 - s2) / denom, s * (1.0 - z2) / denom};
}

/// lambda(D(z, r)) by quadrature of dv / (1-|w|^2)^2 on a polar grid
/// centred at the Euclidean centre of D(z, r).
inline double hyperbolic_ball_measure(Complex z, double r, int n_radial = 64,
                                      int n_angular = 128)
{
    const EuclideanDisk d = hyperbolic_disk(z, r);
    const auto local = build_disk_grid(n_radial, n_angular, 1.0, Measure::lebesgue);
    const double scale = d.radius;
    const Complex c = d.center;
    return integrate_real(local, [&](Complex u) {
        const Complex w = c + scale * u;
        const double gap = 1.0 - std::norm(w);
        return scale * scale / (pi * gap * gap);
    });
}

//----------------------------------------------------------------------------
// Kernels and bases
//----------------------------------------------------------------------------

namespace detail {

inline double bergman_exponent(const SpaceSpec &s) { return s.dim + 1 + s.t; }

inline Complex sinc(double u)
{
    if (std::abs(u) < 1e-12)
        return 1.0;
    return std::sin(pi * u) / (pi * u);
}

/// Integer sampling node of the j-th Paley-Wiener basis vector:
/// 0, 1, -1, 2, -2, ...
inline long pw_node(int j) { return (j % 2 == 1) ? (j + 1) / 2 : -(j / 2); }

inline void require_ball_kernel_args(const SpaceSpec &s, double z2, double w2, Complex zw)
{
    if (s.kind == SpaceKind::bergman || s.kind == SpaceKind::besov_sobolev) {
        if (!(z2 < 1.0) || !(w2 < 1.0))
            throw DomainError("kernel_eval: Bergman kernel needs points inside the ball");
    } else if (!(z2 <= 1.0) || !(w2 <= 1.0)) {
        throw DomainError("kernel_eval: Hardy kernel needs points in the closed ball");
    }
    if (!(std::abs(zw) < 1.0))
        throw DomainError("kernel_eval: |<z, w>| >= 1");
}

} // namespace detail

/// Reproducing kernel K_w(z) for points of C^n given as coordinate lists.
inline Complex kernel_eval(const SpaceSpec &s, std::span<const Complex> z,
                           std::span<const Complex> w)
{
    if (z.size() != static_cast<std::size_t>(s.dim) || w.size() != z.size())
        throw ParameterError("kernel_eval: point dimension does not match the space");
    const Complex zw = detail::dot(z, w);
    switch (s.kind) {
    case SpaceKind::bergman:
    case SpaceKind::besov_sobolev: {
        detail::require_ball_kernel_args(s, detail::norm_sq(z), detail::norm_sq(w), zw);
        const double e = s.kind == SpaceKind::bergman ? detail::bergman_exponent(s) : s.dim + 1;
        return detail::power(1.0 - zw, -e);
    }
    case SpaceKind::hardy:
        detail::require_ball_kernel_args(s, detail::norm_sq(z), detail::norm_sq(w), zw);
        return detail::power(1.0 - zw, -static_cast<double>(s.dim));
    case SpaceKind::fock:
        return std::pow(2.0 * s.fock_c / pi, s.dim) * std::exp(2.0 * s.fock_c * zw);
    case SpaceKind::paley_wiener: {
        if (z[0].imag() != 0.0 || w[0].imag() != 0.0)
            throw DomainError("kernel_eval: Paley-Wiener kernel takes real arguments");
        const double d = z[0].real() - w[0].real();
        return 2.0 * s.band * detail::sinc(2.0 * s.band * d);
    }
    }
    throw ParameterError("kernel_eval: unknown space");
}

inline Complex kernel_eval(const SpaceSpec &s, Complex z, Complex w)
{
    if (s.dim != 1)
        throw ParameterError("kernel_eval: scalar overload needs n = 1");
    const Complex zs[1] = {z};
    const Complex ws[1] = {w};
    return kernel_eval(s, zs, ws);
}

/// ||K_w||^2 = K_w(w).
inline double kernel_norm_sq(const SpaceSpec &s, Complex w)
{
    switch (s.kind) {
    case SpaceKind::bergman:
        detail::require_in_disk(w, "kernel_norm_sq");
        return std::pow(1.0 - std::norm(w), -detail::bergman_exponent(s));
    case SpaceKind::besov_sobolev:
        detail::require_in_disk(w, "kernel_norm_sq");
        return std::pow(1.0 - std::norm(w), -(s.dim + 1.0));
    case SpaceKind::hardy:
        detail::require_in_disk(w, "kernel_norm_sq");
        return std::pow(1.0 - std::norm(w), -static_cast<double>(s.dim));
    default: return kernel_eval(s, w, w).real();
    }
}

/// p-normalized kernel k_w^{(p)} = K_w / ||K_w||^{2/p'}; p = 2 gives the unit
/// vector k_w.
inline Complex normalized_kernel_eval(const SpaceSpec &s, Complex z, Complex w, double p)
{
    if (!(p > 1.0) || !std::isfinite(p))
        throw ParameterError("normalized_kernel_eval: need 1 < p < infinity");
    const double p_dual = p / (p - 1.0);
    const Complex k = kernel_eval(s, z, w);
    return k * std::pow(kernel_norm_sq(s, w), -1.0 / p_dual);
}

/// e_j = scale_j z^j for the monomial bases (Bergman, Hardy, Fock, n = 1).
inline double monomial_scale(const SpaceSpec &s, int j)
{
    if (j < 0)
        throw ParameterError("basis index must be >= 0");
    switch (s.kind) {
    case SpaceKind::bergman:
        if (s.t == 0.0)
            return std::sqrt(j + 1.0);
        return std::exp(0.5 * (std::lgamma(j + s.t + 2.0) - std::lgamma(j + 1.0) -
                               std::lgamma(s.t + 2.0)));
    case SpaceKind::besov_sobolev:
    case SpaceKind::hardy: return 1.0;
    case SpaceKind::fock: {
        const double two_c = 2.0 * s.fock_c;
        return std::exp(0.5 * ((j + 1.0) * std::log(two_c) - std::log(pi) -
                               std::lgamma(j + 1.0)));
    }
    case SpaceKind::paley_wiener: break;
    }
    throw ParameterError("monomial_scale: Paley-Wiener basis is not monomial");
}

namespace detail {

/// monomial_scale(s, j) / monomial_scale(s, j - 1) for j >= 1.
inline double monomial_ratio(const SpaceSpec &s, int j)
{
    switch (s.kind) {
    case SpaceKind::bergman: return std::sqrt((j + 1.0 + s.t) / j);
    case SpaceKind::fock: return std::sqrt(2.0 * s.fock_c / j);
    default: return 1.0;
    }
}

} // namespace detail

/// Values e_0(z), ..., e_deg(z) of a monomial basis, by recurrence.
inline void basis_values(const SpaceSpec &s, Complex z, std::span<Complex> out)
{
    if (out.empty())
        return;
    out[0] = monomial_scale(s, 0);
    for (std::size_t j = 1; j < out.size(); ++j)
        out[j] = out[j - 1] * z * detail::monomial_ratio(s, static_cast<int>(j));
}

/// j-th reference orthonormal basis vector evaluated at z.
inline Complex basis_eval(const SpaceSpec &s, int j, Complex z)
{
    if (j < 0)
        throw ParameterError("basis_eval: index must be >= 0");
    if (s.dim != 1)
        throw ParameterError("basis_eval: reference bases are implemented for n = 1");
    switch (s.kind) {
    case SpaceKind::bergman:
    case SpaceKind::besov_sobolev:
        if (!(std::norm(z) <= 1.0))
            throw DomainError("basis_eval: point outside the closed disk");
        break;
    case SpaceKind::hardy:
        if (!(std::norm(z) <= 1.0 + 1e-12))
            throw DomainError("basis_eval: point outside the closed disk");
        break;
    case SpaceKind::fock: break;
    case SpaceKind::paley_wiener: {
        if (z.imag() != 0.0)
            throw DomainError("basis_eval: Paley-Wiener basis takes real arguments");
        const double a = s.band;
        return std::sqrt(2.0 * a) * detail::sinc(2.0 * a * z.real() - detail::pw_node(j));
    }
    }
    return monomial_scale(s, j) * detail::power(z, j);
}

/// f(z) from coefficients (preferred) or the sampler.
inline Complex evaluate(const SpaceSpec &s, const FunctionRep &f, Complex z)
{
    if (f.coeffs) {
        const auto &c = *f.coeffs;
        if (s.kind == SpaceKind::paley_wiener) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < c.size(); ++j)
                if (c[j] != 0.0)
                    acc += c[j] * basis_eval(s, static_cast<int>(j), z);
            return acc;
        }
        if (s.on_ball() && !(std::norm(z) <= 1.0 + 1e-12))
            throw DomainError("evaluate: point outside the closed disk");
        Complex acc = 0.0;
        Complex e = monomial_scale(s, 0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (j > 0)
                e *= z * detail::monomial_ratio(s, static_cast<int>(j));
            acc += c[j] * e;
        }
        return acc;
    }
    if (f.sampler)
        return f.sampler(z);
    throw ParameterError("evaluate: function has neither coefficients nor sampler");
}

/// Power-series coefficients a_k of f = sum a_k z^k for monomial bases.
inline std::vector<Complex> power_coefficients(const SpaceSpec &s, const FunctionRep &f)
{
    if (!f.coeffs)
        throw ParameterError("power_coefficients: function has no coefficients");
    std::vector<Complex> a(*f.coeffs);
    for (std::size_t j = 0; j < a.size(); ++j)
        a[j] *= monomial_scale(s, static_cast<int>(j));
    return a;
}

//----------------------------------------------------------------------------
// Norms
//----------------------------------------------------------------------------

inline constexpr int default_circle_nodes = 1024;
inline constexpr double fock_truncation_radius = 6.0;

/// Grid on which the space's inner product is integrated by default.
inline const QuadratureGrid &default_space_grid(const SpaceSpec &s)
{
    switch (s.kind) {
    case SpaceKind::hardy: {
        static const QuadratureGrid g = build_circle_grid(default_circle_nodes);
        return g;
    }
    case SpaceKind::fock: {
        static const QuadratureGrid g =
            build_disk_grid(128, 256, fock_truncation_radius, Measure::lebesgue);
        return g;
    }
    case SpaceKind::bergman: return default_disk_grid();
    default: throw ParameterError("default_space_grid: no planar grid for this space");
    }
}

/// Density of the space's norm measure against the grid's reference measure.
inline double space_density(const SpaceSpec &s, Complex z)
{
    switch (s.kind) {
    case SpaceKind::bergman:
        if (s.t == 0.0)
            return 1.0;
        return (s.t + 1.0) * std::pow(std::max(1.0 - std::norm(z), 0.0), s.t);
    case SpaceKind::hardy: return 1.0;
    case SpaceKind::fock: return std::exp(-2.0 * s.fock_c * std::norm(z));
    default: throw ParameterError("space_density: no planar norm measure for this space");
    }
}

inline void check_grid_for_space(const SpaceSpec &s, const QuadratureGrid &g)
{
    switch (s.kind) {
    case SpaceKind::bergman:
        if (g.measure() != Measure::normalized_area)
            throw ParameterError("Bergman norms need a grid with measure v");
        break;
    case SpaceKind::hardy:
        if (g.measure() != Measure::arclength)
            throw ParameterError("Hardy norms need a boundary circle grid");
        break;
    case SpaceKind::fock:
        if (g.measure() != Measure::lebesgue)
            throw ParameterError("Fock norms need a Lebesgue planar grid");
        break;
    default: break;
    }
}

/// <f, g> in the space by quadrature.
inline Complex inner_product(const SpaceSpec &s, const FunctionRep &f, const FunctionRep &g,
                             const QuadratureGrid &grid)
{
    check_grid_for_space(s, grid);
    return integrate(grid, [&](Complex z) {
        return evaluate(s, f, z) * std::conj(evaluate(s, g, z)) * space_density(s, z);
    });
}

/// Number of Shannon samples used for Paley-Wiener norms of sampled functions.
inline constexpr long pw_norm_half_count = 8192;

/// Space norm by quadrature (Bergman: disk grid; Hardy: circle grid; Fock:
/// disk of radius 6; Paley-Wiener: Shannon sample sum).
inline double space_norm(const SpaceSpec &s, const FunctionRep &f, const QuadratureGrid &grid)
{
    if (s.kind == SpaceKind::besov_sobolev)
        throw ParameterError("space_norm: use besov_norm for Besov-Sobolev spaces");
    if (s.kind == SpaceKind::paley_wiener) {
        // Orthonormal sampling: ||f||^2 = (1/2a) sum_k |f(k / 2a)|^2.
        const double a = s.band;
        long half = pw_norm_half_count;
        if (f.coeffs)
            half = static_cast<long>(f.coeffs->size()) / 2 + 1;
        std::vector<double> terms;
        terms.reserve(2 * half + 1);
        for (long k = -half; k <= half; ++k) {
            const Complex v = evaluate(s, f, Complex(k / (2.0 * a), 0.0));
            terms.push_back(std::norm(v) / (2.0 * a));
        }
        return std::sqrt(pairwise_sum(terms));
    }
    check_grid_for_space(s, grid);
    const double p = s.p;
    if (s.kind == SpaceKind::fock) {
        // (int |f e^{-phi}|^p dA)^{1/p}
        const double c = s.fock_c;
        const double mass = integrate_real(grid, [&](Complex z) {
            return std::pow(std::abs(evaluate(s, f, z)) * std::exp(-c * std::norm(z)), p);
        });
        return std::pow(mass, 1.0 / p);
    }
    const double mass = integrate_real(grid, [&](Complex z) {
        return std::pow(std::abs(evaluate(s, f, z)), p) * space_density(s, z);
    });
    return std::pow(mass, 1.0 / p);
}

inline double space_norm(const SpaceSpec &s, const FunctionRep &f)
{
    if (s.kind == SpaceKind::paley_wiener) {
        static const QuadratureGrid unused;
        return space_norm(s, f, unused);
    }
    return space_norm(s, f, default_space_grid(s));
}

/// Gram matrix G_ij = <e_j, e_i> of the first deg + 1 basis vectors under
/// the grid's quadrature inner product. Nodes are processed in fixed chunks
/// whose partial sums are reduced pairwise.
inline DenseComplexMatrix gram_matrix(const SpaceSpec &s, int deg, const QuadratureGrid &grid)
{
    if (deg < 0)
        throw ParameterError("gram_matrix: degree must be >= 0");
    check_grid_for_space(s, grid);
    const std::size_t m = static_cast<std::size_t>(deg) + 1;
    const std::size_t chunk = 4096;
    const std::size_t n_chunks = (grid.size() + chunk - 1) / chunk;
    std::vector<std::vector<Complex>> partial(n_chunks, std::vector<Complex>(m * m));
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    parallel_for(n_chunks, [&](std::size_t c) {
        std::vector<Complex> e(m);
        auto &acc = partial[c];
        const std::size_t hi = std::min(grid.size(), (c + 1) * chunk);
        for (std::size_t k = c * chunk; k < hi; ++k) {
            if (s.kind == SpaceKind::paley_wiener)
                for (std::size_t j = 0; j < m; ++j)
                    e[j] = basis_eval(s, static_cast<int>(j), nodes[k]);
            else
                basis_values(s, nodes[k], e);
            const double w = weights[k] * space_density(s, nodes[k]);
            for (std::size_t i = 0; i < m; ++i) {
                const Complex ei = std::conj(e[i]) * w;
                for (std::size_t j = 0; j < m; ++j)
                    acc[i * m + j] += ei * e[j];
            }
        }
    });
    DenseComplexMatrix g(m, m);
    std::vector<Complex> column(n_chunks);
    for (std::size_t idx = 0; idx < m * m; ++idx) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            column[c] = partial[c][idx];
        g(idx / m, idx % m) = pairwise_sum(column);
    }
    return g;
}

/// Coefficients <f, e_j>, j = 0..deg, by quadrature.
inline std::vector<Complex> project(const SpaceSpec &s, const FunctionRep &f, int deg,
                                    const QuadratureGrid &grid)
{
    if (deg < 0)
        throw ParameterError("project: degree must be >= 0");
    check_grid_for_space(s, grid);
    std::vector<Complex> out(deg + 1);
    for (int j = 0; j <= deg; ++j)
        out[j] = integrate(grid, [&](Complex z) {
            return evaluate(s, f, z) * std::conj(basis_eval(s, j, z)) * space_density(s, z);
        });
    return out;
}

} // namespace kolmo
