#pragma once

// Finite sections of Toeplitz and little Hankel operators, Berezin
// transforms, the kernel localization integrals, singular-value surrogates
// and the VMOA modulus of a boundary symbol.

#include <kolmo/errors.hpp>
#include <kolmo/numerics.hpp>
#include <kolmo/parallel.hpp>
#include <kolmo/spaces.hpp>
#include <kolmo/symbol.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace kolmo {

/// A symbol: a function on the disk (Toeplitz) or on the circle (Hankel).
/// Hankel symbols may instead be given by Fourier coefficients g^(k), k >= 0.
struct SymbolField
{
    std::function<Complex(Complex)> eval;
    std::optional<PolySymbol> poly;
    std::optional<std::vector<Complex>> fourier;
    std::string label;

    static SymbolField from_poly(PolySymbol p, std::string label = {})
    {
        SymbolField s;
        if (label.empty())
            label = p.to_string();
        struct Term
        {
            int a, b;
            Complex c;
        };
        std::vector<Term> terms;
        for (const auto &[k, c] : p.terms())
            terms.push_back({k.first, k.second, c});
        const int d = p.degree();
        s.eval = [terms, d](Complex z) {
            std::vector<Complex> zp(d + 1), zb(d + 1);
            zp[0] = zb[0] = 1.0;
            for (int k = 1; k <= d; ++k) {
                zp[k] = zp[k - 1] * z;
                zb[k] = std::conj(zp[k]);
            }
            Complex acc = 0.0;
            for (const auto &t : terms)
                acc += t.c * zp[t.a] * zb[t.b];
            return acc;
        };
        s.poly = std::move(p);
        s.label = std::move(label);
        return s;
    }

    static SymbolField parse(const std::string &expr)
    {
        return from_poly(parse_symbol(expr), expr);
    }

    static SymbolField from_function(std::function<Complex(Complex)> f, std::string label)
    {
        if (!f)
            throw ParameterError("SymbolField: empty function");
        SymbolField s;
        s.eval = std::move(f);
        s.label = std::move(label);
        return s;
    }

    /// g(w) = sum_k c_k w^k on the circle.
    static SymbolField from_fourier(std::vector<Complex> c)
    {
        if (c.empty())
            throw ParameterError("SymbolField: empty Fourier coefficient list");
        SymbolField s;
        s.eval = [c](Complex w) {
            Complex acc = 0.0;
            for (std::size_t k = c.size(); k-- > 0;)
                acc = acc * w + c[k];
            return acc;
        };
        std::string l = "fourier:";
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (k)
                l += ",";
            l += detail::fmt_num(c[k].real());
            if (c[k].imag() != 0.0)
                l += (c[k].imag() < 0 ? "-" : "+") + detail::fmt_num(std::abs(c[k].imag())) + "i";
        }
        s.label = std::move(l);
        s.fourier = std::move(c);
        return s;
    }

    Complex operator()(Complex z) const { return eval(z); }
};

/// Matrix of an operator in the reference orthonormal basis {e_j}_{j<=deg}.
struct TruncatedOperator
{
    DenseComplexMatrix matrix;
    SpaceSpec space;
    int deg = 0;
    std::string grid_id;
    std::string kind = "custom";
    /// Little Hankel operators are conjugate-linear; the matrix acts on
    /// conjugated coefficients.
    bool conjugate_linear = false;

    static TruncatedOperator identity(int deg, SpaceSpec space = SpaceSpec::bergman())
    {
        if (deg < 0)
            throw ParameterError("TruncatedOperator: deg must be >= 0");
        return {DenseComplexMatrix::identity(deg + 1), space, deg, "exact", "identity", false};
    }

    static TruncatedOperator zero(int deg, SpaceSpec space = SpaceSpec::bergman())
    {
        if (deg < 0)
            throw ParameterError("TruncatedOperator: deg must be >= 0");
        return {DenseComplexMatrix(deg + 1, deg + 1), space, deg, "exact", "zero", false};
    }

    TruncatedOperator adjoint() const
    {
        TruncatedOperator t = *this;
        t.matrix = matrix.adjoint();
        t.kind = kind + "*";
        return t;
    }
};

namespace detail {

inline void require_same_section(const TruncatedOperator &a, const TruncatedOperator &b)
{
    if (a.deg != b.deg)
        throw ParameterError("operator algebra: truncation degrees differ");
    if (a.conjugate_linear || b.conjugate_linear)
        throw ParameterError("operator algebra: only linear operators can be combined");
}

inline std::string join_ids(const std::string &a, const std::string &b)
{
    return a == b ? a : a + "+" + b;
}

} // namespace detail

/// Product of finite sections (composition A B).
inline TruncatedOperator operator*(const TruncatedOperator &a, const TruncatedOperator &b)
{
    detail::require_same_section(a, b);
    return {a.matrix * b.matrix, a.space, a.deg, detail::join_ids(a.grid_id, b.grid_id),
            "(" + a.kind + ")(" + b.kind + ")", false};
}

inline TruncatedOperator operator+(const TruncatedOperator &a, const TruncatedOperator &b)
{
    detail::require_same_section(a, b);
    DenseComplexMatrix m(a.matrix.rows(), a.matrix.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = a.matrix(i, j) + b.matrix(i, j);
    return {m, a.space, a.deg, detail::join_ids(a.grid_id, b.grid_id), a.kind + "+" + b.kind,
            false};
}

namespace detail {

inline void require_bergman_disk(const SpaceSpec &s, const char *what)
{
    if (s.kind != SpaceKind::bergman || s.dim != 1)
        throw ParameterError(std::string(what) + ": implemented for Bergman spaces on the disk");
}

inline const QuadratureGrid &toeplitz_grid(int deg, std::optional<QuadratureGrid> &storage)
{
    if (2 * deg + 2 <= 512)
        return default_disk_grid();
    storage = build_disk_grid(256, 2 * deg + 64, 1.0, Measure::normalized_area);
    return *storage;
}

} // namespace detail

/// Entries <u e_j, e_i> over the space measure. Per ring the symbol's angular
/// Fourier coefficients are formed, so the cost is rings x angles x bands.
inline TruncatedOperator toeplitz_matrix(const SymbolField &u, int deg, const QuadratureGrid &grid,
                                         const SpaceSpec &space = SpaceSpec::bergman())
{
    detail::require_bergman_disk(space, "toeplitz_matrix");
    if (deg < 0 || deg > 256)
        throw ParameterError("toeplitz_matrix: need 0 <= deg <= 256");
    if (!u.eval)
        throw ParameterError("toeplitz_matrix: empty symbol");
    check_grid_for_space(space, grid);
    if (!grid.layout())
        throw ParameterError("toeplitz_matrix: grid must be a polar tensor grid");
    const auto &layout = *grid.layout();
    const int na = layout.n_angular;
    if (na < 2 * deg + 2)
        throw ResolutionError("toeplitz_matrix: " + std::to_string(na) +
                              " angles cannot resolve degree " + std::to_string(deg) + " on " +
                              grid.id());
    const std::size_t nr = layout.radii.size();
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();

    std::vector<Complex> samples(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const double gap = layout.one_minus_r2[i / na];
        const double dens = space.t == 0.0 ? 1.0 : (space.t + 1.0) * std::pow(gap, space.t);
        samples[i] = u(nodes[i]) * dens * weights[i];
    });
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (!std::isfinite(samples[i].real()) || !std::isfinite(samples[i].imag()))
            throw NumericError("toeplitz_matrix: symbol not bounded on " + grid.id(), nodes[i]);

    // roots[k] = exp(-2 pi i k / na)
    std::vector<Complex> roots(na);
    for (int k = 0; k < na; ++k)
        roots[k] = std::polar(1.0, -2.0 * pi * k / na);

    // moments[ring][m + deg] = sum_l w u(r e^{i t_l}) e^{-i m t_l}, m = i - j in [-deg, deg]
    const int bands = 2 * deg + 1;
    std::vector<Complex> moments(nr * bands);
    parallel_for(nr, [&](std::size_t ring) {
        const Complex *row = samples.data() + ring * na;
        for (int m = -deg; m <= deg; ++m) {
            Complex acc = 0.0;
            const long step = ((m % na) + na) % na;
            long idx = 0;
            for (int l = 0; l < na; ++l) {
                acc += row[l] * roots[idx];
                idx += step;
                if (idx >= na)
                    idx -= na;
            }
            moments[ring * bands + (m + deg)] = acc;
        }
    });

    const int dim = deg + 1;
    std::vector<double> scale(dim);
    for (int j = 0; j < dim; ++j)
        scale[j] = monomial_scale(space, j);

    DenseComplexMatrix M(dim, dim);
    parallel_for(static_cast<std::size_t>(dim) * dim, [&](std::size_t e) {
        const int i = static_cast<int>(e / dim);
        const int j = static_cast<int>(e % dim);
        std::vector<double> re(nr), im(nr);
        for (std::size_t ring = 0; ring < nr; ++ring) {
            const double rp = std::pow(layout.radii[ring], i + j);
            const Complex v = moments[ring * bands + (i - j + deg)] * rp;
            re[ring] = v.real();
            im[ring] = v.imag();
        }
        M(i, j) = Complex(pairwise_sum(re), pairwise_sum(im)) * scale[i] * scale[j];
    });
    return {std::move(M), space, deg, grid.id(), "toeplitz[" + u.label + "]", false};
}

inline TruncatedOperator toeplitz_matrix(const SymbolField &u, int deg,
                                         const SpaceSpec &space = SpaceSpec::bergman())
{
    std::optional<QuadratureGrid> storage;
    return toeplitz_matrix(u, deg, detail::toeplitz_grid(deg, storage), space);
}

/// Berezin transform of T_u at z: int u(phi_z(w)) dv(w), the Moebius
/// pullback of int u |k_z|^2 dv.
inline Complex berezin_symbol(const SymbolField &u, Complex z,
                              const QuadratureGrid &grid = default_disk_grid(),
                              const SpaceSpec &space = SpaceSpec::bergman())
{
    detail::require_bergman_disk(space, "berezin_symbol");
    if (!(std::abs(z) <= 0.995))
        throw DomainError("berezin_symbol: need |z| <= 0.995");
    if (!u.eval)
        throw ParameterError("berezin_symbol: empty symbol");
    check_grid_for_space(space, grid);
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    const auto *layout = grid.layout() ? &*grid.layout() : nullptr;
    std::vector<double> re(grid.size()), im(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const Complex w = nodes[i];
        double dens = 1.0;
        if (space.t != 0.0) {
            const double gap = layout ? layout->one_minus_r2[i / layout->n_angular]
                                      : 1.0 - std::norm(w);
            dens = (space.t + 1.0) * std::pow(gap, space.t);
        }
        const Complex v = u((z - w) / (1.0 - std::conj(z) * w)) * (dens * weights[i]);
        re[i] = v.real();
        im[i] = v.imag();
    });
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!std::isfinite(re[i]) || !std::isfinite(im[i]))
            throw NumericError("berezin_symbol: symbol not bounded on " + grid.id(), nodes[i]);
    return {pairwise_sum(re), pairwise_sum(im)};
}

struct BerezinValue
{
    Complex value;
    /// 1 - ||P_deg k_z||^2: kernel mass beyond the truncation.
    double truncation_remainder = 0.0;
    bool beyond_recommended = false; ///< |z| > 1 - 3/deg
};

namespace detail {

/// a_j = conj(e_j(z)) / ||K_z||, the coefficients of the truncated k_z.
inline std::vector<Complex> kernel_coefficients(const SpaceSpec &s, int deg, Complex z)
{
    std::vector<Complex> e(deg + 1);
    basis_values(s, z, e);
    const double inv_norm = 1.0 / std::sqrt(kernel_norm_sq(s, z));
    for (auto &v : e)
        v = std::conj(v) * inv_norm;
    return e;
}

} // namespace detail

/// <T k_z, k_z> with k_z expanded in the first deg+1 basis vectors.
inline BerezinValue berezin_operator(const TruncatedOperator &T, Complex z)
{
    detail::require_bergman_disk(T.space, "berezin_operator");
    if (T.conjugate_linear)
        throw ParameterError("berezin_operator: needs a linear operator");
    if (!(std::abs(z) < 1.0))
        throw DomainError("berezin_operator: point must lie in the disk");
    const auto a = detail::kernel_coefficients(T.space, T.deg, z);
    const auto Ta = T.matrix.apply(a);
    Complex acc = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += Ta[i] * std::conj(a[i]);
        mass += std::norm(a[i]);
    }
    BerezinValue out;
    out.value = acc;
    out.truncation_remainder = std::max(0.0, 1.0 - mass);
    out.beyond_recommended = T.deg == 0 || std::abs(z) > 1.0 - 3.0 / T.deg;
    return out;
}

struct BerezinProfilePoint
{
    double r = 0.0;
    double max_abs = 0.0;
    double min_abs = 0.0;
    double truncation_remainder = 0.0; ///< operator route only
    std::string grid_id;
};

constexpr int berezin_profile_angles = 64;

namespace detail {

inline void require_radii(const std::vector<double> &radii)
{
    if (radii.empty())
        throw ParameterError("berezin_boundary_profile: empty radius list");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !(radii[i] < 1.0))
            throw ParameterError("berezin_boundary_profile: radii must lie in (0, 1)");
        if (i && !(radii[i] > radii[i - 1]))
            throw ParameterError("berezin_boundary_profile: radii must be ascending");
    }
}

} // namespace detail

/// Per radius, max and min over 64 angles of |Berezin transform of T_u|.
inline std::vector<BerezinProfilePoint>
berezin_boundary_profile(const SymbolField &u, const std::vector<double> &radii,
                         const QuadratureGrid &grid = default_disk_grid())
{
    detail::require_radii(radii);
    std::vector<BerezinProfilePoint> out;
    for (double r : radii) {
        std::vector<double> vals(berezin_profile_angles);
        for (int k = 0; k < berezin_profile_angles; ++k)
            vals[k] = std::abs(
                berezin_symbol(u, std::polar(r, 2.0 * pi * k / berezin_profile_angles), grid));
        out.push_back({r, *std::max_element(vals.begin(), vals.end()),
                       *std::min_element(vals.begin(), vals.end()), 0.0, grid.id()});
    }
    return out;
}

inline std::vector<BerezinProfilePoint> berezin_boundary_profile(const TruncatedOperator &T,
                                                                 const std::vector<double> &radii)
{
    detail::require_radii(radii);
    std::vector<BerezinProfilePoint> out;
    for (double r : radii) {
        std::vector<double> vals(berezin_profile_angles);
        double rem = 0.0;
        parallel_for(berezin_profile_angles, [&](std::size_t k) {
            vals[k] = std::abs(
                berezin_operator(T, std::polar(r, 2.0 * pi * k / berezin_profile_angles)).value);
        });
        rem = berezin_operator(T, r).truncation_remainder;
        out.push_back({r, *std::max_element(vals.begin(), vals.end()),
                       *std::min_element(vals.begin(), vals.end()), rem,
                       T.grid_id + ";deg" + std::to_string(T.deg)});
    }
    return out;
}

/// (k+1)-th largest singular value of the finite section.
inline double essential_surrogate(const TruncatedOperator &T, int k)
{
    if (k < 0 || k > T.deg)
        throw ParameterError("essential_surrogate: need 0 <= k <= deg");
    return singular_values(T.matrix)[k];
}

//----------------------------------------------------------------------------
// Kernel localization integrals
//----------------------------------------------------------------------------

struct LocalizationGrid
{
    int n_radial = 64;
    int n_angular = 64;
};

struct LocalizationIntegrals
{
    double rows = 0.0;        ///< int_B |<T* k_z, k_w>| (|K_z|/|K_w|)^{a'} dlambda(w)
    double columns = 0.0;     ///< same with T over B \ D(0, R), exponent a
    double complements = 0.0; ///< same with T over B \ D(z, R)
    double delta = 0.0;
    double exponent_rows = 0.0;    ///< a' = 1 - 2 delta / (p' (n+1))
    double exponent_columns = 0.0; ///< a = 1 - 2 delta / (p (n+1))
    std::string grid_id;
};

inline double default_localization_delta(double p)
{
    const double pd = p / (p - 1.0);
    return 0.5 * std::min(p, pd);
}

namespace detail {

/// Graded annulus [r0, 1) grids, built once per (resolution, r0).
inline const QuadratureGrid &localization_grid(double r0, const LocalizationGrid &lg)
{
    static std::mutex mu;
    static std::map<std::tuple<int, int, double>, std::unique_ptr<QuadratureGrid>> cache;
    const std::lock_guard<std::mutex> lock(mu);
    auto &slot = cache[{lg.n_radial, lg.n_angular, r0}];
    if (!slot)
        slot = std::make_unique<QuadratureGrid>(build_annulus_grid(
            lg.n_radial, lg.n_angular, r0, 1.0, Measure::normalized_area, RadialRule::boundary_graded, 8));
    return *slot;
}

/// int |(e(w) . v)| (1-|z|^2)^{1-a} (1-|w|^2)^{a-1} dv(w) over w = phi_c(zeta),
/// zeta in the annulus tanh(R) <= |zeta| < 1 (c = 0 gives the plain annulus).
/// Uses lambda-invariance: dlambda(w) = dlambda(zeta).
inline double localization_piece(const std::vector<Complex> &v, Complex z, Complex c, double R,
                                 double a, const LocalizationGrid &lg, std::string &grid_id)
{
    const double r0 = R <= 0.0 ? 0.0 : std::tanh(R);
    const auto &grid = localization_grid(r0, lg);
    grid_id = grid.id();
    const auto &layout = *grid.layout();
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    const double gz = 1.0 - std::norm(z);
    const double gc = 1.0 - std::norm(c);
    const std::size_t dim = v.size();
    // sum_j v_j e_j(w) with e_j(w) = sqrt(j+1) w^j, evaluated by Horner
    std::vector<Complex> coef(dim);
    for (std::size_t j = 0; j < dim; ++j)
        coef[j] = v[j] * std::sqrt(j + 1.0);
    std::vector<double> terms(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const Complex zeta = nodes[i];
        const double gzeta = layout.one_minus_r2[i / layout.n_angular];
        Complex w = zeta;
        double gw = gzeta;
        if (c != Complex(0.0)) {
            const Complex den = 1.0 - std::conj(c) * zeta;
            w = (c - zeta) / den;
            gw = gc * gzeta / std::norm(den);
        }
        Complex acc = 0.0;
        for (std::size_t j = dim; j-- > 0;)
            acc = acc * w + coef[j];
        // |<T k_z, k_w>| = |acc| gz gw; (|K_z|/|K_w|)^a = (gw/gz)^a; dlambda = dv(zeta)/gzeta^2
        terms[i] = std::abs(acc) * gz * gw * std::pow(gw / gz, a) / (gzeta * gzeta) * weights[i];
    });
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (!std::isfinite(terms[i]))
            throw NumericError("localization_integrals: non-finite integrand on " + grid.id(),
                               nodes[i]);
    return pairwise_sum(terms);
}

struct LocalizationAt
{
    double rows = 0.0;
    std::vector<double> columns, complements;
    double delta = 0.0, exponent_rows = 0.0, exponent_columns = 0.0;
    std::string grid_id;
};

inline LocalizationAt localization_at(const TruncatedOperator &T, Complex z, double p,
                                      double delta, const std::vector<double> &Rs,
                                      const LocalizationGrid &lg)
{
    require_bergman_disk(T.space, "localization_integrals");
    if (T.space.t != 0.0)
        throw ParameterError("localization_integrals: implemented for the unweighted Bergman space");
    if (T.conjugate_linear)
        throw ParameterError("localization_integrals: needs a linear operator");
    if (!(p > 1.0) || !std::isfinite(p))
        throw ParameterError("localization_integrals: need 1 < p < infinity");
    const double pd = p / (p - 1.0);
    if (delta <= 0.0)
        delta = default_localization_delta(p);
    if (!(delta < std::min(p, pd)))
        throw ParameterError("localization_integrals: need 0 < delta < min(p, p')");
    for (double R : Rs)
        if (!(R > 0.0))
            throw ParameterError("localization_integrals: need R > 0");
    if (!(std::abs(z) <= 0.99 + 1e-12))
        throw ParameterError("localization_integrals: need |z| <= 0.99");
    if (lg.n_radial < 4 || lg.n_angular < 4)
        throw ParameterError("localization_integrals: grid too small");

    // Unnormalized kernel coefficients conj(e_j(z)); the normalization is
    // applied inside the integrand.
    std::vector<Complex> a(T.deg + 1);
    basis_values(T.space, z, a);
    for (auto &x : a)
        x = std::conj(x);
    const auto Ta = T.matrix.apply(a);
    const auto Tsa = T.matrix.adjoint().apply(a);

    LocalizationAt out;
    out.delta = delta;
    out.exponent_rows = 1.0 - 2.0 * delta / (pd * 2.0);
    out.exponent_columns = 1.0 - 2.0 * delta / (p * 2.0);
    std::string id_rows, id_cols, id_comp;
    out.rows = localization_piece(Tsa, z, 0.0, 0.0, out.exponent_rows, lg, id_rows);
    for (double R : Rs) {
        out.columns.push_back(localization_piece(Ta, z, 0.0, R, out.exponent_columns, lg, id_cols));
        out.complements.push_back(
            localization_piece(Ta, z, z, R, out.exponent_columns, lg, id_comp));
    }
    out.grid_id = id_rows + ";" + id_cols + ";pullback " + id_comp + ";deg" + std::to_string(T.deg);
    return out;
}

} // namespace detail

/// The three localization integrals at z for the finite section T on A^p.
/// delta <= 0 selects min(p, p') / 2.
inline LocalizationIntegrals localization_integrals(const TruncatedOperator &T, Complex z, double p,
                                                    double delta, double R,
                                                    const LocalizationGrid &lg = {})
{
    const auto at = detail::localization_at(T, z, p, delta, {R}, lg);
    LocalizationIntegrals out;
    out.rows = at.rows;
    out.columns = at.columns[0];
    out.complements = at.complements[0];
    out.delta = at.delta;
    out.exponent_rows = at.exponent_rows;
    out.exponent_columns = at.exponent_columns;
    out.grid_id = at.grid_id;
    return out;
}

//----------------------------------------------------------------------------
// Little Hankel operators on H^2 of the disk
//----------------------------------------------------------------------------

/// Entries <H_g e_j, e_i> = g^(i + j), the (i+j)-th Fourier coefficient of g
/// by an N-point boundary rule (N >= 4 deg).
inline TruncatedOperator hankel_matrix(const SymbolField &g, int deg, int n_boundary = 0)
{
    if (deg < 0)
        throw ParameterError("hankel_matrix: deg must be >= 0");
    if (!g.eval)
        throw ParameterError("hankel_matrix: empty symbol");
    if (n_boundary == 0)
        n_boundary = std::max(1024, 4 * deg);
    if (n_boundary < 4 * std::max(deg, 1))
        throw ParameterError("hankel_matrix: boundary grid of " + std::to_string(n_boundary) +
                             " nodes is below 4*deg = " + std::to_string(4 * deg));
    const auto grid = build_circle_grid(n_boundary);
    const auto nodes = grid.nodes();
    std::vector<Complex> samples(n_boundary);
    for (int l = 0; l < n_boundary; ++l) {
        samples[l] = g(nodes[l]);
        if (!std::isfinite(samples[l].real()) || !std::isfinite(samples[l].imag()))
            throw NumericError("hankel_matrix: symbol not bounded on " + grid.id(), nodes[l]);
    }
    const int nk = 2 * deg + 1;
    std::vector<Complex> ghat(nk);
    parallel_for(nk, [&](std::size_t k) {
        std::vector<double> re(n_boundary), im(n_boundary);
        for (int l = 0; l < n_boundary; ++l) {
            const long idx = (static_cast<long>(k) * l) % n_boundary;
            const Complex v = samples[l] * std::polar(1.0, -2.0 * pi * idx / n_boundary);
            re[l] = v.real();
            im[l] = v.imag();
        }
        ghat[k] = Complex(pairwise_sum(re), pairwise_sum(im)) / static_cast<double>(n_boundary);
    });
    DenseComplexMatrix M(deg + 1, deg + 1);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg; ++j)
            M(i, j) = ghat[i + j];
    return {std::move(M), SpaceSpec::hardy(), deg, grid.id(), "hankel[" + g.label + "]", true};
}

/// Independent oracle: entry (i, j) = g^(i + j) from the coefficient list
/// (zero beyond its end).
inline DenseComplexMatrix hankel_oracle(const std::vector<Complex> &ghat, int deg)
{
    if (deg < 0)
        throw ParameterError("hankel_oracle: deg must be >= 0");
    DenseComplexMatrix M(deg + 1, deg + 1);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; j <= deg; ++j)
            if (static_cast<std::size_t>(i + j) < ghat.size())
                M(i, j) = ghat[i + j];
    return M;
}

constexpr int default_vmo_boundary_nodes = 8192;

/// sup over arc centres of the mean-square oscillation of g over
/// Q(zeta, r) = {w on the circle : |1 - zeta conj(w)| < r^2}.
inline double vmo_modulus(const SymbolField &g, double r, int n_boundary = default_vmo_boundary_nodes)
{
    if (!(r > 0.0) || !(r < std::sqrt(2.0)))
        throw ParameterError("vmo_modulus: need 0 < r < sqrt(2)");
    if (!g.eval)
        throw ParameterError("vmo_modulus: empty symbol");
    const auto grid = build_circle_grid(n_boundary);
    const auto nodes = grid.nodes();
    // |1 - e^{i phi}| = 2 |sin(phi / 2)| < r^2
    const double half = 2.0 * std::asin(0.5 * r * r);
    const double h = 2.0 * pi / n_boundary;
    int m = static_cast<int>(std::floor(half / h));
    // strict inequality on the node at exactly the edge
    if (m > 0 && std::abs(m * h - half) <= 1e-15 * half)
        --m;
    if (2 * m + 1 < 2)
        throw ResolutionError("vmo_modulus: arc at r = " + detail::fmt_num(r) +
                              " holds fewer than 2 nodes of " + grid.id());
    m = std::min(m, (n_boundary - 1) / 2);
    std::vector<Complex> samples(n_boundary);
    for (int l = 0; l < n_boundary; ++l) {
        samples[l] = g(nodes[l]);
        if (!std::isfinite(samples[l].real()) || !std::isfinite(samples[l].imag()))
            throw NumericError("vmo_modulus: symbol not bounded on " + grid.id(), nodes[l]);
    }
    const int count = 2 * m + 1;
    std::vector<double> osc(n_boundary);
    parallel_for(n_boundary, [&](std::size_t c) {
        std::vector<double> re(count), im(count);
        for (int k = -m; k <= m; ++k) {
            const Complex v = samples[(static_cast<long>(c) + k + n_boundary) % n_boundary];
            re[k + m] = v.real();
            im[k + m] = v.imag();
        }
        const Complex mean = Complex(pairwise_sum(re), pairwise_sum(im)) / static_cast<double>(count);
        std::vector<double> dev(count);
        for (int k = 0; k < count; ++k)
            dev[k] = std::norm(Complex(re[k], im[k]) - mean);
        osc[c] = pairwise_sum(dev) / count;
    });
    return *std::max_element(osc.begin(), osc.end());
}

//----------------------------------------------------------------------------
// Compactness reports
//----------------------------------------------------------------------------

enum class Verdict
{
    compact_evidence,
    noncompact_evidence,
    inconclusive,
};

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::compact_evidence: return "compact_evidence";
    case Verdict::noncompact_evidence: return "noncompact_evidence";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct ToeplitzReportOptions
{
    int deg = 64;
    std::vector<double> radii{0.5, 0.75, 0.9, 0.95, 0.99};
    double verdict_radius = 0.99;
    double compact_below = 0.1;
    double noncompact_above = 0.5;
    double p = 2.0;
    double delta = 0.0; ///< 0 selects min(p, p') / 2
    std::vector<double> localization_R{1.0, 2.0, 3.0};
    int sup_radii = 64;
    int sup_angles = 32;
    double sup_max_radius = 0.99;
    LocalizationGrid localization_grid;
    bool localization = true;
};

struct HankelReportOptions
{
    int deg = 16;
    int n_boundary = 0;
    double rank_tolerance = 1e-10;
    double compact_ratio = 0.1;
    double noncompact_ratio = 0.5;
    std::vector<double> vmo_radii{0.8, 0.4, 0.2, 0.1};
    int vmo_boundary_nodes = default_vmo_boundary_nodes;
};

struct LocalizationRow
{
    double R = 0.0;
    double columns_sup = 0.0;
    double complements_sup = 0.0;
};

struct VmoRow
{
    double r = 0.0;
    double modulus = 0.0;
};

struct DiagnosticReport
{
    std::string kind; ///< "toeplitz" or "hankel"
    std::string symbol;
    int deg = 0;
    std::vector<BerezinProfilePoint> berezin_profile;  ///< symbol route
    std::vector<BerezinProfilePoint> operator_profile; ///< finite-section route, |z| <= 1 - 3/deg
    std::vector<double> singular_values;
    std::string matrix_grid_id;
    std::size_t numerical_rank = 0;
    double sv_ratio = 0.0; ///< sigma_{deg/2} / sigma_0
    // Toeplitz localization table
    bool has_localization = false;
    double rows_sup = 0.0;
    std::vector<LocalizationRow> localization;
    std::string localization_grid_id;
    std::string sup_sample;
    double p = 2.0;
    double delta = 0.0;
    // Hankel
    std::vector<VmoRow> vmo;
    std::string vmo_grid_id;
    std::string conjugation_convention;
    Verdict verdict = Verdict::inconclusive;
    std::string verdict_rule;
    std::string note = "finite-truncation evidence, not a proof";
};

inline DiagnosticReport toeplitz_report(const SymbolField &u, const ToeplitzReportOptions &o = {})
{
    if (o.radii.empty())
        throw ParameterError("toeplitz_report: empty radius list");
    DiagnosticReport rep;
    rep.kind = "toeplitz";
    rep.symbol = u.label;
    rep.deg = o.deg;
    rep.p = o.p;
    rep.berezin_profile = berezin_boundary_profile(u, o.radii);

    const auto T = toeplitz_matrix(u, o.deg);
    rep.matrix_grid_id = T.grid_id;
    rep.singular_values = singular_values(T.matrix);
    for (double s : rep.singular_values)
        if (s > 1e-10)
            ++rep.numerical_rank;
    rep.sv_ratio = rep.singular_values[0] > 0.0
                       ? rep.singular_values[o.deg / 2] / rep.singular_values[0]
                       : 0.0;
    std::vector<double> op_radii;
    for (double r : o.radii)
        if (o.deg > 0 && r <= 1.0 - 3.0 / o.deg)
            op_radii.push_back(r);
    if (!op_radii.empty())
        rep.operator_profile = berezin_boundary_profile(T, op_radii);

    if (o.localization) {
        if (o.sup_radii < 1 || o.sup_angles < 1)
            throw ParameterError("toeplitz_report: sup sample must be nonempty");
        rep.has_localization = true;
        rep.delta = o.delta > 0.0 ? o.delta : default_localization_delta(o.p);
        rep.sup_sample = std::to_string(o.sup_radii) + " radii in [0," +
                         detail::fmt_num(o.sup_max_radius) + "] x " +
                         std::to_string(o.sup_angles) + " angles";
        std::vector<Complex> zs;
        for (int i = 0; i < o.sup_radii; ++i) {
            const double r = o.sup_radii == 1 ? 0.0 : o.sup_max_radius * i / (o.sup_radii - 1);
            for (int k = 0; k < (i == 0 ? 1 : o.sup_angles); ++k)
                zs.push_back(std::polar(r, 2.0 * pi * k / o.sup_angles));
        }
        for (double R : o.localization_R)
            rep.localization.push_back({R, 0.0, 0.0});
        for (const Complex z : zs) {
            const auto at = detail::localization_at(T, z, o.p, rep.delta, o.localization_R,
                                                    o.localization_grid);
            rep.rows_sup = std::max(rep.rows_sup, at.rows);
            for (std::size_t k = 0; k < o.localization_R.size(); ++k) {
                rep.localization[k].columns_sup = std::max(rep.localization[k].columns_sup, at.columns[k]);
                rep.localization[k].complements_sup =
                    std::max(rep.localization[k].complements_sup, at.complements[k]);
            }
            rep.localization_grid_id = at.grid_id;
        }
    }

    // Verdict from the Berezin value at the verdict radius (symbol route).
    double at = -1.0;
    for (const auto &pt : rep.berezin_profile)
        if (std::abs(pt.r - o.verdict_radius) < 1e-12)
            at = pt.max_abs;
    if (at < 0.0)
        at = std::abs(berezin_boundary_profile(u, {o.verdict_radius})[0].max_abs);
    rep.verdict = at < o.compact_below      ? Verdict::compact_evidence
                  : at > o.noncompact_above ? Verdict::noncompact_evidence
                                            : Verdict::inconclusive;
    rep.verdict_rule = "max |Berezin| at r = " + detail::fmt_num(o.verdict_radius) + " is " +
                       detail::fmt_num(at) + "; compact below " + detail::fmt_num(o.compact_below) +
                       ", noncompact above " + detail::fmt_num(o.noncompact_above);
    return rep;
}

inline DiagnosticReport hankel_report(const SymbolField &g, const HankelReportOptions &o = {})
{
    if (o.deg < 2)
        throw ParameterError("hankel_report: deg must be >= 2");
    DiagnosticReport rep;
    rep.kind = "hankel";
    rep.symbol = g.label;
    rep.deg = o.deg;
    rep.conjugation_convention =
        "H_g f = S(g conj(f)) is conjugate-linear; the matrix acts on conjugated coefficients";
    const auto H = hankel_matrix(g, o.deg, o.n_boundary);
    rep.matrix_grid_id = H.grid_id;
    rep.singular_values = singular_values(H.matrix);
    for (double s : rep.singular_values)
        if (s > o.rank_tolerance)
            ++rep.numerical_rank;
    rep.sv_ratio = rep.singular_values[0] > 0.0
                       ? rep.singular_values[o.deg / 2] / rep.singular_values[0]
                       : 0.0;
    rep.vmo_grid_id = "circle[" + std::to_string(o.vmo_boundary_nodes) + "]";
    for (double r : o.vmo_radii)
        rep.vmo.push_back({r, vmo_modulus(g, r, o.vmo_boundary_nodes)});
    const bool low_rank = rep.numerical_rank <= static_cast<std::size_t>(o.deg / 2);
    rep.verdict = (low_rank || rep.sv_ratio < o.compact_ratio) ? Verdict::compact_evidence
                  : rep.sv_ratio > o.noncompact_ratio          ? Verdict::noncompact_evidence
                                                               : Verdict::inconclusive;
    rep.verdict_rule = "numerical rank " + std::to_string(rep.numerical_rank) + " (sigma > " +
                       detail::fmt_num(o.rank_tolerance) + "), sigma_" + std::to_string(o.deg / 2) +
                       "/sigma_0 = " + detail::fmt_num(rep.sv_ratio) + "; compact if rank <= " +
                       std::to_string(o.deg / 2) + " or ratio < " + detail::fmt_num(o.compact_ratio) +
                       ", noncompact if ratio > " + detail::fmt_num(o.noncompact_ratio);
    return rep;
}

} // namespace kolmo
