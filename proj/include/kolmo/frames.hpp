#pragma once

// Continuous Parseval frames of kernels, tail masses over exhaustions, the
// Mazur quadratic form, localization hypotheses and the umbrella capacity.

#include <kolmo/errors.hpp>
#include <kolmo/numerics.hpp>
#include <kolmo/spaces.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace kolmo {

enum class FrameKind
{
    bergman,        ///< disk, measure lambda, frame vectors k_z
    fock,           ///< plane, measure (2c/pi) dA, frame vectors k_z
    paley_wiener,   ///< line, measure 2a dx, frame vectors k_x
    hardy_boundary, ///< circle, measure s, boundary point evaluations
};

inline const char *to_string(FrameKind k)
{
    switch (k) {
    case FrameKind::bergman: return "bergman";
    case FrameKind::fock: return "fock";
    case FrameKind::paley_wiener: return "paley_wiener";
    case FrameKind::hardy_boundary: return "hardy_boundary";
    }
    return "?";
}

/// A continuous frame {k_x} with its index measure. For p != 2 the
/// coefficients are pairings with the p'-normalized kernels and tails use
/// |.|^p, giving the Banach p-frame of the Bergman space.
struct FrameSpec
{
    FrameKind kind = FrameKind::bergman;
    SpaceSpec space = SpaceSpec::bergman();
    double p = 2.0;

    static FrameSpec bergman(double p = 2.0)
    {
        if (!(p > 1.0) || !std::isfinite(p))
            throw ParameterError("FrameSpec: need 1 < p < infinity");
        return {FrameKind::bergman, SpaceSpec::bergman(0.0, p), p};
    }
    static FrameSpec fock(double c = pi / 2.0) { return {FrameKind::fock, SpaceSpec::fock(c), 2.0}; }
    static FrameSpec paley_wiener(double a)
    {
        return {FrameKind::paley_wiener, SpaceSpec::paley_wiener(a), 2.0};
    }
    static FrameSpec hardy_boundary() { return {FrameKind::hardy_boundary, SpaceSpec::hardy(), 2.0}; }
};

/// Quadrature resolution used by frame functionals.
struct FrameQuadrature
{
    int n_radial = 64;          ///< Gauss-Legendre nodes per radial (or panel) segment
    int n_angular = 0;          ///< 0 chooses from the function's degree
    double r_max = 0.999;       ///< Bergman Parseval disk radius
    double fock_radius = 6.0;   ///< Fock truncation radius
    int pw_oversample = 4;      ///< composite panels per Shannon interval
    double pw_window = 0.0;     ///< Paley-Wiener Parseval half-window; 0 picks 256/(2a)
};

//----------------------------------------------------------------------------
// Frame coefficients
//----------------------------------------------------------------------------

namespace detail {

inline int degree_of(const FunctionRep &f)
{
    return f.coeffs ? static_cast<int>(f.coeffs->size()) - 1 : -1;
}

inline int angular_nodes(const FrameQuadrature &q, const FunctionRep &f, double p)
{
    if (q.n_angular > 0)
        return q.n_angular;
    const int d = degree_of(f);
    if (d < 0)
        return 128;
    if (p == 2.0)
        return std::max(16, 2 * d + 2);
    return std::max(64, 4 * d + 4);
}

/// Frame coefficient of f at x when 1 - |x|^2 is known accurately.
inline Complex coeff_with_gap(const FrameSpec &fr, const FunctionRep &f, Complex x, double gap)
{
    switch (fr.kind) {
    case FrameKind::bergman:
        // <f, k_x^{(p')}> = (1 - |x|^2)^{(n+1)/p} f(x)
        return std::pow(gap, (fr.space.dim + 1.0) / fr.p) * evaluate(fr.space, f, x);
    case FrameKind::fock: {
        const double c = fr.space.fock_c;
        return evaluate(fr.space, f, x) * std::exp(-c * std::norm(x)) * std::sqrt(pi / (2.0 * c));
    }
    case FrameKind::paley_wiener:
        return evaluate(fr.space, f, x) / std::sqrt(2.0 * fr.space.band);
    case FrameKind::hardy_boundary: return evaluate(fr.space, f, x);
    }
    throw ParameterError("frame_coeff: unknown frame");
}

} // namespace detail

/// <f, k_x> by the reproducing property (closed form in f(x)).
inline Complex frame_coeff(const FrameSpec &fr, const FunctionRep &f, Complex x)
{
    switch (fr.kind) {
    case FrameKind::bergman:
        if (!(std::norm(x) < 1.0))
            throw DomainError("frame_coeff: index point outside the disk");
        break;
    case FrameKind::paley_wiener:
        if (x.imag() != 0.0)
            throw DomainError("frame_coeff: Paley-Wiener index points are real");
        break;
    case FrameKind::hardy_boundary:
        if (std::abs(std::abs(x) - 1.0) > 1e-12)
            throw DomainError("frame_coeff: Hardy boundary index points lie on the circle");
        break;
    case FrameKind::fock: break;
    }
    return detail::coeff_with_gap(fr, f, x, 1.0 - std::norm(x));
}

/// <f, k_x> as a quadrature inner product of f against the frame vector,
/// for the planar frames (Bergman, Fock).
inline Complex frame_coeff_quadrature(const FrameSpec &fr, const FunctionRep &f, Complex x,
                                      const QuadratureGrid &grid)
{
    if (fr.kind != FrameKind::bergman && fr.kind != FrameKind::fock)
        throw ParameterError("frame_coeff_quadrature: planar frames only");
    if (fr.kind == FrameKind::bergman && !(std::norm(x) < 1.0))
        throw DomainError("frame_coeff_quadrature: index point outside the disk");
    // k_x^{(p')} = K_x / ||K_x||^{2/p}
    const double scale = std::pow(kernel_norm_sq(fr.space, x), -1.0 / fr.p);
    check_grid_for_space(fr.space, grid);
    return integrate(grid, [&](Complex z) {
        return evaluate(fr.space, f, z) * std::conj(kernel_eval(fr.space, z, x) * scale) *
               space_density(fr.space, z);
    });
}

/// <k_x, k_y> for unit frame vectors, from the kernel: K_y(x) / (|K_x| |K_y|).
inline Complex kernel_pairing(const FrameSpec &fr, Complex x, Complex y)
{
    if (fr.kind == FrameKind::hardy_boundary)
        throw ParameterError("kernel_pairing: boundary evaluations have no kernel vectors");
    const Complex k = kernel_eval(fr.space, x, y);
    if (fr.kind == FrameKind::fock) {
        // The norms overflow long before the ratio does; divide in log space.
        const double lx = std::log(kernel_norm_sq(fr.space, x));
        const double ly = std::log(kernel_norm_sq(fr.space, y));
        const double lk = std::log(std::abs(k));
        return std::polar(std::exp(lk - 0.5 * (lx + ly)), std::arg(k));
    }
    return k / std::sqrt(kernel_norm_sq(fr.space, x) * kernel_norm_sq(fr.space, y));
}

//----------------------------------------------------------------------------
// Exhaustions
//----------------------------------------------------------------------------

enum class ExhaustionKind
{
    euclidean_radius,  ///< F_n = {|x| <= R_n}
    hyperbolic_radius, ///< F_n = D(0, n r0) = {|z| <= tanh(n r0)} in the disk
    box,               ///< F_n = [-R_n, R_n]^2 in the plane, [-R_n, R_n] on the line
};

inline const char *to_string(ExhaustionKind k)
{
    switch (k) {
    case ExhaustionKind::euclidean_radius: return "euclidean_radius";
    case ExhaustionKind::hyperbolic_radius: return "hyperbolic_radius";
    case ExhaustionKind::box: return "box";
    }
    return "?";
}

/// Nested sets F_1 in F_2 in ... described by their (Euclidean) sizes.
struct Exhaustion
{
    ExhaustionKind kind = ExhaustionKind::euclidean_radius;
    std::vector<double> radii; ///< R_1 < R_2 < ...

    /// R_n = 1 - 2^{-n}.
    static Exhaustion ball(int depth)
    {
        Exhaustion e;
        for (int n = 1; n <= depth; ++n)
            e.radii.push_back(1.0 - std::ldexp(1.0, -n));
        e.validate();
        return e;
    }

    /// Hyperbolic disks D(0, n r0), i.e. Euclidean radii tanh(n r0).
    static Exhaustion hyperbolic(double r0, int depth)
    {
        if (!(r0 > 0.0))
            throw ParameterError("Exhaustion: hyperbolic step must be positive");
        Exhaustion e;
        e.kind = ExhaustionKind::hyperbolic_radius;
        for (int n = 1; n <= depth; ++n)
            e.radii.push_back(std::tanh(n * r0));
        e.validate();
        return e;
    }

    /// R_n = n (plane or line).
    static Exhaustion plane(int depth, ExhaustionKind kind = ExhaustionKind::euclidean_radius)
    {
        Exhaustion e;
        e.kind = kind;
        for (int n = 1; n <= depth; ++n)
            e.radii.push_back(n);
        e.validate();
        return e;
    }

    static Exhaustion default_for(const FrameSpec &fr, int depth)
    {
        switch (fr.kind) {
        case FrameKind::bergman:
        case FrameKind::hardy_boundary: return ball(depth);
        default: return plane(depth);
        }
    }

    int depth() const { return static_cast<int>(radii.size()); }

    double level(int n) const
    {
        if (n < 1 || n > depth())
            throw ParameterError("Exhaustion: level " + std::to_string(n) + " outside 1.." +
                                 std::to_string(depth()));
        return radii[n - 1];
    }

    void validate() const
    {
        if (radii.empty())
            throw ParameterError("Exhaustion: schedule is empty");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (!(radii[i] > 0.0) || !std::isfinite(radii[i]))
                throw ParameterError("Exhaustion: radii must be positive and finite");
            if (i > 0 && !(radii[i] > radii[i - 1]))
                throw ParameterError("Exhaustion: radii must increase strictly");
        }
    }
};

//----------------------------------------------------------------------------
// Region grids in index space, weights integrating the frame measure mu
//----------------------------------------------------------------------------

namespace detail {

/// Disk or annulus grid for the Bergman frame with lambda weights; the
/// returned gaps hold 1 - |x|^2 per node. r1 = 1 is allowed (open rim).
inline QuadratureGrid bergman_region(double r0, double r1, int n_radial, int n_angular,
                                     std::vector<double> &gaps)
{
    const auto v = build_annulus_grid(n_radial, n_angular, r0, r1, Measure::normalized_area);
    const auto &layout = *v.layout();
    std::vector<Complex> nodes(v.nodes().begin(), v.nodes().end());
    std::vector<double> weights(v.size());
    gaps.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double g = layout.one_minus_r2[i / layout.n_angular];
        gaps[i] = g;
        weights[i] = v.weights()[i] / (g * g);
    }
    std::string id = "lambda:" + v.id();
    return QuadratureGrid(std::move(nodes), std::move(weights), v.domain(), Measure::hyperbolic,
                          std::move(id), layout);
}

inline QuadratureGrid scaled_grid(const QuadratureGrid &g, double factor, std::string prefix)
{
    std::vector<Complex> nodes(g.nodes().begin(), g.nodes().end());
    std::vector<double> weights(g.weights().begin(), g.weights().end());
    for (auto &w : weights)
        w *= factor;
    return QuadratureGrid(std::move(nodes), std::move(weights), g.domain(), g.measure(),
                          prefix + g.id(), g.layout());
}

inline QuadratureGrid rect_grid(double x0, double x1, double y0, double y1, int n)
{
    const GaussRule gx = gauss_legendre(n, x0, x1);
    const GaussRule gy = gauss_legendre(n, y0, y1);
    std::vector<Complex> nodes;
    std::vector<double> weights;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            nodes.emplace_back(gx.nodes[i], gy.nodes[j]);
            weights.push_back(gx.weights[i] * gy.weights[j]);
        }
    return QuadratureGrid(std::move(nodes), std::move(weights),
                          DomainTag{DomainKind::plane_box, x0, x1}, Measure::lebesgue, "rect");
}

inline QuadratureGrid concat(const std::vector<QuadratureGrid> &parts, std::string id)
{
    std::vector<Complex> nodes;
    std::vector<double> weights;
    for (const auto &g : parts) {
        nodes.insert(nodes.end(), g.nodes().begin(), g.nodes().end());
        weights.insert(weights.end(), g.weights().begin(), g.weights().end());
    }
    return QuadratureGrid(std::move(nodes), std::move(weights),
                          parts.empty() ? DomainTag{} : parts.front().domain(),
                          parts.empty() ? Measure::lebesgue : parts.front().measure(),
                          std::move(id));
}

/// Region of index space with weights for mu: the set F (inside = true) or
/// its complement, for size parameter R. gaps is filled for Bergman grids.
inline std::optional<QuadratureGrid> frame_region(const FrameSpec &fr, ExhaustionKind kind,
                                                  double R, bool inside, int n_radial,
                                                  int n_angular, const FrameQuadrature &q,
                                                  std::vector<double> &gaps)
{
    gaps.clear();
    switch (fr.kind) {
    case FrameKind::bergman: {
        if (kind == ExhaustionKind::box)
            throw ParameterError("frame_region: box exhaustions are for the plane or line");
        if (inside) {
            // F = whole disk is represented by |z| <= r_max.
            const double r = R < 1.0 ? R : q.r_max;
            return bergman_region(0.0, r, n_radial, n_angular, gaps);
        }
        if (R >= 1.0)
            return std::nullopt;
        return bergman_region(R, 1.0, n_radial, n_angular, gaps);
    }
    case FrameKind::fock: {
        if (kind == ExhaustionKind::hyperbolic_radius)
            throw ParameterError("frame_region: hyperbolic schedules belong to the disk");
        const double factor = 2.0 * fr.space.fock_c / pi;
        const double outer = std::max(q.fock_radius, R + 4.0);
        if (kind == ExhaustionKind::euclidean_radius) {
            if (inside)
                return scaled_grid(build_disk_grid(n_radial, n_angular, R, Measure::lebesgue),
                                   factor, "fock:");
            return scaled_grid(
                build_annulus_grid(n_radial, n_angular, R, outer, Measure::lebesgue), factor,
                "fock:");
        }
        if (inside)
            return scaled_grid(rect_grid(-R, R, -R, R, n_radial), factor, "fock-box:");
        const double B = outer;
        auto g = concat({rect_grid(-B, B, R, B, n_radial), rect_grid(-B, B, -B, -R, n_radial),
                         rect_grid(-B, -R, -R, R, n_radial), rect_grid(R, B, -R, R, n_radial)},
                        "box-complement[" + detail::fmt_num(R) + "," + detail::fmt_num(B) + "]");
        return scaled_grid(g, factor, "fock:");
    }
    case FrameKind::paley_wiener: {
        if (kind == ExhaustionKind::hyperbolic_radius)
            throw ParameterError("frame_region: hyperbolic schedules belong to the disk");
        if (!inside)
            throw ParameterError("frame_region: Paley-Wiener complements are not integrated");
        const double a = fr.space.band;
        const int panels = std::max(1, static_cast<int>(std::ceil(2.0 * R * 2.0 * a * q.pw_oversample)));
        return scaled_grid(build_interval_grid(panels, 8, -R, R), 2.0 * a, "pw:");
    }
    case FrameKind::hardy_boundary: {
        // F = {|arg x| <= pi R}, R in (0, 1]
        const double half = pi * std::min(R, 1.0);
        const int panels = std::max(4, n_angular / 8);
        std::vector<Complex> nodes;
        std::vector<double> weights;
        auto add = [&](double t0, double t1) {
            if (!(t1 > t0))
                return;
            const auto g = build_interval_grid(panels, 8, t0, t1);
            for (std::size_t i = 0; i < g.size(); ++i) {
                nodes.push_back(std::polar(1.0, g.nodes()[i].real()));
                weights.push_back(g.weights()[i] / (2.0 * pi));
            }
        };
        if (inside)
            add(-half, half);
        else {
            add(half, pi);
            add(-pi, -half);
        }
        if (nodes.empty())
            return std::nullopt;
        return QuadratureGrid(std::move(nodes), std::move(weights),
                              DomainTag{DomainKind::circle, 1.0, 1.0}, Measure::arclength,
                              "arc[" + detail::fmt_num(R) + (inside ? ",in" : ",out") + "]");
    }
    }
    throw ParameterError("frame_region: unknown frame");
}

inline double coeff_power_mass(const FrameSpec &fr, const FunctionRep &f,
                               const QuadratureGrid &g, const std::vector<double> &gaps)
{
    const auto nodes = g.nodes();
    const auto weights = g.weights();
    std::vector<double> terms(g.size());
    const double p = fr.p;
    parallel_for(g.size(), [&](std::size_t i) {
        const double gap = gaps.empty() ? 1.0 - std::norm(nodes[i]) : gaps[i];
        const double a = std::abs(coeff_with_gap(fr, f, nodes[i], gap));
        terms[i] = (p == 2.0 ? a * a : std::pow(a, p)) * weights[i];
    });
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (!std::isfinite(terms[i]))
            throw NumericError("tail_mass: non-finite frame coefficient on " + g.id(), nodes[i]);
    return pairwise_sum(terms);
}

} // namespace detail

/// int_{X \ F} |<f, k_x>|^p dmu for F of size R in the given schedule kind.
inline double tail_mass_beyond(const FrameSpec &fr, const FunctionRep &f, double R,
                               ExhaustionKind kind = ExhaustionKind::euclidean_radius,
                               const FrameQuadrature &q = {})
{
    if (!(R >= 0.0))
        throw ParameterError("tail_mass: size must be >= 0");
    const int na = detail::angular_nodes(q, f, fr.p);
    std::vector<double> gaps;
    if (fr.kind == FrameKind::paley_wiener) {
        if (fr.p != 2.0)
            throw ParameterError("tail_mass: Paley-Wiener tails are computed for p = 2");
        const double norm = space_norm(fr.space, f);
        if (R == 0.0)
            return norm * norm;
        const auto in = detail::frame_region(fr, kind, R, true, q.n_radial, na, q, gaps);
        const double inside = detail::coeff_power_mass(fr, f, *in, gaps);
        // Tail by subtraction from the Shannon norm; quadrature noise can make
        // the difference slightly negative.
        return std::max(0.0, norm * norm - inside);
    }
    if (fr.kind == FrameKind::bergman && kind == ExhaustionKind::hyperbolic_radius)
        kind = ExhaustionKind::euclidean_radius; // D(0, r) is the Euclidean disk tanh(r)
    if (R == 0.0 && fr.kind == FrameKind::bergman) {
        const auto all = detail::frame_region(fr, kind, 0.0, false, q.n_radial, na, q, gaps);
        return detail::coeff_power_mass(fr, f, *all, gaps);
    }
    const auto g = detail::frame_region(fr, kind, R, false, q.n_radial, na, q, gaps);
    if (!g)
        return 0.0;
    return detail::coeff_power_mass(fr, f, *g, gaps);
}

/// Tail mass at level n of an exhaustion.
inline double tail_mass(const FrameSpec &fr, const FunctionRep &f, const Exhaustion &ex,
                        int level, const FrameQuadrature &q = {})
{
    return tail_mass_beyond(fr, f, ex.level(level), ex.kind, q);
}

/// Description of the grid a tail at size R is integrated on.
inline std::string tail_grid_id(const FrameSpec &fr, const FunctionRep &f, double R,
                                ExhaustionKind kind, const FrameQuadrature &q = {})
{
    std::vector<double> gaps;
    const int na = detail::angular_nodes(q, f, fr.p);
    if (fr.kind == FrameKind::bergman && kind == ExhaustionKind::hyperbolic_radius)
        kind = ExhaustionKind::euclidean_radius;
    const bool inside = fr.kind == FrameKind::paley_wiener;
    const auto g = detail::frame_region(fr, kind, R, inside, q.n_radial, na, q, gaps);
    return g ? g->id() : "empty";
}

//----------------------------------------------------------------------------
// Parseval defect and the Mazur form
//----------------------------------------------------------------------------

struct ParsevalReport
{
    double defect = 0.0;    ///< |integral + remainder - ||f||^2|
    double integral = 0.0;  ///< quadrature of |<f, k_x>|^2 over the truncated domain
    double remainder = 0.0; ///< analytic mass outside the truncated domain
    double norm_sq = 0.0;   ///< ||f||^2 from coefficients (or the space norm)
    bool remainder_known = false;
    std::string grid_id;
};

/// Analytic Bergman mass outside |z| <= R: sum_j |c_j|^2 (1 - R^{2j+2}).
inline double bergman_outer_mass(const std::vector<Complex> &c, double R)
{
    std::vector<double> terms(c.size());
    for (std::size_t j = 0; j < c.size(); ++j)
        terms[j] = std::norm(c[j]) * -std::expm1((2.0 * j + 2.0) * std::log(R));
    return pairwise_sum(terms);
}

inline ParsevalReport parseval_defect(const FrameSpec &fr, const FunctionRep &f,
                                      const FrameQuadrature &q = {})
{
    if (fr.p != 2.0)
        throw ParameterError("parseval_defect: Parseval identity needs p = 2");
    ParsevalReport rep;
    rep.norm_sq = std::pow(f.coeffs ? f.coeff_norm() : space_norm(fr.space, f), 2);

    const int na = detail::angular_nodes(q, f, fr.p);
    std::vector<double> gaps;
    std::optional<QuadratureGrid> g;
    switch (fr.kind) {
    case FrameKind::bergman:
        g = detail::frame_region(fr, ExhaustionKind::euclidean_radius, q.r_max, true, q.n_radial,
                                 na, q, gaps);
        if (f.coeffs) {
            rep.remainder = bergman_outer_mass(*f.coeffs, q.r_max);
            rep.remainder_known = true;
        }
        break;
    case FrameKind::fock:
        g = detail::frame_region(fr, ExhaustionKind::euclidean_radius, q.fock_radius, true,
                                 q.n_radial, na, q, gaps);
        break;
    case FrameKind::paley_wiener: {
        const double L = q.pw_window > 0.0 ? q.pw_window : 256.0 / (2.0 * fr.space.band);
        g = detail::frame_region(fr, ExhaustionKind::euclidean_radius, L, true, q.n_radial, na,
                                 q, gaps);
        break;
    }
    case FrameKind::hardy_boundary:
        g = detail::frame_region(fr, ExhaustionKind::euclidean_radius, 1.0, true, q.n_radial,
                                 std::max(na, 256), q, gaps);
        rep.remainder_known = true;
        break;
    }
    rep.integral = detail::coeff_power_mass(fr, f, *g, gaps);
    rep.grid_id = g->id();
    rep.defect = std::abs(rep.integral + rep.remainder - rep.norm_sq);
    return rep;
}

/// <T_F f - f, f> with T_F f = int_F <f, k_x> k_x dmu assembled in the
/// reference basis by quadrature over F. F of size R; the whole Bergman disk
/// is represented by the radius r_max.
inline Complex mazur_form_at(const FrameSpec &fr, const FunctionRep &f, double R,
                             ExhaustionKind kind = ExhaustionKind::euclidean_radius,
                             const FrameQuadrature &q = {})
{
    if (fr.p != 2.0)
        throw ParameterError("mazur_form: the quadratic form lives in the Hilbert case p = 2");
    if (!f.coeffs)
        throw ParameterError("mazur_form: needs a coefficient representation");
    if (fr.kind == FrameKind::bergman && kind == ExhaustionKind::hyperbolic_radius)
        kind = ExhaustionKind::euclidean_radius;
    const auto &c = *f.coeffs;
    const std::size_t m = c.size();
    const int na = detail::angular_nodes(q, f, fr.p);
    std::vector<double> gaps;
    const auto g = detail::frame_region(fr, kind, R, true, q.n_radial, na, q, gaps);
    const auto nodes = g->nodes();
    const auto weights = g->weights();

    // Per node: the coefficient of f and of every basis vector e_i.
    std::vector<std::vector<Complex>> rows(g->size());
    parallel_for(g->size(), [&](std::size_t k) {
        const double gap = gaps.empty() ? 1.0 - std::norm(nodes[k]) : gaps[k];
        auto &row = rows[k];
        row.resize(m + 1);
        row[0] = detail::coeff_with_gap(fr, f, nodes[k], gap);
        for (std::size_t i = 0; i < m; ++i)
            row[i + 1] = detail::coeff_with_gap(fr, FunctionRep::basis(static_cast<int>(i)),
                                                nodes[k], gap);
    });
    std::vector<Complex> tf(m);
    std::vector<Complex> terms(g->size());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < g->size(); ++k)
            terms[k] = weights[k] * rows[k][0] * std::conj(rows[k][i + 1]);
        tf[i] = pairwise_sum(terms);
    }
    std::vector<Complex> pair(m);
    std::vector<double> norm(m);
    for (std::size_t i = 0; i < m; ++i) {
        pair[i] = tf[i] * std::conj(c[i]);
        norm[i] = std::norm(c[i]);
    }
    return pairwise_sum(pair) - pairwise_sum(norm);
}

inline Complex mazur_form(const FrameSpec &fr, const FunctionRep &f, const Exhaustion &ex,
                          int level, const FrameQuadrature &q = {})
{
    return mazur_form_at(fr, f, ex.level(level), ex.kind, q);
}

//----------------------------------------------------------------------------
// Profiles and verdicts
//----------------------------------------------------------------------------

struct TailProfile
{
    std::vector<double> levels;        ///< R_n
    std::vector<double> values;        ///< q_n = max over the family
    std::vector<std::size_t> argmax;   ///< family member attaining q_n
    std::size_t family_size = 0;
    std::vector<std::string> grid_ids; ///< grid used at each level (for the argmax member)
};

inline TailProfile family_tail_profile(const FrameSpec &fr, const std::vector<FunctionRep> &family,
                                       const Exhaustion &ex, int depth,
                                       const FrameQuadrature &q = {})
{
    if (family.empty())
        throw ParameterError("family_tail_profile: empty family");
    if (depth < 1 || depth > ex.depth())
        throw ParameterError("family_tail_profile: depth must be within 1.." +
                             std::to_string(ex.depth()));
    TailProfile prof;
    prof.family_size = family.size();
    for (int n = 1; n <= depth; ++n) {
        const double R = ex.level(n);
        double best = -1.0;
        std::size_t arg = 0;
        for (std::size_t k = 0; k < family.size(); ++k) {
            const double t = tail_mass_beyond(fr, family[k], R, ex.kind, q);
            if (t > best) {
                best = t;
                arg = k;
            }
        }
        prof.levels.push_back(R);
        prof.values.push_back(best);
        prof.argmax.push_back(arg);
        prof.grid_ids.push_back(tail_grid_id(fr, family[arg], R, ex.kind, q));
    }
    return prof;
}

enum class TailVerdict
{
    precompact_evidence,
    not_decayed,
};

inline const char *to_string(TailVerdict v)
{
    return v == TailVerdict::precompact_evidence ? "precompact_evidence" : "not_decayed";
}

struct CompactnessVerdict
{
    TailVerdict verdict = TailVerdict::not_decayed;
    int level_reached = 0; ///< first level (1-based) with q_n <= eps, 0 if none
};

inline CompactnessVerdict compactness_verdict(const std::vector<double> &values, double eps)
{
    if (values.empty())
        throw ParameterError("compactness_verdict: empty profile");
    if (!(eps >= 0.0))
        throw ParameterError("compactness_verdict: eps must be >= 0");
    for (std::size_t n = 0; n < values.size(); ++n)
        if (values[n] <= eps && eps > 0.0)
            return {TailVerdict::precompact_evidence, static_cast<int>(n) + 1};
    return {};
}

inline CompactnessVerdict compactness_verdict(const TailProfile &p, double eps)
{
    return compactness_verdict(p.values, eps);
}

//----------------------------------------------------------------------------
// Localization hypotheses on the index space
//----------------------------------------------------------------------------

struct LocalizationWeightSpec
{
    std::function<double(Complex)> weight; ///< empty means w = 1
    std::vector<Complex> centers;
    std::vector<double> radii;
};

struct LocalizationResolution
{
    int n_radial = 64;
    int n_angular = 128;
    double window = 8.0; ///< integrals run over |x - y| <= window
};

struct ExhaustionOverlap
{
    int level = 0;
    double distance = 0.0; ///< |y - y0|
    double measure = 0.0;  ///< mu(F_n intersect B(y, R))
};

struct LocalizationReport
{
    double sup_integral = 0.0;       ///< sup_y w(y)^{-1} int |<k_x,k_y>| w(x) dmu(x)
    std::vector<double> radii;
    std::vector<double> tail_sup;    ///< same over X \ B(y, R), per radius
    std::vector<double> pair_decay;  ///< max |<k_x,k_y>| over sampled pairs with d >= R
    std::vector<ExhaustionOverlap> exhaustion;
    Complex y0 = 0.0;                ///< base point of the exhaustion check
    std::size_t centers = 0;
    std::string grid_id;
};

namespace detail {

/// Area of the intersection of disks of radii a, b with centres d apart.
inline double lens_area(double a, double b, double d)
{
    if (d >= a + b)
        return 0.0;
    if (d <= std::abs(a - b)) {
        const double r = std::min(a, b);
        return pi * r * r;
    }
    const double alpha = std::acos(std::clamp((d * d + a * a - b * b) / (2 * d * a), -1.0, 1.0));
    const double beta = std::acos(std::clamp((d * d + b * b - a * a) / (2 * d * b), -1.0, 1.0));
    return a * a * (alpha - std::sin(2 * alpha) / 2) + b * b * (beta - std::sin(2 * beta) / 2);
}

} // namespace detail

/// Numerical values of the three kernel conditions for the Fock frame
/// (weighted kernel integrability, vanishing weighted tails, kernel decay),
/// plus mu(F_n intersect B(y, R)) for y moving away from y0 = 0.
inline LocalizationReport frame_localization_check(const FrameSpec &fr,
                                                   const LocalizationWeightSpec &spec,
                                                   const Exhaustion &ex = Exhaustion::plane(4),
                                                   const LocalizationResolution &res = {})
{
    if (fr.kind != FrameKind::fock)
        throw ParameterError("frame_localization_check: implemented for the Fock frame");
    if (spec.centers.empty() || spec.radii.empty())
        throw ParameterError("frame_localization_check: need centers and radii");
    for (double R : spec.radii)
        if (!(R > 0.0) || !(R < res.window))
            throw ParameterError("frame_localization_check: radii must lie in (0, window)");
    auto w = [&](Complex x) { return spec.weight ? spec.weight(x) : 1.0; };
    const double factor = 2.0 * fr.space.fock_c / pi;

    LocalizationReport rep;
    rep.radii = spec.radii;
    rep.centers = spec.centers.size();
    rep.tail_sup.assign(spec.radii.size(), 0.0);
    rep.pair_decay.assign(spec.radii.size(), 0.0);

    const auto disk = build_disk_grid(res.n_radial, res.n_angular, res.window, Measure::lebesgue);
    rep.grid_id = "fock-local:" + disk.id();
    for (Complex y : spec.centers) {
        const double wy = w(y);
        if (!(wy > 0.0))
            throw ParameterError("frame_localization_check: weight must be positive");
        const double full = integrate_real(disk, [&](Complex u) {
            const Complex x = y + u;
            return std::abs(kernel_pairing(fr, x, y)) * w(x) * factor;
        });
        rep.sup_integral = std::max(rep.sup_integral, full / wy);
        for (std::size_t k = 0; k < spec.radii.size(); ++k) {
            const double R = spec.radii[k];
            const auto ann =
                build_annulus_grid(res.n_radial, res.n_angular, R, res.window, Measure::lebesgue);
            const double tail = integrate_real(ann, [&](Complex u) {
                const Complex x = y + u;
                return std::abs(kernel_pairing(fr, x, y)) * w(x) * factor;
            });
            rep.tail_sup[k] = std::max(rep.tail_sup[k], tail / wy);
            double decay = 0.0;
            for (Complex u : ann.nodes())
                decay = std::max(decay, std::abs(kernel_pairing(fr, y + u, y)));
            rep.pair_decay[k] = std::max(rep.pair_decay[k], decay);
        }
    }

    const double R = spec.radii.front();
    for (int n = 1; n <= ex.depth(); ++n) {
        const double Rn = ex.level(n);
        for (double d : {Rn, Rn + 0.5 * R, Rn + R, Rn + 2.0 * R}) {
            double area = 0.0;
            if (ex.kind == ExhaustionKind::euclidean_radius)
                area = detail::lens_area(Rn, R, d);
            else
                throw ParameterError("frame_localization_check: overlap uses disk exhaustions");
            rep.exhaustion.push_back({n, d, factor * area});
        }
    }
    return rep;
}

//----------------------------------------------------------------------------
// Umbrella capacity
//----------------------------------------------------------------------------

struct UmbrellaOptions
{
    int cells_radial = 4;   ///< Gauss-Legendre cells per level ring
    int cells_angular = 16; ///< angular cells per ring
    FrameQuadrature quadrature{};
};

struct UmbrellaCapacity
{
    std::uint64_t bound = 1;   ///< saturates at 2^64 - 1
    double log10_bound = 0.0;
    bool saturated = false;
    int level = 0;             ///< n*: first level whose umbrella tail is < (delta/4)^2
    double tail = 0.0;         ///< umbrella tail mass at n*
    double umbrella_mass = 0.0;///< int U^2 dmu over the sampled domain
    std::size_t cells = 0;
    double cube_side = 0.0;
};

namespace detail {

/// Coarse cells of F_n: F_1 and the rings F_k \ F_{k-1} for k <= n, each
/// split into Gauss-Legendre cells. Weights integrate mu.
inline QuadratureGrid umbrella_cells(const FrameSpec &fr, const Exhaustion &ex, int n,
                                     const UmbrellaOptions &o)
{
    std::vector<QuadratureGrid> parts;
    double inner = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double outer = ex.level(k);
        switch (fr.kind) {
        case FrameKind::bergman: {
            std::vector<double> gaps;
            parts.push_back(bergman_region(inner, outer, o.cells_radial, o.cells_angular, gaps));
            break;
        }
        case FrameKind::fock:
            if (ex.kind != ExhaustionKind::euclidean_radius)
                throw ParameterError("umbrella_capacity: Fock cells use disk exhaustions");
            parts.push_back(scaled_grid(
                build_annulus_grid(o.cells_radial, o.cells_angular, inner, outer, Measure::lebesgue),
                2.0 * fr.space.fock_c / pi, "fock:"));
            break;
        case FrameKind::paley_wiener: {
            const double a = fr.space.band;
            const GaussRule g = gauss_legendre(o.cells_radial, inner, outer);
            std::vector<Complex> nodes;
            std::vector<double> weights;
            for (int i = 0; i < o.cells_radial; ++i)
                for (double sgn : {-1.0, 1.0}) {
                    nodes.emplace_back(sgn * g.nodes[i], 0.0);
                    weights.push_back(2.0 * a * g.weights[i]);
                }
            parts.emplace_back(std::move(nodes), std::move(weights),
                               DomainTag{DomainKind::interval, -outer, outer}, Measure::lebesgue,
                               "pw-cells");
            break;
        }
        case FrameKind::hardy_boundary:
            throw ParameterError("umbrella_capacity: not available for the boundary frame");
        }
        inner = outer;
    }
    return concat(parts, std::string(to_string(fr.kind)) + "-cells[" + std::to_string(n) + "x" +
                             std::to_string(o.cells_radial) + "x" +
                             std::to_string(o.cells_angular) + "]");
}

/// int_{X \ F} U^2 dmu on the same regions the tails use.
inline double umbrella_tail(const FrameSpec &fr, const std::function<double(Complex)> &U,
                            double R, ExhaustionKind kind, const FrameQuadrature &q)
{
    if (fr.kind == FrameKind::paley_wiener) {
        // Integrate the two half-lines through x = R / s, s in (0, 1].
        const GaussRule g = gauss_legendre(q.n_radial * 4, 0.0, 1.0);
        std::vector<double> terms;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const double s = g.nodes[i];
            const double x = R / s;
            const double jac = R / (s * s);
            for (double sgn : {-1.0, 1.0}) {
                const double u = U(Complex(sgn * x, 0.0));
                terms.push_back(u * u * jac * g.weights[i] * 2.0 * fr.space.band);
            }
        }
        return pairwise_sum(terms);
    }
    std::vector<double> gaps;
    if (fr.kind == FrameKind::bergman && kind == ExhaustionKind::hyperbolic_radius)
        kind = ExhaustionKind::euclidean_radius;
    const auto g = frame_region(fr, kind, R, false, q.n_radial, 64, q, gaps);
    if (!g)
        return 0.0;
    return integrate_real(*g, [&](Complex x) {
        const double u = U(x);
        return u * u;
    });
}

} // namespace detail

/// Upper bound on the size of any delta-separated family whose frame
/// coefficients are dominated pointwise by the umbrella U. The dominated
/// coefficient body over the cells of F_{n*} is a product of disks of radii
/// U(x_i) sqrt(mu_i); it is covered by cubes of l2 diameter eps_net, and two
/// members in one cube would be closer than delta.
inline UmbrellaCapacity umbrella_capacity(const FrameSpec &fr,
                                          const std::function<double(Complex)> &umbrella,
                                          double delta, const Exhaustion &ex, double eps_net,
                                          const UmbrellaOptions &o = {})
{
    if (!(delta > 0.0))
        throw ParameterError("umbrella_capacity: delta must be positive");
    if (!(eps_net > 0.0) || !(eps_net < delta / 2.0))
        throw ParameterError("umbrella_capacity: need 0 < eps_net < delta / 2");
    if (o.cells_radial < 1 || o.cells_angular < 4)
        throw ParameterError("umbrella_capacity: cell counts too small");

    UmbrellaCapacity out;
    const double threshold = (delta / 4.0) * (delta / 4.0);
    int level = 0;
    double tail = 0.0;
    for (int n = 1; n <= ex.depth(); ++n) {
        tail = detail::umbrella_tail(fr, umbrella, ex.level(n), ex.kind, o.quadrature);
        if (!std::isfinite(tail))
            throw NumericError("umbrella_capacity: umbrella tail is not finite");
        if (tail < threshold) {
            level = n;
            break;
        }
    }
    if (level == 0)
        throw InconclusiveError("umbrella_capacity: umbrella tail stays above (delta/4)^2 "
                                "through the whole exhaustion");

    const auto cells = detail::umbrella_cells(fr, ex, level, o);
    const std::size_t m = cells.size();
    const double side = eps_net / std::sqrt(2.0 * static_cast<double>(m));
    double log10_bound = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double u = umbrella(cells.nodes()[i]);
        if (!(u >= 0.0) || !std::isfinite(u))
            throw NumericError("umbrella_capacity: umbrella must be finite and >= 0",
                               cells.nodes()[i]);
        const double rho = u * std::sqrt(cells.weights()[i]);
        mass += rho * rho;
        const double per_axis = std::max(1.0, std::ceil(2.0 * rho / side));
        log10_bound += 2.0 * std::log10(per_axis);
    }
    out.level = level;
    out.tail = tail;
    out.umbrella_mass = mass + tail;
    out.cells = m;
    out.cube_side = side;
    out.log10_bound = log10_bound;
    if (log10_bound >= 19.0) {
        // Exact product only when it provably fits.
        long double prod = 1.0L;
        for (std::size_t i = 0; i < m && prod < 1.9e19L; ++i) {
            const double rho = umbrella(cells.nodes()[i]) * std::sqrt(cells.weights()[i]);
            const long double k = std::max(1.0, std::ceil(2.0 * rho / side));
            prod *= k * k;
        }
        if (prod >= 1.8446744073709551615e19L) {
            out.bound = std::numeric_limits<std::uint64_t>::max();
            out.saturated = true;
            return out;
        }
        out.bound = static_cast<std::uint64_t>(prod);
        return out;
    }
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < m; ++i) {
        const double rho = umbrella(cells.nodes()[i]) * std::sqrt(cells.weights()[i]);
        const auto k = static_cast<std::uint64_t>(std::max(1.0, std::ceil(2.0 * rho / side)));
        prod *= k * k;
    }
    out.bound = prod;
    return out;
}

} // namespace kolmo
