#pragma once

// L^2(R) criteria on uniformly sampled signals: spatial and Fourier tails,
// the translation modulus, short-time Fourier transform fields and tails,
// and Paley-Wiener tails behind a band check.

#include <kolmo/errors.hpp>
#include <kolmo/numerics.hpp>
#include <kolmo/parallel.hpp>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace kolmo {

constexpr int default_signal_samples = 4096;
constexpr double default_signal_half_width = 20.0;

/// f(origin + k spacing) for k = 0..n-1.
struct SampledSignal
{
    std::vector<Complex> samples;
    double spacing = 1.0;
    double origin = 0.0;

    SampledSignal() = default;

    SampledSignal(std::vector<Complex> s, double h, double x0)
        : samples(std::move(s)), spacing(h), origin(x0)
    {
        validate();
    }

    void validate() const
    {
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw ParameterError("SampledSignal: spacing must be positive");
        if (!std::isfinite(origin))
            throw ParameterError("SampledSignal: origin must be finite");
        if (samples.size() < 2)
            throw ParameterError("SampledSignal: need at least 2 samples");
        for (std::size_t k = 0; k < samples.size(); ++k)
            if (!std::isfinite(samples[k].real()) || !std::isfinite(samples[k].imag()))
                throw NumericError("SampledSignal: non-finite sample at x = " +
                                   detail::fmt_num(x(k)));
    }

    double x(std::size_t k) const { return origin + static_cast<double>(k) * spacing; }
    std::size_t size() const { return samples.size(); }
    double x_min() const { return origin; }
    double x_max() const { return x(samples.size() - 1); }

    /// Samples of f on [-L, L) with n points (the window ends at L - h).
    static SampledSignal from_function(const std::function<Complex(double)> &f,
                                       int n = default_signal_samples,
                                       double half_width = default_signal_half_width)
    {
        if (n < 2)
            throw ParameterError("SampledSignal: need at least 2 samples");
        if (!(half_width > 0.0))
            throw ParameterError("SampledSignal: half width must be positive");
        const double h = 2.0 * half_width / n;
        std::vector<Complex> s(n);
        for (int k = 0; k < n; ++k)
            s[k] = f(-half_width + k * h);
        return SampledSignal(std::move(s), h, -half_width);
    }

    /// Band-limited signal: the inverse DFT of spectrum(xi) restricted to
    /// |xi| <= a on the grid's frequency lattice.
    static SampledSignal band_limited(const std::function<Complex(double)> &spectrum, double a,
                                      int n = default_signal_samples,
                                      double half_width = default_signal_half_width)
    {
        if (!(a > 0.0))
            throw ParameterError("band_limited: band half-width must be positive");
        if (n < 2 || !(half_width > 0.0))
            throw ParameterError("band_limited: bad window");
        const double h = 2.0 * half_width / n;
        Spectrum sp;
        sp.frequency_spacing = 1.0 / (n * h);
        sp.frequencies.resize(n);
        sp.values.resize(n);
        for (int m = 0; m < n; ++m) {
            const double xi = (m - n / 2) * sp.frequency_spacing;
            sp.frequencies[m] = xi;
            sp.values[m] = std::abs(xi) <= a ? spectrum(xi) : Complex(0.0);
        }
        return SampledSignal(inverse_dft(sp, h, -half_width), h, -half_width);
    }
};

/// f(x) = e^{-pi x^2}
inline Complex gaussian(double x) { return std::exp(-pi * x * x); }

/// phi(x) = 2^{1/4} e^{-pi x^2}, unit L^2 norm.
inline Complex normalized_gaussian(double x) { return std::pow(2.0, 0.25) * std::exp(-pi * x * x); }

namespace detail {

inline void require_radius_in_window(double R, double reach, const char *what)
{
    if (!(R >= 0.0))
        throw ParameterError(std::string(what) + ": R must be >= 0");
    if (R > reach)
        throw WindowError(std::string(what) + ": R = " + fmt_num(R) +
                          " lies beyond the sampled window (reach " + fmt_num(reach) + ")");
}

inline double window_reach(const SampledSignal &f)
{
    return std::max(std::abs(f.x_min()), std::abs(f.x_max()));
}

} // namespace detail

/// ||f||^2 = h sum |f_k|^2
inline double l2_norm_sq(const SampledSignal &f)
{
    std::vector<double> t(f.size());
    for (std::size_t k = 0; k < f.size(); ++k)
        t[k] = std::norm(f.samples[k]);
    return f.spacing * pairwise_sum(t);
}

namespace detail {

/// 1 beyond R, 1/2 on a node within 1e-12 relative of R, 0 inside; R = 0
/// keeps everything.
inline double tail_weight(double x, double R)
{
    if (R == 0.0)
        return 1.0;
    const double ax = std::abs(x);
    if (std::abs(ax - R) <= 1e-12 * std::max(1.0, R))
        return 0.5;
    return ax > R ? 1.0 : 0.0;
}

} // namespace detail

/// h sum_{|x_k| > R} |f_k|^2, half weight on a node sitting at |x| = R.
inline double l2_tail(const SampledSignal &f, double R)
{
    detail::require_radius_in_window(R, detail::window_reach(f), "l2_tail");
    std::vector<double> t(f.size(), 0.0);
    for (std::size_t k = 0; k < f.size(); ++k)
        t[k] = detail::tail_weight(f.x(k), R) * std::norm(f.samples[k]);
    return f.spacing * pairwise_sum(t);
}

/// int |f(x - h) - f(x)|^2 dx for h a multiple of the spacing; samples
/// outside the window are zero.
inline double translation_modulus(const SampledSignal &f, double h)
{
    const double steps = h / f.spacing;
    const long m = std::lround(steps);
    if (std::abs(steps - static_cast<double>(m)) > 1e-9 * std::max(1.0, std::abs(steps)))
        throw ParameterError("translation_modulus: h = " + detail::fmt_num(h) +
                             " is not a multiple of the spacing " + detail::fmt_num(f.spacing));
    const long n = static_cast<long>(f.size());
    std::vector<double> t;
    t.reserve(n + std::abs(m));
    const long lo = std::min(0L, m);
    const long hi = std::max(n, n + m);
    for (long k = lo; k < hi; ++k) {
        const Complex fk = (k >= 0 && k < n) ? f.samples[k] : Complex(0.0);
        const long j = k - m;
        const Complex shifted = (j >= 0 && j < n) ? f.samples[j] : Complex(0.0);
        t.push_back(std::norm(shifted - fk));
    }
    return f.spacing * pairwise_sum(t);
}

inline Spectrum spectrum(const SampledSignal &f)
{
    return dft(f.samples, f.spacing, f.origin);
}

/// int_{|xi| > R} |f^(xi)|^2 dxi on the DFT frequency lattice, boundary
/// nodes at half weight.
inline double fourier_tail(const SampledSignal &f, double R)
{
    const auto sp = spectrum(f);
    const double reach = std::max(std::abs(sp.frequencies.front()), std::abs(sp.frequencies.back()));
    detail::require_radius_in_window(R, reach, "fourier_tail");
    std::vector<double> t(sp.values.size(), 0.0);
    for (std::size_t m = 0; m < sp.values.size(); ++m)
        t[m] = detail::tail_weight(sp.frequencies[m], R) * std::norm(sp.values[m]);
    return sp.frequency_spacing * pairwise_sum(t);
}

/// Uniform axis lo, lo + step, ..., hi.
struct Axis
{
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;

    std::size_t size() const { return static_cast<std::size_t>(std::lround((hi - lo) / step)) + 1; }
    double at(std::size_t i) const { return lo + static_cast<double>(i) * step; }

    void validate(const char *what) const
    {
        if (!(step > 0.0) || !(hi >= lo))
            throw ParameterError(std::string(what) + ": axis needs step > 0 and hi >= lo");
        const double n = (hi - lo) / step;
        if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
            throw ParameterError(std::string(what) + ": axis length is not a multiple of its step");
    }
};

/// Window for the STFT: a function with (numerical) support in [-support, support].
struct StftWindow
{
    std::function<Complex(double)> fn;
    double support = 6.0;
    std::string label = "gaussian";
    double scale = 1.0;       ///< applied to fn so that ||phi|| = 1
    bool renormalized = false; ///< the supplied window was not unit-norm

    static StftWindow gaussian() { return {normalized_gaussian, 6.0, "gaussian", 1.0, false}; }

    Complex operator()(double x) const
    {
        return std::abs(x) > support ? Complex(0.0) : scale * fn(x);
    }
};

/// Norm of the window on a fine Gauss-Legendre rule over its support; a
/// window off unit norm by more than 1e-12 is rescaled and flagged.
inline StftWindow normalize_window(StftWindow w)
{
    if (!w.fn)
        throw ParameterError("stft: empty window");
    if (!(w.support > 0.0))
        throw ParameterError("stft: window support must be positive");
    const auto g = build_interval_grid(64, 16, -w.support, w.support);
    std::vector<double> t(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        t[i] = std::norm(w.fn(g.nodes()[i].real())) * g.weights()[i];
    const double nrm = std::sqrt(pairwise_sum(t));
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw ParameterError("stft: window has zero or non-finite norm");
    w.scale = 1.0 / nrm;
    w.renormalized = std::abs(nrm - 1.0) > 1e-12;
    if (!w.renormalized)
        w.scale = 1.0;
    return w;
}

struct StftField
{
    Axis a_axis;
    Axis b_axis;
    std::vector<Complex> values; ///< row-major, index ia * nb + ib
    bool window_renormalized = false;
    std::string grid_id;

    Complex at(std::size_t ia, std::size_t ib) const { return values[ia * b_axis.size() + ib]; }
    double cell() const { return a_axis.step * b_axis.step; }
    /// Largest R whose box [-R, R]^2 fits inside the grid.
    double reach() const
    {
        return std::min(std::max(std::abs(a_axis.lo), std::abs(a_axis.hi)),
                        std::max(std::abs(b_axis.lo), std::abs(b_axis.hi)));
    }
};

inline Axis default_a_axis() { return {-8.0, 8.0, 0.125}; }
inline Axis default_b_axis() { return {-32.0, 32.0, 0.125}; }

/// S_phi f(a, b) = int f(x) conj(phi(x - a)) e^{-2 pi i b x} dx by the
/// sample rule, restricted to the window's support around a.
inline StftField stft_field(const SampledSignal &f, StftWindow window = StftWindow::gaussian(),
                            Axis a_axis = default_a_axis(), Axis b_axis = default_b_axis())
{
    a_axis.validate("stft_field");
    b_axis.validate("stft_field");
    window = normalize_window(std::move(window));
    const std::size_t na = a_axis.size();
    const std::size_t nb = b_axis.size();
    StftField out;
    out.a_axis = a_axis;
    out.b_axis = b_axis;
    out.window_renormalized = window.renormalized;
    out.values.assign(na * nb, 0.0);
    out.grid_id = "stft[a " + detail::fmt_num(a_axis.lo) + ":" + detail::fmt_num(a_axis.step) + ":" +
                  detail::fmt_num(a_axis.hi) + "; b " + detail::fmt_num(b_axis.lo) + ":" +
                  detail::fmt_num(b_axis.step) + ":" + detail::fmt_num(b_axis.hi) + "; x h=" +
                  detail::fmt_num(f.spacing) + "]";
    const long n = static_cast<long>(f.size());
    parallel_for(na, [&](std::size_t ia) {
        const double a = a_axis.at(ia);
        long k0 = static_cast<long>(std::floor((a - window.support - f.origin) / f.spacing));
        long k1 = static_cast<long>(std::ceil((a + window.support - f.origin) / f.spacing));
        k0 = std::max(k0, 0L);
        k1 = std::min(k1, n - 1);
        if (k0 > k1)
            return;
        const std::size_t m = static_cast<std::size_t>(k1 - k0 + 1);
        std::vector<Complex> g(m), phase(m), step(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double x = f.x(static_cast<std::size_t>(k0) + i);
            g[i] = f.samples[k0 + i] * std::conj(window(x - a)) * f.spacing;
            phase[i] = std::polar(1.0, -2.0 * pi * b_axis.lo * x);
            step[i] = std::polar(1.0, -2.0 * pi * b_axis.step * x);
        }
        std::vector<double> re(m), im(m);
        for (std::size_t ib = 0; ib < nb; ++ib) {
            // Re-anchor the phase recurrence every 64 steps.
            if (ib % 64 == 0 && ib) {
                const double b = b_axis.at(ib);
                for (std::size_t i = 0; i < m; ++i)
                    phase[i] = std::polar(1.0, -2.0 * pi * b * f.x(static_cast<std::size_t>(k0) + i));
            }
            for (std::size_t i = 0; i < m; ++i) {
                const Complex v = g[i] * phase[i];
                re[i] = v.real();
                im[i] = v.imag();
                phase[i] *= step[i];
            }
            out.values[ia * nb + ib] = Complex(pairwise_sum(re), pairwise_sum(im));
        }
    });
    return out;
}

/// Grid mass of |S|^2 outside the box [-R, R]^2; nodes on the box edge count
/// half, corners three quarters.
inline double stft_tail(const StftField &field, double R)
{
    detail::require_radius_in_window(R, field.reach(), "stft_tail");
    const std::size_t nb = field.b_axis.size();
    std::vector<double> t(field.values.size(), 0.0);
    for (std::size_t ia = 0; ia < field.a_axis.size(); ++ia)
        for (std::size_t ib = 0; ib < nb; ++ib)
        {
            const double wa = detail::tail_weight(field.a_axis.at(ia), R);
            const double wb = detail::tail_weight(field.b_axis.at(ib), R);
            t[ia * nb + ib] = (1.0 - (1.0 - wa) * (1.0 - wb)) * std::norm(field.values[ia * nb + ib]);
        }
    return field.cell() * pairwise_sum(t);
}

/// Grid mass of |S|^2 over the whole (a, b) grid.
inline double stft_mass(const StftField &field)
{
    std::vector<double> t(field.values.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = std::norm(field.values[i]);
    return field.cell() * pairwise_sum(t);
}

constexpr double band_check_tolerance = 1e-8;

/// l2_tail(f, R) after checking the spectral mass strictly beyond |xi| = a is
/// at most 1e-8.
inline double pw_tail(const SampledSignal &f, double a, double R)
{
    if (!(a > 0.0))
        throw ParameterError("pw_tail: band half-width must be positive");
    const auto sp = spectrum(f);
    std::vector<double> t(sp.values.size(), 0.0);
    for (std::size_t m = 0; m < sp.values.size(); ++m)
        if (std::abs(sp.frequencies[m]) > a * (1.0 + 1e-12))
            t[m] = std::norm(sp.values[m]);
    const double leak = sp.frequency_spacing * pairwise_sum(t);
    if (leak > band_check_tolerance)
        throw PreconditionError("pw_tail: signal is not band-limited to [-" + detail::fmt_num(a) +
                                ", " + detail::fmt_num(a) + "]: spectral mass " +
                                detail::fmt_num(leak) + " beyond the band");
    return l2_tail(f, R);
}

//----------------------------------------------------------------------------
// Families
//----------------------------------------------------------------------------

struct EuclidProfileRow
{
    double R = 0.0;
    double spatial = 0.0; ///< sup over the family of l2_tail
    double fourier = 0.0; ///< sup over the family of fourier_tail
    double stft = -1.0;   ///< sup over the family of stft_tail (negative when not computed)
    std::size_t spatial_argmax = 0;
    std::size_t fourier_argmax = 0;
    std::size_t stft_argmax = 0;
};

/// Sup tails of a finite family along a list of radii.
inline std::vector<EuclidProfileRow> family_tails(const std::vector<SampledSignal> &family,
                                                  const std::vector<double> &radii, bool with_stft,
                                                  const StftWindow &window = StftWindow::gaussian())
{
    if (family.empty())
        throw ParameterError("family_tails: empty family");
    if (radii.empty())
        throw ParameterError("family_tails: empty radius list");
    std::vector<StftField> fields;
    if (with_stft)
        for (const auto &f : family)
            fields.push_back(stft_field(f, window));
    std::vector<EuclidProfileRow> rows;
    for (double R : radii) {
        EuclidProfileRow row;
        row.R = R;
        row.stft = with_stft ? 0.0 : -1.0;
        for (std::size_t k = 0; k < family.size(); ++k) {
            const double s = l2_tail(family[k], R);
            if (s > row.spatial || k == 0) {
                row.spatial = s;
                row.spatial_argmax = k;
            }
            const double fo = fourier_tail(family[k], R);
            if (fo > row.fourier || k == 0) {
                row.fourier = fo;
                row.fourier_argmax = k;
            }
            if (with_stft) {
                const double st = stft_tail(fields[k], R);
                if (st > row.stft || k == 0) {
                    row.stft = st;
                    row.stft_argmax = k;
                }
            }
        }
        rows.push_back(row);
    }
    return rows;
}

/// {phi(. - t_j)}: translates of the unit Gaussian by t_j = j / (count - 1) in [0, 1].
inline std::vector<SampledSignal> translated_gaussians(int count = 11)
{
    if (count < 1)
        throw ParameterError("translated_gaussians: count must be >= 1");
    std::vector<SampledSignal> fam;
    for (int j = 0; j < count; ++j) {
        const double t = count == 1 ? 0.0 : static_cast<double>(j) / (count - 1);
        fam.push_back(SampledSignal::from_function([t](double x) { return normalized_gaussian(x - t); }));
    }
    return fam;
}

/// {e^{2 pi i k x} phi(x)}, k = 0..kmax, phi the unit Gaussian.
inline std::vector<SampledSignal> modulated_gaussians(int kmax = 20)
{
    if (kmax < 0)
        throw ParameterError("modulated_gaussians: kmax must be >= 0");
    std::vector<SampledSignal> fam;
    for (int k = 0; k <= kmax; ++k)
        fam.push_back(SampledSignal::from_function(
            [k](double x) { return std::polar(1.0, 2.0 * pi * k * x) * normalized_gaussian(x); }));
    return fam;
}

} // namespace kolmo
