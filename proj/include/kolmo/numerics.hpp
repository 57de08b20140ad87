#pragma once

// Quadrature grids, deterministic summation, dense singular values and the
// centred discrete Fourier transform shared by every other module.

#include <kolmo/errors.hpp>
#include <kolmo/parallel.hpp>

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace kolmo {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

//----------------------------------------------------------------------------
// Summation
//----------------------------------------------------------------------------

/// Pairwise (tree) summation. The association order depends only on the
/// length of the input, so results are bit-stable.
template <typename T>
T pairwise_sum(std::span<const T> values)
{
    const std::size_t n = values.size();
    if (n == 0)
        return T{};
    if (n <= 16) {
        T acc = values[0];
        for (std::size_t i = 1; i < n; ++i)
            acc += values[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T> &values)
{
    return pairwise_sum(std::span<const T>(values));
}

//----------------------------------------------------------------------------
// Gauss-Legendre
//----------------------------------------------------------------------------

struct GaussRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b]; nodes ascending.
inline GaussRule gauss_legendre(int n, double a, double b)
{
    if (n < 1)
        throw ParameterError("gauss_legendre: need at least one node");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::abs(step) <= 1e-16)
                break;
        }
        // Recompute the derivative at the converged root.
        double p1 = 1.0;
        double p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        dp = n * (z * p1 - p2) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

//----------------------------------------------------------------------------
// Grids
//----------------------------------------------------------------------------

/// Reference measure integrated by a grid's weights.
enum class Measure
{
    normalized_area, ///< dv = dA / pi on planar sets
    lebesgue,        ///< dA on planar sets, dx on intervals
    arclength,       ///< normalized ds on the unit circle
    hyperbolic,      ///< dlambda = dv / (1 - |z|^2)^2 on the disk
};

inline const char *to_string(Measure m)
{
    switch (m) {
    case Measure::normalized_area: return "v";
    case Measure::lebesgue: return "lebesgue";
    case Measure::arclength: return "s";
    case Measure::hyperbolic: return "lambda";
    }
    return "?";
}

enum class DomainKind
{
    disk,
    annulus,
    interval,
    plane_box,
    circle,
};

struct DomainTag
{
    DomainKind kind = DomainKind::disk;
    double a = 0.0; ///< radius, inner radius, left end or half-width
    double b = 0.0; ///< outer radius or right end
};

/// Radial node placement for disk and annulus grids.
enum class RadialRule
{
    uniform,         ///< Gauss-Legendre in r
    boundary_graded, ///< Gauss-Legendre in s with r1^2 - r^2 = (r1^2 - r0^2) s^k
};

/// Polar tensor structure of disk/annulus grids. Node index is
/// ring * n_angular + k with angle 2 pi k / n_angular.
struct TensorLayout
{
    std::vector<double> radii;
    std::vector<double> one_minus_r2; ///< 1 - r^2, computed without cancellation
    std::vector<double> ring_weights; ///< weight of a whole ring (sum over angles)
    int n_angular = 0;
};

class QuadratureGrid
{
public:
    QuadratureGrid() = default;

    QuadratureGrid(std::vector<Complex> nodes, std::vector<double> weights, DomainTag domain,
                   Measure measure, std::string id,
                   std::optional<TensorLayout> layout = std::nullopt)
        : nodes_(std::move(nodes)), weights_(std::move(weights)), domain_(domain),
          measure_(measure), id_(std::move(id)), layout_(std::move(layout))
    {
        if (nodes_.size() != weights_.size())
            throw ParameterError("QuadratureGrid: node and weight counts differ");
        for (double w : weights_)
            if (!(w > 0.0) || !std::isfinite(w))
                throw NumericError("QuadratureGrid: non-positive weight in " + id_);
    }

    std::span<const Complex> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }
    const DomainTag &domain() const { return domain_; }
    Measure measure() const { return measure_; }
    const std::string &id() const { return id_; }
    const std::optional<TensorLayout> &layout() const { return layout_; }

    double total_weight() const { return pairwise_sum(weights_); }

private:
    std::vector<Complex> nodes_;
    std::vector<double> weights_;
    DomainTag domain_{};
    Measure measure_ = Measure::normalized_area;
    std::string id_;
    std::optional<TensorLayout> layout_;
};

namespace detail {

inline std::string fmt_num(double x)
{
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

} // namespace detail

/// Polar tensor grid on the annulus r0 <= |z| <= r1 (r0 = 0 gives a disk).
/// The graded rule clusters nodes at r1 with grading power k (default 4).
inline QuadratureGrid build_annulus_grid(int n_radial, int n_angular, double r0, double r1,
                                         Measure measure,
                                         RadialRule rule = RadialRule::uniform, int grading = 4)
{
    if (grading < 1)
        throw ParameterError("annulus grid: grading power must be >= 1");
    if (n_radial < 2 || n_angular < 4)
        throw ParameterError("annulus grid: need n_radial >= 2 and n_angular >= 4");
    if (!(r0 >= 0.0) || !(r1 > r0))
        throw ParameterError("annulus grid: need 0 <= r0 < r1");
    if (measure == Measure::arclength)
        throw ParameterError("annulus grid: arclength measure lives on circle grids");
    if (measure == Measure::normalized_area || measure == Measure::hyperbolic) {
        if (r1 > 1.0)
            throw ParameterError("annulus grid: radius must not exceed 1 for disk measures");
    }
    if (measure == Measure::hyperbolic && r1 >= 1.0)
        throw DomainError("annulus grid: hyperbolic measure diverges at radius 1");

    TensorLayout layout;
    layout.n_angular = n_angular;
    layout.radii.resize(n_radial);
    layout.one_minus_r2.resize(n_radial);
    std::vector<double> ring_v(n_radial); // normalized-area mass of each ring

    if (rule == RadialRule::uniform) {
        const GaussRule g = gauss_legendre(n_radial, r0, r1);
        for (int i = 0; i < n_radial; ++i) {
            const double r = g.nodes[i];
            layout.radii[i] = r;
            layout.one_minus_r2[i] = (1.0 - r) * (1.0 + r);
            ring_v[i] = 2.0 * r * g.weights[i];
        }
    } else {
        const double span2 = r1 * r1 - r0 * r0;
        const GaussRule g = gauss_legendre(n_radial, 0.0, 1.0);
        for (int i = 0; i < n_radial; ++i) {
            // Largest s first so radii come out ascending.
            const double s = g.nodes[n_radial - 1 - i];
            const double ws = g.weights[n_radial - 1 - i];
            const double sk1 = std::pow(s, grading - 1);
            const double gap = span2 * sk1 * s; // r1^2 - r^2
            const double r2 = r1 * r1 - gap;
            layout.radii[i] = std::sqrt(std::max(r2, 0.0));
            layout.one_minus_r2[i] = (1.0 - r1 * r1) + gap;
            ring_v[i] = grading * span2 * sk1 * ws;
        }
    }

    std::vector<Complex> nodes;
    std::vector<double> weights;
    nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
    weights.reserve(nodes.capacity());
    layout.ring_weights.resize(n_radial);
    for (int i = 0; i < n_radial; ++i) {
        double ring = ring_v[i];
        switch (measure) {
        case Measure::normalized_area: break;
        case Measure::lebesgue: ring *= pi; break;
        case Measure::hyperbolic:
            ring /= layout.one_minus_r2[i] * layout.one_minus_r2[i];
            break;
        case Measure::arclength: break;
        }
        layout.ring_weights[i] = ring;
        const double w = ring / n_angular;
        for (int k = 0; k < n_angular; ++k) {
            const double theta = 2.0 * pi * k / n_angular;
            nodes.push_back(std::polar(layout.radii[i], theta));
            weights.push_back(w);
        }
    }

    DomainTag tag{r0 == 0.0 ? DomainKind::disk : DomainKind::annulus, r0 == 0.0 ? r1 : r0,
                  r1};
    std::string id = std::string(r0 == 0.0 ? "disk" : "annulus") + "[" +
                     (r0 == 0.0 ? "" : detail::fmt_num(r0) + ",") + detail::fmt_num(r1) +
                     ";" + to_string(measure) + ";" +
                     (rule == RadialRule::uniform ? "gl" : "graded" + std::to_string(grading)) + ";" +
                     std::to_string(n_radial) + "x" + std::to_string(n_angular) + "]";
    return QuadratureGrid(std::move(nodes), std::move(weights), tag, measure, std::move(id),
                          std::move(layout));
}

/// Tensor grid on the disk |z| <= radius: Gauss-Legendre radial nodes times
/// equispaced angles, with the Jacobian of `measure` folded into the weights.
inline QuadratureGrid build_disk_grid(int n_radial, int n_angular, double radius,
                                      Measure measure, RadialRule rule = RadialRule::uniform)
{
    if (!(radius > 0.0))
        throw ParameterError("disk grid: radius must be positive");
    if (measure == Measure::hyperbolic && radius >= 1.0)
        throw DomainError("disk grid: hyperbolic measure diverges at radius 1");
    return build_annulus_grid(n_radial, n_angular, 0.0, radius, measure, rule);
}

/// Default planar grid, 256 radial x 512 angular on the closed unit disk
/// with measure v. Built once and shared.
inline const QuadratureGrid &default_disk_grid()
{
    static const QuadratureGrid grid = build_disk_grid(256, 512, 1.0, Measure::normalized_area);
    return grid;
}

/// n equispaced nodes on the unit circle, each of weight 1/n.
inline QuadratureGrid build_circle_grid(int n)
{
    if (n < 4)
        throw ParameterError("circle grid: need at least 4 nodes");
    std::vector<Complex> nodes(n);
    std::vector<double> weights(n, 1.0 / n);
    for (int k = 0; k < n; ++k)
        nodes[k] = std::polar(1.0, 2.0 * pi * k / n);
    return QuadratureGrid(std::move(nodes), std::move(weights),
                          DomainTag{DomainKind::circle, 1.0, 1.0}, Measure::arclength,
                          "circle[" + std::to_string(n) + "]");
}

/// Composite Gauss-Legendre on [a, b] with `panels` panels of `order` nodes.
/// Nodes are stored as real parts of complex numbers.
inline QuadratureGrid build_interval_grid(int panels, int order, double a, double b)
{
    if (panels < 1 || order < 2)
        throw ParameterError("interval grid: need panels >= 1 and order >= 2");
    if (!(b > a))
        throw ParameterError("interval grid: need a < b");
    std::vector<Complex> nodes;
    std::vector<double> weights;
    nodes.reserve(static_cast<std::size_t>(panels) * order);
    weights.reserve(nodes.capacity());
    const double width = (b - a) / panels;
    const GaussRule g = gauss_legendre(order, 0.0, 1.0);
    for (int p = 0; p < panels; ++p) {
        const double left = a + p * width;
        for (int i = 0; i < order; ++i) {
            nodes.emplace_back(left + width * g.nodes[i], 0.0);
            weights.push_back(width * g.weights[i]);
        }
    }
    return QuadratureGrid(std::move(nodes), std::move(weights),
                          DomainTag{DomainKind::interval, a, b}, Measure::lebesgue,
                          "interval[" + detail::fmt_num(a) + "," + detail::fmt_num(b) + ";" +
                              std::to_string(panels) + "x" + std::to_string(order) + "]");
}

/// Tensor Gauss-Legendre grid on the square [-half_width, half_width]^2.
inline QuadratureGrid build_box_grid(int n_per_side, double half_width)
{
    if (n_per_side < 2 || !(half_width > 0.0))
        throw ParameterError("box grid: need n >= 2 and a positive half-width");
    const GaussRule g = gauss_legendre(n_per_side, -half_width, half_width);
    std::vector<Complex> nodes;
    std::vector<double> weights;
    for (int i = 0; i < n_per_side; ++i)
        for (int j = 0; j < n_per_side; ++j) {
            nodes.emplace_back(g.nodes[i], g.nodes[j]);
            weights.push_back(g.weights[i] * g.weights[j]);
        }
    return QuadratureGrid(std::move(nodes), std::move(weights),
                          DomainTag{DomainKind::plane_box, half_width, half_width},
                          Measure::lebesgue,
                          "box[" + detail::fmt_num(half_width) + ";" +
                              std::to_string(n_per_side) + "^2]");
}

/// Sum of weight_i * field(node_i). Fields are evaluated in parallel and
/// reduced pairwise. A non-finite value raises NumericError naming the node.
template <typename Field>
Complex integrate(const QuadratureGrid &grid, Field &&field)
{
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    std::vector<Complex> terms(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        terms[i] = Complex(field(nodes[i])) * weights[i];
    });
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (!std::isfinite(terms[i].real()) || !std::isfinite(terms[i].imag()))
            throw NumericError("integrate: non-finite field value on " + grid.id(), nodes[i]);
    return pairwise_sum(terms);
}

/// Real-valued variant of integrate().
template <typename Field>
double integrate_real(const QuadratureGrid &grid, Field &&field)
{
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    std::vector<double> terms(nodes.size());
    parallel_for(nodes.size(),
                 [&](std::size_t i) { terms[i] = double(field(nodes[i])) * weights[i]; });
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (!std::isfinite(terms[i]))
            throw NumericError("integrate: non-finite field value on " + grid.id(), nodes[i]);
    return pairwise_sum(terms);
}

//----------------------------------------------------------------------------
// Dense matrices
//----------------------------------------------------------------------------

class DenseComplexMatrix
{
public:
    DenseComplexMatrix() = default;

    DenseComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols)
    {
    }

    static DenseComplexMatrix identity(std::size_t n)
    {
        DenseComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex &operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Complex &operator()(std::size_t i, std::size_t j) const
    {
        return entries_[i * cols_ + j];
    }

    std::span<const Complex> entries() const { return entries_; }

    DenseComplexMatrix adjoint() const
    {
        DenseComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    /// y = M x
    std::vector<Complex> apply(std::span<const Complex> x) const
    {
        if (x.size() != cols_)
            throw ParameterError("DenseComplexMatrix::apply: size mismatch");
        std::vector<Complex> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < cols_; ++j)
                acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    double max_abs_diff(const DenseComplexMatrix &other) const
    {
        if (other.rows_ != rows_ || other.cols_ != cols_)
            throw ParameterError("max_abs_diff: shape mismatch");
        double m = 0.0;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            m = std::max(m, std::abs(entries_[i] - other.entries_[i]));
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

inline DenseComplexMatrix operator*(const DenseComplexMatrix &a, const DenseComplexMatrix &b)
{
    if (a.cols() != b.rows())
        throw ParameterError("matrix product: inner dimensions differ");
    DenseComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

/// Full singular spectrum, descending.
inline std::vector<double> singular_values(const DenseComplexMatrix &m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return {};
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Complex v = m(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NumericError("singular_values: non-finite entry (" + std::to_string(i) +
                                   "," + std::to_string(j) + ")");
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e);
    const auto &sv = svd.singularValues();
    std::vector<double> out(sv.data(), sv.data() + sv.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    for (double &s : out)
        s = std::max(s, 0.0);
    return out;
}

//----------------------------------------------------------------------------
// Centred DFT, e^{-2 pi i x xi} convention
//----------------------------------------------------------------------------

struct Spectrum
{
    std::vector<double> frequencies; ///< ascending, centred at 0
    std::vector<Complex> values;
    double frequency_spacing = 0.0;
};

namespace detail {

inline std::mutex &fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

/// Unnormalized FFTW transform, sign -1 (forward) or +1 (backward).
inline std::vector<Complex> fftw_transform(std::span<const Complex> in, int sign)
{
    const int n = static_cast<int>(in.size());
    std::vector<Complex> buf(in.begin(), in.end());
    std::vector<Complex> out(in.size());
    auto *ib = reinterpret_cast<fftw_complex *>(buf.data());
    auto *ob = reinterpret_cast<fftw_complex *>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, ib, ob, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

inline long centred_index(std::size_t m, std::size_t n)
{
    return static_cast<long>(m) - static_cast<long>(n / 2);
}

} // namespace detail

/// Discrete Fourier transform of samples f(origin + k*spacing),
///   F(xi_m) = spacing * sum_k f_k exp(-2 pi i x_k xi_m),
/// at centred frequencies xi_m = (m - N/2) / (N * spacing). Plancherel holds
/// exactly: spacing * sum |f|^2 = frequency_spacing * sum |F|^2.
/// The default origin centres the window on 0.
inline Spectrum dft(std::span<const Complex> samples, double spacing,
                    std::optional<double> origin = std::nullopt)
{
    const std::size_t n = samples.size();
    if (n < 2)
        throw ParameterError("dft: need at least 2 samples");
    if (!(spacing > 0.0))
        throw ParameterError("dft: spacing must be positive");
    const double x0 = origin.value_or(-static_cast<double>(n / 2) * spacing);
    const auto raw = detail::fftw_transform(samples, FFTW_FORWARD);

    Spectrum s;
    s.frequency_spacing = 1.0 / (static_cast<double>(n) * spacing);
    s.frequencies.resize(n);
    s.values.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        const long shifted = detail::centred_index(m, n);
        const std::size_t j = static_cast<std::size_t>((shifted % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n));
        const double xi = shifted * s.frequency_spacing;
        s.frequencies[m] = xi;
        s.values[m] = spacing * std::polar(1.0, -2.0 * pi * x0 * xi) * raw[j];
    }
    return s;
}

/// Inverse of dft() for the same spacing and origin.
inline std::vector<Complex> inverse_dft(const Spectrum &spectrum, double spacing,
                                        std::optional<double> origin = std::nullopt)
{
    const std::size_t n = spectrum.values.size();
    if (n < 2)
        throw ParameterError("inverse_dft: need at least 2 samples");
    if (!(spacing > 0.0))
        throw ParameterError("inverse_dft: spacing must be positive");
    const double x0 = origin.value_or(-static_cast<double>(n / 2) * spacing);
    const double dxi = 1.0 / (static_cast<double>(n) * spacing);
    std::vector<Complex> g(n);
    for (std::size_t m = 0; m < n; ++m) {
        const long shifted = detail::centred_index(m, n);
        const std::size_t j = static_cast<std::size_t>((shifted % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n));
        g[j] = spectrum.values[m] * std::polar(1.0, 2.0 * pi * x0 * shifted * dxi);
    }
    auto out = detail::fftw_transform(g, FFTW_BACKWARD);
    for (auto &v : out)
        v *= dxi;
    return out;
}

} // namespace kolmo
