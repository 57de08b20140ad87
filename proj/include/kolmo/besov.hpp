#pragma once

// Weighted Besov-Sobolev norms on the disk: point terms of the lower
// derivatives at a base point plus the weighted integral of the top
// derivative, tail functionals near the boundary and weight checks.

#include <kolmo/errors.hpp>
#include <kolmo/frames.hpp>
#include <kolmo/numerics.hpp>
#include <kolmo/spaces.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace kolmo {

/// Weight sigma against the normalized area measure dv. Radial powers are
/// evaluated from 1 - |z|^2 supplied by the grid, so they stay accurate at
/// the rim.
struct WeightDescriptor
{
    enum class Kind
    {
        radial_power, ///< scale * (1 - |z|^2)^t
        field,        ///< user function of z
    };

    Kind kind = Kind::radial_power;
    double t = 0.0;
    double scale = 1.0;
    std::function<double(Complex)> field;

    static WeightDescriptor radial_power(double t, double scale = 1.0)
    {
        WeightDescriptor w;
        w.t = t;
        w.scale = scale;
        return w;
    }

    static WeightDescriptor from_field(std::function<double(Complex)> f)
    {
        if (!f)
            throw ParameterError("WeightDescriptor: empty field");
        WeightDescriptor w;
        w.kind = Kind::field;
        w.field = std::move(f);
        return w;
    }

    double operator()(Complex z, double gap) const
    {
        if (kind == Kind::field)
            return field(z);
        if (t == 0.0)
            return scale;
        return scale * std::pow(gap, t);
    }

    /// Polynomial in r (after the angular average) for polynomial inputs.
    bool polynomial() const { return kind == Kind::radial_power && t >= 0.0 && t == std::floor(t); }

    std::string describe() const
    {
        if (kind == Kind::field)
            return "field";
        return detail::fmt_num(scale) + "*(1-|z|^2)^" + detail::fmt_num(t);
    }
};

struct BesovSpec
{
    double p = 2.0;
    int order = 0; ///< J
    WeightDescriptor weight;
    Complex z0 = 0.0;
    int dim = 1;

    /// sigma = (1-|w|^2)^{2J-1}, p = 2: the Hardy space as a Besov-Sobolev space.
    static BesovSpec hardy(int J)
    {
        if (J < 1)
            throw ParameterError("BesovSpec::hardy: needs J >= 1");
        BesovSpec s;
        s.order = J;
        s.weight = WeightDescriptor::radial_power(2.0 * J - 1.0);
        s.validate();
        return s;
    }

    /// sigma = (1-|w|^2)^{pJ-(n+1)}: Besov/Dirichlet-type spaces.
    static BesovSpec dirichlet(double p, int J, int n = 1)
    {
        BesovSpec s;
        s.p = p;
        s.order = J;
        s.dim = n;
        s.weight = WeightDescriptor::radial_power(p * J - (n + 1.0));
        s.validate();
        return s;
    }

    /// J = 0 with sigma = 1 against normalized dv: the unweighted Bergman space A^p.
    static BesovSpec bergman(double p = 2.0)
    {
        BesovSpec s;
        s.p = p;
        s.order = 0;
        s.weight = WeightDescriptor::radial_power(0.0);
        s.validate();
        return s;
    }

    /// Radial Bergman weight (1-|w|^2)^t, J = 0.
    static BesovSpec weighted_bergman(double p, double t)
    {
        BesovSpec s;
        s.p = p;
        s.weight = WeightDescriptor::radial_power(t);
        s.validate();
        return s;
    }

    void validate() const
    {
        if (!(p >= 1.0) || !std::isfinite(p))
            throw ParameterError("BesovSpec: p must be >= 1");
        if (order < 0)
            throw ParameterError("BesovSpec: derivative order J must be >= 0");
        if (dim < 1)
            throw ParameterError("BesovSpec: dimension must be >= 1");
        if (weight.kind == WeightDescriptor::Kind::radial_power) {
            if (!(weight.t > -1.0))
                throw ParameterError("BesovSpec: weight (1-|z|^2)^t needs t > -1 to be integrable");
            if (!(weight.scale > 0.0))
                throw ParameterError("BesovSpec: weight scale must be positive");
        }
        if (!(std::norm(z0) < 1.0))
            throw DomainError("BesovSpec: base point must lie in the disk");
    }
};

struct BesovQuadrature
{
    int n_radial = 64;
    int n_angular = 0; ///< 0 chooses from the function's degree
};

/// All multi-indices alpha in N^n with |alpha| = order, lexicographically
/// descending in the first coordinate.
inline std::vector<std::vector<int>> multi_indices(int n, int order)
{
    if (n < 1 || order < 0)
        throw ParameterError("multi_indices: need n >= 1 and order >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == n - 1) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int k = left; k >= 0; --k) {
            cur[pos] = k;
            rec(pos + 1, left - k);
        }
    };
    rec(0, order);
    return out;
}

namespace detail {

/// Power coefficients of the k-th derivative of sum a_j z^j.
inline std::vector<Complex> derivative_coeffs(const std::vector<Complex> &a, int k)
{
    if (static_cast<int>(a.size()) <= k)
        return {};
    std::vector<Complex> out(a.size() - k);
    for (std::size_t j = k; j < a.size(); ++j) {
        double f = 1.0;
        for (int i = 0; i < k; ++i)
            f *= static_cast<double>(j - i);
        out[j - k] = a[j] * f;
    }
    return out;
}

inline Complex horner(const std::vector<Complex> &a, Complex z)
{
    Complex acc = 0.0;
    for (std::size_t j = a.size(); j-- > 0;)
        acc = acc * z + a[j];
    return acc;
}

/// Evaluator of the k-th derivative of f; coefficients are power-series
/// coefficients, sampled inputs must carry derivative samplers.
inline std::function<Complex(Complex)> derivative(const FunctionRep &f, int k)
{
    if (f.coeffs) {
        auto d = derivative_coeffs(*f.coeffs, k);
        return [d = std::move(d)](Complex z) { return horner(d, z); };
    }
    if (k == 0) {
        if (!f.sampler)
            throw ParameterError("besov: function has no sampler");
        return f.sampler;
    }
    if (static_cast<int>(f.derivatives.size()) < k || !f.derivatives[k - 1])
        throw ParameterError("besov: sampled function lacks its derivative of order " +
                             std::to_string(k));
    return f.derivatives[k - 1];
}

inline int angular_for(const BesovQuadrature &q, const FunctionRep &f, double p, int J)
{
    if (q.n_angular > 0)
        return q.n_angular;
    if (!f.coeffs)
        return 128;
    const int d = std::max(0, static_cast<int>(f.coeffs->size()) - 1 - J);
    if (p == 2.0)
        return std::max(16, 2 * d + 2);
    return std::max(64, 4 * d + 4);
}

/// int_{r0 < |z| < 1} |g|^p sigma dv on a polar grid; the rim is handled by
/// a graded rule unless the weight is an integer power of 1 - |z|^2.
inline double weighted_integral(const std::function<Complex(Complex)> &g, double p,
                                const WeightDescriptor &w, double r0, int n_radial,
                                int n_angular, std::string *grid_id = nullptr)
{
    const bool poly = w.polynomial();
    const auto grid = build_annulus_grid(n_radial, n_angular, r0, 1.0, Measure::normalized_area,
                                         poly ? RadialRule::uniform : RadialRule::boundary_graded);
    if (grid_id)
        *grid_id = grid.id();
    const auto &layout = *grid.layout();
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    std::vector<double> terms(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const double gap = layout.one_minus_r2[i / layout.n_angular];
        const double a = std::abs(g(nodes[i]));
        terms[i] = (p == 2.0 ? a * a : std::pow(a, p)) * w(nodes[i], gap) * weights[i];
    });
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (!std::isfinite(terms[i]))
            throw NumericError("besov: non-finite integrand on " + grid.id(), nodes[i]);
    return pairwise_sum(terms);
}

inline void require_disk(const BesovSpec &s)
{
    s.validate();
    if (s.dim != 1)
        throw ParameterError("besov: quadrature is implemented on the disk (n = 1)");
}

} // namespace detail

/// sum_{|beta| < J} |d^beta f(z0)|^p, the point-evaluation part of the norm.
inline double besov_point_terms(const BesovSpec &s, const FunctionRep &f)
{
    detail::require_disk(s);
    std::vector<double> terms;
    for (int k = 0; k < s.order; ++k)
        terms.push_back(std::pow(std::abs(detail::derivative(f, k)(s.z0)), s.p));
    return pairwise_sum(terms);
}

/// ||f|| = (sum_{|beta|<J} |d^beta f(z0)|^p + sum_{|alpha|=J} int |d^alpha f|^p sigma dv)^{1/p}.
inline double besov_norm(const BesovSpec &s, const FunctionRep &f, const BesovQuadrature &q = {})
{
    detail::require_disk(s);
    const double points = besov_point_terms(s, f);
    const auto top = detail::derivative(f, s.order);
    const double integral = detail::weighted_integral(
        top, s.p, s.weight, 0.0, q.n_radial, detail::angular_for(q, f, s.p, s.order));
    return std::pow(points + integral, 1.0 / s.p);
}

/// sum_{|alpha|=J} int_{1-delta < |z| < 1} |d^alpha f|^p sigma dv.
inline double besov_tail(const BesovSpec &s, const FunctionRep &f, double delta,
                         const BesovQuadrature &q = {})
{
    detail::require_disk(s);
    if (!(delta > 0.0) || !(delta < 1.0))
        throw ParameterError("besov_tail: need 0 < delta < 1");
    const auto top = detail::derivative(f, s.order);
    return detail::weighted_integral(top, s.p, s.weight, 1.0 - delta, q.n_radial,
                                     detail::angular_for(q, f, s.p, s.order));
}

/// sup over the family of besov_tail along a delta schedule.
inline TailProfile family_besov_profile(const BesovSpec &s, const std::vector<FunctionRep> &family,
                                        const std::vector<double> &deltas,
                                        const BesovQuadrature &q = {})
{
    detail::require_disk(s);
    if (family.empty())
        throw ParameterError("family_besov_profile: empty family");
    if (deltas.empty())
        throw ParameterError("family_besov_profile: empty delta schedule");
    TailProfile prof;
    prof.family_size = family.size();
    for (double d : deltas) {
        if (!(d > 0.0) || !(d < 1.0))
            throw ParameterError("family_besov_profile: need 0 < delta < 1");
        double best = -1.0;
        std::size_t arg = 0;
        std::string id;
        for (std::size_t k = 0; k < family.size(); ++k) {
            std::string this_id;
            const double t = detail::weighted_integral(
                detail::derivative(family[k], s.order), s.p, s.weight, 1.0 - d, q.n_radial,
                detail::angular_for(q, family[k], s.p, s.order), &this_id);
            if (t > best) {
                best = t;
                arg = k;
                id = this_id;
            }
        }
        prof.levels.push_back(d);
        prof.values.push_back(best);
        prof.argmax.push_back(arg);
        prof.grid_ids.push_back(id);
    }
    return prof;
}

/// delta = 2^{-n}, n = 1..depth.
inline std::vector<double> dyadic_deltas(int depth)
{
    if (depth < 1)
        throw ParameterError("dyadic_deltas: depth must be >= 1");
    std::vector<double> d;
    for (int n = 1; n <= depth; ++n)
        d.push_back(std::ldexp(1.0, -n));
    return d;
}

//----------------------------------------------------------------------------
// Weight admissibility
//----------------------------------------------------------------------------

struct BpAdmissibility
{
    double sigma_integral = 0.0; ///< int sigma dv at the finest grid
    double dual_integral = 0.0;  ///< int sigma^{-1/(p-1)} dv at the finest grid
    bool sigma_converged = false;
    bool dual_converged = false;
    bool admissible_hint = false; ///< both integrals converged (finite)
    std::vector<int> refinements;
};

/// Necessary-condition check for B_p weights: quadrature of int sigma dv
/// and int sigma^{-1/(p-1)} dv on three boundary-graded refinements. An
/// integral whose last refinement still moves by more than 1e-4 relative is
/// flagged as divergent.
inline BpAdmissibility bp_admissibility(double p, const WeightDescriptor &w,
                                        std::vector<int> refinements = {64, 128, 256},
                                        int n_angular = 16)
{
    if (!(p > 1.0) || !std::isfinite(p))
        throw ParameterError("bp_admissibility: need p > 1");
    if (refinements.size() < 2)
        throw ParameterError("bp_admissibility: need at least two refinements");
    if (w.kind == WeightDescriptor::Kind::field)
        n_angular = std::max(n_angular, 64);
    const double dual_power = -1.0 / (p - 1.0);
    std::vector<double> sig, dual;
    for (int n : refinements) {
        const auto grid = build_annulus_grid(n, n_angular, 0.0, 1.0, Measure::normalized_area,
                                             RadialRule::boundary_graded, 8);
        const auto &layout = *grid.layout();
        const auto nodes = grid.nodes();
        const auto weights = grid.weights();
        std::vector<double> a(grid.size()), b(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double gap = layout.one_minus_r2[i / layout.n_angular];
            const double s = w(nodes[i], gap);
            if (!(s > 0.0))
                throw ParameterError("bp_admissibility: weight must be positive");
            a[i] = s * weights[i];
            b[i] = std::pow(s, dual_power) * weights[i];
        }
        sig.push_back(pairwise_sum(a));
        dual.push_back(pairwise_sum(b));
    }
    auto converged = [](const std::vector<double> &v) {
        const double last = v.back();
        const double prev = v[v.size() - 2];
        return std::isfinite(last) && std::abs(last - prev) <= 1e-4 * std::abs(last);
    };
    BpAdmissibility out;
    out.refinements = refinements;
    out.sigma_integral = sig.back();
    out.dual_integral = dual.back();
    out.sigma_converged = converged(sig);
    out.dual_converged = converged(dual);
    out.admissible_hint = out.sigma_converged && out.dual_converged;
    return out;
}

//----------------------------------------------------------------------------
// Point evaluation on compacta
//----------------------------------------------------------------------------

/// Smallest C with max_{|z| <= radius} |f(z)|^2 <= C int |f|^2 sigma dv for
/// all polynomials of degree <= degree (p = 2): the maximum over sampled z
/// of e(z)^* G^{-1} e(z), with G the monomial Gram matrix under sigma dv.
inline double point_evaluation_constant(const WeightDescriptor &w, double radius, int degree,
                                        int n_radial = 64, int n_samples = 64)
{
    if (!(radius > 0.0) || !(radius < 1.0))
        throw ParameterError("point_evaluation_constant: need 0 < radius < 1");
    if (degree < 0)
        throw ParameterError("point_evaluation_constant: degree must be >= 0");
    const int m = degree + 1;
    const auto grid = build_annulus_grid(n_radial, std::max(16, 2 * degree + 2), 0.0, 1.0,
                                         Measure::normalized_area,
                                         w.polynomial() ? RadialRule::uniform
                                                        : RadialRule::boundary_graded);
    const auto &layout = *grid.layout();
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(m, m);
    std::vector<Complex> mono(m);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Complex z = grid.nodes()[k];
        const double gap = layout.one_minus_r2[k / layout.n_angular];
        const double wt = w(z, gap) * grid.weights()[k];
        mono[0] = 1.0;
        for (int j = 1; j < m; ++j)
            mono[j] = mono[j - 1] * z;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                G(i, j) += std::conj(mono[i]) * mono[j] * wt;
    }
    const Eigen::LDLT<Eigen::MatrixXcd> solver(G);
    if (solver.info() != Eigen::Success)
        throw NumericError("point_evaluation_constant: Gram matrix is not positive definite");
    double best = 0.0;
    for (int s = 0; s <= n_samples; ++s) {
        // Centre plus points on the boundary circle of K.
        const Complex z = s == 0 ? Complex(0.0) : std::polar(radius, 2.0 * pi * (s - 1) / n_samples);
        Eigen::VectorXcd e(m);
        e(0) = 1.0;
        for (int j = 1; j < m; ++j)
            e(j) = e(j - 1) * std::conj(z);
        const Eigen::VectorXcd x = solver.solve(e);
        best = std::max(best, std::real(e.dot(x)));
    }
    return best;
}

} // namespace kolmo
