#pragma once

#include <kolmo/numerics.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testing_support {

using kolmo::Complex;

inline std::mt19937_64 &rng()
{
    static std::mt19937_64 gen(20240917);
    return gen;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Complex random_complex(double scale = 1.0)
{
    return {uniform(-scale, scale), uniform(-scale, scale)};
}

/// Uniform point in the disk of the given radius.
inline Complex random_in_disk(double radius)
{
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    return std::polar(r, uniform(0.0, 2.0 * kolmo::pi));
}

inline std::vector<Complex> random_coeffs(int degree, double scale = 1.0)
{
    std::vector<Complex> c(degree + 1);
    for (auto &v : c)
        v = random_complex(scale);
    return c;
}

/// Horner evaluation of sum_k c_k z^k.
inline Complex horner(const std::vector<Complex> &c, Complex z)
{
    Complex acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

} // namespace testing_support
