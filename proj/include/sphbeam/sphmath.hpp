// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/** \file sphmath.hpp
 *
 *  \brief Special functions on the sphere: Legendre polynomials, orthonormal complex spherical
 *  harmonics, spherical Bessel/Hankel functions with derivatives, SH index packing and
 *  Gauss-Legendre rules.
 */

#pragma once

#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace sphbeam
{

// ------------------------------------------------------------------------------------------------
// Index packing q = n^2 + n + m
// ------------------------------------------------------------------------------------------------

struct SHIndex
{
    int n = 0;
    int m = 0;

    constexpr int q() const { return n * n + n + m; }
};

/// Number of coefficients for orders 0..N.
constexpr int sh_count(int order) { return (order + 1) * (order + 1); }

constexpr int sh_index(int n, int m)
{
    if (n < 0 || m < -n || m > n)
        throw DomainError("sh_index: require n >= 0 and |m| <= n (n=" + std::to_string(n) +
                          ", m=" + std::to_string(m) + ")");
    return n * n + n + m;
}

inline SHIndex sh_unpack(int q)
{
    if (q < 0)
        throw DomainError("sh_unpack: negative packed index");
    int n = static_cast<int>(std::sqrt(static_cast<double>(q)));
    while (n * n > q)
        --n;
    while ((n + 1) * (n + 1) <= q)
        ++n;
    return {n, q - n * n - n};
}

/// Packed complex spherical-harmonic coefficients c_q for orders 0..N.
class SHVector
{
  public:
    SHVector() = default;

    explicit SHVector(int order) : order_(order), c_(static_cast<std::size_t>(sh_count(order)))
    {
        if (order < 0)
            throw DomainError("SHVector: order must be >= 0");
    }

    SHVector(int order, std::vector<cplx> coeffs) : order_(order), c_(std::move(coeffs))
    {
        if (order < 0)
            throw DomainError("SHVector: order must be >= 0");
        if (c_.size() != static_cast<std::size_t>(sh_count(order)))
            throw ConfigError("SHVector: expected " + std::to_string(sh_count(order)) +
                              " coefficients for order " + std::to_string(order) + ", got " +
                              std::to_string(c_.size()));
    }

    int order() const { return order_; }
    std::size_t size() const { return c_.size(); }

    cplx &operator[](std::size_t q) { return c_[q]; }
    const cplx &operator[](std::size_t q) const { return c_[q]; }
    cplx &operator()(int n, int m) { return c_[static_cast<std::size_t>(sh_index(n, m))]; }
    const cplx &operator()(int n, int m) const { return c_[static_cast<std::size_t>(sh_index(n, m))]; }

    std::span<const cplx> coeffs() const { return c_; }
    std::span<cplx> coeffs() { return c_; }

  private:
    int order_ = 0;
    std::vector<cplx> c_ = std::vector<cplx>(1);
};

// ------------------------------------------------------------------------------------------------
// Legendre polynomials
// ------------------------------------------------------------------------------------------------

/// P_n(x) by the three-term recurrence. P_{-1}(x) is taken as 1 so that cap gains are defined at n = 0.
inline double legendre(int n, double x)
{
    if (!(std::abs(x) <= 1.0))
        throw DomainError("legendre: |x| must be <= 1");
    if (n < -1)
        throw DomainError("legendre: order must be >= -1");
    if (n <= 0)
        return 1.0;
    double p_prev = 1.0, p = x;
    for (int k = 1; k < n; ++k)
    {
        const double next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
        p_prev = p;
        p = next;
    }
    return p;
}

/// P_0(x) .. P_N(x).
inline std::vector<double> legendre_all(int order, double x)
{
    if (!(std::abs(x) <= 1.0))
        throw DomainError("legendre_all: |x| must be <= 1");
    std::vector<double> p(static_cast<std::size_t>(std::max(order, 0) + 1));
    p[0] = 1.0;
    if (order >= 1)
        p[1] = x;
    for (int k = 1; k < order; ++k)
        p[k + 1] = ((2 * k + 1) * x * p[k] - k * p[k - 1]) / (k + 1);
    return p;
}

// ------------------------------------------------------------------------------------------------
// Spherical harmonics
// ------------------------------------------------------------------------------------------------

namespace detail
{

// Fully normalized associated Legendre values for m >= 0, including the Condon-Shortley phase and
// the 1/sqrt(4 pi) factor, so that Y_n^m = table[q(n,m)] * exp(i m phi). Entries with m < 0 are unused.
inline std::vector<double> normalized_alf(int order, double theta)
{
    std::vector<double> out(static_cast<std::size_t>(sh_count(order)), 0.0);
    const double x = std::cos(theta);
    // exact zero at the poles (sin(pi) is not 0 in floating point)
    const double s = (std::abs(x) == 1.0) ? 0.0 : std::sin(theta);

    double pmm = 1.0 / std::sqrt(four_pi);
    for (int m = 0; m <= order; ++m)
    {
        if (m > 0)
            pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        out[static_cast<std::size_t>(sh_index(m, m))] = pmm;
        if (m == order)
            break;

        double p2 = pmm;
        double p1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
        out[static_cast<std::size_t>(sh_index(m + 1, m))] = p1;
        for (int n = m + 2; n <= order; ++n)
        {
            const double nn = n, mm = m;
            const double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - mm * mm));
            const double b = std::sqrt(((nn - 1.0) * (nn - 1.0) - mm * mm) / (4.0 * (nn - 1.0) * (nn - 1.0) - 1.0));
            const double p = a * (x * p1 - b * p2);
            out[static_cast<std::size_t>(sh_index(n, m))] = p;
            p2 = p1;
            p1 = p;
        }
    }
    return out;
}

} // namespace detail

/// All Y_n^m(theta, phi) for n = 0..N, packed by sh_index.
/// Orthonormal on the unit sphere with the Condon-Shortley phase; Y_n^{-m} = (-1)^m conj(Y_n^m).
inline std::vector<cplx> sph_harmonics(int order, Direction dir)
{
    if (order < 0)
        throw DomainError("sph_harmonics: order must be >= 0");
    const auto alf = detail::normalized_alf(order, dir.theta);
    std::vector<cplx> y(alf.size());
    for (int m = 0; m <= order; ++m)
    {
        const cplx e = std::polar(1.0, m * dir.phi);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int n = m; n <= order; ++n)
        {
            const cplx v = alf[static_cast<std::size_t>(sh_index(n, m))] * e;
            y[static_cast<std::size_t>(sh_index(n, m))] = v;
            if (m > 0)
                y[static_cast<std::size_t>(sh_index(n, -m))] = sign * std::conj(v);
        }
    }
    return y;
}

inline cplx sph_harmonic(int n, int m, double theta, double phi)
{
    if (n < 0 || std::abs(m) > n)
        throw DomainError("sph_harmonic: require |m| <= n");
    return sph_harmonics(n, {theta, phi})[static_cast<std::size_t>(sh_index(n, m))];
}

// ------------------------------------------------------------------------------------------------
// Spherical Bessel and Hankel functions
// ------------------------------------------------------------------------------------------------

struct BesselValue
{
    double value;
    double derivative;
};

struct HankelValue
{
    cplx value;
    cplx derivative;
};

namespace detail
{

// j_0 .. j_top at x > 0.
//  x >= top: upward recurrence from the closed forms (stable while the order stays below x).
//  x <  1:   power series per order (no cancellation, terms shrink by at least 1/6).
//  else:     Miller's downward recurrence, rescaled against overflow and normalized against
//            whichever of j_0, j_1 is larger in magnitude (they never vanish together).
inline std::vector<double> sph_bessel_j_all(int top, double x)
{
    std::vector<double> j(static_cast<std::size_t>(top + 1));
    const double s = std::sin(x), c = std::cos(x);
    const double j0 = s / x;
    double j1;
    if (x < 0.1)
    {
        const double x2 = x * x;
        j1 = x * (1.0 / 3.0 + x2 * (-1.0 / 30.0 + x2 * (1.0 / 840.0 + x2 * (-1.0 / 45360.0 + x2 * (1.0 / 3991680.0)))));
    }
    else
        j1 = (s / x - c) / x;

    if (x >= top)
    {
        j[0] = j0;
        if (top >= 1)
            j[1] = j1;
        for (int k = 1; k < top; ++k)
            j[k + 1] = (2.0 * k + 1.0) / x * j[k] - j[k - 1];
        return j;
    }

    if (x < 1.0)
    {
        const double half_x2 = 0.5 * x * x;
        double lead = 1.0; // x^n / (2n+1)!!
        for (int n = 0; n <= top; ++n)
        {
            if (n > 0)
                lead *= x / (2.0 * n + 1.0);
            double term = 1.0, sum = 1.0;
            for (int k = 1; k < 40; ++k)
            {
                term *= -half_x2 / (k * (2.0 * n + 2.0 * k + 1.0));
                sum += term;
                if (std::abs(term) < 1e-17 * std::abs(sum))
                    break;
            }
            j[static_cast<std::size_t>(n)] = lead * sum;
        }
        return j;
    }

    const int start = top + 20 + static_cast<int>(std::sqrt(50.0 * (top + 1)));
    constexpr double big = 1e250;
    double above = 0.0, cur = 1.0;
    for (int k = start; k >= 1; --k)
    {
        const double below = (2.0 * k + 1.0) / x * cur - above;
        above = cur;
        cur = below;
        if (k - 1 <= top)
            j[static_cast<std::size_t>(k - 1)] = cur;
        if (k <= top)
            j[static_cast<std::size_t>(k)] = above;
        if (std::abs(cur) > big)
        {
            cur /= big;
            above /= big;
            for (int i = std::max(k - 1, 0); i <= top; ++i)
                j[static_cast<std::size_t>(i)] /= big;
        }
    }
    const double scale = (std::abs(j0) >= std::abs(j1) || top < 1) ? j0 / j[0] : j1 / j[1];
    for (auto &v : j)
        v *= scale;
    return j;
}

// y_0 .. y_top by upward recurrence (y_n is the dominant solution, so upward is stable).
inline std::vector<double> sph_bessel_y_all(int top, double x)
{
    std::vector<double> y(static_cast<std::size_t>(top + 1));
    const double s = std::sin(x), c = std::cos(x);
    y[0] = -c / x;
    if (top >= 1)
        y[1] = -c / (x * x) - s / x;
    for (int k = 1; k < top; ++k)
        y[k + 1] = (2.0 * k + 1.0) / x * y[k] - y[k - 1];
    return y;
}

inline void check_bessel_args(const char *what, int n, double x)
{
    if (n < 0)
        throw DomainError(std::string(what) + ": order must be >= 0");
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(what) + ": argument must be finite and > 0");
}

} // namespace detail

/// j_n(x) and j_n'(x), x > 0. Derivative from f_n' = (n/x) f_n - f_{n+1}, which avoids cancellation at small x.
inline BesselValue sph_bessel_j(int n, double x)
{
    detail::check_bessel_args("sph_bessel_j", n, x);
    const auto j = detail::sph_bessel_j_all(n + 1, x);
    return {j[n], n / x * j[n] - j[n + 1]};
}

inline BesselValue sph_bessel_y(int n, double x)
{
    detail::check_bessel_args("sph_bessel_y", n, x);
    const auto y = detail::sph_bessel_y_all(n + 1, x);
    return {y[n], n / x * y[n] - y[n + 1]};
}

/// h_n(x) = j_n(x) + i y_n(x) (first kind, outgoing for exp(-i omega t)) and its derivative.
inline HankelValue sph_hankel1(int n, double x)
{
    detail::check_bessel_args("sph_hankel1", n, x);
    const auto j = detail::sph_bessel_j_all(n + 1, x);
    const auto y = detail::sph_bessel_y_all(n + 1, x);
    const cplx h{j[n], y[n]};
    const cplx hp{n / x * j[n] - j[n + 1], n / x * y[n] - y[n + 1]};
    return {h, hp};
}

// ------------------------------------------------------------------------------------------------
// Gauss-Legendre quadrature on [-1, 1]
// ------------------------------------------------------------------------------------------------

struct QuadratureRule
{
    std::vector<double> nodes;   // ascending
    std::vector<double> weights; // sum to 2
};

/// n-point Gauss-Legendre rule (exact for polynomials of degree <= 2n-1). Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int points)
{
    if (points < 1)
        throw DomainError("gauss_legendre: need at least one point");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(points));
    rule.weights.resize(static_cast<std::size_t>(points));
    // returns P_n'(z) and sets pn = P_n(z)
    const auto derivative = [points](double z, double &pn) {
        double p0 = 1.0, p1 = z;
        for (int k = 1; k < points; ++k)
        {
            const double p2 = ((2.0 * k + 1.0) * z * p1 - k * p0) / (k + 1.0);
            p0 = p1;
            p1 = p2;
        }
        pn = p1;
        return points * (z * p1 - p0) / (z * z - 1.0);
    };
    const int half = (points + 1) / 2;
    for (int i = 0; i < half; ++i)
    {
        double z = std::cos(pi * (i + 0.75) / (points + 0.5));
        double pn = 0.0;
        for (int iter = 0; iter < 100; ++iter)
        {
            const double dp = derivative(z, pn);
            const double step = pn / dp;
            z -= step;
            if (std::abs(step) < 1e-16)
                break;
        }
        const double dp = derivative(z, pn);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -z;
        rule.nodes[static_cast<std::size_t>(points - 1 - i)] = z;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(points - 1 - i)] = w;
    }
    if (points % 2 == 1)
        rule.nodes[static_cast<std::size_t>(points / 2)] = 0.0;
    return rule;
}

} // namespace sphbeam
