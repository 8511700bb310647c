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

/** \file design.hpp
 *
 *  \brief Closed-form axis-symmetric modal weights: maximum directivity, maximum white-noise gain
 *  and Dolph-Chebyshev.
 *
 *  All designs are defined up to a complex scale (directivity and WNG are scale invariant); the
 *  normalizations used here are: d = 1 for maximum directivity, the distortionless B(0) = 1 form
 *  for maximum WNG and for Dolph-Chebyshev.
 */

#pragma once

#include "radiation.hpp"
#include "sphmath.hpp"
#include "types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace sphbeam
{

/// a_n = 2n + 1, n = 0..N.
inline std::vector<double> coefficient_vector(int order)
{
    if (order < 0)
        throw DomainError("coefficient_vector: order must be >= 0");
    std::vector<double> a(static_cast<std::size_t>(order + 1));
    for (int n = 0; n <= order; ++n)
        a[static_cast<std::size_t>(n)] = 2.0 * n + 1.0;
    return a;
}

/// d_n = 1 for all n (regular / plane-wave-decomposition pattern, Q = (N+1)^2).
inline ModalWeights max_directivity_weights(int order)
{
    if (order < 0)
        throw DomainError("max_directivity_weights: order must be >= 0");
    return ModalWeights(std::vector<cplx>(static_cast<std::size_t>(order + 1), cplx{1.0, 0.0}));
}

/// Closed form of the d = 1 pattern, (N+1) / (4 pi (cos T - 1)) [P_{N+1}(cos T) - P_N(cos T)].
inline double hypercardioid_pattern(int order, double angle)
{
    if (order < 0)
        throw DomainError("hypercardioid_pattern: order must be >= 0");
    const double x = std::clamp(std::cos(angle), -1.0, 1.0);
    const double gap = 1.0 - x;
    if (gap < 1e-5)
    {
        // second-order expansion about x = 1: P_n'(1) = n(n+1)/2, P_n''(1) = (n-1)n(n+1)(n+2)/8
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (int n = 0; n <= order; ++n)
        {
            const double a = 2.0 * n + 1.0;
            s0 += a;
            s1 += a * n * (n + 1) / 2.0;
            s2 += a * (n - 1.0) * n * (n + 1.0) * (n + 2.0) / 8.0;
        }
        return (s0 - gap * s1 + 0.5 * gap * gap * s2) / four_pi;
    }
    return (order + 1.0) / (four_pi * (x - 1.0)) * (legendre(order + 1, x) - legendre(order, x));
}

/// d_n = 4 pi |b_n|^2 / sum_n' |b_n'|^2 (2n'+1); distortionless, maximizes the white-noise gain.
inline ModalWeights max_wng_weights(int order, double k, double r0, const Medium &medium)
{
    if (order < 0)
        throw DomainError("max_wng_weights: order must be >= 0");
    std::vector<double> b2(static_cast<std::size_t>(order + 1));
    double total = 0.0;
    for (int n = 0; n <= order; ++n)
    {
        b2[static_cast<std::size_t>(n)] = std::norm(radial_far(n, k, r0, medium));
        total += b2[static_cast<std::size_t>(n)] * (2.0 * n + 1.0);
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw NumericalError("max_wng_weights: degenerate radial terms");
    std::vector<cplx> d(b2.size());
    for (std::size_t n = 0; n < d.size(); ++n)
        d[n] = four_pi * b2[n] / total;
    return ModalWeights(std::move(d), k);
}

namespace detail
{

// Chebyshev polynomial T_m(y), valid for any real y.
inline double chebyshev_t(int m, double y)
{
    if (m == 0)
        return 1.0;
    double t0 = 1.0, t1 = y;
    for (int k = 1; k < m; ++k)
    {
        const double t2 = 2.0 * y * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

} // namespace detail

/// Parameters of the order-2N Chebyshev target T_{2N}(x0 cos(Theta/2)).
struct ChebyshevTarget
{
    int order;
    double ratio; // main-to-side-lobe amplitude ratio R
    double x0;

    double operator()(double angle) const
    {
        return detail::chebyshev_t(2 * order, x0 * std::cos(angle / 2.0));
    }
};

inline ChebyshevTarget chebyshev_target(int order, double sidelobe_db)
{
    if (order < 1)
        throw DomainError("dolph_chebyshev: order must be >= 1");
    if (!(sidelobe_db > 0.0) || !std::isfinite(sidelobe_db))
        throw DomainError("dolph_chebyshev: side-lobe level must be > 0 dB");
    const double ratio = std::pow(10.0, sidelobe_db / 20.0);
    return {order, ratio, std::cosh(std::acosh(ratio) / (2.0 * order))};
}

/// Modal weights whose pattern equals the Chebyshev target, normalized to B(0) = 1.
///
/// The target is a polynomial of degree N in cos Theta, so its Legendre projection
///   d_n = 2 pi \int_{-1}^{1} T(x) P_n(x) dx
/// is exact under Gauss-Legendre quadrature with at least N+1 points; 4N+8 points are used and the
/// reconstruction is checked against the target.
inline ModalWeights dolph_chebyshev_weights(int order, double sidelobe_db)
{
    const auto target = chebyshev_target(order, sidelobe_db);
    const auto rule = gauss_legendre(4 * order + 8);

    std::vector<cplx> d(static_cast<std::size_t>(order + 1));
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    {
        const double x = rule.nodes[i];
        const double t = target(std::acos(x));
        const auto p = legendre_all(order, x);
        for (int n = 0; n <= order; ++n)
            d[static_cast<std::size_t>(n)] += 2.0 * pi * rule.weights[i] * t * p[static_cast<std::size_t>(n)];
    }
    ModalWeights weights(std::move(d));

    double worst = 0.0;
    for (int i = 0; i <= 32; ++i)
    {
        const double angle = pi * i / 32.0;
        worst = std::max(worst, std::abs(beam_pattern_modal(weights, angle).real() - target(angle)));
    }
    if (worst > 1e-9 * target.ratio)
        throw NumericalError("dolph_chebyshev: Legendre projection did not reproduce the target (error " +
                             std::to_string(worst) + ")");

    const cplx look = beam_pattern_modal(weights, 0.0);
    for (auto &v : weights.d)
        v /= look;
    return weights;
}

} // namespace sphbeam
