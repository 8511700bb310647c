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

/** \file radiation.hpp
 *
 *  \brief Rigid sphere with vibrating spherical caps: cap gains, surface-velocity coefficients,
 *  near- and far-field radial terms, radiated pressure and axis-symmetric beam patterns.
 *
 *  Time convention exp(-i omega t); outgoing waves use h_n = j_n + i y_n.
 *
 *  The far-field radial term is
 *
 *      b_n(k r0) = rho0 c k r0^2 (-i)^{n+1} [ j_n(k r0) - j_n'(k r0) / h_n'(k r0) h_n(k r0) ]
 *                = rho0 c (-i)^n / (k h_n'(k r0)),
 *
 *  chosen so that r exp(-ikr) * i rho0 c h_n(kr) / h_n'(k r0) -> b_n(k r0) as kr -> infinity.
 */

#pragma once

#include "sphmath.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace sphbeam
{

struct Medium
{
    double rho0 = 1.21; // kg/m^3
    double c = 343.0;   // m/s

    void validate() const
    {
        if (!(rho0 > 0.0) || !std::isfinite(rho0))
            throw ConfigError("medium.rho0: must be > 0");
        if (!(c > 0.0) || !std::isfinite(c))
            throw ConfigError("medium.c: must be > 0");
    }
};

inline double wavenumber(double frequency_hz, const Medium &medium)
{
    if (!(frequency_hz > 0.0))
        throw ConfigError("frequency must be > 0");
    return 2.0 * pi * frequency_hz / medium.c;
}

/// Rigid sphere of radius r0 carrying L caps of aperture (half-angle) alpha.
struct ArrayGeometry
{
    double r0 = 0.15;
    double alpha = 0.3;
    std::vector<Direction> caps;

    std::size_t size() const { return caps.size(); }

    void validate() const
    {
        if (!(r0 > 0.0) || !std::isfinite(r0))
            throw ConfigError("geometry.r0: must be > 0");
        if (!(alpha > 0.0 && alpha < pi / 2))
            throw ConfigError("geometry.alpha: must lie in (0, pi/2)");
        if (caps.empty())
            throw ConfigError("geometry.caps: at least one cap is required");
        for (std::size_t l = 0; l < caps.size(); ++l)
            if (!(caps[l].theta >= 0.0 && caps[l].theta <= pi) || !std::isfinite(caps[l].phi))
                throw ConfigError("geometry.caps[" + std::to_string(l) + "].theta: must lie in [0, pi]");
    }
};

/// Twelve caps on the face centres of a regular dodecahedron (the vertices of an icosahedron),
/// from the golden-ratio construction (0, +-1, +-g), (+-1, +-g, 0), (+-g, 0, +-1).
inline ArrayGeometry dodecahedron(double r0 = 0.15, double alpha = 0.3)
{
    const double g = std::numbers::phi;
    const double vertices[12][3] = {{0, 1, g},  {0, 1, -g},  {0, -1, g},  {0, -1, -g},
                                    {1, g, 0},  {1, -g, 0},  {-1, g, 0},  {-1, -g, 0},
                                    {g, 0, 1},  {g, 0, -1},  {-g, 0, 1},  {-g, 0, -1}};
    ArrayGeometry geom;
    geom.r0 = r0;
    geom.alpha = alpha;
    for (const auto &v : vertices)
    {
        const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        geom.caps.push_back({std::acos(v[2] / norm), std::atan2(v[1], v[0])});
    }
    return geom;
}

/// g_n = 4 pi^2 / (2n+1) [P_{n-1}(cos alpha) - P_{n+1}(cos alpha)].
inline double cap_gain(int n, double alpha)
{
    if (n < 0)
        throw DomainError("cap_gain: order must be >= 0");
    if (!(alpha > 0.0 && alpha < pi))
        throw DomainError("cap_gain: aperture must lie in (0, pi)");
    const double x = std::cos(alpha);
    return 4.0 * pi * pi / (2.0 * n + 1.0) * (legendre(n - 1, x) - legendre(n + 1, x));
}

/// u_nm = g_n sum_l v_l conj(Y_n^m(theta_l, phi_l)), n = 0..N.
inline SHVector velocity_coeffs(const ArrayGeometry &geom, std::span<const cplx> velocities, int order)
{
    if (velocities.size() != geom.size())
        throw ConfigError("velocity_coeffs: expected " + std::to_string(geom.size()) + " cap velocities, got " +
                          std::to_string(velocities.size()));
    SHVector u(order);
    std::vector<double> g(static_cast<std::size_t>(order + 1));
    for (int n = 0; n <= order; ++n)
        g[static_cast<std::size_t>(n)] = cap_gain(n, geom.alpha);

    for (std::size_t l = 0; l < geom.size(); ++l)
    {
        if (velocities[l] == cplx{})
            continue;
        const auto y = sph_harmonics(order, geom.caps[l]);
        for (std::size_t q = 0; q < y.size(); ++q)
            u[q] += velocities[l] * std::conj(y[q]);
    }
    for (std::size_t q = 0; q < u.size(); ++q)
        u[q] *= g[static_cast<std::size_t>(sh_unpack(static_cast<int>(q)).n)];
    return u;
}

namespace detail
{

inline cplx minus_i_pow(int n)
{
    switch (((n % 4) + 4) % 4)
    {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, -1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, 1.0};
    }
}

} // namespace detail

/// Far-field radial term b_n(k r0); the product k r0 is formed here from k and r0.
inline cplx radial_far(int n, double k, double r0, const Medium &medium)
{
    if (!(k > 0.0) || !(r0 > 0.0))
        throw DomainError("radial_far: k r0 must be > 0");
    const double x = k * r0;
    const auto j = sph_bessel_j(n, x);
    const auto h = sph_hankel1(n, x);
    const cplx bracket = j.value - j.derivative / h.derivative * h.value;
    return medium.rho0 * medium.c * k * r0 * r0 * detail::minus_i_pow(n + 1) * bracket;
}

/// Near-field radial term i rho0 c h_n(kr) / h_n'(k r0), r > r0.
inline cplx radial_near(int n, double k, double r, double r0, const Medium &medium)
{
    if (!(k > 0.0))
        throw DomainError("radial_near: k must be > 0");
    if (!(r0 > 0.0) || !(r > r0))
        throw DomainError("radial_near: require r > r0 > 0");
    const auto outer = sph_hankel1(n, k * r);
    const auto inner = sph_hankel1(n, k * r0);
    return cplx{0.0, medium.rho0 * medium.c} * outer.value / inner.derivative;
}

/// Source-signal gain for a voltage-driven unit: velocity proportional to voltage / k. Pass as the
/// `source` argument of pressure_field / beam_pattern_field to remove the k dependence of b_n.
inline cplx voltage_drive_source(double k, double sensitivity = 1.0)
{
    if (!(k > 0.0))
        throw DomainError("voltage_drive_source: k must be > 0");
    return {sensitivity / k, 0.0};
}

/// Relative size of the highest-order contribution accepted when a series is cut short.
inline constexpr double truncation_tolerance = 1e-12;
/// Hard cap on the number of orders added beyond the controlled order N.
inline constexpr int truncation_margin = 40;

/// Radiated pressure p(k, r, dir) = s sum_{n<=N_t} sum_m radial_near(n) u_nm Y_n^m(dir).
///
/// Orders above min(order(u), n_trunc) are not summed. When u carries content above n_trunc,
/// the first omitted order must contribute less than truncation_tolerance relative to max |p|,
/// otherwise NumericalError is thrown.
inline std::vector<cplx> pressure_field(const SHVector &u, double k, double r, std::span<const Direction> dirs,
                                        const ArrayGeometry &geom, const Medium &medium, int n_trunc,
                                        cplx source = 1.0)
{
    if (!(r > geom.r0))
        throw DomainError("pressure_field: evaluation radius must exceed r0");
    if (n_trunc < 0)
        throw DomainError("pressure_field: truncation order must be >= 0");
    const int summed = std::min(n_trunc, u.order());
    const int top = (u.order() > n_trunc) ? n_trunc + 1 : summed;

    std::vector<cplx> radial(static_cast<std::size_t>(top + 1));
    for (int n = 0; n <= top; ++n)
        radial[static_cast<std::size_t>(n)] = radial_near(n, k, r, geom.r0, medium);

    std::vector<cplx> p(dirs.size());
    double tail = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i)
    {
        const auto y = sph_harmonics(top, dirs[i]);
        cplx sum{};
        for (int n = 0; n <= summed; ++n)
        {
            cplx order_sum{};
            for (int m = -n; m <= n; ++m)
                order_sum += u(n, m) * y[static_cast<std::size_t>(sh_index(n, m))];
            sum += radial[static_cast<std::size_t>(n)] * order_sum;
        }
        if (top > summed)
        {
            cplx order_sum{};
            for (int m = -top; m <= top; ++m)
                order_sum += u(top, m) * y[static_cast<std::size_t>(sh_index(top, m))];
            tail = std::max(tail, std::abs(radial[static_cast<std::size_t>(top)] * order_sum));
        }
        p[i] = source * sum;
        peak = std::max(peak, std::abs(sum));
    }
    if (top > summed && tail > truncation_tolerance * peak)
        throw NumericalError("pressure_field: series not converged at order " + std::to_string(n_trunc) +
                             " (relative tail " + std::to_string(peak > 0 ? tail / peak : tail) + ")");
    return p;
}

/// Far-field beam pattern from SH-domain weights, B(dir) = s sum_nm b_n(k r0) w_nm Y_n^m(dir).
inline std::vector<cplx> beam_pattern_field(const SHVector &w_nm, double k, double r0, const Medium &medium,
                                            std::span<const Direction> dirs, cplx source = 1.0)
{
    const int order = w_nm.order();
    std::vector<cplx> b(static_cast<std::size_t>(order + 1));
    for (int n = 0; n <= order; ++n)
        b[static_cast<std::size_t>(n)] = radial_far(n, k, r0, medium);
    std::vector<cplx> out(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i)
    {
        const auto y = sph_harmonics(order, dirs[i]);
        cplx sum{};
        for (std::size_t q = 0; q < y.size(); ++q)
            sum += b[static_cast<std::size_t>(sh_unpack(static_cast<int>(q)).n)] * w_nm[q] * y[q];
        out[i] = source * sum;
    }
    return out;
}

/// Angle between the look direction and dir, in [0, pi].
inline double great_circle_angle(Direction look, Direction dir)
{
    const double c = std::cos(look.theta) * std::cos(dir.theta) +
                     std::cos(look.phi - dir.phi) * std::sin(look.theta) * std::sin(dir.theta);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/// B(Theta) = sum_n d_n (2n+1)/(4 pi) P_n(cos Theta).
inline cplx beam_pattern_modal(const ModalWeights &d, double angle)
{
    const auto p = legendre_all(d.order(), std::clamp(std::cos(angle), -1.0, 1.0));
    cplx b{};
    for (int n = 0; n <= d.order(); ++n)
        b += d[static_cast<std::size_t>(n)] * ((2.0 * n + 1.0) / four_pi) * p[static_cast<std::size_t>(n)];
    return b;
}

/// Complex directivity values on a direction set.
struct BeamPattern
{
    std::vector<Direction> directions;
    std::vector<cplx> values;
    Direction look;
    cplx look_value;
    double k = 0.0;
};

/// Samples B(Theta) of an axis-symmetric design on the given directions.
inline BeamPattern sample_modal_pattern(const ModalWeights &d, Direction look, std::span<const Direction> dirs,
                                        double k = 0.0)
{
    BeamPattern pattern;
    pattern.directions.assign(dirs.begin(), dirs.end());
    pattern.values.reserve(dirs.size());
    for (const auto &dir : dirs)
        pattern.values.push_back(beam_pattern_modal(d, great_circle_angle(look, dir)));
    pattern.look = look;
    pattern.look_value = beam_pattern_modal(d, 0.0);
    pattern.k = k;
    return pattern;
}

} // namespace sphbeam
