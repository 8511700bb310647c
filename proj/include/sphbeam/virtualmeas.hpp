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

/** \file virtualmeas.hpp
 *
 *  \brief Simulated measurement of a spherical loudspeaker array: microphone grid, per-unit transfer
 *  matrix at a single frequency, discrete spherical Fourier analysis, near-field-compensated
 *  steering and pattern comparison.
 *
 *  The transfer matrix is built from the full cap model, so harmonics above the controlled order
 *  (which the caps radiate but the weights cannot control) are present in the simulated data.
 */

#pragma once

#include "grid.hpp"
#include "radiation.hpp"
#include "sphmath.hpp"
#include "synthesis.hpp"
#include "types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sphbeam
{

/// Default simulation order for an analysis grid of order N_a.
inline constexpr int simulation_order(int analysis_order) { return analysis_order + 15; }

/// H(j, l): pressure at microphone j per unit velocity of cap l, at wavenumber k.
struct TransferMatrix
{
    Eigen::MatrixXcd h;
    double k = 0.0;
    double radius = 0.0;
    int n_sim = 0;
};

/// Transfer matrix on an arbitrary set of directions at the given radius. Each column is the
/// pressure field of the single-cap velocity pattern, summed to order n_sim.
inline TransferMatrix transfer_matrix(const ArrayGeometry &geom, std::span<const Direction> dirs, double radius,
                                      double k, const Medium &medium, int n_sim)
{
    geom.validate();
    if (!(radius > geom.r0))
        throw ConfigError("transfer_matrix: microphone radius must exceed r0");
    TransferMatrix t;
    t.k = k;
    t.radius = radius;
    t.n_sim = n_sim;
    t.h.resize(static_cast<Eigen::Index>(dirs.size()), static_cast<Eigen::Index>(geom.size()));
    std::vector<cplx> v(geom.size());
    for (std::size_t l = 0; l < geom.size(); ++l)
    {
        std::fill(v.begin(), v.end(), cplx{});
        v[l] = 1.0;
        // one order beyond n_sim so that pressure_field can check the omitted tail
        const auto u = velocity_coeffs(geom, v, n_sim + 1);
        const auto column = pressure_field(u, k, radius, dirs, geom, medium, n_sim);
        for (std::size_t j = 0; j < dirs.size(); ++j)
            t.h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = column[j];
    }
    return t;
}

inline TransferMatrix transfer_matrix(const ArrayGeometry &geom, const SamplingGrid &grid, double k,
                                      const Medium &medium, int n_sim)
{
    return transfer_matrix(geom, grid.directions, grid.radius, k, medium, n_sim);
}

inline TransferMatrix transfer_matrix(const ArrayGeometry &geom, const SamplingGrid &grid, double k,
                                      const Medium &medium)
{
    return transfer_matrix(geom, grid, k, medium, simulation_order(grid.order));
}

/// f_nm = sum_j a_j f(dir_j) conj(Y_n^m(dir_j)), n <= N <= N_a.
inline SHVector discrete_sft(std::span<const cplx> samples, const SamplingGrid &grid, int order)
{
    if (samples.size() != grid.size())
        throw ConfigError("discrete_sft: expected " + std::to_string(grid.size()) + " samples, got " +
                          std::to_string(samples.size()));
    if (order > grid.order)
        throw ConfigError("discrete_sft: order " + std::to_string(order) + " exceeds grid order " +
                          std::to_string(grid.order));
    SHVector f(order);
    for (std::size_t j = 0; j < grid.size(); ++j)
    {
        const auto y = sph_harmonics(order, grid.directions[j]);
        const cplx s = grid.weights[j] * samples[j];
        for (std::size_t q = 0; q < y.size(); ++q)
            f[q] += s * std::conj(y[q]);
    }
    return f;
}

/// f(dir_j) = sum_nm f_nm Y_n^m(dir_j), evaluating a band-limited expansion at arbitrary directions.
inline std::vector<cplx> inverse_sft(const SHVector &f, std::span<const Direction> dirs)
{
    std::vector<cplx> out(dirs.size());
    for (std::size_t j = 0; j < dirs.size(); ++j)
    {
        const auto y = sph_harmonics(f.order(), dirs[j]);
        cplx sum{};
        for (std::size_t q = 0; q < y.size(); ++q)
            sum += f[q] * y[q];
        out[j] = sum;
    }
    return out;
}

/// r exp(-ikr) * radial_near(n, k, r, r0): the radius-r counterpart of b_n(k r0).
inline cplx radial_at_radius(int n, double k, double r, double r0, const Medium &medium)
{
    return r * std::polar(1.0, -k * r) * radial_near(n, k, r, r0, medium);
}

/// Steering with the radius-r radial term in place of b_n, so that the pattern measured on the sphere
/// of radius r (normalized by r exp(-ikr)) equals B(Theta) for the controlled orders.
inline SteeredWeights near_field_steer(const ModalWeights &d, Direction look, double k, double r, double r0,
                                       const Medium &medium)
{
    if (!(r > r0))
        throw DomainError("near_field_steer: analysis radius must exceed r0");
    const int order = d.order();
    const auto y = sph_harmonics(order, look);
    SteeredWeights out{SHVector(order), look, k, r0};
    for (int n = 0; n <= order; ++n)
    {
        const cplx b = radial_at_radius(n, k, r, r0, medium);
        const cplx scale = d[static_cast<std::size_t>(n)] / b;
        if (!(std::abs(b) > 0.0) || !std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
            throw NumericalError("near_field_steer: radial term of order " + std::to_string(n) + " vanishes");
        for (int m = -n; m <= n; ++m)
        {
            const auto q = static_cast<std::size_t>(sh_index(n, m));
            out.w_nm[q] = scale * std::conj(y[q]);
        }
    }
    return out;
}

/// p_j = sum_l H(j, l) w_l.
inline std::vector<cplx> virtual_measure(const UnitWeights &w, const TransferMatrix &t)
{
    if (static_cast<Eigen::Index>(w.w.size()) != t.h.cols())
        throw ConfigError("virtual_measure: expected " + std::to_string(t.h.cols()) + " unit weights, got " +
                          std::to_string(w.w.size()));
    const Eigen::Map<const Eigen::VectorXcd> wv(w.w.data(), static_cast<Eigen::Index>(w.w.size()));
    const Eigen::VectorXcd p = t.h * wv;
    return {p.data(), p.data() + p.size()};
}

/// Pattern predicted by the cap model for given unit weights, through the SH-domain route
/// (velocity coefficients to order n_sim + 1, then the radiated series).
inline std::vector<cplx> model_pressure(const ArrayGeometry &geom, const UnitWeights &w,
                                        std::span<const Direction> dirs, double radius, double k,
                                        const Medium &medium, int n_sim)
{
    const auto u = velocity_coeffs(geom, w.w, n_sim + 1);
    return pressure_field(u, k, radius, dirs, geom, medium, n_sim);
}

/// Multiplies sampled pressure by r exp(-ikr), the far-field normalization of a beam pattern.
inline std::vector<cplx> to_pattern(std::span<const cplx> pressure, double k, double r)
{
    const cplx f = r * std::polar(1.0, -k * r);
    std::vector<cplx> out(pressure.size());
    for (std::size_t j = 0; j < pressure.size(); ++j)
        out[j] = f * pressure[j];
    return out;
}

/// Index of the direction closest (in great-circle angle) to `look`.
inline std::size_t nearest_direction(std::span<const Direction> dirs, Direction look)
{
    if (dirs.empty())
        throw ConfigError("nearest_direction: empty direction set");
    std::size_t best = 0;
    double best_angle = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dirs.size(); ++j)
    {
        const double a = great_circle_angle(look, dirs[j]);
        if (a < best_angle)
        {
            best_angle = a;
            best = j;
        }
    }
    return best;
}

/// Divides a sampled pattern by its value at the node nearest to the look direction.
inline std::vector<cplx> normalize_to_look(std::span<const cplx> values, std::span<const Direction> dirs,
                                           Direction look)
{
    if (values.size() != dirs.size())
        throw ConfigError("normalize_to_look: size mismatch");
    const cplx ref = values[nearest_direction(dirs, look)];
    if (!(std::abs(ref) > 0.0))
        throw NumericalError("normalize_to_look: zero response at look direction");
    std::vector<cplx> out(values.begin(), values.end());
    for (auto &v : out)
        v /= ref;
    return out;
}

/// Relative weighted L2 error || m - rho r || / || r || with rho = <r, m> / <r, r> the least-squares
/// complex scale aligning the measurement to the reference.
inline double pattern_error(std::span<const cplx> measured, std::span<const cplx> reference,
                            std::span<const double> weights)
{
    if (measured.size() != reference.size() || measured.size() != weights.size())
        throw ConfigError("pattern_error: measured, reference and weights must have equal length");
    cplx cross{};
    double ref_norm = 0.0;
    for (std::size_t j = 0; j < reference.size(); ++j)
    {
        cross += weights[j] * std::conj(reference[j]) * measured[j];
        ref_norm += weights[j] * std::norm(reference[j]);
    }
    if (!(ref_norm > 0.0))
        throw NumericalError("pattern_error: reference pattern has zero norm");
    const cplx rho = cross / ref_norm;
    double err = 0.0;
    for (std::size_t j = 0; j < reference.size(); ++j)
        err += weights[j] * std::norm(measured[j] - rho * reference[j]);
    return std::sqrt(err / ref_norm);
}

/// Deviations applied to a virtual measurement: per-unit gain (relative, std) and phase (rad, std)
/// errors, and additive microphone noise with std relative to the rms of the clean measurement.
struct Perturbation
{
    double gain = 0.0;
    double phase = 0.0;
    double noise = 0.0;
    std::uint64_t seed = 1;

    bool active() const { return gain != 0.0 || phase != 0.0 || noise != 0.0; }
};

inline std::vector<cplx> virtual_measure(const UnitWeights &w, const TransferMatrix &t, const Perturbation &pert)
{
    if (!pert.active())
        return virtual_measure(w, t);
    std::mt19937_64 rng(pert.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    UnitWeights driven = w;
    for (auto &v : driven.w)
    {
        const double g = 1.0 + pert.gain * normal(rng);
        const double ph = pert.phase * normal(rng);
        v *= std::polar(g, ph);
    }
    auto p = virtual_measure(driven, t);
    if (pert.noise > 0.0 && !p.empty())
    {
        double rms = 0.0;
        for (const auto &v : p)
            rms += std::norm(v);
        rms = std::sqrt(rms / static_cast<double>(p.size()));
        const double sigma = pert.noise * rms / std::sqrt(2.0);
        for (auto &v : p)
            v += cplx{sigma * normal(rng), sigma * normal(rng)};
    }
    return p;
}

} // namespace sphbeam
