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

// Helpers shared by the unit tests and the acceptance suite.

#pragma once

#include "sphbeam/sphbeam.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace sphbeam::testing
{

inline std::vector<Direction> random_directions(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uz(-1.0, 1.0), up(0.0, 2 * pi);
    std::vector<Direction> dirs;
    for (std::size_t i = 0; i < count; ++i)
        dirs.push_back({std::acos(uz(rng)), up(rng)});
    return dirs;
}

inline ModalWeights random_design(int order, std::mt19937_64 &rng)
{
    std::normal_distribution<double> nd;
    std::vector<cplx> d(static_cast<std::size_t>(order + 1));
    for (auto &v : d)
        v = {nd(rng), nd(rng)};
    return ModalWeights(std::move(d));
}

/// Image of `dir` under the rotation that takes the pole to `look` (about the y axis, then z).
inline Direction rotate_from_pole(Direction look, Direction dir)
{
    const double x0 = std::sin(dir.theta) * std::cos(dir.phi), y0 = std::sin(dir.theta) * std::sin(dir.phi);
    const double z0 = std::cos(dir.theta);
    const double ct = std::cos(look.theta), st = std::sin(look.theta);
    const double x1 = ct * x0 + st * z0, z1 = -st * x0 + ct * z0;
    const double x = std::cos(look.phi) * x1 - std::sin(look.phi) * y0;
    const double y = std::sin(look.phi) * x1 + std::cos(look.phi) * y0;
    return {std::acos(std::clamp(z1, -1.0, 1.0)), std::atan2(y, x)};
}

/// Maximizer of f on [a, b] by golden-section search (f unimodal on the interval).
inline double golden_max(const std::function<double(double)> &f, double a, double b, int iterations = 200)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations && b - a > 1e-15; ++i)
    {
        if (fc > fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return f(0.5 * (a + b));
}

/// First zero of the real axis-symmetric pattern B(Theta), located by scan and bisection.
inline double first_null(const ModalWeights &d, int samples = 4000)
{
    auto b = [&](double t) { return beam_pattern_modal(d, t).real(); };
    double prev = 0.0;
    for (int i = 1; i <= samples; ++i)
    {
        const double t = pi * i / samples;
        if (b(t) * b(prev) <= 0.0)
        {
            double lo = prev, hi = t;
            for (int it = 0; it < 200; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                (b(lo) * b(mid) <= 0.0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = t;
    }
    return pi;
}

/// Magnitudes |B| of every local maximum of |B(Theta)| on (from, pi], each refined by golden
/// section; the end point pi is included when it is a maximum.
inline std::vector<double> sidelobe_peaks(const ModalWeights &d, double from, int samples = 20000)
{
    auto mag = [&](double t) { return std::abs(beam_pattern_modal(d, t)); };
    std::vector<double> peaks;
    const double step = (pi - from) / samples;
    for (int i = 1; i < samples; ++i)
    {
        const double t = from + i * step;
        if (mag(t) >= mag(t - step) && mag(t) >= mag(t + step))
            peaks.push_back(golden_max(mag, t - step, t + step));
    }
    if (mag(pi) >= mag(pi - step))
        peaks.push_back(mag(pi));
    return peaks;
}

} // namespace sphbeam::testing
