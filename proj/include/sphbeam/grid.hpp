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

#pragma once

#include "sphmath.hpp"
#include "types.hpp"

#include <cmath>
#include <vector>

namespace sphbeam
{

/// Quadrature directions on a sphere of radius r. With the Gaussian scheme, sums
/// sum_j a_j f(dir_j) integrate f exactly whenever f is band-limited to order 2 N_a.
struct SamplingGrid
{
    int order = 0;
    double radius = 1.0;
    std::vector<Direction> directions;
    std::vector<double> weights;

    std::size_t size() const { return directions.size(); }
};

/// (N_a + 1) Gauss-Legendre elevations times 2(N_a + 1) equi-spaced azimuths, M = 2 (N_a + 1)^2 nodes.
/// Nodes are ordered elevation-major (theta ascending, then phi ascending).
inline SamplingGrid gaussian_grid(int order, double radius)
{
    if (order < 0)
        throw DomainError("gaussian_grid: order must be >= 0");
    if (!(radius > 0.0))
        throw DomainError("gaussian_grid: radius must be > 0");
    const auto rule = gauss_legendre(order + 1);
    const int azimuths = 2 * (order + 1);
    const double dphi = 2.0 * pi / azimuths;

    SamplingGrid grid;
    grid.order = order;
    grid.radius = radius;
    grid.directions.reserve(static_cast<std::size_t>(azimuths * (order + 1)));
    grid.weights.reserve(grid.directions.capacity());
    // nodes are ascending in cos(theta), so walk them backwards for ascending theta
    for (int i = order; i >= 0; --i)
        for (int a = 0; a < azimuths; ++a)
        {
            grid.directions.push_back({std::acos(rule.nodes[static_cast<std::size_t>(i)]), a * dphi});
            grid.weights.push_back(rule.weights[static_cast<std::size_t>(i)] * dphi);
        }
    return grid;
}

} // namespace sphbeam
