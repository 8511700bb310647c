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

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphbeam
{

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi = 4.0 * std::numbers::pi;

// Argument outside the mathematical domain of an operation (|x| > 1, |m| > n, x <= 0, ...).
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

// Invalid configuration or inconsistent inputs (array sizes, order vs. number of units).
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// Rank loss, vanishing radial terms, truncation that fails to converge.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A point on the unit sphere: elevation theta measured down from +z, azimuth phi from +x towards +y.
/// Radians throughout the library; the CLI converts from degrees.
struct Direction
{
    double theta = 0.0;
    double phi = 0.0;
};

/// Axis-symmetric modal weights d_n, n = 0..N.
struct ModalWeights
{
    std::vector<cplx> d;
    std::optional<double> k; // wavenumber the design was made for, if frequency dependent

    ModalWeights() = default;
    explicit ModalWeights(std::vector<cplx> values, std::optional<double> wavenumber = std::nullopt)
        : d(std::move(values)), k(wavenumber)
    {
        if (d.empty())
            throw ConfigError("ModalWeights: at least one order is required");
        for (const auto &v : d)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NumericalError("ModalWeights: non-finite coefficient");
    }

    int order() const { return static_cast<int>(d.size()) - 1; }
    const cplx &operator[](std::size_t n) const { return d[n]; }
    cplx &operator[](std::size_t n) { return d[n]; }
};

} // namespace sphbeam
