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

/** \file metrics.hpp
 *
 *  \brief Directivity factor / index and white-noise gain, in modal closed form and in the
 *  integral (quadrature) and SH-coefficient forms used to cross-check them.
 */

#pragma once

#include "grid.hpp"
#include "radiation.hpp"
#include "sphmath.hpp"
#include "types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>

namespace sphbeam
{

inline double to_db_power(double value) { return 10.0 * std::log10(value); }

/// Q = |sum d_n (2n+1)|^2 / sum |d_n|^2 (2n+1).
inline double directivity_factor(const ModalWeights &d)
{
    cplx num{};
    double den = 0.0;
    for (int n = 0; n <= d.order(); ++n)
    {
        num += d[static_cast<std::size_t>(n)] * (2.0 * n + 1.0);
        den += std::norm(d[static_cast<std::size_t>(n)]) * (2.0 * n + 1.0);
    }
    if (!(den > 0.0))
        throw NumericalError("directivity_factor: all-zero weights");
    return std::norm(num) / den;
}

inline double directivity_index_db(double q) { return to_db_power(q); }

/// Q = |B(look)|^2 / ((1/4pi) sum_j a_j |B(dir_j)|^2) for a pattern sampled on a quadrature grid.
/// `pattern_order` is the SH order of B; |B|^2 then has order 2 N, which the grid must integrate.
inline double directivity_factor_integral(const BeamPattern &pattern, const SamplingGrid &grid, int pattern_order)
{
    if (pattern.values.size() != grid.size())
        throw ConfigError("directivity_factor_integral: pattern has " + std::to_string(pattern.values.size()) +
                          " samples, grid has " + std::to_string(grid.size()));
    if (pattern_order > grid.order)
        throw ConfigError("directivity_factor_integral: grid order " + std::to_string(grid.order) +
                          " cannot integrate |B|^2 of order " + std::to_string(2 * pattern_order));
    double power = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        power += grid.weights[j] * std::norm(pattern.values[j]);
    if (!(power > 0.0))
        throw NumericalError("directivity_factor_integral: zero pattern");
    return std::norm(pattern.look_value) / (power / four_pi);
}

/// WNG = |sum d_n (2n+1)|^2 / sum (|d_n|^2 / |b_n(k r0)|^2) (2n+1).
inline double wng(const ModalWeights &d, double k, double r0, const Medium &medium)
{
    cplx num{};
    double den = 0.0;
    for (int n = 0; n <= d.order(); ++n)
    {
        const double a = 2.0 * n + 1.0;
        num += d[static_cast<std::size_t>(n)] * a;
        den += std::norm(d[static_cast<std::size_t>(n)]) / std::norm(radial_far(n, k, r0, medium)) * a;
    }
    if (!(den > 0.0))
        throw NumericalError("wng: all-zero weights");
    return std::norm(num) / den;
}

/// WNG from SH-domain weights: |sum_nm b_n w_nm Y_n^m(look)|^2 / ((1/4pi) sum_nm |w_nm|^2).
/// The 1/(4 pi) makes the denominator the mean-square of w(theta, phi) over the sphere, which puts
/// this form on the same scale as wng() for axis-symmetric weights.
inline double wng_coefficients(const SHVector &w_nm, Direction look, double k, double r0, const Medium &medium)
{
    const auto y = sph_harmonics(w_nm.order(), look);
    cplx num{};
    double den = 0.0;
    for (int n = 0; n <= w_nm.order(); ++n)
    {
        const cplx b = radial_far(n, k, r0, medium);
        for (int m = -n; m <= n; ++m)
        {
            const auto q = static_cast<std::size_t>(sh_index(n, m));
            num += b * w_nm[q] * y[q];
            den += std::norm(w_nm[q]);
        }
    }
    if (!(den > 0.0))
        throw NumericalError("wng_coefficients: all-zero weights");
    return std::norm(num) / (den / four_pi);
}

/// Sum of squared unit-weight magnitudes; a per-loudspeaker drive-effort diagnostic.
inline double unit_weight_power(std::span<const cplx> w)
{
    double s = 0.0;
    for (const auto &v : w)
        s += std::norm(v);
    return s;
}

// ------------------------------------------------------------------------------------------------
// Generalized Rayleigh-quotient forms
// ------------------------------------------------------------------------------------------------

struct RayleighPair
{
    Eigen::MatrixXcd numerator;
    Eigen::MatrixXcd denominator;
};

inline Eigen::VectorXcd to_eigen(const ModalWeights &d)
{
    Eigen::VectorXcd v(d.order() + 1);
    for (int n = 0; n <= d.order(); ++n)
        v(n) = d[static_cast<std::size_t>(n)];
    return v;
}

inline double rayleigh_quotient(const Eigen::VectorXcd &d, const RayleighPair &pair)
{
    const cplx num = d.dot(pair.numerator * d);
    const cplx den = d.dot(pair.denominator * d);
    if (!(std::abs(den) > 0.0))
        throw NumericalError("rayleigh_quotient: zero denominator");
    return (num / den).real();
}

/// Q = d^H (a a^T) d / d^H diag(a) d.
inline RayleighPair directivity_matrices(int order)
{
    Eigen::VectorXd a(order + 1);
    for (int n = 0; n <= order; ++n)
        a(n) = 2.0 * n + 1.0;
    return {(a * a.transpose()).cast<cplx>(), a.asDiagonal().toDenseMatrix().cast<cplx>()};
}

/// WNG = d^H (a a^T) d / d^H diag(c) d with c_n = (2n+1) / |b_n(k r0)|^2.
inline RayleighPair wng_matrices(int order, double k, double r0, const Medium &medium)
{
    Eigen::VectorXd a(order + 1), c(order + 1);
    for (int n = 0; n <= order; ++n)
    {
        a(n) = 2.0 * n + 1.0;
        c(n) = a(n) / std::norm(radial_far(n, k, r0, medium));
    }
    return {(a * a.transpose()).cast<cplx>(), c.asDiagonal().toDenseMatrix().cast<cplx>()};
}

struct MetricReport
{
    double q = 0.0;
    double di_db = 0.0;
    double wng = 0.0;
    double wng_db = 0.0;
    double k = 0.0;
    double r0 = 0.0;
};

inline MetricReport evaluate_metrics(const ModalWeights &d, double k, double r0, const Medium &medium)
{
    MetricReport report;
    report.q = directivity_factor(d);
    report.di_db = directivity_index_db(report.q);
    report.wng = wng(d, k, r0, medium);
    report.wng_db = to_db_power(report.wng);
    report.k = k;
    report.r0 = r0;
    return report;
}

} // namespace sphbeam
