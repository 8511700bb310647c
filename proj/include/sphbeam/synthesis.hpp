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

/** \file synthesis.hpp
 *
 *  \brief Steering of modal weights into SH-domain weights and their synthesis into per-loudspeaker
 *  weights through w_nm = G Y w.
 */

#pragma once

#include "radiation.hpp"
#include "sphmath.hpp"
#include "types.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace sphbeam
{

/// SH-domain weights w_nm for a given look direction.
struct SteeredWeights
{
    SHVector w_nm;
    Direction look;
    double k = 0.0;
    double r0 = 0.0;
};

/// Per-loudspeaker weights w_l.
struct UnitWeights
{
    std::vector<cplx> w;
};

/// w_nm = d_n / b_n(k r0) conj(Y_n^m(look)).
inline SteeredWeights steer(const ModalWeights &d, Direction look, double k, double r0, const Medium &medium)
{
    const int order = d.order();
    const auto y = sph_harmonics(order, look);
    SteeredWeights out{SHVector(order), look, k, r0};
    for (int n = 0; n <= order; ++n)
    {
        const cplx b = radial_far(n, k, r0, medium);
        const cplx scale = d[static_cast<std::size_t>(n)] / b;
        if (!(std::abs(b) > 0.0) || !std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
            throw NumericalError("steer: radial term b_" + std::to_string(n) + " vanishes at k r0 = " +
                                 std::to_string(k * r0));
        for (int m = -n; m <= n; ++m)
        {
            const auto q = static_cast<std::size_t>(sh_index(n, m));
            out.w_nm[q] = scale * std::conj(y[q]);
        }
    }
    return out;
}

/// Y (rows q = n^2+n+m, columns l, entries conj(Y_n^m(cap_l))), diag(G) = g_n repeated 2n+1 times,
/// and the SVD pseudo-inverse of Y.
struct TransformMatrices
{
    int order = 0;
    Eigen::MatrixXcd y;
    Eigen::VectorXd g;
    Eigen::MatrixXcd y_pinv;
    Eigen::VectorXd singular_values;
};

/// Singular values below this fraction of the largest are discarded by pseudo_inverse.
inline constexpr double pinv_relative_tolerance = 1e-10;

/// Moore-Penrose pseudo-inverse from a thin SVD; returns the numerical rank through `rank`.
inline Eigen::MatrixXcd pseudo_inverse(const Eigen::MatrixXcd &a, int *rank = nullptr,
                                       Eigen::VectorXd *singular_values = nullptr)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &s = svd.singularValues();
    const double cutoff = s.size() > 0 ? pinv_relative_tolerance * s(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cutoff)
        {
            inv(i) = 1.0 / s(i);
            ++r;
        }
    if (rank)
        *rank = r;
    if (singular_values)
        *singular_values = s;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

inline TransformMatrices build_transform(const ArrayGeometry &geom, int order)
{
    geom.validate();
    if (order < 0)
        throw DomainError("build_transform: order must be >= 0");
    const int rows = sh_count(order);
    const int units = static_cast<int>(geom.size());
    if (rows > units)
        throw ConfigError("order: (N+1)^2 = " + std::to_string(rows) + " exceeds the number of loudspeakers L = " +
                          std::to_string(units) + "; require (N+1)^2 <= L");

    TransformMatrices t;
    t.order = order;
    t.y.resize(rows, units);
    for (int l = 0; l < units; ++l)
    {
        const auto y = sph_harmonics(order, geom.caps[static_cast<std::size_t>(l)]);
        for (int q = 0; q < rows; ++q)
            t.y(q, l) = std::conj(y[static_cast<std::size_t>(q)]);
    }
    t.g.resize(rows);
    for (int q = 0; q < rows; ++q)
        t.g(q) = cap_gain(sh_unpack(q).n, geom.alpha);

    int rank = 0;
    t.y_pinv = pseudo_inverse(t.y, &rank, &t.singular_values);
    if (rank < rows)
        throw NumericalError("build_transform: spherical-harmonic matrix has rank " + std::to_string(rank) +
                             " < " + std::to_string(rows) + "; cap layout cannot control order " +
                             std::to_string(order));
    return t;
}

/// w = Y^+ G^-1 w_nm, the minimum-norm solution of G Y w = w_nm.
inline UnitWeights unit_weights(const SteeredWeights &steered, const TransformMatrices &t)
{
    if (steered.w_nm.order() != t.order)
        throw ConfigError("unit_weights: weights of order " + std::to_string(steered.w_nm.order()) +
                          " do not match transform of order " + std::to_string(t.order));
    Eigen::VectorXcd rhs(t.g.size());
    for (Eigen::Index q = 0; q < rhs.size(); ++q)
        rhs(q) = steered.w_nm[static_cast<std::size_t>(q)] / t.g(q);
    const Eigen::VectorXcd w = t.y_pinv * rhs;
    return {std::vector<cplx>(w.data(), w.data() + w.size())};
}

/// w_nm = G Y w.
inline SHVector forward_weights(const UnitWeights &w, const TransformMatrices &t)
{
    if (static_cast<Eigen::Index>(w.w.size()) != t.y.cols())
        throw ConfigError("forward_weights: expected " + std::to_string(t.y.cols()) + " unit weights, got " +
                          std::to_string(w.w.size()));
    const Eigen::Map<const Eigen::VectorXcd> wv(w.w.data(), static_cast<Eigen::Index>(w.w.size()));
    const Eigen::VectorXcd out = t.g.asDiagonal() * (t.y * wv);
    return SHVector(t.order, std::vector<cplx>(out.data(), out.data() + out.size()));
}

} // namespace sphbeam
