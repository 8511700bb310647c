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

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

#include <cmath>
#include <random>

using namespace sphbeam;
using namespace sphbeam::testing;
using Catch::Approx;

namespace
{

const Medium air{};
const double r0 = 0.15;
const double mic_radius = 0.57;

struct Run
{
    double versus_design;   // measured grid samples against the designed B(Theta)
    double versus_analysis; // order-N_a SFT of the measurement against the model, off the grid
};

// Near-field-compensated N = 2 design on the dodecahedron, measured on the N_a = 10 Gaussian grid.
Run measure(double frequency, bool max_wng, Direction look)
{
    const auto geom = dodecahedron(r0);
    const auto t = build_transform(geom, 2);
    const auto grid = gaussian_grid(10, mic_radius);
    const double k = wavenumber(frequency, air);
    const auto d = max_wng ? max_wng_weights(2, k, r0, air) : max_directivity_weights(2);
    const auto w = unit_weights(near_field_steer(d, look, k, mic_radius, r0, air), t);
    const auto h = transfer_matrix(geom, grid, k, air);
    const auto measured = to_pattern(virtual_measure(w, h), k, mic_radius);
    const auto designed = sample_modal_pattern(d, look, grid.directions).values;

    const auto check = random_directions(400, 5);
    const auto analysed = inverse_sft(discrete_sft(measured, grid, grid.order), check);
    const auto model = to_pattern(model_pressure(geom, w, check, mic_radius, k, air, h.n_sim), k, mic_radius);
    const std::vector<double> uniform(check.size(), 1.0);
    return {pattern_error(measured, designed, grid.weights), pattern_error(analysed, model, uniform)};
}

} // namespace

// ================================================================================================
// Sampling grid and spherical Fourier transform
// ================================================================================================

TEST_CASE("gaussian_grid: node counts and weights")
{
    CHECK(gaussian_grid(10, mic_radius).size() == 242);
    CHECK(gaussian_grid(1, 1.0).size() == 8);
    for (int order : {0, 1, 4, 10})
    {
        const auto grid = gaussian_grid(order, 2.0);
        double total = 0.0;
        for (double a : grid.weights)
            total += a;
        CHECK(total == Approx(four_pi).epsilon(1e-13));
        CHECK(grid.radius == 2.0);
        for (std::size_t j = 1; j < grid.size(); ++j)
            CHECK(grid.directions[j].theta >= grid.directions[j - 1].theta);
    }
    CHECK_THROWS_AS(gaussian_grid(-1, 1.0), DomainError);
    CHECK_THROWS_AS(gaussian_grid(2, 0.0), DomainError);
}

TEST_CASE("discrete_sft: harmonics, constant, linearity")
{
    const auto grid = gaussian_grid(10, 1.0);
    std::vector<cplx> y21(grid.size()), one(grid.size(), 1.0);
    for (std::size_t j = 0; j < grid.size(); ++j)
        y21[j] = sph_harmonic(2, 1, grid.directions[j].theta, grid.directions[j].phi);
    const auto f = discrete_sft(y21, grid, 10);
    for (std::size_t q = 0; q < f.size(); ++q)
        CHECK(std::abs(f[q] - (q == 7 ? 1.0 : 0.0)) < 1e-10);
    const auto c = discrete_sft(one, grid, 10);
    CHECK(std::abs(c[0] - std::sqrt(four_pi)) < 1e-12);

    // every harmonic up to the grid order is recovered exactly
    for (int n = 0; n <= 10; ++n)
        for (int m = -n; m <= n; ++m)
        {
            std::vector<cplx> s(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j)
                s[j] = sph_harmonic(n, m, grid.directions[j].theta, grid.directions[j].phi);
            const auto g = discrete_sft(s, grid, 10);
            for (std::size_t q = 0; q < g.size(); ++q)
                REQUIRE(std::abs(g[q] - (static_cast<int>(q) == sh_index(n, m) ? 1.0 : 0.0)) < 1e-10);
        }

    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    std::vector<cplx> a(grid.size()), b(grid.size()), mix(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
    {
        a[j] = {nd(rng), nd(rng)};
        b[j] = {nd(rng), nd(rng)};
        mix[j] = 2.0 * a[j] - cplx(0, 1) * b[j];
    }
    const auto fa = discrete_sft(a, grid, 6), fb = discrete_sft(b, grid, 6), fm = discrete_sft(mix, grid, 6);
    for (std::size_t q = 0; q < fm.size(); ++q)
        CHECK(std::abs(fm[q] - (2.0 * fa[q] - cplx(0, 1) * fb[q])) < 1e-12);

    CHECK_THROWS_AS(discrete_sft(a, grid, 11), ConfigError);
    CHECK_THROWS_AS(discrete_sft(std::vector<cplx>(3), grid, 2), ConfigError);
}

TEST_CASE("inverse_sft: inverts discrete_sft for band-limited samples")
{
    const auto grid = gaussian_grid(6, 1.0);
    SHVector f(6);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    for (std::size_t q = 0; q < f.size(); ++q)
        f[q] = {nd(rng), nd(rng)};
    const auto back = discrete_sft(inverse_sft(f, grid.directions), grid, 6);
    for (std::size_t q = 0; q < f.size(); ++q)
        CHECK(std::abs(back[q] - f[q]) < 1e-12);
}

// ================================================================================================
// Near-field compensation
// ================================================================================================

TEST_CASE("near_field_steer: far-field limit")
{
    const double k = 1.1 / r0;
    const auto d = max_wng_weights(2, k, r0, air);
    const Direction look{0.7, 2.1};
    const auto far = steer(d, look, k, r0, air);
    const auto near = near_field_steer(d, look, k, 1e4 * 3 / k * 1.01, r0, air);
    for (std::size_t q = 0; q < far.w_nm.size(); ++q)
        CHECK(std::abs(near.w_nm[q] - far.w_nm[q]) < 1e-2 * std::abs(far.w_nm[q]) + 1e-300);
    CHECK_THROWS_AS(near_field_steer(d, look, k, r0, r0, air), DomainError);
}

TEST_CASE("near_field_steer: compensation is non-trivial at the measurement radius")
{
    const double k = wavenumber(400.0, air);
    const auto d = max_wng_weights(2, k, r0, air);
    const auto far = steer(d, {0.0, 0.0}, k, r0, air);
    const auto near = near_field_steer(d, {0.0, 0.0}, k, mic_radius, r0, air);
    double worst = 0.0;
    for (int n = 0; n <= 2; ++n)
        worst = std::max(worst, std::abs(near.w_nm(n, 0) - far.w_nm(n, 0)) / std::abs(far.w_nm(n, 0)));
    CHECK(worst > 0.01);
}

TEST_CASE("near_field_steer: controlled orders reproduce B(Theta) on the measurement sphere")
{
    const double k = wavenumber(400.0, air);
    const auto d = dolph_chebyshev_weights(2, 20.0);
    const Direction look{1.2, -0.4};
    const auto w = near_field_steer(d, look, k, mic_radius, r0, air);
    // radiate exactly the designed SH velocity coefficients (no uncontrolled orders)
    const auto dirs = random_directions(200, 9);
    const auto p = to_pattern(pressure_field(w.w_nm, k, mic_radius, dirs, dodecahedron(r0), air, 2), k, mic_radius);
    for (std::size_t i = 0; i < dirs.size(); ++i)
        CHECK(std::abs(p[i] - beam_pattern_modal(d, great_circle_angle(look, dirs[i]))) < 1e-8);
}

// ================================================================================================
// Transfer matrix and virtual measurement
// ================================================================================================

TEST_CASE("transfer_matrix: shape, columns and linearity")
{
    const auto geom = dodecahedron(r0);
    const auto grid = gaussian_grid(10, mic_radius);
    const double k = wavenumber(400.0, air);
    const auto t = transfer_matrix(geom, grid, k, air);
    CHECK(t.h.rows() == 242);
    CHECK(t.h.cols() == 12);
    CHECK(t.n_sim == simulation_order(10));

    std::vector<cplx> v(12);
    v[4] = 1.0;
    const auto column = pressure_field(velocity_coeffs(geom, v, t.n_sim + 1), k, mic_radius, grid.directions, geom,
                                       air, t.n_sim);
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(std::abs(column[j] - t.h(static_cast<Eigen::Index>(j), 4)) < 1e-14 * std::abs(column[j]) + 1e-300);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    UnitWeights w{std::vector<cplx>(12)};
    for (auto &x : w.w)
        x = {nd(rng), nd(rng)};
    const auto p = virtual_measure(w, t);
    const auto direct = model_pressure(geom, w, grid.directions, mic_radius, k, air, t.n_sim);
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(std::abs(p[j] - direct[j]) < 1e-10 * std::abs(direct[j]));

    for (const auto &x : virtual_measure(UnitWeights{std::vector<cplx>(12)}, t))
        CHECK(x == cplx{});
    CHECK_THROWS_AS(virtual_measure(UnitWeights{std::vector<cplx>(5)}, t), ConfigError);
    CHECK_THROWS_AS(transfer_matrix(geom, gaussian_grid(2, 0.1), k, air), ConfigError);
}

TEST_CASE("virtual_measure: perturbations are seeded and inactive by default")
{
    const auto geom = dodecahedron(r0);
    const auto grid = gaussian_grid(4, mic_radius);
    const double k = wavenumber(400.0, air);
    const auto t = transfer_matrix(geom, grid, k, air);
    UnitWeights w{std::vector<cplx>(12, 1.0)};
    w.w[0] = 2.0;
    const auto clean = virtual_measure(w, t);
    CHECK(virtual_measure(w, t, Perturbation{}) == clean);
    const Perturbation pert{0.05, 0.02, 0.01, 42};
    const auto a = virtual_measure(w, t, pert), b = virtual_measure(w, t, pert);
    CHECK(a == b);
    auto other = pert;
    other.seed = 43;
    CHECK(virtual_measure(w, t, other) != a);
    CHECK(pattern_error(a, clean, grid.weights) > 1e-4);
    CHECK(pattern_error(a, clean, grid.weights) < 0.2);
}

// ================================================================================================
// Pattern comparison
// ================================================================================================

TEST_CASE("pattern_error: examples")
{
    const auto grid = gaussian_grid(4, 1.0);
    std::vector<cplx> ref(grid.size()), orth(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
    {
        ref[j] = sph_harmonic(1, 0, grid.directions[j].theta, grid.directions[j].phi);
        orth[j] = sph_harmonic(2, -1, grid.directions[j].theta, grid.directions[j].phi);
    }
    CHECK(pattern_error(ref, ref, grid.weights) == 0.0);
    auto twice = ref;
    for (auto &v : twice)
        v *= cplx(2.0, 0.0);
    CHECK(pattern_error(twice, ref, grid.weights) < 1e-15);
    const double eps = 0.03;
    auto noisy = ref;
    for (std::size_t j = 0; j < grid.size(); ++j)
        noisy[j] += eps * orth[j];
    // both fields have unit quadrature norm
    CHECK(pattern_error(noisy, ref, grid.weights) == Approx(eps).epsilon(1e-12));
    CHECK_THROWS_AS(pattern_error(ref, std::vector<cplx>(3), grid.weights), ConfigError);
    CHECK_THROWS_AS(pattern_error(ref, std::vector<cplx>(ref.size()), grid.weights), NumericalError);
}

TEST_CASE("normalize_to_look: divides by the node closest to the look direction")
{
    const auto grid = gaussian_grid(10, 1.0);
    const Direction look{1.0, 1.0};
    const auto pattern = sample_modal_pattern(max_directivity_weights(2), look, grid.directions);
    const auto normalized = normalize_to_look(pattern.values, grid.directions, look);
    const auto j = nearest_direction(grid.directions, look);
    CHECK(normalized[j] == cplx(1.0, 0.0));
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(great_circle_angle(look, grid.directions[i]) >= great_circle_angle(look, grid.directions[j]));
}

// ================================================================================================
// End-to-end
// ================================================================================================

TEST_CASE("wavenumbers of the measurement configuration")
{
    CHECK(wavenumber(400.0, air) * r0 == Approx(1.10).margin(0.01));
    CHECK(wavenumber(400.0, air) * mic_radius == Approx(4.18).margin(0.05));
    CHECK(wavenumber(1000.0, air) * r0 == Approx(2.75).margin(0.01));
    CHECK(wavenumber(1000.0, air) * mic_radius == Approx(10.45).margin(0.05));
}

TEST_CASE("measured against designed pattern: uncontrolled cap orders")
{
    // scipy reference of the same pipeline (independent Bessel, SH and pseudo-inverse code)
    const auto wng400 = measure(400.0, true, {0.3, 1.0});
    const auto di1000 = measure(1000.0, false, {2.0, 4.0});
    CHECK(wng400.versus_design == Approx(2.2772894011e-3).epsilon(1e-6));
    CHECK(measure(400.0, false, {0.0, 0.0}).versus_design == Approx(2.5115508769e-2).epsilon(1e-6));
    CHECK(di1000.versus_design == Approx(2.0738375133e-1).epsilon(1e-6));
    // independent of the look direction
    CHECK(measure(400.0, true, {2.5, 5.0}).versus_design == Approx(wng400.versus_design).epsilon(1e-6));
}

TEST_CASE("measured against designed pattern: grows with frequency")
{
    double previous_design = 0.0, previous_analysis = 0.0;
    for (double f : {400.0, 600.0, 800.0, 1000.0, 1200.0, 1500.0})
    {
        const auto run = measure(f, true, {1.0, 0.5});
        CAPTURE(f, run.versus_design, run.versus_analysis);
        CHECK(run.versus_design > previous_design);
        CHECK(run.versus_analysis > previous_analysis);
        previous_design = run.versus_design;
        previous_analysis = run.versus_analysis;
        if (f == 400.0)
            CHECK(run.versus_analysis < 1e-6);
    }
}
