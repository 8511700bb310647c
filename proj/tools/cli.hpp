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

/** \file cli.hpp
 *
 *  \brief Run configuration, geometry files and output writers behind the sphbeam command line.
 *  Angles are degrees at this boundary and radians inside the library.
 */

#pragma once

#include "sphbeam/sphbeam.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sphbeam::cli
{

using json = nlohmann::json;

inline double to_rad(double deg) { return deg * pi / 180.0; }
inline double to_deg(double rad) { return rad * 180.0 / pi; }

enum class Method
{
    max_directivity,
    max_wng,
    dolph_chebyshev
};

inline Method parse_method(const std::string &name)
{
    if (name == "max-di" || name == "max-directivity")
        return Method::max_directivity;
    if (name == "max-wng")
        return Method::max_wng;
    if (name == "dolph-chebyshev" || name == "dolph")
        return Method::dolph_chebyshev;
    throw ConfigError("method: unknown design method '" + name + "' (expected max-di, max-wng or dolph-chebyshev)");
}

inline std::string method_name(Method m)
{
    switch (m)
    {
    case Method::max_directivity:
        return "max-di";
    case Method::max_wng:
        return "max-wng";
    case Method::dolph_chebyshev:
        return "dolph-chebyshev";
    }
    return "";
}

/// Everything that determines the outputs of a run.
struct RunConfig
{
    ArrayGeometry geometry = dodecahedron();
    std::string geometry_source = "dodecahedron";
    Medium medium{};
    Method method = Method::max_wng;
    int order = 2;
    std::vector<double> frequencies{400.0};
    Direction look{0.0, 0.0}; // radians
    double radius = 0.57;
    int analysis_order = 10;
    double sidelobe_db = 25.0;
    bool near_field = false;
    Perturbation perturbation{};
    std::string format = "json";

    void validate() const
    {
        geometry.validate();
        medium.validate();
        if (order < 0)
            throw ConfigError("order: must be >= 0");
        if (method == Method::dolph_chebyshev && order < 1)
            throw ConfigError("order: dolph-chebyshev requires order >= 1");
        if (frequencies.empty())
            throw ConfigError("freq: at least one frequency is required");
        for (double f : frequencies)
            if (!(f > 0.0) || !std::isfinite(f))
                throw ConfigError("freq: frequencies must be positive");
        if (!(look.theta >= 0.0 && look.theta <= pi) || !std::isfinite(look.phi))
            throw ConfigError("look: elevation must lie in [0, 180] degrees");
        if (!(radius > geometry.r0))
            throw ConfigError("radius: microphone radius must exceed the array radius r0");
        if (analysis_order < 0)
            throw ConfigError("analysis-order: must be >= 0");
        if (!(sidelobe_db > 0.0))
            throw ConfigError("sidelobe: must be > 0 dB");
        if (perturbation.gain < 0.0 || perturbation.phase < 0.0 || perturbation.noise < 0.0)
            throw ConfigError("perturb: standard deviations must be >= 0");
        if (format != "json" && format != "csv")
            throw ConfigError("format: expected json or csv");
    }
};

/// Parses "THETA,PHI" in degrees.
inline Direction parse_look(const std::string &text)
{
    std::istringstream in(text);
    double theta = 0.0, phi = 0.0;
    char comma = 0;
    if (!(in >> theta >> comma >> phi) || comma != ',' || !(in >> std::ws).eof())
        throw ConfigError("look: expected THETA,PHI in degrees, got '" + text + "'");
    return {to_rad(theta), to_rad(phi)};
}

/// Parses "HZ[,HZ...]".
inline std::vector<double> parse_frequencies(const std::string &text)
{
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        std::size_t used = 0;
        double f = 0.0;
        try
        {
            f = std::stod(item, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw ConfigError("freq: cannot parse '" + item + "'");
        out.push_back(f);
    }
    if (out.empty())
        throw ConfigError("freq: at least one frequency is required");
    return out;
}

/// Parses "gain=G,phase=DEG,noise=N,seed=S" (any subset). Gain and noise are relative standard
/// deviations, phase a standard deviation in degrees.
inline Perturbation parse_perturbation(const std::string &text)
{
    Perturbation p;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("perturb: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        try
        {
            if (key == "gain")
                p.gain = std::stod(value);
            else if (key == "phase")
                p.phase = to_rad(std::stod(value));
            else if (key == "noise")
                p.noise = std::stod(value);
            else if (key == "seed")
                p.seed = std::stoull(value);
            else
                throw ConfigError("perturb: unknown key '" + key + "' (expected gain, phase, noise, seed)");
        }
        catch (const std::logic_error &e)
        {
            if (dynamic_cast<const ConfigError *>(&e))
                throw;
            throw ConfigError("perturb." + key + ": cannot parse '" + value + "'");
        }
    }
    return p;
}

/// Geometry file:
///   {"preset": "dodecahedron", "r0": 0.15, "alpha": 0.3}
/// or
///   {"r0": 0.15, "alpha": 0.3, "caps": [[theta_deg, phi_deg], ...]}
/// Optional "medium": {"rho0": 1.21, "c": 343}.
inline void load_geometry(RunConfig &config, const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("geometry: cannot open '" + path + "'");
    json doc;
    try
    {
        in >> doc;
    }
    catch (const json::exception &e)
    {
        throw ConfigError("geometry: invalid JSON in '" + path + "': " + e.what());
    }
    try
    {
        const double r0 = doc.value("r0", 0.15);
        const double alpha = doc.value("alpha", 0.3);
        if (doc.contains("caps"))
        {
            if (doc.contains("preset"))
                throw ConfigError("geometry: give either preset or caps, not both");
            ArrayGeometry g{r0, alpha, {}};
            for (std::size_t i = 0; i < doc.at("caps").size(); ++i)
            {
                const auto &cap = doc.at("caps").at(i);
                if (!cap.is_array() || cap.size() != 2)
                    throw ConfigError("geometry.caps[" + std::to_string(i) + "]: expected [theta_deg, phi_deg]");
                g.caps.push_back({to_rad(cap.at(0).get<double>()), to_rad(cap.at(1).get<double>())});
            }
            config.geometry = g;
        }
        else
        {
            const std::string preset = doc.value("preset", std::string("dodecahedron"));
            if (preset != "dodecahedron")
                throw ConfigError("geometry.preset: unknown preset '" + preset + "'");
            config.geometry = dodecahedron(r0, alpha);
        }
        if (doc.contains("medium"))
        {
            config.medium.rho0 = doc.at("medium").value("rho0", config.medium.rho0);
            config.medium.c = doc.at("medium").value("c", config.medium.c);
        }
    }
    catch (const json::exception &e)
    {
        throw ConfigError("geometry: " + std::string(e.what()));
    }
    config.geometry_source = path;
}

/// Canonical JSON of the configuration (keys sorted, angles in degrees).
inline json config_json(const RunConfig &c)
{
    json caps = json::array();
    for (const auto &cap : c.geometry.caps)
        caps.push_back({to_deg(cap.theta), to_deg(cap.phi)});
    return {
        {"geometry", {{"r0_m", c.geometry.r0}, {"alpha_rad", c.geometry.alpha}, {"caps_deg", caps}}},
        {"medium", {{"rho0_kg_m3", c.medium.rho0}, {"c_m_s", c.medium.c}}},
        {"method", method_name(c.method)},
        {"order", c.order},
        {"frequencies_hz", c.frequencies},
        {"look_deg", {to_deg(c.look.theta), to_deg(c.look.phi)}},
        {"radius_m", c.radius},
        {"analysis_order", c.analysis_order},
        {"sidelobe_db", c.sidelobe_db},
        {"near_field", c.near_field},
        {"perturbation",
         {{"gain", c.perturbation.gain},
          {"phase_deg", to_deg(c.perturbation.phase)},
          {"noise", c.perturbation.noise},
          {"seed", c.perturbation.seed}}},
    };
}

/// 64-bit FNV-1a of the canonical configuration, as 16 hex digits.
inline std::string config_hash(const RunConfig &c)
{
    const std::string text = config_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text)
    {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

inline json complex_array(std::span<const cplx> values)
{
    json out = json::array();
    for (const auto &v : values)
        out.push_back({v.real(), v.imag()});
    return out;
}

/// Packed SH coefficients as a list of {n, m, re, im}.
inline json sh_json(const SHVector &w)
{
    json out = json::array();
    for (std::size_t q = 0; q < w.size(); ++q)
    {
        const auto idx = sh_unpack(static_cast<int>(q));
        out.push_back({{"n", idx.n}, {"m", idx.m}, {"re", w[q].real()}, {"im", w[q].imag()}});
    }
    return out;
}

inline ModalWeights design_weights(const RunConfig &c, double k)
{
    switch (c.method)
    {
    case Method::max_directivity:
        return max_directivity_weights(c.order);
    case Method::max_wng:
        return max_wng_weights(c.order, k, c.geometry.r0, c.medium);
    case Method::dolph_chebyshev:
        return dolph_chebyshev_weights(c.order, c.sidelobe_db);
    }
    throw ConfigError("method: unset");
}

inline SteeredWeights steered_weights(const RunConfig &c, const ModalWeights &d, double k)
{
    if (c.near_field)
        return near_field_steer(d, c.look, k, c.radius, c.geometry.r0, c.medium);
    return steer(d, c.look, k, c.geometry.r0, c.medium);
}

/// 2 degree balloon grid: theta 0..180, phi 0..358.
inline std::vector<Direction> balloon_directions(double step_deg = 2.0)
{
    std::vector<Direction> dirs;
    const int nt = static_cast<int>(std::lround(180.0 / step_deg));
    const int np = static_cast<int>(std::lround(360.0 / step_deg));
    for (int i = 0; i <= nt; ++i)
        for (int j = 0; j < np; ++j)
            dirs.push_back({to_rad(i * step_deg), to_rad(j * step_deg)});
    return dirs;
}

/// Cross-section along phi at fixed theta (default the horizontal plane), phi 0..359 in 1 degree steps.
inline std::vector<Direction> cross_section_directions(double theta = pi / 2)
{
    std::vector<Direction> dirs;
    for (int j = 0; j < 360; ++j)
        dirs.push_back({theta, to_rad(j)});
    return dirs;
}

/// Pattern table: columns theta_deg, phi_deg, re, im, abs, db with db = 20 log10 |B / B(look)|.
struct PatternTable
{
    std::string name;
    std::vector<Direction> directions;
    std::vector<cplx> values;
    cplx look_value;
};

inline double pattern_db(cplx value, cplx look_value)
{
    const double ratio = std::abs(value) / std::abs(look_value);
    return ratio > 0.0 ? 20.0 * std::log10(ratio) : -400.0;
}

inline std::string format_double(double v)
{
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

inline void write_csv(std::ostream &out, const PatternTable &t, const std::vector<std::string> &header)
{
    for (const auto &h : header)
        out << "# " << h << "\n";
    out << "theta_deg,phi_deg,re,im,abs,db\n";
    for (std::size_t j = 0; j < t.values.size(); ++j)
    {
        const auto &v = t.values[j];
        out << format_double(to_deg(t.directions[j].theta)) << ',' << format_double(to_deg(t.directions[j].phi))
            << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ',' << format_double(std::abs(v))
            << ',' << format_double(pattern_db(v, t.look_value)) << "\n";
    }
}

inline json pattern_json(const PatternTable &t)
{
    json rows = json::array();
    for (std::size_t j = 0; j < t.values.size(); ++j)
    {
        const auto &v = t.values[j];
        rows.push_back({to_deg(t.directions[j].theta), to_deg(t.directions[j].phi), v.real(), v.imag(), std::abs(v),
                        pattern_db(v, t.look_value)});
    }
    return {{"columns", {"theta_deg", "phi_deg", "re", "im", "abs", "db"}}, {"rows", rows}};
}

} // namespace sphbeam::cli
