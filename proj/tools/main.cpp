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

// sphbeam: design, steer, synthesize, simulate, metrics and grid commands.
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace sphbeam;
using namespace sphbeam::cli;

namespace
{

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct Options
{
    std::string geometry, method = "max-wng", freq = "400", look = "0,0", perturb, out, format = "json";
    int order = 2, analysis_order = 10;
    double radius = 0.57, sidelobe = 25.0;
    bool near_field = false;
};

void add_options(CLI::App &cmd, Options &o)
{
    cmd.add_option("--geometry", o.geometry, "Geometry JSON file (default: dodecahedron, r0 0.15 m, alpha 0.3 rad)");
    cmd.add_option("--method", o.method, "Design method: max-di, max-wng, dolph-chebyshev")->capture_default_str();
    cmd.add_option("--order", o.order, "Beamformer order N")->capture_default_str();
    cmd.add_option("--freq", o.freq, "Frequencies in Hz, comma separated")->capture_default_str();
    cmd.add_option("--look", o.look, "Look direction THETA,PHI in degrees")->capture_default_str();
    cmd.add_option("--radius", o.radius, "Microphone radius in m")->capture_default_str();
    cmd.add_option("--analysis-order", o.analysis_order, "Gaussian grid order N_a")->capture_default_str();
    cmd.add_option("--sidelobe", o.sidelobe, "Dolph-Chebyshev side-lobe level in dB")->capture_default_str();
    cmd.add_flag("--near-field", o.near_field, "Compensate steering for the microphone radius");
    cmd.add_option("--perturb", o.perturb, "gain=G,phase=DEG,noise=N,seed=S");
    cmd.add_option("--out", o.out, "Output directory (default: stdout)");
    cmd.add_option("--format", o.format, "Pattern output format: json or csv")->capture_default_str();
}

RunConfig make_config(const Options &o)
{
    RunConfig c;
    if (!o.geometry.empty())
        load_geometry(c, o.geometry);
    c.method = parse_method(o.method);
    c.order = o.order;
    c.frequencies = parse_frequencies(o.freq);
    c.look = parse_look(o.look);
    c.radius = o.radius;
    c.analysis_order = o.analysis_order;
    c.sidelobe_db = o.sidelobe;
    c.near_field = o.near_field;
    if (!o.perturb.empty())
        c.perturbation = parse_perturbation(o.perturb);
    c.format = o.format;
    c.validate();
    return c;
}

json header(const std::string &command, const RunConfig &c)
{
    return {{"tool", "sphbeam"},
            {"command", command},
            {"config", config_json(c)},
            {"config_hash", config_hash(c)},
            {"units",
             {{"angles", "deg"},
              {"frequency", "Hz"},
              {"wavenumber", "rad/m"},
              {"lengths", "m"},
              {"di", "dB (10 log10 Q)"},
              {"wng", "dB (10 log10)"},
              {"complex", "[re, im]"}}}};
}

json frequency_entry(const RunConfig &c, double f)
{
    const double k = wavenumber(f, c.medium);
    return {{"freq_hz", f}, {"k_rad_m", k}, {"kr0", k * c.geometry.r0}, {"kr", k * c.radius}};
}

json metrics_entry(const ModalWeights &d, double k, const RunConfig &c)
{
    const auto m = evaluate_metrics(d, k, c.geometry.r0, c.medium);
    return {{"q", m.q}, {"di_db", m.di_db}, {"wng", m.wng}, {"wng_db", m.wng_db}};
}

class Output
{
  public:
    explicit Output(std::string dir) : dir_(std::move(dir))
    {
        if (!dir_.empty())
        {
            std::error_code ec;
            std::filesystem::create_directories(dir_, ec);
            if (ec)
                throw ConfigError("out: cannot create directory '" + dir_ + "': " + ec.message());
        }
    }

    bool to_stdout() const { return dir_.empty(); }

    void json_document(const std::string &name, const json &doc) const
    {
        if (to_stdout())
        {
            std::cout << doc.dump(2) << "\n";
            return;
        }
        auto out = open(name);
        out << doc.dump(2) << "\n";
    }

    std::ofstream open(const std::string &name) const
    {
        const auto path = std::filesystem::path(dir_) / name;
        std::ofstream out(path);
        if (!out)
            throw ConfigError("out: cannot write '" + path.string() + "'");
        return out;
    }

  private:
    std::string dir_;
};

int cmd_design(const RunConfig &c, const Output &out, const std::string &command)
{
    const bool needs_transform = command == "design" || command == "synthesize";
    std::optional<TransformMatrices> t;
    if (needs_transform)
        t = build_transform(c.geometry, c.order);
    auto doc = header(command, c);
    doc["results"] = json::array();
    for (double f : c.frequencies)
    {
        const double k = wavenumber(f, c.medium);
        const auto d = design_weights(c, k);
        auto entry = frequency_entry(c, f);
        if (command != "synthesize")
            entry["d"] = complex_array(d.d);
        if (command == "design" || command == "metrics")
            entry["metrics"] = metrics_entry(d, k, c);
        if (command != "metrics")
        {
            const auto steered = steered_weights(c, d, k);
            entry["w_nm"] = sh_json(steered.w_nm);
            if (t)
            {
                const auto w = unit_weights(steered, *t);
                entry["w_l"] = complex_array(w.w);
                entry["unit_weight_power"] = unit_weight_power(w.w);
                const auto back = forward_weights(w, *t);
                double dev = 0.0, scale = 0.0;
                for (std::size_t q = 0; q < back.size(); ++q)
                {
                    dev = std::max(dev, std::abs(back[q] - steered.w_nm[q]));
                    scale = std::max(scale, std::abs(steered.w_nm[q]));
                }
                entry["round_trip_error"] = scale > 0.0 ? dev / scale : dev;
            }
        }
        doc["results"].push_back(entry);
    }
    out.json_document(command + ".json", doc);
    return 0;
}

int cmd_simulate(const RunConfig &c, const Output &out)
{
    if (c.format == "csv" && out.to_stdout())
        throw ConfigError("format: csv output of simulate requires --out");
    const auto t = build_transform(c.geometry, c.order);
    const auto grid = gaussian_grid(c.analysis_order, c.radius);
    const auto balloon = balloon_directions();
    const auto cross = cross_section_directions();
    const std::vector<Direction> look_only{c.look};
    const std::string hash = config_hash(c);

    auto doc = header("simulate", c);
    doc["results"] = json::array();
    for (double f : c.frequencies)
    {
        const double k = wavenumber(f, c.medium);
        const auto d = design_weights(c, k);
        const auto w = unit_weights(steered_weights(c, d, k), t);
        const auto h = transfer_matrix(c.geometry, grid, k, c.medium);
        const auto measured = to_pattern(virtual_measure(w, h, c.perturbation), k, c.radius);
        const auto designed_nodes = sample_modal_pattern(d, c.look, grid.directions).values;
        const auto coeffs = discrete_sft(measured, grid, grid.order);
        const cplx measured_look = inverse_sft(coeffs, look_only)[0];

        std::vector<PatternTable> tables;
        for (const auto &[label, dirs] : {std::pair{std::string("balloon"), &balloon}, std::pair{std::string("cross"), &cross}})
        {
            const auto designed = sample_modal_pattern(d, c.look, *dirs);
            tables.push_back({"designed_" + label, *dirs, designed.values, designed.look_value});
            tables.push_back({"measured_" + label, *dirs, inverse_sft(coeffs, *dirs), measured_look});
        }

        auto entry = frequency_entry(c, f);
        entry["d"] = complex_array(d.d);
        entry["metrics"] = metrics_entry(d, k, c);
        entry["w_l"] = complex_array(w.w);
        entry["grid_nodes"] = grid.size();
        entry["simulation_order"] = h.n_sim;
        entry["pattern_error"] = pattern_error(measured, designed_nodes, grid.weights);
        const std::string suffix = "_" + format_double(f) + "hz";
        for (const auto &table : tables)
        {
            if (c.format == "csv")
            {
                const std::string name = table.name + suffix + ".csv";
                auto file = out.open(name);
                write_csv(file, table,
                          {"sphbeam simulate " + table.name, "config_hash=" + hash, "freq_hz=" + format_double(f),
                           "angles in degrees; re/im/abs in pattern units (far-field normalized pressure)",
                           "db = 20 log10(|B| / |B(look)|)"});
                entry["files"].push_back(name);
            }
            else
                entry[table.name] = pattern_json(table);
        }
        doc["results"].push_back(entry);
    }
    out.json_document("simulate.json", doc);
    return 0;
}

int cmd_grid(const RunConfig &c, const Output &out)
{
    const auto grid = gaussian_grid(c.analysis_order, c.radius);
    if (c.format == "csv")
    {
        std::ostringstream text;
        text << "# sphbeam grid\n# config_hash=" << config_hash(c) << "\n# radius_m=" << format_double(grid.radius)
             << "; order=" << grid.order << "; nodes=" << grid.size() << "; angles in degrees; weight in sr\n";
        text << "theta_deg,phi_deg,weight\n";
        for (std::size_t j = 0; j < grid.size(); ++j)
            text << format_double(to_deg(grid.directions[j].theta)) << ','
                 << format_double(to_deg(grid.directions[j].phi)) << ',' << format_double(grid.weights[j]) << "\n";
        if (out.to_stdout())
            std::cout << text.str();
        else
            out.open("grid.csv") << text.str();
        return 0;
    }
    auto doc = header("grid", c);
    json nodes = json::array();
    for (std::size_t j = 0; j < grid.size(); ++j)
        nodes.push_back({to_deg(grid.directions[j].theta), to_deg(grid.directions[j].phi), grid.weights[j]});
    doc["grid"] = {{"order", grid.order},
                   {"radius_m", grid.radius},
                   {"columns", {"theta_deg", "phi_deg", "weight"}},
                   {"nodes", nodes}};
    out.json_document("grid.json", doc);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Beamforming design for spherical loudspeaker arrays"};
    app.require_subcommand(1);
    Options o;
    const char *names[][2] = {{"design", "Modal weights, steered SH weights, unit weights and metrics"},
                              {"steer", "Modal weights steered to the look direction (SH domain)"},
                              {"synthesize", "Per-loudspeaker weights from the steered SH weights"},
                              {"simulate", "Virtual measurement: designed and measured balloons and cross-sections"},
                              {"metrics", "Directivity factor, DI and white-noise gain"},
                              {"grid", "Gaussian microphone grid"}};
    for (const auto &n : names)
        add_options(*app.add_subcommand(n[0], n[1]), o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    try
    {
        const auto config = make_config(o);
        const Output out(o.out);
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "simulate")
            return cmd_simulate(config, out);
        if (command == "grid")
            return cmd_grid(config, out);
        return cmd_design(config, out, command);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const DomainError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const NumericalError &e)
    {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
}
