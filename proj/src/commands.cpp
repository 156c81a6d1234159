#include "purcell/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "purcell/csv.hpp"
#include "purcell/dynamics.hpp"
#include "purcell/errors.hpp"
#include "purcell/rate.hpp"

namespace purcell {

namespace {

std::string case_label(int N, double N_s) {
    return "N=" + std::to_string(N) + ",Ns=" + format_number(N_s);
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (const double v : values) out += (out.empty() ? "" : " ") + format_number(v);
    return out;
}

void put_model_metadata(std::map<std::string, std::string>& metadata, const ModelParams& p) {
    metadata["e_c"] = format_number(p.E_c);
    metadata["e_b"] = format_number(p.E_b);
    metadata["g"] = format_number(p.g);
    metadata["n_modes"] = std::to_string(p.N);
    metadata["delta_omega"] = format_number(p.delta_omega);
    metadata["eta"] = format_number(p.eta);
    metadata["temperature"] = format_number(p.T);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::map<std::string, std::string> tool_metadata() {
    return {{"tool", "purcell-adsorb"}, {"version", PURCELL_VERSION}};
}

RateSweepConfig RateSweepConfig::from(const Config& config) {
    RateSweepConfig out;
    const std::vector<int> modes = config.integers("n_modes", {60});
    const std::vector<double> indices = config.reals("n_s", {15.0});
    if (modes.size() != indices.size() && modes.size() != 1) {
        throw ConfigError(config.entries().at("n_modes").origin +
                          ": key 'n_modes': give one value or one per n_s entry");
    }
    out.cases.clear();
    for (std::size_t i = 0; i < indices.size(); ++i) {
        out.cases.emplace_back(modes.size() == 1 ? modes.front() : modes[i], indices[i]);
    }
    out.y_min = config.real("y_min", out.y_min);
    out.y_max = config.real("y_max", out.y_max);
    out.y_points = config.integer("y_points", out.y_points);
    return out;
}

EnergySweepConfig EnergySweepConfig::from(const Config& config) {
    EnergySweepConfig out;
    out.E_b = config.real("e_b", out.E_b);
    out.delta_omega = config.real("delta_omega", out.delta_omega);
    out.N = config.integer("n_modes", out.N);
    const std::vector<double> range = config.reals("e_c", {out.E_c_min, out.E_c_max});
    if (range.size() != 2) {
        throw ConfigError(config.entries().at("e_c").origin +
                          ": key 'e_c': energy-sweep expects a range 'min, max'");
    }
    out.E_c_min = range[0];
    out.E_c_max = range[1];
    out.E_c_points = config.integer("e_c_points", out.E_c_points);
    out.etas = config.reals("eta", out.etas);
    return out;
}

ModelParams model_params_from(const Config& config) {
    ModelParams p;
    p.E_b = config.real("e_b", 1.0);
    p.g = config.real("g", 0.1);
    p.N = config.integer("n_modes", 60);
    p.delta_omega = config.real("delta_omega", 1.0);
    p.eta = config.real("eta", 0.0);
    p.T = config.real("temperature", 0.0);
    if (config.has("n_s") && config.has("e_c")) {
        throw ConfigError(config.entries().at("n_s").origin +
                          ": key 'n_s' conflicts with e_c; give only one");
    }
    p.E_c = config.has("n_s") ? config.real("n_s", 0.0) * p.delta_omega - p.E_b
                              : config.real("e_c", 14.0);
    try {
        p.validate();
    } catch (const InvalidParams& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return p;
}

DynamicsConfig DynamicsConfig::from(const Config& config) {
    DynamicsConfig out;
    out.params = model_params_from(config);
    out.t_max = config.real("t_max", out.t_max);
    out.n_steps = config.integer("n_steps", out.n_steps);
    return out;
}

SweepTable rate_sweep(const RateSweepConfig& config) {
    if (config.cases.empty()) throw ConfigError("rate-sweep: no (n_modes, n_s) cases");
    for (const auto& [N, N_s] : config.cases) {
        if (N < 1 || !(N_s > 0.0)) {
            throw ConfigError("rate-sweep: need n_modes >= 1 and n_s > 0, got " + case_label(N, N_s));
        }
    }
    const std::vector<double> ys = log_grid(config.y_min, config.y_max, config.y_points);
    const std::size_t n_cases = config.cases.size();
    const std::size_t n_y = ys.size();

    std::vector<double> ratio(n_cases * n_y);
    std::vector<double> asymptote(n_cases * n_y);
    parallel_for(n_cases * n_y, [&](std::size_t i) {
        const auto [N, N_s] = config.cases[i / n_y];
        const double y = ys[i % n_y];
        ratio[i] = relative_rate(N, N_s, y);
        asymptote[i] = asymptotic_relative_rate(N, N_s, y).value;
    });

    SweepTable table;
    table.axis_name = "eta/delta_omega";
    table.axis_values = ys;
    for (std::size_t c = 0; c < n_cases; ++c) {
        const auto [N, N_s] = config.cases[c];
        table.series.push_back({case_label(N, N_s), {ratio.begin() + c * n_y,
                                                     ratio.begin() + (c + 1) * n_y}});
    }
    if (config.asymptote) {
        bool shared = true;
        for (std::size_t c = 1; c < n_cases; ++c) {
            shared = shared && std::equal(asymptote.begin(), asymptote.begin() + n_y,
                                          asymptote.begin() + c * n_y);
        }
        for (std::size_t c = 0; c < (shared ? 1 : n_cases); ++c) {
            const auto [N, N_s] = config.cases[c];
            table.series.push_back({shared ? "asymptote" : "asymptote " + case_label(N, N_s),
                                    {asymptote.begin() + c * n_y,
                                     asymptote.begin() + (c + 1) * n_y}});
        }
    }
    table.series.push_back({"golden-rule", std::vector<double>(n_y, 1.0)});

    table.metadata = tool_metadata();
    table.metadata["subcommand"] = "rate-sweep";
    std::vector<double> modes;
    std::vector<double> indices;
    for (const auto& [N, N_s] : config.cases) {
        modes.push_back(N);
        indices.push_back(N_s);
    }
    table.metadata["n_modes"] = join(modes);
    table.metadata["n_s"] = join(indices);
    table.metadata["y_min"] = format_number(config.y_min);
    table.metadata["y_max"] = format_number(config.y_max);
    table.metadata["y_points"] = std::to_string(config.y_points);
    return table;
}

SweepTable energy_sweep(const EnergySweepConfig& config) {
    if (!(config.E_b > 0.0) || !(config.delta_omega > 0.0) || config.N < 1 || !(config.E_c_min >= 0.0)) {
        throw ConfigError("energy-sweep: need e_b > 0, delta_omega > 0, n_modes >= 1, e_c >= 0");
    }
    if (config.etas.empty()) throw ConfigError("energy-sweep: eta list is empty");
    for (const double eta : config.etas) {
        if (!(eta > 0.0)) throw ConfigError("energy-sweep: every eta must be > 0");
    }
    const std::vector<double> energies = linear_grid(config.E_c_min, config.E_c_max, config.E_c_points);
    const std::size_t n_e = energies.size();
    const std::size_t n_eta = config.etas.size();

    std::vector<double> ratio(n_eta * n_e);
    parallel_for(n_eta * n_e, [&](std::size_t i) {
        const double y = config.etas[i / n_e] / config.delta_omega;
        const double N_s = (energies[i % n_e] + config.E_b) / config.delta_omega;
        ratio[i] = relative_rate(config.N, N_s, y);
    });

    SweepTable table;
    table.axis_name = "E_c";
    table.axis_values = energies;
    for (std::size_t k = 0; k < n_eta; ++k) {
        table.series.push_back({"y=" + format_number(config.etas[k] / config.delta_omega),
                                {ratio.begin() + k * n_e, ratio.begin() + (k + 1) * n_e}});
    }
    table.metadata = tool_metadata();
    table.metadata["subcommand"] = "energy-sweep";
    table.metadata["e_b"] = format_number(config.E_b);
    table.metadata["delta_omega"] = format_number(config.delta_omega);
    table.metadata["n_modes"] = std::to_string(config.N);
    table.metadata["e_c"] = format_number(config.E_c_min) + " " + format_number(config.E_c_max);
    table.metadata["e_c_points"] = std::to_string(config.E_c_points);
    table.metadata["eta"] = join(config.etas);
    return table;
}

DynamicsTables dynamics_tables(const DynamicsConfig& config) {
    const ModeSpectrum spectrum = build_spectrum(config.params);
    const DynamicsTrajectory trajectory = evolve(config.params, spectrum, config.t_max, config.n_steps);
    const auto samples = static_cast<std::size_t>(trajectory.times.size());

    DynamicsTables out;
    SweepTable& main = out.trajectory;
    main.axis_name = "t";
    main.axis_values.assign(trajectory.times.data(), trajectory.times.data() + samples);
    Series re{"re_c", {}}, im{"im_c", {}}, survival{"abs_c2", {}}, norm{"norm", {}};
    for (std::size_t k = 0; k < samples; ++k) {
        const auto c = trajectory.C(static_cast<Eigen::Index>(k));
        re.values.push_back(c.real());
        im.values.push_back(c.imag());
        survival.values.push_back(std::norm(c));
        norm.values.push_back(trajectory.norm(static_cast<Eigen::Index>(k)));
    }
    main.series = {std::move(re), std::move(im), std::move(survival), std::move(norm)};
    main.metadata = tool_metadata();
    main.metadata["subcommand"] = "dynamics";
    put_model_metadata(main.metadata, config.params);
    main.metadata["t_max"] = format_number(config.t_max);
    main.metadata["n_steps"] = std::to_string(config.n_steps);

    SweepTable& modes = out.modes;
    modes.axis_name = "t";
    modes.axis_values = main.axis_values;
    for (Eigen::Index m = 0; m < trajectory.B.rows(); ++m) {
        Series b_re{"re_b" + std::to_string(m + 1), {}};
        Series b_im{"im_b" + std::to_string(m + 1), {}};
        for (std::size_t k = 0; k < samples; ++k) {
            const auto b = trajectory.B(m, static_cast<Eigen::Index>(k));
            b_re.values.push_back(b.real());
            b_im.values.push_back(b.imag());
        }
        modes.series.push_back(std::move(b_re));
        modes.series.push_back(std::move(b_im));
    }
    modes.metadata = main.metadata;
    return out;
}

PolesTable poles_table(const ModelParams& params) {
    const PoleSet poles = find_poles(params, build_spectrum(params));
    PolesTable out;
    SweepTable& table = out.table;
    table.axis_name = "index";
    Series pole{"pole", {}}, residue{"residue", {}};
    for (Eigen::Index k = 0; k < poles.poles.size(); ++k) {
        table.axis_values.push_back(static_cast<double>(k));
        pole.values.push_back(poles.poles(k));
        residue.values.push_back(poles.residues(k));
    }
    table.series = {std::move(pole), std::move(residue)};
    table.metadata = tool_metadata();
    table.metadata["subcommand"] = "poles";
    put_model_metadata(table.metadata, params);

    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.9f", poles.residues.sum());
    out.footer["residue_sum"] = buffer;
    out.footer["pole_count"] = std::to_string(poles.poles.size());
    return out;
}

std::vector<Figure> figure_set() {
    std::vector<Figure> figures;
    const auto rate_figure = [&](std::string name, std::string title,
                                 std::vector<std::pair<int, double>> cases) {
        RateSweepConfig config;
        config.cases = std::move(cases);
        SweepTable table = rate_sweep(config);
        table.metadata["figure"] = name;
        PlotOptions plot;
        plot.title = std::move(title);
        plot.x_label = "eta / delta_omega";
        figures.push_back({std::move(name), std::move(table), plot});
    };
    rate_figure("fig1", "On resonance", {{4, 1.0}, {60, 15.0}});
    rate_figure("fig2", "Off resonance", {{60, 14.25}, {5, 1.25}});
    rate_figure("fig3", "Near resonance", {{40, 9.89}});

    SweepTable sweep = energy_sweep(EnergySweepConfig{});
    sweep.metadata["figure"] = "fig4";
    sweep.metadata["parameter_note"] =
        "e_b, n_modes and the e_c range are chosen defaults (not stated for the original figure)";
    PlotOptions plot;
    plot.title = "Energy sweep";
    plot.x_label = "E_c / delta_omega";
    plot.log_x = false;
    plot.log_y = false;
    figures.push_back({"fig4", std::move(sweep), plot});
    return figures;
}

std::vector<Figure> write_figures(const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw std::runtime_error("cannot create " + directory.string() + ": " + ec.message());
    std::vector<Figure> figures = figure_set();
    for (const Figure& figure : figures) {
        write_text(directory / (figure.name + ".csv"), to_csv(figure.table));
        write_text(directory / (figure.name + ".svg"), render_svg(figure.table, figure.plot));
    }
    return figures;
}

}  // namespace purcell
