// purcell-adsorb: adsorption rates, poles and dynamics of a single-phonon
// adsorbate on a finite membrane, plus regeneration of the reference figures.
//
// Exit codes: 0 success, 2 configuration / input error, 3 numerical failure,
// 1 anything else (I/O).

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "purcell/commands.hpp"
#include "purcell/csv.hpp"
#include "purcell/errors.hpp"

namespace {

using namespace purcell;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitOther = 1;

struct Subcommand {
    CLI::App* app{};
    std::map<std::string, std::string> overrides;
};

Subcommand add_subcommand(CLI::App& root, const std::string& name, const std::string& about) {
    Subcommand sub{root.add_subcommand(name, about), {}};
    return sub;
}

void add_key_options(Subcommand& sub) {
    for (const std::string& key : config_keys()) {
        sub.app->add_option("--" + key, sub.overrides[key], "override config key '" + key + "'");
    }
}

Config resolve(const std::string& config_path, const std::string& section, const Subcommand& sub) {
    Config config = config_path.empty() ? Config{} : Config::load(config_path, section);
    for (const auto& [key, value] : sub.overrides) {
        if (sub.app->count("--" + key) > 0) config.set(key, value, "--" + key);
    }
    return config;
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buffer;
}

// The run timestamp lives in a sidecar so CSV payloads stay byte-identical.
void write_sidecar(const std::filesystem::path& path) {
    std::ofstream meta(path);
    meta << "timestamp=" << timestamp() << '\n';
}

void emit(const std::string& out, const SweepTable& table,
          const std::map<std::string, std::string>& footer = {}) {
    if (out.empty() || out == "-") {
        write_csv(std::cout, table, footer);
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + out + " for writing");
    write_csv(file, table, footer);
    if (!file) throw std::runtime_error("failed writing " + out);
    write_sidecar(out + ".meta");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Purcell-modified single-phonon adsorption rates and dynamics", "purcell-adsorb"};
    app.set_version_flag("--version", std::string(PURCELL_VERSION));
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("-c,--config", config_path, "INI config file ([subcommand] sections)")
        ->check(CLI::ExistingFile);

    Subcommand rate = add_subcommand(app, "rate-sweep", "R/R0 versus eta/delta_omega for (n_modes, n_s) cases");
    Subcommand energy = add_subcommand(app, "energy-sweep", "R/R0 versus adsorbate energy for several eta");
    Subcommand dynamics = add_subcommand(app, "dynamics", "time evolution of the entrance amplitude");
    Subcommand poles = add_subcommand(app, "poles", "real poles and residues of the Laplace amplitude");
    Subcommand figures = add_subcommand(app, "figures", "write fig1..fig4 CSV and SVG files");
    for (Subcommand* sub : {&rate, &energy, &dynamics, &poles}) add_key_options(*sub);
    std::string figure_dir;
    figures.app->add_option("output_dir", figure_dir, "output directory (default: figures)");
    figures.app->add_option("--out", figure_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*rate.app) {
            const Config config = resolve(config_path, "rate-sweep", rate);
            emit(config.text("out", ""), rate_sweep(RateSweepConfig::from(config)));
        } else if (*energy.app) {
            const Config config = resolve(config_path, "energy-sweep", energy);
            emit(config.text("out", ""), energy_sweep(EnergySweepConfig::from(config)));
        } else if (*dynamics.app) {
            const Config config = resolve(config_path, "dynamics", dynamics);
            const DynamicsTables tables = dynamics_tables(DynamicsConfig::from(config));
            emit(config.text("out", ""), tables.trajectory);
            if (config.has("modes_out")) emit(config.text("modes_out", ""), tables.modes);
        } else if (*poles.app) {
            const Config config = resolve(config_path, "poles", poles);
            const PolesTable table = poles_table(model_params_from(config));
            emit(config.text("out", ""), table.table, table.footer);
        } else if (*figures.app) {
            Config config = config_path.empty() ? Config{} : Config::load(config_path, "figures");
            const std::filesystem::path dir =
                !figure_dir.empty() ? figure_dir : config.text("out", "figures");
            const auto written = write_figures(dir);
            write_sidecar(dir / "figures.meta");
            for (const Figure& figure : written) {
                std::cout << (dir / (figure.name + ".csv")).string() << '\n'
                          << (dir / (figure.name + ".svg")).string() << '\n';
            }
        }
    } catch (const Error& e) {
        std::cerr << "purcell-adsorb: " << e.what() << '\n';
        return e.numerical() ? kExitNumerical : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "purcell-adsorb: " << e.what() << '\n';
        return kExitOther;
    }
    return 0;
}
