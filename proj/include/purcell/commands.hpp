// commands.hpp - the work behind each CLI subcommand, independent of argument
// parsing so it can be driven from tests.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "purcell/config.hpp"
#include "purcell/model.hpp"
#include "purcell/svg.hpp"
#include "purcell/sweep.hpp"

namespace purcell {

/// Relative rate versus damping y = eta/delta_omega for a set of (N, N_s).
struct RateSweepConfig {
    std::vector<std::pair<int, double>> cases{{60, 15.0}};
    double y_min{1e-3};
    double y_max{1.0};
    int y_points{200};
    bool asymptote{true};

    static RateSweepConfig from(const Config& config);
};

/// Relative rate versus adsorbate energy for several damping values.
struct EnergySweepConfig {
    double E_b{0.5};
    double delta_omega{1.0};
    int N{100};
    double E_c_min{10.0};
    double E_c_max{16.0};
    int E_c_points{601};
    std::vector<double> etas{0.15, 0.3, 1.0};

    static EnergySweepConfig from(const Config& config);
};

struct DynamicsConfig {
    ModelParams params;
    double t_max{20.0};
    int n_steps{2000};

    static DynamicsConfig from(const Config& config);
};

/// Model parameters shared by the dynamics and poles subcommands; n_s, when
/// given, fixes E_c = n_s * delta_omega - E_b.
ModelParams model_params_from(const Config& config);

SweepTable rate_sweep(const RateSweepConfig& config);
SweepTable energy_sweep(const EnergySweepConfig& config);

struct DynamicsTables {
    SweepTable trajectory;  // t, re_c, im_c, abs_c2, norm
    SweepTable modes;       // t, re_b<m>, im_b<m>
};

DynamicsTables dynamics_tables(const DynamicsConfig& config);

struct PolesTable {
    SweepTable table;  // index, pole, residue
    std::map<std::string, std::string> footer;
};

PolesTable poles_table(const ModelParams& params);

struct Figure {
    std::string name;  // "fig1" ... "fig4"
    SweepTable table;
    PlotOptions plot;
};

std::vector<Figure> figure_set();

/// Writes <name>.csv and <name>.svg for every figure into `directory`.
std::vector<Figure> write_figures(const std::filesystem::path& directory);

/// Metadata common to every emitted table.
std::map<std::string, std::string> tool_metadata();

}  // namespace purcell
