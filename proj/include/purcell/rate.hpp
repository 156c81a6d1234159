// rate.hpp - adsorption rates: golden-rule baseline, discrete damped mode sum,
// digamma closed form of the relative rate and its small-damping asymptotics.

#pragma once

#include <complex>
#include <optional>
#include <string_view>

#include "purcell/model.hpp"

namespace purcell {

enum class Regime { Enhanced, Suppressed, GoldenRule };

std::string_view to_string(Regime regime);

/// Ratios within this distance of 1 are classified as GoldenRule.
inline constexpr double kRegimeTolerance = 1e-9;

/// |N_s - round(N_s)| below this selects the resonant asymptotic branch.
inline constexpr double kIntegerTolerance = 1e-9;

struct RateResult {
    double R{};
    double R0{};
    double ratio{};
    Regime regime{Regime::GoldenRule};
};

Regime classify(double ratio);

/// 2 pi g^2 D0 (n(Omega_s) + 1) when the single-phonon channel is open, else 0.
double golden_rule_rate(const ModelParams& params, const DerivedQuantities& derived);

/// Sigma(epsilon) = sum_p (n_p + 1) / (epsilon + E_b - E_th - omega_p + i eta).
///
/// With eta = 0 a vanishing denominator raises ResonanceSingularity.
std::complex<double> self_energy(double epsilon, const ModelParams& params,
                                 const ModeSpectrum& spectrum);

/// R = -2 g^2 Im Sigma(E_c + E_th). Requires eta > 0 (RequiresDamping).
double discrete_rate(const ModelParams& params, const ModeSpectrum& spectrum,
                     const DerivedQuantities& derived);

/// R / R0 = (1/pi) Im(psi(N_s + iy - N) - psi(N_s + iy)), y = eta / delta_omega.
double relative_rate(int N, double N_s, double y);

enum class AsymptoticBranch { Resonant, OffResonant };

struct AsymptoticRate {
    double value{};
    AsymptoticBranch branch{AsymptoticBranch::OffResonant};
};

/// Leading small-y behaviour of relative_rate: 1/(pi y) when N_s is an integer
/// in [1, N], otherwise (y/pi)(zeta(2, N_s - N) - zeta(2, N_s)).
AsymptoticRate asymptotic_relative_rate(int N, double N_s, double y);

/// Smallest y in (0, 10] where relative_rate(N, N_s, y) reaches 1, or nullopt
/// when the ratio stays below 1. N_s must not be an integer.
std::optional<double> enhancement_threshold(int N, double N_s);

/// R, R0 and their ratio for a full parameter set (eta > 0, channel open).
RateResult compute_rate(const ModelParams& params);

}  // namespace purcell
