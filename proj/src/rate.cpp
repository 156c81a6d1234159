#include "purcell/rate.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "purcell/errors.hpp"
#include "purcell/specfun.hpp"

namespace purcell {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kThresholdScanLow = 1e-6;
constexpr double kThresholdScanHigh = 10.0;
constexpr int kThresholdScanPoints = 64;
constexpr double kThresholdTolerance = 1e-10;

bool is_integral(double x) { return std::abs(x - std::round(x)) < kIntegerTolerance; }

}  // namespace

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::Enhanced: return "enhanced";
        case Regime::Suppressed: return "suppressed";
        case Regime::GoldenRule: return "golden-rule";
    }
    return "unknown";
}

Regime classify(double ratio) {
    if (ratio > 1.0 + kRegimeTolerance) return Regime::Enhanced;
    if (ratio < 1.0 - kRegimeTolerance) return Regime::Suppressed;
    return Regime::GoldenRule;
}

double golden_rule_rate(const ModelParams& params, const DerivedQuantities& derived) {
    if (!is_single_phonon_allowed(derived)) return 0.0;
    const double occupation = bose_occupation(derived.Omega_s, params.T);
    return 2.0 * kPi * params.g * params.g * derived.D0 * (occupation + 1.0);
}

std::complex<double> self_energy(double epsilon, const ModelParams& params,
                                 const ModeSpectrum& spectrum) {
    const double E_th = spectrum.occupations.dot(spectrum.omegas);
    std::complex<double> sum{0.0, 0.0};
    for (Eigen::Index p = 0; p < spectrum.size(); ++p) {
        const double detuning = epsilon + params.E_b - E_th - spectrum.omegas(p);
        if (params.eta == 0.0 && std::abs(detuning) < kPoleTolerance) {
            throw ResonanceSingularity("self_energy: epsilon = " + std::to_string(epsilon) +
                                       " is resonant with mode " + std::to_string(p + 1) +
                                       " and eta = 0");
        }
        sum += (spectrum.occupations(p) + 1.0) / std::complex<double>(detuning, params.eta);
    }
    return sum;
}

double discrete_rate(const ModelParams& params, const ModeSpectrum& spectrum,
                     const DerivedQuantities& derived) {
    if (!(params.eta > 0.0)) {
        throw RequiresDamping("discrete_rate: a finite adsorbent has no true adsorption at eta = 0");
    }
    const std::complex<double> sigma = self_energy(params.E_c + derived.E_th, params, spectrum);
    return -2.0 * params.g * params.g * sigma.imag();
}

double relative_rate(int N, double N_s, double y) {
    if (N < 1) throw InvalidParams("relative_rate: N must be >= 1");
    if (!(y >= 0.0) || !std::isfinite(N_s)) {
        throw InvalidParams("relative_rate: need y >= 0 and finite N_s");
    }
    const std::complex<double> z{N_s, y};
    const std::complex<double> difference =
        digamma(z - static_cast<double>(N)) - digamma(z);
    return difference.imag() / kPi;
}

AsymptoticRate asymptotic_relative_rate(int N, double N_s, double y) {
    if (N < 1) throw InvalidParams("asymptotic_relative_rate: N must be >= 1");
    if (!(y > 0.0)) throw InvalidParams("asymptotic_relative_rate: y must be > 0");
    const double nearest = std::round(N_s);
    if (is_integral(N_s) && nearest >= 1.0 && nearest <= N) {
        return {1.0 / (kPi * y), AsymptoticBranch::Resonant};
    }
    // zeta(2, N_s - N) - zeta(2, N_s) = sum_{m=1}^{N} (N_s - m)^-2 > 0
    const double slope = hurwitz_zeta2(N_s - N) - hurwitz_zeta2(N_s);
    return {slope * y / kPi, AsymptoticBranch::OffResonant};
}

std::optional<double> enhancement_threshold(int N, double N_s) {
    if (is_integral(N_s)) {
        throw InvalidParams("enhancement_threshold: N_s = " + std::to_string(N_s) +
                            " is integral; the ratio exceeds 1 for all small damping");
    }
    const auto excess = [&](double y) { return relative_rate(N, N_s, y) - 1.0; };

    const double step = std::pow(kThresholdScanHigh / kThresholdScanLow,
                                 1.0 / (kThresholdScanPoints - 1));
    double lo = 0.0;
    double hi = kThresholdScanLow;
    bool bracketed = false;
    for (int k = 0; k < kThresholdScanPoints; ++k) {
        hi = k + 1 == kThresholdScanPoints ? kThresholdScanHigh
                                           : kThresholdScanLow * std::pow(step, k);
        if (excess(hi) >= 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
    }
    if (!bracketed) return std::nullopt;

    while (hi - lo > kThresholdTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

RateResult compute_rate(const ModelParams& params) {
    const ModeSpectrum spectrum = build_spectrum(params);
    const DerivedQuantities derived = derive(params);
    if (!is_single_phonon_allowed(derived)) {
        throw InvalidParams("compute_rate: Omega_s exceeds omega_D, single-phonon channel closed");
    }
    RateResult result;
    result.R = discrete_rate(params, spectrum, derived);
    result.R0 = golden_rule_rate(params, derived);
    if (result.R0 == 0.0) throw InvalidParams("compute_rate: g = 0 gives no golden-rule rate");
    result.ratio = result.R / result.R0;
    result.regime = classify(result.ratio);
    return result;
}

}  // namespace purcell
