#include "purcell/model.hpp"

#include <cmath>
#include <string>

#include "purcell/errors.hpp"

namespace purcell {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidParams("invalid parameters: " + what);
}

}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(E_c) && E_c >= 0.0, "E_c must be finite and >= 0");
    require(std::isfinite(E_b) && E_b > 0.0, "E_b must be finite and > 0");
    require(std::isfinite(g) && g >= 0.0, "g must be finite and >= 0");
    require(N >= 1, "N must be >= 1");
    require(std::isfinite(delta_omega) && delta_omega > 0.0, "delta_omega must be finite and > 0");
    require(std::isfinite(eta) && eta >= 0.0, "eta must be finite and >= 0");
    require(std::isfinite(T) && T >= 0.0, "temperature must be finite and >= 0");
}

double bose_occupation(double omega, double T) {
    if (T <= 0.0) return 0.0;
    return 1.0 / std::expm1(omega / T);
}

ModeSpectrum build_spectrum(const ModelParams& params) {
    params.validate();
    ModeSpectrum spectrum;
    spectrum.omegas = Eigen::VectorXd::LinSpaced(params.N, 1.0, params.N) * params.delta_omega;
    spectrum.occupations =
        spectrum.omegas.unaryExpr([T = params.T](double w) { return bose_occupation(w, T); });
    return spectrum;
}

DerivedQuantities derive(const ModelParams& params) {
    params.validate();
    const ModeSpectrum spectrum = build_spectrum(params);
    DerivedQuantities d;
    d.Omega_s = params.E_c + params.E_b;
    d.N_s = d.Omega_s / params.delta_omega;
    d.omega_D = params.N * params.delta_omega;
    d.D0 = 1.0 / params.delta_omega;
    d.E_th = spectrum.occupations.dot(spectrum.omegas);
    return d;
}

bool is_single_phonon_allowed(const DerivedQuantities& d) { return d.Omega_s <= d.omega_D; }

ModelParams with_resonance_index(ModelParams params, double N_s) {
    params.E_c = N_s * params.delta_omega - params.E_b;
    return params;
}

}  // namespace purcell
