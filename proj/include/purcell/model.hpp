// model.hpp - physical parameters, mode spectrum and derived quantities of the
// multimode Rabi model for single-phonon adsorption on a clamped membrane.
//
// Energies, frequencies, damping and temperature are all expressed in units
// of the mode spacing delta_omega (k_B = hbar = 1) unless delta_omega is set
// explicitly.

#pragma once

#include <Eigen/Dense>

namespace purcell {

struct ModelParams {
    double E_c{0.0};          // gas-phase adsorbate energy
    double E_b{1.0};          // binding energy
    double g{0.1};            // adsorbate-phonon coupling
    int N{60};                // number of vibrational modes
    double delta_omega{1.0};  // mode spacing
    double eta{0.0};          // phonon damping, omega -> omega - i eta
    double T{0.0};            // temperature

    /// Throws InvalidParams if any field is out of range or non-finite.
    void validate() const;
};

struct DerivedQuantities {
    double Omega_s{};  // transition frequency E_c + E_b
    double N_s{};      // Omega_s / delta_omega
    double omega_D{};  // N * delta_omega
    double D0{};       // 1 / delta_omega
    double E_th{};     // sum_p n_p omega_p
};

/// omegas(n) = (n + 1) delta_omega, occupations(n) = Bose factor at T.
struct ModeSpectrum {
    Eigen::VectorXd omegas;
    Eigen::VectorXd occupations;

    [[nodiscard]] Eigen::Index size() const { return omegas.size(); }
};

/// Bose-Einstein occupation 1/(exp(omega/T) - 1); 0 at T = 0.
double bose_occupation(double omega, double T);

ModeSpectrum build_spectrum(const ModelParams& params);
DerivedQuantities derive(const ModelParams& params);

/// Single-phonon channel open iff Omega_s <= omega_D (Theta(0) = 1).
bool is_single_phonon_allowed(const DerivedQuantities& d);

/// Params whose transition index Omega_s / delta_omega equals `N_s`,
/// holding E_b fixed (E_c = N_s delta_omega - E_b).
ModelParams with_resonance_index(ModelParams params, double N_s);

}  // namespace purcell
