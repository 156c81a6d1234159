// dynamics.hpp - time- and Laplace-domain solution of the variational
// equations of motion for the entrance amplitude C(t) and the bound-channel
// amplitudes B_m(t).
//
// Internally the bound amplitudes are rescaled, B~_m = sqrt(n_m + 1) B_m,
// which turns the generator into a complex-symmetric arrowhead matrix
//
//     [ E      -z^T            ]      E   = E_c + E_th
//     [ -z     diag(d - i eta) ]      d_m = omega_m - E_b + E_th
//                                     z_m = g sqrt(n_m + 1)
//
// Hermitian at eta = 0. Its secular equation is the pole condition of the
// Laplace amplitude, so eigenvalues and poles are the same numbers.

#pragma once

#include <complex>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "purcell/model.hpp"

namespace purcell {

struct ArrowheadGenerator {
    double entrance{};          // E
    Eigen::VectorXd diagonal;   // d, strictly increasing
    Eigen::VectorXd border;     // z, non-negative
    double eta{};

    [[nodiscard]] Eigen::Index size() const { return diagonal.size() + 1; }

    /// Dense (N+1)x(N+1) form, for diagnostics and cross-checks.
    [[nodiscard]] Eigen::MatrixXcd dense() const;

    /// y = H x
    [[nodiscard]] Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

    /// epsilon - E - sum_m z_m^2 / (epsilon - d_m + i eta)
    [[nodiscard]] std::complex<double> secular(std::complex<double> epsilon) const;
};

ArrowheadGenerator build_generator(const ModelParams& params, const ModeSpectrum& spectrum);

/// Real poles of the Laplace amplitude, in energy units (epsilon = i s),
/// sorted ascending, with their weights 1/f'(epsilon) in C(t).
struct PoleSet {
    Eigen::VectorXd poles;
    Eigen::VectorXd residues;
    /// |f(epsilon_n)| evaluated relative to the nearest resonance.
    Eigen::VectorXd residuals;
};

/// Orthonormal eigensystem of the eta = 0 generator; column k of `vectors`
/// belongs to `values(k)`, row 0 is the entrance component.
struct ArrowheadEigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    Eigen::VectorXd residuals;
};

/// Eigenvalues from the secular equation, eigenvectors from the explicit
/// arrowhead formula. Requires eta = 0.
ArrowheadEigensystem arrowhead_eigensystem(const ArrowheadGenerator& generator);

PoleSet find_poles(const ModelParams& params, const ModeSpectrum& spectrum);

/// C(t) = sum_n r_n exp(-i epsilon_n t)
std::complex<double> reconstruct_amplitude(const PoleSet& poles, double t);

/// C~(s) = i / (i s - E - g^2 Sigma(i s)).
std::complex<double> laplace_amplitude(std::complex<double> s, const ModelParams& params,
                                       const ModeSpectrum& spectrum);

struct DynamicsTrajectory {
    Eigen::VectorXd times;
    Eigen::VectorXcd C;
    Eigen::MatrixXcd B;  // N x times.size()
    Eigen::VectorXd norm;

    [[nodiscard]] Eigen::VectorXd survival() const { return C.cwiseAbs2(); }
};

enum class EvolveMethod {
    Auto,        // spectral at eta = 0, integrator otherwise
    Spectral,    // exact eigendecomposition, eta = 0 only
    Integrator,  // fixed-step RK4
};

struct EvolveOptions {
    EvolveMethod method{EvolveMethod::Auto};
    /// Upper bound on dt * (spectral radius estimate) for the RK4 path.
    double max_phase_step{0.05};
    /// Forces the number of RK4 substeps per output interval.
    std::optional<int> substeps;
};

/// Evolves from C(0) = 1, B(0) = 0 on a uniform grid of n_steps intervals
/// over [0, t_max] (n_steps + 1 samples).
DynamicsTrajectory evolve(const ModelParams& params, const ModeSpectrum& spectrum, double t_max,
                          int n_steps, const EvolveOptions& options = {});

/// <H> of the state at sample k under the effective generator.
std::complex<double> energy_expectation(const ArrowheadGenerator& generator,
                                        const ModeSpectrum& spectrum,
                                        const DynamicsTrajectory& trajectory, Eigen::Index k);

/// Negated least-squares slope of ln|C(t)|^2 over samples with t in the window.
double fit_decay_rate(const DynamicsTrajectory& trajectory, std::pair<double, double> t_window);

/// Same fit on raw (t, |C|^2) samples.
double fit_decay_rate(const Eigen::VectorXd& times, const Eigen::VectorXd& survival,
                      std::pair<double, double> t_window);

}  // namespace purcell
