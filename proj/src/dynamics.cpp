#include "purcell/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "purcell/errors.hpp"
#include "purcell/specfun.hpp"

namespace purcell {

namespace {

using cd = std::complex<double>;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxRootIterations = 400;
constexpr double kResidualTolerance = 1e-10;
constexpr double kNormDriftTolerance = 1e-6;
constexpr double kNormGrowthTolerance = 1e-10;

/// Secular function of the deflated problem, written relative to an origin
/// sigma: h(tau) = (sigma - E) + tau - sum_j z_j^2 / (tau - delta_j),
/// delta_j = d_j - sigma.
struct ShiftedSecular {
    double offset;  // sigma - E
    const Eigen::VectorXd& delta;
    const Eigen::VectorXd& z2;

    [[nodiscard]] double value(double tau) const {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < delta.size(); ++j) sum += z2(j) / (tau - delta(j));
        return offset + tau - sum;
    }

    [[nodiscard]] double slope(double tau) const {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < delta.size(); ++j) {
            const double r = tau - delta(j);
            sum += z2(j) / (r * r);
        }
        return 1.0 + sum;
    }
};

double bisection_point(double lo, double hi) {
    // Geometric midpoint when the bracket spans orders of magnitude on one
    // side of zero, so roots hugging a pole are reached in few steps.
    const double tiny = std::numeric_limits<double>::min();
    if (lo >= 0.0 && hi > 4.0 * std::max(lo, tiny)) return std::sqrt(std::max(lo, tiny) * hi);
    if (hi <= 0.0 && -lo > 4.0 * std::max(-hi, tiny)) return -std::sqrt(std::max(-hi, tiny) * -lo);
    return 0.5 * (lo + hi);
}

/// Root of h on the open bracket (lo, hi) with h(lo+) < 0 < h(hi-). Newton
/// steps are taken only while they land inside the bracket and at least halve
/// the previous step; otherwise the bracket is bisected.
double solve_shifted(const ShiftedSecular& h, double lo, double hi) {
    double tau = bisection_point(lo, hi);
    double previous_step = hi - lo;
    for (int it = 0; it < kMaxRootIterations; ++it) {
        const double value = h.value(tau);
        if (value == 0.0) return tau;
        if (value < 0.0) {
            lo = tau;
        } else {
            hi = tau;
        }
        const double newton = tau - value / h.slope(tau);
        double next = newton;
        if (!(newton > lo && newton < hi) || std::abs(newton - tau) > 0.5 * std::abs(previous_step)) {
            next = bisection_point(lo, hi);
        }
        previous_step = next - tau;
        const double scale = std::max(std::abs(next), std::numeric_limits<double>::min());
        if (std::abs(next - tau) <= 2.0 * kEps * scale || hi - lo <= 2.0 * kEps * scale) {
            return next;
        }
        tau = next;
    }
    return tau;
}

struct SecularRoot {
    double value;
    double origin;
    double tau;
    double residual;
    bool converged;
};

/// All roots of epsilon - E - sum z_j^2/(epsilon - d_j) for strictly
/// increasing d and positive z, one per interlacing interval.
std::vector<SecularRoot> secular_roots(double E, const Eigen::VectorXd& d, const Eigen::VectorXd& z) {
    const Eigen::Index n = d.size();
    std::vector<SecularRoot> roots;
    roots.reserve(static_cast<std::size_t>(n + 1));
    if (n == 0) {
        roots.push_back({E, E, 0.0, 0.0, true});
        return roots;
    }
    for (Eigen::Index j = 1; j < n; ++j) {
        if (!(d(j) > d(j - 1))) {
            throw BracketingFailure("find_poles: resonances are not strictly increasing at index " +
                                    std::to_string(j));
        }
    }
    const Eigen::VectorXd z2 = z.cwiseAbs2();
    const double spread = z.norm() + 1.0;
    const double lower = std::min(E, d(0)) - spread;
    const double upper = std::max(E, d(n - 1)) + spread;

    const auto solve_from = [&](double origin, double lo, double hi) {
        const Eigen::VectorXd delta = d.array() - origin;
        const ShiftedSecular h{origin - E, delta, z2};
        const double tau = solve_shifted(h, lo, hi);
        const double residual = std::abs(h.value(tau));
        // A root hugging a pole has a steep secular function; accept it when
        // the Newton correction is at roundoff level.
        const bool converged = residual <= kResidualTolerance * (1.0 + std::abs(origin + tau)) ||
                               residual / h.slope(tau) <= 8.0 * kEps * std::abs(tau);
        return SecularRoot{origin + tau, origin, tau, residual, converged};
    };
    const auto direct = [&](double epsilon) {
        return epsilon - E - (z2.array() / (epsilon - d.array())).sum();
    };

    roots.push_back(solve_from(d(0), lower - d(0), 0.0));
    for (Eigen::Index k = 1; k < n; ++k) {
        const double a = d(k - 1);
        const double b = d(k);
        const double mid = 0.5 * (a + b);
        const double at_mid = direct(mid);
        if (at_mid == 0.0) {
            roots.push_back({mid, a, mid - a, 0.0, true});
        } else if (at_mid > 0.0) {
            roots.push_back(solve_from(a, 0.0, mid - a));
        } else {
            roots.push_back(solve_from(b, mid - b, 0.0));
        }
    }
    roots.push_back(solve_from(d(n - 1), 0.0, upper - d(n - 1)));

    for (const SecularRoot& root : roots) {
        if (!std::isfinite(root.value) || !root.converged) {
            throw BracketingFailure("find_poles: secular root did not converge near " +
                                    std::to_string(root.value));
        }
    }
    return roots;
}

}  // namespace

Eigen::MatrixXcd ArrowheadGenerator::dense() const {
    const Eigen::Index n = diagonal.size();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    H(0, 0) = entrance;
    H.bottomRightCorner(n, n).diagonal() = diagonal.cast<cd>().array() - cd(0.0, eta);
    H.col(0).tail(n) = -border.cast<cd>();
    H.row(0).tail(n) = -border.cast<cd>().transpose();
    return H;
}

Eigen::VectorXcd ArrowheadGenerator::apply(const Eigen::VectorXcd& x) const {
    const Eigen::Index n = diagonal.size();
    Eigen::VectorXcd y(n + 1);
    y(0) = entrance * x(0) - border.cast<cd>().dot(x.tail(n));
    y.tail(n) = (diagonal.cast<cd>().array() - cd(0.0, eta)) * x.tail(n).array() -
                border.cast<cd>().array() * x(0);
    return y;
}

cd ArrowheadGenerator::secular(cd epsilon) const {
    cd sum{0.0, 0.0};
    for (Eigen::Index j = 0; j < diagonal.size(); ++j) {
        sum += border(j) * border(j) / (epsilon - diagonal(j) + cd(0.0, eta));
    }
    return epsilon - entrance - sum;
}

ArrowheadGenerator build_generator(const ModelParams& params, const ModeSpectrum& spectrum) {
    params.validate();
    const double E_th = spectrum.occupations.dot(spectrum.omegas);
    ArrowheadGenerator generator;
    generator.entrance = params.E_c + E_th;
    generator.diagonal = spectrum.omegas.array() - params.E_b + E_th;
    generator.border = params.g * (spectrum.occupations.array() + 1.0).sqrt();
    generator.eta = params.eta;
    return generator;
}

ArrowheadEigensystem arrowhead_eigensystem(const ArrowheadGenerator& generator) {
    if (generator.eta != 0.0) {
        throw InvalidParams("arrowhead eigensystem requires eta = 0 (real poles only)");
    }
    const Eigen::Index n = generator.diagonal.size();
    const Eigen::Index dim = n + 1;

    // Modes with zero coupling decouple and are eigenpairs on their own.
    std::vector<Eigen::Index> active;
    std::vector<Eigen::Index> decoupled;
    for (Eigen::Index j = 0; j < n; ++j) {
        (generator.border(j) != 0.0 ? active : decoupled).push_back(j);
    }
    const auto na = static_cast<Eigen::Index>(active.size());
    Eigen::VectorXd d(na);
    Eigen::VectorXd z(na);
    for (Eigen::Index a = 0; a < na; ++a) {
        d(a) = generator.diagonal(active[static_cast<std::size_t>(a)]);
        z(a) = generator.border(active[static_cast<std::size_t>(a)]);
    }
    const std::vector<SecularRoot> roots = secular_roots(generator.entrance, d, z);

    struct Pair {
        double value;
        double residual;
        Eigen::VectorXd vector;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(dim));
    for (const SecularRoot& root : roots) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        v(0) = 1.0;
        for (Eigen::Index a = 0; a < na; ++a) {
            // lambda - d_a, formed relative to the root's origin
            const double gap = root.tau - (d(a) - root.origin);
            v(active[static_cast<std::size_t>(a)] + 1) = -z(a) / gap;
        }
        v.normalize();
        pairs.push_back({root.value, root.residual, std::move(v)});
    }
    for (Eigen::Index j : decoupled) {
        pairs.push_back({generator.diagonal(j), 0.0, Eigen::VectorXd::Unit(dim, j + 1)});
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& a, const Pair& b) { return a.value < b.value; });

    ArrowheadEigensystem system;
    system.values.resize(dim);
    system.residuals.resize(dim);
    system.vectors.resize(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        const Pair& pair = pairs[static_cast<std::size_t>(k)];
        system.values(k) = pair.value;
        system.residuals(k) = pair.residual;
        system.vectors.col(k) = pair.vector;
    }
    return system;
}

PoleSet find_poles(const ModelParams& params, const ModeSpectrum& spectrum) {
    if (params.eta != 0.0) {
        throw InvalidParams("find_poles: real-pole search requires eta = 0");
    }
    const ArrowheadEigensystem system = arrowhead_eigensystem(build_generator(params, spectrum));
    PoleSet set;
    set.poles = system.values;
    set.residues = system.vectors.row(0).transpose().cwiseAbs2();
    set.residuals = system.residuals;
    return set;
}

std::complex<double> reconstruct_amplitude(const PoleSet& poles, double t) {
    cd sum{0.0, 0.0};
    for (Eigen::Index k = 0; k < poles.poles.size(); ++k) {
        sum += poles.residues(k) * std::exp(cd(0.0, -poles.poles(k) * t));
    }
    return sum;
}

std::complex<double> laplace_amplitude(std::complex<double> s, const ModelParams& params,
                                       const ModeSpectrum& spectrum) {
    const ArrowheadGenerator generator = build_generator(params, spectrum);
    const cd epsilon = cd(0.0, 1.0) * s;
    if (params.g > 0.0) {
        for (Eigen::Index j = 0; j < generator.diagonal.size(); ++j) {
            // Sigma diverges here, so C~ has a zero, not a pole.
            if (std::abs(epsilon - generator.diagonal(j) + cd(0.0, params.eta)) < 1e-12) {
                return {0.0, 0.0};
            }
        }
    }
    const cd denominator = generator.secular(epsilon);
    if (std::abs(denominator) < kPoleTolerance) {
        throw PoleArgument("laplace_amplitude: s is a pole of C~(s)");
    }
    return cd(0.0, 1.0) / denominator;
}

namespace {

void check_grid(double t_max, int n_steps) {
    if (!(std::isfinite(t_max) && t_max > 0.0)) throw InvalidGrid("evolve: t_max must be > 0");
    if (n_steps < 2) throw InvalidGrid("evolve: n_steps must be >= 2");
}

DynamicsTrajectory allocate(Eigen::Index n_modes, double t_max, int n_steps) {
    DynamicsTrajectory trajectory;
    trajectory.times = Eigen::VectorXd::LinSpaced(n_steps + 1, 0.0, t_max);
    trajectory.C.resize(n_steps + 1);
    trajectory.B.resize(n_modes, n_steps + 1);
    trajectory.norm.resize(n_steps + 1);
    return trajectory;
}

void store(DynamicsTrajectory& trajectory, Eigen::Index k, const Eigen::VectorXcd& psi,
           const Eigen::VectorXd& inv_weight) {
    const Eigen::Index n = inv_weight.size();
    trajectory.C(k) = psi(0);
    trajectory.B.col(k) = psi.tail(n).array() * inv_weight.array();
    trajectory.norm(k) = psi.squaredNorm();
}

DynamicsTrajectory evolve_spectral(const ArrowheadGenerator& generator,
                                   const Eigen::VectorXd& inv_weight, double t_max, int n_steps) {
    const ArrowheadEigensystem system = arrowhead_eigensystem(generator);
    const Eigen::VectorXd overlap = system.vectors.row(0).transpose();
    const Eigen::MatrixXcd vectors = system.vectors.cast<cd>();
    DynamicsTrajectory trajectory = allocate(generator.diagonal.size(), t_max, n_steps);
    Eigen::VectorXcd coefficients(system.values.size());
    for (Eigen::Index k = 0; k < trajectory.times.size(); ++k) {
        const double t = trajectory.times(k);
        for (Eigen::Index m = 0; m < system.values.size(); ++m) {
            coefficients(m) = overlap(m) * std::exp(cd(0.0, -system.values(m) * t));
        }
        store(trajectory, k, vectors * coefficients, inv_weight);
    }
    return trajectory;
}

DynamicsTrajectory evolve_rk4(ArrowheadGenerator generator, const Eigen::VectorXd& inv_weight,
                              double t_max, int n_steps, const EvolveOptions& options) {
    // Integrate in the frame rotating at the entrance energy; the common
    // phase exp(-i E t) is restored exactly when storing.
    const double reference = generator.entrance;
    generator.entrance = 0.0;
    generator.diagonal.array() -= reference;

    double radius = generator.border.sum();
    for (Eigen::Index j = 0; j < generator.diagonal.size(); ++j) {
        radius = std::max(radius, std::abs(cd(generator.diagonal(j), -generator.eta)) +
                                      generator.border(j));
    }
    const double interval = t_max / n_steps;
    int substeps = options.substeps.value_or(
        std::max(1, static_cast<int>(std::ceil(interval * radius / options.max_phase_step))));
    if (substeps < 1) throw InvalidGrid("evolve: substeps must be >= 1");
    const double dt = interval / substeps;

    DynamicsTrajectory trajectory = allocate(generator.diagonal.size(), t_max, n_steps);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(generator.size());
    psi(0) = 1.0;
    const cd minus_i{0.0, -1.0};
    const auto rhs = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        return minus_i * generator.apply(x);
    };
    store(trajectory, 0, psi, inv_weight);
    for (Eigen::Index k = 1; k < trajectory.times.size(); ++k) {
        for (int s = 0; s < substeps; ++s) {
            const Eigen::VectorXcd k1 = rhs(psi);
            const Eigen::VectorXcd k2 = rhs(psi + 0.5 * dt * k1);
            const Eigen::VectorXcd k3 = rhs(psi + 0.5 * dt * k2);
            const Eigen::VectorXcd k4 = rhs(psi + dt * k3);
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double t = trajectory.times(k);
        store(trajectory, k, std::exp(cd(0.0, -reference * t)) * psi, inv_weight);

        if (generator.eta == 0.0) {
            if (std::abs(trajectory.norm(k) - 1.0) > kNormDriftTolerance) {
                throw StepSizeTooLarge("evolve: norm drifted by " +
                                       std::to_string(trajectory.norm(k) - 1.0) + " at t = " +
                                       std::to_string(t) + "; increase n_steps");
            }
        } else if (trajectory.norm(k) > trajectory.norm(k - 1) * (1.0 + kNormGrowthTolerance)) {
            throw StepSizeTooLarge("evolve: norm grew at t = " + std::to_string(t) +
                                   " under damping; increase n_steps");
        }
    }
    return trajectory;
}

}  // namespace

DynamicsTrajectory evolve(const ModelParams& params, const ModeSpectrum& spectrum, double t_max,
                          int n_steps, const EvolveOptions& options) {
    check_grid(t_max, n_steps);
    const ArrowheadGenerator generator = build_generator(params, spectrum);
    const Eigen::VectorXd inv_weight = (spectrum.occupations.array() + 1.0).rsqrt();

    EvolveMethod method = options.method;
    if (method == EvolveMethod::Auto) {
        method = params.eta == 0.0 ? EvolveMethod::Spectral : EvolveMethod::Integrator;
    }
    if (method == EvolveMethod::Spectral) {
        if (params.eta != 0.0) throw InvalidParams("evolve: spectral path requires eta = 0");
        return evolve_spectral(generator, inv_weight, t_max, n_steps);
    }
    return evolve_rk4(generator, inv_weight, t_max, n_steps, options);
}

std::complex<double> energy_expectation(const ArrowheadGenerator& generator,
                                        const ModeSpectrum& spectrum,
                                        const DynamicsTrajectory& trajectory, Eigen::Index k) {
    const Eigen::Index n = generator.diagonal.size();
    Eigen::VectorXcd psi(n + 1);
    psi(0) = trajectory.C(k);
    psi.tail(n) = trajectory.B.col(k).array() * (spectrum.occupations.array() + 1.0).sqrt();
    return psi.dot(generator.apply(psi));
}

double fit_decay_rate(const Eigen::VectorXd& times, const Eigen::VectorXd& survival,
                      std::pair<double, double> t_window) {
    const auto [t0, t1] = t_window;
    if (times.size() == 0 || times.size() != survival.size()) {
        throw InvalidGrid("fit_decay_rate: times and survival must be non-empty and equal length");
    }
    const double slack = 1e-12 * std::max(1.0, std::abs(times(times.size() - 1)));
    if (!(t0 < t1) || t0 < times(0) - slack || t1 > times(times.size() - 1) + slack) {
        throw InvalidGrid("fit_decay_rate: window must lie inside the trajectory");
    }
    std::vector<double> ts;
    std::vector<double> ys;
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const double t = times(k);
        if (t < t0 - slack || t > t1 + slack) continue;
        if (!(survival(k) > 1e-12)) {
            throw InvalidGrid("fit_decay_rate: survival below 1e-12 at t = " + std::to_string(t));
        }
        ts.push_back(t);
        ys.push_back(std::log(survival(k)));
    }
    if (ts.size() < 8) {
        throw WindowTooShort("fit_decay_rate: " + std::to_string(ts.size()) +
                             " samples in window, need at least 8");
    }
    const Eigen::Map<const Eigen::VectorXd> t(ts.data(), static_cast<Eigen::Index>(ts.size()));
    const Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
    const Eigen::VectorXd dt = t.array() - t.mean();
    const Eigen::VectorXd dy = y.array() - y.mean();
    const double slope = dt.dot(dy) / dt.squaredNorm();
    return -slope;
}

double fit_decay_rate(const DynamicsTrajectory& trajectory, std::pair<double, double> t_window) {
    return fit_decay_rate(trajectory.times, trajectory.survival(), t_window);
}

}  // namespace purcell
