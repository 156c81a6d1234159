// specfun.hpp - digamma for complex argument and the Hurwitz zeta at s = 2
//
// Both functions use the same scheme: shift the argument upward with the
// functional recurrence until the asymptotic (Bernoulli) series converges to
// machine precision, and use reflection for arguments in the left half plane.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <type_traits>

#include "purcell/errors.hpp"

namespace purcell {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Distance to a non-positive integer below which an argument counts as a pole.
inline constexpr double kPoleTolerance = 1e-9;

namespace detail {

// Bernoulli tail of digamma, -sum_k B_{2k} / (2k z^{2k}), k = 1..8, in w = 1/z^2.
template <typename Scalar>
constexpr Scalar kDigammaTail[] = {
    Scalar(-1) / 12,      Scalar(1) / 120,        Scalar(-1) / 252,
    Scalar(1) / 240,      Scalar(-1) / 132,       Scalar(691) / 32760,
    Scalar(-1) / 12,      Scalar(3617) / 8160,
};

// B_{2k}, k = 1..9, for the trigamma series sum_k B_{2k} / q^{2k+1}.
template <typename Scalar>
constexpr Scalar kBernoulliEven[] = {
    Scalar(1) / 6,        Scalar(-1) / 30,        Scalar(1) / 42,
    Scalar(-1) / 30,      Scalar(5) / 66,         Scalar(-691) / 2730,
    Scalar(7) / 6,        Scalar(-3617) / 510,    Scalar(43867) / 798,
};

template <typename Scalar>
constexpr Scalar kDigammaShift = 12;

template <typename Scalar>
constexpr Scalar kTrigammaShift = 10;

template <typename Scalar>
bool near_nonpositive_integer(Scalar re, Scalar im) {
    if (re > Scalar(0.5)) return false;
    const Scalar k = std::round(re);
    return std::hypot(re - k, im) < Scalar(kPoleTolerance);
}

/// cot(pi z), evaluated from the argument-reduced real part so it keeps full
/// relative accuracy next to the real-axis poles.
template <typename Scalar>
Complex<Scalar> cot_pi(const Complex<Scalar>& z) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar xr = z.real() - std::round(z.real());
    const Scalar y = pi * z.imag();
    if (std::abs(y) > Scalar(300)) {
        return {Scalar(0), y > 0 ? Scalar(-1) : Scalar(1)};
    }
    const Scalar s = std::sin(pi * xr);
    const Scalar c = std::cos(pi * xr);
    const Scalar sh = std::sinh(y);
    const Scalar ch = std::cosh(y);
    const Scalar den = s * s + sh * sh;
    return {s * c / den, -sh * ch / den};
}

template <typename Scalar>
Complex<Scalar> digamma_asymptotic(const Complex<Scalar>& z) {
    const Complex<Scalar> w = Scalar(1) / (z * z);
    Complex<Scalar> tail{0};
    for (int k = 7; k >= 0; --k) tail = (tail + kDigammaTail<Scalar>[k]) * w;
    return std::log(z) - Scalar(0.5) / z + tail;
}

template <typename Scalar>
Scalar trigamma_asymptotic(Scalar q) {
    const Scalar w = Scalar(1) / (q * q);
    Scalar tail = 0;
    for (int k = 8; k >= 0; --k) tail = (tail + kBernoulliEven<Scalar>[k]) * w;
    return (Scalar(1) + Scalar(0.5) / q + tail) / q;
}

}  // namespace detail

/// Digamma psi(z) for complex z.
///
/// Throws PoleArgument when z lies within kPoleTolerance of 0, -1, -2, ...
template <typename Scalar>
Complex<Scalar> digamma(Complex<Scalar> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidParams("digamma: non-finite argument");
    }
    if (detail::near_nonpositive_integer(z.real(), z.imag())) {
        throw PoleArgument("digamma: argument (" + std::to_string(z.real()) + ", " +
                           std::to_string(z.imag()) + ") is at a pole");
    }
    if (z.real() < 0) {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        return digamma(Scalar(1) - z) - std::numbers::pi_v<Scalar> * detail::cot_pi(z);
    }
    Complex<Scalar> shift{0};
    while (z.real() < detail::kDigammaShift<Scalar>) {
        shift -= Scalar(1) / z;
        z += Scalar(1);
    }
    return shift + detail::digamma_asymptotic(z);
}

template <typename Scalar>
    requires std::is_floating_point_v<Scalar>
Complex<Scalar> digamma(Scalar x) {
    return digamma(Complex<Scalar>(x, Scalar(0)));
}

/// Hurwitz zeta zeta(2, q) = sum_{k>=0} (q + k)^-2, i.e. the trigamma
/// function. Negative non-integer q is reached through
/// zeta(2, q) = zeta(2, q + 1) + q^-2.
template <typename Scalar>
Scalar hurwitz_zeta2(Scalar q) {
    if (!std::isfinite(q)) throw InvalidParams("hurwitz_zeta2: non-finite argument");
    if (detail::near_nonpositive_integer(q, Scalar(0))) {
        throw PoleArgument("hurwitz_zeta2: argument " + std::to_string(q) + " is at a pole");
    }
    Scalar head = 0;
    while (q < detail::kTrigammaShift<Scalar>) {
        head += Scalar(1) / (q * q);
        q += Scalar(1);
    }
    return head + detail::trigamma_asymptotic(q);
}

}  // namespace purcell
