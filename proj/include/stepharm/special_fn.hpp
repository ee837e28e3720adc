#pragma once

// Gamma-family kernel: complex log-gamma (Lanczos, g = 7), real gamma,
// reciprocal gamma, digamma on the positive axis and the ratio
// Gamma(z + 1/2) / Gamma(z).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "stepharm/errors.hpp"

namespace stepharm {

using Complex = std::complex<double>;

// sin(pi x) and cos(pi x) with exact zeros at the integers / half-integers.
inline double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0 || r == 1.0) return 0.0;
    if (r == 0.5) return 1.0;
    if (r == 1.5) return -1.0;
    return std::sin(std::numbers::pi * r);
}

inline double cos_pi(double x) { return sin_pi(x + 0.5); }

namespace detail {

struct LanczosTable {
    double g;
    std::array<double, 9> p;
};

// Coefficients for g = 7, n = 9 (double precision, ~1e-15 relative).
inline constexpr LanczosTable kLanczos{
    7.0,
    {0.99999999999980993, 676.5203681218851, -1259.1392167224028,
     771.32342877765313, -176.61502916214059, 12.507343278686905,
     -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7}};

#ifdef STEPHARM_FAULT_INJECT_GAMMA
// Deliberately corrupted table, used only to prove the verify suite can fail.
inline constexpr LanczosTable kActiveLanczos{
    kLanczos.g,
    {kLanczos.p[0], kLanczos.p[1] * (1.0 + 1e-4), kLanczos.p[2], kLanczos.p[3],
     kLanczos.p[4], kLanczos.p[5], kLanczos.p[6], kLanczos.p[7], kLanczos.p[8]}};
#else
inline constexpr LanczosTable kActiveLanczos = kLanczos;
#endif

inline constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

template <class T>
T lanczos_log_gamma(T z) {
    // Gamma(z) for Re z >= 1/2.
    const auto& tab = kActiveLanczos;
    z -= 1.0;
    T a = tab.p[0];
    for (std::size_t i = 1; i < tab.p.size(); ++i) a += tab.p[i] / (z + static_cast<double>(i));
    const T t = z + tab.g + 0.5;
    return kLogSqrtTwoPi + (z + 0.5) * std::log(t) - t + std::log(a);
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace detail

/// Principal-branch log Gamma(z). Throws PoleError at z = 0, -1, -2, ...
inline Complex log_gamma(Complex z) {
    if (z.imag() == 0.0 && detail::is_nonpositive_integer(z.real()))
        throw PoleError("log_gamma: pole at non-positive integer " + std::to_string(z.real()));
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        const Complex s = std::sin(std::numbers::pi * z);
        return std::log(std::numbers::pi) - std::log(s) - detail::lanczos_log_gamma(1.0 - z);
    }
    return detail::lanczos_log_gamma(z);
}

/// log|Gamma(x)| for real x.
inline double log_abs_gamma(double x) {
    if (detail::is_nonpositive_integer(x))
        throw PoleError("log_abs_gamma: pole at non-positive integer " + std::to_string(x));
    if (x < 0.5)
        return std::log(std::numbers::pi / std::abs(sin_pi(x))) - detail::lanczos_log_gamma(1.0 - x);
    return detail::lanczos_log_gamma(x);
}

inline double gamma(double x) {
    if (detail::is_nonpositive_integer(x))
        throw PoleError("gamma: pole at non-positive integer " + std::to_string(x));
    if (x < 0.5) return std::numbers::pi / (sin_pi(x) * std::exp(detail::lanczos_log_gamma(1.0 - x)));
    return std::exp(detail::lanczos_log_gamma(x));
}

/// 1 / Gamma(x); entire, zero at the non-positive integers.
inline double reciprocal_gamma(double x) {
    if (x < 0.5) return sin_pi(x) * std::exp(detail::lanczos_log_gamma(1.0 - x)) / std::numbers::pi;
    return std::exp(-detail::lanczos_log_gamma(x));
}

/// Psi(x) = Gamma'(x) / Gamma(x) for x > 0: upward recurrence to x >= 10,
/// then the asymptotic series.
inline double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: requires x > 0, got " + std::to_string(x));
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    // Bernoulli terms B_2k / (2k x^2k), k = 1..7
    const double series =
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                        inv2 * (1.0 / 252 -
                                inv2 * (1.0 / 240 -
                                        inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
    return acc + std::log(x) - 0.5 / x - series;
}

/// Gamma(z + 1/2) / Gamma(z), evaluated in log space.
inline double gamma_half_ratio(double z) {
    if (!(z > 0.0)) throw DomainError("gamma_half_ratio: requires z > 0, got " + std::to_string(z));
    // Gamma(z) = Gamma(z + 1) / z keeps the Lanczos sum in its Re >= 1/2 range.
    const double log_den = z < 0.5 ? detail::lanczos_log_gamma(z + 1.0) - std::log(z)
                                   : detail::lanczos_log_gamma(z);
    return std::exp(detail::lanczos_log_gamma(z + 0.5) - log_den);
}

}  // namespace stepharm
