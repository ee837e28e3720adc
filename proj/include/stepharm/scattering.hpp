#pragma once

// Continuum above the step: reflection coefficient, phase shift, its
// closed-form derivative, the delay time and delay resonances.
//
// With s = sqrt(2 / (beta - beta0)) and R = Gamma((beta+1)/2) / Gamma(beta/2),
// the common factor 2 pi / (i e^{i pi beta}) drops out of every ratio of J's:
//   J(beta) ~ sin(pi beta / 2) / Gamma((beta+1)/2),
//   J(beta - 1) ~ cos(pi beta / 2) / Gamma(beta/2),
// so zeta = (a - i b) / (a + i b) with a = sin(pi beta/2), b = s R cos(pi beta/2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "stepharm/config.hpp"
#include "stepharm/errors.hpp"
#include "stepharm/hermite_contour.hpp"
#include "stepharm/parallel.hpp"
#include "stepharm/special_fn.hpp"

namespace stepharm {

struct PhaseShiftSample {
    double beta = 0.0;
    Complex zeta;
    double delta = 0.0;        // principal value in (-pi, pi]
    double delta_prime = 0.0;  // d delta / d beta
    double tau = 0.0;          // delta_prime / omega
};

struct Resonance {
    double beta_peak = 0.0;
    double tau_peak = 0.0;
    double width = 0.0;  // FWHM in beta, measured from the pi/omega baseline
};

namespace detail {

inline void require_continuum(double beta, const PotentialConfig& config, const char* what) {
    if (!(beta > config.beta0()))
        throw DomainError(std::string(what) + ": requires beta > beta0, got beta = " + std::to_string(beta) +
                          ", beta0 = " + std::to_string(config.beta0()));
}

}  // namespace detail

inline Complex zeta(double beta, const PotentialConfig& config) {
    detail::require_continuum(beta, config, "zeta");
    const double s = std::sqrt(2.0 / (beta - config.beta0()));
    const double a = sin_pi(0.5 * beta);
    const double b = s * gamma_half_ratio(0.5 * beta) * cos_pi(0.5 * beta);
    const Complex num(a, -b);
    return num / std::conj(num);
}

inline double phase_shift(double beta, const PotentialConfig& config) {
    const Complex z = zeta(beta, config);
    const double d = std::atan2(z.imag(), z.real());
    return d == -std::numbers::pi ? std::numbers::pi : d;
}

/// Closed form for d delta / d beta:
///   (1/2) sqrt(D) sin(pi b) [1/D + Psi(b/2) - Psi((b+1)/2) + 2 pi / sin(pi b)]
///   / [ D Gamma(b/2) sin^2(pi b/2) / (sqrt2 Gamma(b/2 + 1/2)) + sqrt2 Gamma(b/2 + 1/2) cos^2(pi b/2) / Gamma(b/2) ]
/// with D = b - beta0. The 2 pi / sin(pi b) term is distributed through the
/// prefactor so integer beta needs no special case.
inline double delta_prime(double beta, const PotentialConfig& config) {
    detail::require_continuum(beta, config, "delta_prime");
    const double d = beta - config.beta0();
    const double ratio = gamma_half_ratio(0.5 * beta);
    const double sin_b = sin_pi(beta);
    const double sin_h = sin_pi(0.5 * beta);
    const double cos_h = cos_pi(0.5 * beta);
    const double bracket = sin_b * (1.0 / d + digamma(0.5 * beta) - digamma(0.5 * (beta + 1.0))) +
                           2.0 * std::numbers::pi;
    const double numerator = 0.5 * std::sqrt(d) * bracket;
    const double denominator = d * sin_h * sin_h / (std::numbers::sqrt2 * ratio) +
                               std::numbers::sqrt2 * ratio * cos_h * cos_h;
    return numerator / denominator;
}

inline double delay_time(double beta, const PotentialConfig& config) {
    return delta_prime(beta, config) / config.omega();
}

/// Pi(beta) = 2 / [J(beta) + i sqrt(2/(beta - beta0)) J(beta - 1)].
inline Complex pi_coefficient(double beta, const PotentialConfig& config) {
    detail::require_continuum(beta, config, "pi_coefficient");
    const double s = std::sqrt(2.0 / (beta - config.beta0()));
    const Complex den = j_beta(beta) + Complex(0.0, s) * j_beta(beta - 1.0);
    if (std::abs(den) == 0.0) throw SingularError("pi_coefficient: vanishing denominator at beta = " + std::to_string(beta));
    return 2.0 / den;
}

inline PhaseShiftSample sample_phase_shift(double beta, const PotentialConfig& config) {
    PhaseShiftSample s;
    s.beta = beta;
    s.zeta = zeta(beta, config);
    s.delta = phase_shift(beta, config);
    s.delta_prime = delta_prime(beta, config);
    s.tau = s.delta_prime / config.omega();
    return s;
}

struct ResonanceOptions {
    double scan_step = 0.01;
    double threshold = 1.05;  // in units of pi / omega
};

namespace detail {

template <class F>
double golden_section_max(F&& f, double a, double b, double tol = 1e-10) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Crossing of f = level between an inside point (f > level) and an outside point.
template <class F>
double bisect_level(F&& f, double level, double inside, double outside, double tol = 1e-10) {
    while (std::abs(outside - inside) > tol) {
        const double mid = 0.5 * (inside + outside);
        if (f(mid) > level)
            inside = mid;
        else
            outside = mid;
    }
    return 0.5 * (inside + outside);
}

}  // namespace detail

/// Local maxima of tau on (beta0, beta_max]: coarse scan, golden-section
/// refinement, then the half-height crossings on either side.
inline std::vector<Resonance> find_resonances(const PotentialConfig& config, double beta_max,
                                              const ResonanceOptions& opt = {}) {
    const double b0 = config.beta0();
    if (!(beta_max > b0 + 1.0)) throw DomainError("find_resonances: requires beta_max > beta0 + 1");
    const double baseline = std::numbers::pi / config.omega();
    auto tau = [&](double b) { return delay_time(b, config); };

    std::vector<double> grid;
    for (double b = b0 + opt.scan_step; b <= beta_max + 1e-12; b = b0 + opt.scan_step * static_cast<double>(grid.size() + 1))
        grid.push_back(b);
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { values[i] = tau(grid[i]); });

    std::vector<Resonance> out;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) continue;
        Resonance r;
        r.beta_peak = detail::golden_section_max(tau, grid[i - 1], grid[i + 1]);
        r.tau_peak = tau(r.beta_peak);
        if (r.tau_peak < opt.threshold * baseline) continue;

        const double level = 0.5 * (r.tau_peak + baseline);
        std::size_t j = i;
        while (j > 0 && values[j] > level) --j;
        const double left = values[j] > level ? grid[j] : detail::bisect_level(tau, level, r.beta_peak, grid[j]);
        j = i;
        while (j + 1 < grid.size() && values[j] > level) ++j;
        const double right = values[j] > level ? grid[j] : detail::bisect_level(tau, level, r.beta_peak, grid[j]);
        r.width = right - left;
        out.push_back(r);
    }
    return out;
}

}  // namespace stepharm
