#pragma once

// Oracle cross-check suite behind `stepharm verify`. Every check reports the
// worst residual it saw against a fixed tolerance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "stepharm/config.hpp"
#include "stepharm/hermite_contour.hpp"
#include "stepharm/oracle.hpp"
#include "stepharm/scattering.hpp"
#include "stepharm/special_fn.hpp"
#include "stepharm/spectrum.hpp"
#include "stepharm/wavepacket.hpp"

namespace stepharm::verify {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    double seconds = 0.0;
    std::string error;  // set when the check threw
};

struct Check {
    std::string name;
    double tolerance;
    std::function<double()> residual;
};

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

/// Closed-form delta' against finite differences of the unwrapped phase,
/// skipping +-0.05 around resonance peaks.
inline double phase_derivative_residual(double beta0, double span = 20.0, double step = 0.01) {
    const auto cfg = PotentialConfig::from_beta0(beta0);
    const auto peaks = find_resonances(cfg, beta0 + span + 1.0);
    double worst = 0.0;
    for (double b = beta0 + 0.1 + step; b < beta0 + span; b += step) {
        const bool near_peak = std::any_of(peaks.begin(), peaks.end(),
                                           [&](const Resonance& r) { return std::abs(b - r.beta_peak) <= 0.05; });
        if (near_peak) continue;
        const double fd = oracle::phase_derivative_fd([&](double x) { return phase_shift(x, cfg); }, b);
        const double exact = delta_prime(b, cfg);
        worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
    }
    return worst;
}

/// Relative mismatch of u and u' across x = 0 for a bound state, with the
/// interior side evaluated by contour quadrature.
inline double bound_junction_residual(const EnergyLevel& level, const PotentialConfig& cfg) {
    const double a = cfg.alpha();
    const Complex left = f_epsilon(level.beta_n, 0.0);
    const Complex left_d = a * f_epsilon_derivative(level.beta_n, 0.0);
    const Complex right = j_beta(level.beta_n);
    const Complex right_d = -level.k_n * right;
    return std::max(std::abs(left - right) / std::abs(right),
                    std::abs(left_d - right_d) / std::max(std::abs(right_d), std::abs(a * right)));
}

inline double improper_junction_residual(double beta, const PotentialConfig& cfg) {
    const double a = cfg.alpha();
    const double k = cfg.wavenumber(beta);
    const Complex p = pi_coefficient(beta, cfg);
    const Complex z = zeta(beta, cfg);
    const Complex left = p * f_epsilon(beta, 0.0);
    const Complex left_d = p * a * f_epsilon_derivative(beta, 0.0);
    const Complex right = 1.0 + z;
    const Complex right_d = Complex(0.0, k) * (z - 1.0);
    const double scale = std::max(std::abs(right), 1.0);
    const double scale_d = std::max(std::abs(right_d), k);
    return std::max(std::abs(left - right) / scale, std::abs(left_d - right_d) / scale_d);
}

inline std::vector<Check> default_checks() {
    std::vector<Check> checks;

    checks.push_back({"gamma_known_values", 1e-13, [] {
        const double sqrt_pi = std::sqrt(std::numbers::pi);
        const double cases[][2] = {{1.0, 1.0}, {0.5, sqrt_pi}, {5.0, 24.0}, {3.5, 15.0 * sqrt_pi / 8.0}, {-0.5, -2.0 * sqrt_pi}};
        double worst = 0.0;
        for (const auto& c : cases) worst = std::max(worst, std::abs(gamma(c[0]) / c[1] - 1.0));
        return worst;
    }});

    checks.push_back({"gamma_reflection_identity", 1e-10, [] {
        double worst = 0.0;
        for (double z = -4.95; z < 5.0; z += 0.1) {
            const double exact = std::numbers::pi / std::sin(std::numbers::pi * z);
            worst = std::max(worst, std::abs(gamma(z) * gamma(1.0 - z) - exact) / std::abs(exact));
        }
        return worst;
    }});

    checks.push_back({"digamma_recurrence", 1e-12, [] {
        double worst = 0.0;
        for (double x = 0.1; x <= 50.0; x += 0.37) worst = std::max(worst, std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x));
        return worst;
    }});

    checks.push_back({"j_closed_form_vs_contour_quadrature", 1e-8, [] {
        double worst = 0.0;
        for (double b : {-1.5, -0.5, 0.3, 0.5, 0.9, 1.3, 2.6, 4.1})
            worst = std::max(worst, rel_err(oracle::contour_quadrature_j(b), j_beta(b)));
        for (double b : {-1.5, -0.5, 0.3, 0.5, 0.9})
            worst = std::max(worst, rel_err(oracle::cut_edge_quadrature_j(b), j_beta(b)));
        return worst;
    }});

    checks.push_back({"hermite_degeneracy", 1e-6, [] {
        double worst = 0.0;
        for (int n = 0; n <= 5; ++n) {
            const double scale = 2.0 * std::numbers::pi / std::tgamma(n + 1.0);
            for (double y = -2.0; y <= 2.0 + 1e-12; y += 0.25) {
                const Complex expected(0.0, scale * hermite_poly(n, y));
                worst = std::max(worst, std::abs(f_epsilon(n + 1.0, y) - expected) /
                                            (1.0 + std::abs(expected)));
            }
        }
        return worst;
    }});

    checks.push_back({"contour_vs_ode", 1e-6, [] {
        double worst = 0.0;
        std::vector<double> ys;
        for (int i = -400; i <= 100; ++i) ys.push_back(0.01 * i);
        for (double b : {0.8, 1.3, 2.6}) {
            const auto ode = oracle::numerov_hermite(b, ys, oracle::contour_quadrature_j(b),
                                                     2.0 * oracle::contour_quadrature_j(b - 1.0));
            for (std::size_t i = 0; i < ys.size(); i += 10)
                worst = std::max(worst, rel_err(f_epsilon(b, ys[i]), ode[i]));
        }
        return worst;
    }});

    checks.push_back({"shooting_vs_level_equation", 1e-6, [] {
        double worst = 0.0;
        for (double b0 : {1.5, 2.5, 4.5}) {
            const auto cfg = PotentialConfig::from_beta0(b0);
            const auto levels = solve_levels(cfg);
            const auto shot = oracle::shoot_bound_states(cfg, 16);
            if (shot.energies.size() != levels.size()) return 1.0;
            for (std::size_t i = 0; i < levels.size(); ++i)
                worst = std::max(worst, std::abs(shot.energies[i] - levels[i].energy) / (cfg.hbar * cfg.omega()));
        }
        return worst;
    }});

    checks.push_back({"delta_prime_vs_phase_differences", 1e-5, [] {
        double worst = 0.0;
        for (double b0 : {1.5, 2.5, 4.5}) worst = std::max(worst, phase_derivative_residual(b0));
        return worst;
    }});

    checks.push_back({"zeta_unitarity", 1e-10, [] {
        double worst = 0.0;
        for (double b0 : {1.5, 2.0, 2.5, 3.5, 4.0, 4.5}) {
            const auto cfg = PotentialConfig::from_beta0(b0);
            for (int i = 1; i <= 1000; ++i) worst = std::max(worst, std::abs(std::abs(zeta(b0 + 0.05 * i, cfg)) - 1.0));
        }
        return worst;
    }});

    checks.push_back({"junction_continuity", 1e-8, [] {
        double worst = 0.0;
        for (double b0 : {1.5, 2.5, 4.5}) {
            const auto cfg = PotentialConfig::from_beta0(b0);
            for (const auto& lvl : solve_levels(cfg)) worst = std::max(worst, bound_junction_residual(lvl, cfg));
            for (double db : {0.3, 1.7, 4.2}) worst = std::max(worst, improper_junction_residual(b0 + db, cfg));
        }
        return worst;
    }});

    checks.push_back({"wavepacket_delay_vs_closed_form", 0.05, [] {
        const auto cfg = PotentialConfig::from_beta0(1.5);
        WavePacketSpec spec;
        spec.config = cfg;
        spec.k_center = cfg.wavenumber(6.0);
        spec.sigma_k = spec.k_center / 30.0;
        spec.x_start = 8.0 * spec.position_width();
        const double measured = measure_delay(spec).delay;
        const double expected = delay_time(6.0, cfg);
        return std::abs(measured / expected - 1.0);
    }});

    return checks;
}

inline CheckResult run_check(const Check& c) {
    CheckResult r;
    r.name = c.name;
    r.tolerance = c.tolerance;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.residual = c.residual();
        r.passed = std::isfinite(r.residual) && r.residual < c.tolerance;
    } catch (const std::exception& e) {
        r.error = e.what();
        r.residual = std::numeric_limits<double>::infinity();
        r.passed = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline std::vector<CheckResult> run_all() {
    std::vector<CheckResult> out;
    for (const auto& c : default_checks()) out.push_back(run_check(c));
    return out;
}

}  // namespace stepharm::verify
