#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stepharm/errors.hpp"

namespace stepharm {

/// Physical constants of U(x) = U0 (x >= 0), kappa x^2 / 2 (x < 0).
/// Derived quantities are computed on demand and never cached.
struct PotentialConfig {
    double hbar = 1.0;
    double mass = 1.0;
    double kappa = 1.0;  // spring constant
    double u0 = 0.5;     // step height

    /// Units hbar = m = omega = 1 with the dimensionless step height beta0.
    static PotentialConfig from_beta0(double beta0) {
        PotentialConfig c;
        c.u0 = beta0 - 0.5;
        c.validate();
        return c;
    }

    void validate() const {
        if (!(hbar > 0) || !(mass > 0) || !(kappa > 0))
            throw std::invalid_argument("PotentialConfig: hbar, mass and kappa must be positive");
        if (!(u0 >= 0) || !std::isfinite(u0))
            throw std::invalid_argument("PotentialConfig: u0 must be finite and >= 0 (beta0 >= 1/2)");
    }

    double omega() const { return std::sqrt(kappa / mass); }
    double alpha() const { return std::sqrt(std::sqrt(mass * kappa / (hbar * hbar))); }
    double beta0() const { return u0 / (hbar * omega()) + 0.5; }
    double period() const { return 2.0 * std::numbers::pi / omega(); }

    double energy_of_beta(double beta) const { return hbar * omega() * (beta - 0.5); }
    double beta_of_energy(double energy) const { return energy / (hbar * omega()) + 0.5; }

    /// Wavenumber outside the well: sqrt(2m|E - U0|) / hbar = alpha sqrt(2|beta - beta0|).
    double wavenumber(double beta) const { return alpha() * std::sqrt(2.0 * std::abs(beta - beta0())); }

    /// Continuum coordinate for an exterior wavenumber k >= 0.
    double beta_of_wavenumber(double k) const {
        const double a = alpha();
        return beta0() + 0.5 * (k * k) / (a * a);
    }
};

/// One spectral coordinate: beta, epsilon = 2 beta - 1, the absolute energy
/// and the exterior wavenumber (decay constant below the step).
struct BetaPoint {
    double beta = 1.0;
    double epsilon = 1.0;
    double energy = 0.5;
    double k = 0.0;

    static BetaPoint make(double beta, const PotentialConfig& config) {
        return {beta, 2.0 * beta - 1.0, config.energy_of_beta(beta), config.wavenumber(beta)};
    }
    bool is_continuum(const PotentialConfig& config) const { return beta > config.beta0(); }
};

}  // namespace stepharm
