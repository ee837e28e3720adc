#pragma once

// Bound states: the level condition, its roots and the proper eigenfunctions
//   u_n(x) = F_{eps_n}(alpha x) exp(-alpha^2 x^2 / 2)   (x < 0)
//          = J(beta_n) exp(-k_n x)                       (x >= 0).

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "stepharm/config.hpp"
#include "stepharm/errors.hpp"
#include "stepharm/hermite_contour.hpp"
#include "stepharm/parallel.hpp"
#include "stepharm/quadrature.hpp"
#include "stepharm/special_fn.hpp"

namespace stepharm {

/// beta0 closer than this to an odd integer counts as sitting on a threshold.
inline constexpr double kThresholdTol = 1e-12;

struct EnergyLevel {
    int n = 0;
    double beta_n = 0.0;
    double energy = 0.0;
    double k_n = 0.0;
    // Zero-decay state at beta0 = 1 (E = U0); its x >= 0 tail is flat.
    bool marginal = false;
};

inline bool is_marginal_ground_state(const PotentialConfig& config) {
    return std::abs(config.beta0() - 1.0) <= kThresholdTol;
}

/// Number of bound states. A level exists for each n with 2n + 1 < beta0; the
/// threshold state at beta0 = 1 is counted (marginal), those at beta0 = 3, 5, ...
/// are not.
inline int level_count(const PotentialConfig& config) {
    const double b0 = config.beta0();
    if (is_marginal_ground_state(config)) return 1;
    if (b0 < 1.0) return 0;
    const double c = std::ceil((b0 - kThresholdTol - 1.0) / 2.0);
    return c > 0 ? static_cast<int>(c) : 0;
}

/// g(beta) = [Gamma((beta+1)/2) / Gamma(beta/2)] cot(pi beta / 2) + sqrt((beta0 - beta)/2).
inline double level_equation_residual(double beta, const PotentialConfig& config) {
    const double b0 = config.beta0();
    if (!(beta > 0.0) || !(beta <= b0))
        throw DomainError("level_equation_residual: beta must lie in (0, beta0], got " + std::to_string(beta));
    const double cot = cos_pi(0.5 * beta) / sin_pi(0.5 * beta);
    return gamma_half_ratio(0.5 * beta) * cot + std::sqrt(0.5 * (b0 - beta));
}

inline EnergyLevel make_level(int n, double beta, const PotentialConfig& config, bool marginal = false) {
    return {n, beta, config.energy_of_beta(beta), config.wavenumber(beta), marginal};
}

/// Roots of the level condition, one per bracket (2n+1, min(2n+2, beta0)),
/// by bisection to |d beta| < tol.
inline std::vector<EnergyLevel> solve_levels(const PotentialConfig& config, double tol = 1e-13) {
    if (!(tol > 0)) throw std::invalid_argument("solve_levels: tol must be > 0");
    config.validate();
    if (is_marginal_ground_state(config)) return {make_level(0, 1.0, config, true)};

    const double b0 = config.beta0();
    const int count = level_count(config);
    std::vector<EnergyLevel> levels(static_cast<std::size_t>(count));
    parallel_for(levels.size(), [&](std::size_t i) {
        const int n = static_cast<int>(i);
        // g > 0 at 2n+1 (cot vanishes); g < 0 at beta0 or just below the cot pole at 2n+2.
        double lo = 2.0 * n + 1.0;
        double hi = 2.0 * n + 2.0 <= b0 ? 2.0 * n + 2.0 - 1e-9 : b0;
        double g_lo = level_equation_residual(lo, config);
        const double g_hi = level_equation_residual(hi, config);
        if (!(g_lo > 0.0) || !(g_hi < 0.0))
            throw BracketError("solve_levels: no sign change in bracket for n = " + std::to_string(n));
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double g = level_equation_residual(mid, config);
            if ((g > 0.0) == (g_lo > 0.0)) {
                lo = mid;
                g_lo = g;
            } else {
                hi = mid;
            }
        }
        levels[i] = make_level(n, 0.5 * (lo + hi), config);
    });
    return levels;
}

namespace detail {

// \int_{-inf}^0 |F(y)|^2 e^{-y^2} dy, extended panel by panel until the tail is negligible.
inline double interior_norm(double beta, const ContourSpec& contour) {
    const double width = 0.5;
    double total = 0.0;
    for (int p = 0; p < 400; ++p) {
        const double b = -width * p;
        const double a = b - width;
        const auto sum = quad::integrate_panels<double>(
            [&](double y) { return std::norm(f_epsilon(beta, y, contour)) * std::exp(-y * y); }, a, b, 1);
        total += sum.value;
        if (p > 4 && sum.value < 1e-10 * total) return total;
    }
    throw ConvergenceError("bound_eigenfunction: interior norm tail did not decay");
}

}  // namespace detail

/// Normalized proper eigenfunction sampled at xs. The global phase is fixed so
/// that the x >= 0 tail is real and positive. For the marginal (k = 0) state
/// the flat tail is normalized over the sampled x >= 0 range only.
inline std::vector<Complex> bound_eigenfunction(const EnergyLevel& level, const PotentialConfig& config,
                                                std::span<const double> xs, const ContourSpec& contour = {}) {
    const double alpha = config.alpha();
    const double beta = level.beta_n;
    const Complex jb = j_beta(beta);

    double norm = detail::interior_norm(beta, contour) / alpha;
    if (level.marginal || level.k_n <= 0.0) {
        double x_max = 0.0;
        for (double x : xs) x_max = std::max(x_max, x);
        norm += std::norm(jb) * x_max;
    } else {
        norm += std::norm(jb) / (2.0 * level.k_n);
    }
    const Complex scale = std::polar(1.0 / std::sqrt(norm), -std::arg(jb));

    std::vector<Complex> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        const double x = xs[i];
        if (x < 0.0) {
            const double y = alpha * x;
            out[i] = scale * f_epsilon(beta, y, contour) * std::exp(-0.5 * y * y);
        } else {
            out[i] = scale * jb * std::exp(-level.k_n * x);
        }
    });
    return out;
}

}  // namespace stepharm
