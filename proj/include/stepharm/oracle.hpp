#pragma once

// Brute-force cross-checks. Nothing here calls the Lanczos Gamma kernel or the
// Gauss-Legendre panels used by the analytic path: integrals use double-
// exponential (tanh-sinh / exp-sinh) rules and ODEs are integrated directly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stepharm/config.hpp"
#include "stepharm/errors.hpp"

namespace stepharm::oracle {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Double-exponential quadrature

/// tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
template <class T, class F>
T tanh_sinh(F&& f, double a, double b, double tol = 1e-14, int max_level = 12) {
    const double half = 0.5 * (b - a);
    const double t_max = 3.5;
    auto term = [&](double t) -> T {
        const double s = 0.5 * std::numbers::pi * std::sinh(t);
        const double ch = std::cosh(s);
        const double x = std::tanh(s);
        const double w = 0.5 * std::numbers::pi * std::cosh(t) / (ch * ch);
        // distance to the nearer endpoint, computed without cancellation
        const double gap = half / (std::exp(2.0 * std::abs(s)) + 1.0) * 2.0;
        if (gap <= 0.0) return T{};
        const double point = x < 0 ? a + gap : b - gap;
        if (point <= a || point >= b) return T{};
        return w * f(point);
    };
    double h = 1.0;
    T sum = term(0.0);
    for (double t = h; t <= t_max; t += h) sum += term(t) + term(-t);
    T estimate = half * h * sum;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        T extra{};
        for (double t = h; t <= t_max; t += 2.0 * h) extra += term(t) + term(-t);
        sum += extra;
        const T next = half * h * sum;
        if (std::abs(next - estimate) <= tol * (1.0 + std::abs(next)) && level > 3) return next;
        estimate = next;
    }
    throw ConvergenceError("tanh_sinh: no convergence");
}

/// exp-sinh on (0, inf): x = exp(pi/2 sinh t).
template <class T, class F>
T exp_sinh(F&& f, double tol = 1e-14, int max_level = 12) {
    const double t_lo = -6.5, t_hi = 4.0;
    auto term = [&](double t) -> T {
        const double x = std::exp(0.5 * std::numbers::pi * std::sinh(t));
        if (x == 0.0 || !std::isfinite(x)) return T{};
        const double w = 0.5 * std::numbers::pi * std::cosh(t) * x;
        const T v = f(x);
        return w * v;
    };
    double h = 0.5;
    T sum{};
    for (double t = t_lo; t <= t_hi; t += h) sum += term(t);
    T estimate = h * sum;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        T extra{};
        for (double t = t_lo + h; t <= t_hi; t += 2.0 * h) extra += term(t);
        sum += extra;
        const T next = h * sum;
        if (std::abs(next - estimate) <= tol * (1.0 + std::abs(next)) && level > 3) return next;
        estimate = next;
    }
    throw ConvergenceError("exp_sinh: no convergence");
}

// ---------------------------------------------------------------------------
// J(beta) by direct contour quadrature

/// \int_{Gamma_2} e^{-t^2} t^{-beta} dt on the unit circle plus both cut edges.
inline Complex contour_quadrature_j(double beta) {
    auto circle = [&](double theta) {
        // t = e^{i theta}, dt = i t d theta, t^{-beta} = e^{-i beta theta}
        const Complex t(std::cos(theta), std::sin(theta));
        return Complex(0.0, 1.0) * std::exp(-t * t + Complex(0.0, (1.0 - beta) * theta));
    };
    const Complex loop = tanh_sinh<Complex>(circle, 0.0, 2.0 * std::numbers::pi);

    double t_max = 2.0;
    while (-t_max * t_max + std::abs(beta) * std::log(t_max) > std::log(1e-16)) t_max += 0.5;
    const double edge = tanh_sinh<double>([&](double t) { return std::exp(-t * t - beta * std::log(t)); }, 1.0, t_max);

    const Complex jump = std::exp(Complex(0.0, -2.0 * std::numbers::pi * beta)) - 1.0;
    return loop + jump * edge;
}

/// For beta < 1 the loop around the origin can be shrunk away:
/// J = (e^{-2 pi i beta} - 1) \int_0^inf e^{-t^2} t^{-beta} dt.
inline Complex cut_edge_quadrature_j(double beta) {
    if (!(beta < 1.0)) throw DomainError("cut_edge_quadrature_j: requires beta < 1");
    const double edge = exp_sinh<double>([&](double t) { return std::exp(-t * t - beta * std::log(t)); });
    return (std::exp(Complex(0.0, -2.0 * std::numbers::pi * beta)) - 1.0) * edge;
}

// ---------------------------------------------------------------------------
// Hermite equation F'' - 2 y F' + (2 beta - 2) F = 0 by classical RK4

struct HermiteState {
    Complex f, fp;
};

inline HermiteState rk4_hermite(double beta, double y0, HermiteState s, double y1, std::size_t steps) {
    const double c = 2.0 * beta - 2.0;  // eps - 1
    const double h = (y1 - y0) / static_cast<double>(steps);
    auto rhs = [&](double y, const HermiteState& u) { return HermiteState{u.fp, 2.0 * y * u.fp - c * u.f}; };
    double y = y0;
    for (std::size_t i = 0; i < steps; ++i) {
        const HermiteState k1 = rhs(y, s);
        const HermiteState k2 = rhs(y + 0.5 * h, {s.f + 0.5 * h * k1.f, s.fp + 0.5 * h * k1.fp});
        const HermiteState k3 = rhs(y + 0.5 * h, {s.f + 0.5 * h * k2.f, s.fp + 0.5 * h * k2.fp});
        const HermiteState k4 = rhs(y + h, {s.f + h * k3.f, s.fp + h * k3.fp});
        s.f += h / 6.0 * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f);
        s.fp += h / 6.0 * (k1.fp + 2.0 * k2.fp + 2.0 * k3.fp + k4.fp);
        y = y0 + h * static_cast<double>(i + 1);
    }
    return s;
}

/// Solution of the Hermite equation on a uniform grid containing 0, seeded
/// with F(0) = f0, F'(0) = f0_prime. Substeps per grid cell are doubled
/// until the solution moves by less than 1e-8 relative to its peak.
inline std::vector<Complex> numerov_hermite(double beta, std::span<const double> y_grid, Complex f0, Complex f0_prime) {
    if (y_grid.size() < 2) throw std::invalid_argument("numerov_hermite: grid needs at least two points");
    const double h = y_grid[1] - y_grid[0];
    std::size_t origin = y_grid.size();
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        if (i > 0 && std::abs((y_grid[i] - y_grid[i - 1]) - h) > 1e-9 * std::abs(h))
            throw std::invalid_argument("numerov_hermite: grid must be uniform");
        if (std::abs(y_grid[i]) < 1e-12 * std::abs(h)) origin = i;
    }
    if (origin == y_grid.size()) throw std::invalid_argument("numerov_hermite: grid must contain y = 0");

    auto solve = [&](std::size_t sub) {
        std::vector<Complex> out(y_grid.size());
        out[origin] = f0;
        HermiteState s{f0, f0_prime};
        for (std::size_t i = origin + 1; i < y_grid.size(); ++i) {
            s = rk4_hermite(beta, y_grid[i - 1], s, y_grid[i], sub);
            out[i] = s.f;
        }
        s = {f0, f0_prime};
        for (std::size_t i = origin; i-- > 0;) {
            s = rk4_hermite(beta, y_grid[i + 1], s, y_grid[i], sub);
            out[i] = s.f;
        }
        return out;
    };

    std::size_t sub = 1;
    std::vector<Complex> prev = solve(sub);
    while (sub < (1u << 20)) {
        sub *= 2;
        std::vector<Complex> next = solve(sub);
        double peak = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            peak = std::max(peak, std::abs(next[i]));
            diff = std::max(diff, std::abs(next[i] - prev[i]));
        }
        if (diff < 1e-8 * std::max(1.0, peak)) return next;
        prev = std::move(next);
    }
    throw ConvergenceError("numerov_hermite: step-size underflow");
}

// ---------------------------------------------------------------------------
// Shooting for bound states of u'' = (y^2 - eps) u on y < 0

struct ShootingResult {
    std::vector<double> energies;
    std::vector<double> mismatch_residuals;
    std::vector<bool> marginal;
};

/// u'(0)/u(0) + sqrt(2 (beta0 - beta)) for the solution decaying at y -> -inf,
/// integrated with Numerov from y = -8.
inline double shooting_mismatch(double beta, double beta0, std::size_t steps = 8000) {
    const double eps = 2.0 * beta - 1.0;
    const double y_left = -8.0;
    const double h = -y_left / static_cast<double>(steps);
    auto f = [&](double y) { return eps - y * y; };
    // asymptotic seed |y|^{(eps-1)/2} e^{-y^2/2}
    auto seed = [&](double y) { return std::exp(0.5 * (eps - 1.0) * std::log(-y) - 0.5 * y * y); };
    const double c = h * h / 12.0;
    std::vector<double> u(steps + 3);
    u[0] = seed(y_left);
    u[1] = seed(y_left + h);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        const double ym = y_left + h * static_cast<double>(i - 1);
        const double y0 = ym + h, yp = y0 + h;
        u[i + 1] = (2.0 * u[i] * (1.0 - 5.0 * c * f(y0)) - u[i - 1] * (1.0 + c * f(ym))) / (1.0 + c * f(yp));
    }
    const std::size_t o = steps;  // y = 0; the interior solution is entire so it continues past 0
    const double u0 = u[o];
    const double du = (u[o - 2] - 8.0 * u[o - 1] + 8.0 * u[o + 1] - u[o + 2]) / (12.0 * h);
    return du / u0 + std::sqrt(2.0 * std::max(0.0, beta0 - beta));
}

inline ShootingResult shoot_bound_states(const PotentialConfig& config, int n_max, double tol = 1e-12) {
    if (n_max < 1) throw std::invalid_argument("shoot_bound_states: n_max must be >= 1");
    const double b0 = config.beta0();
    ShootingResult out;
    if (std::abs(b0 - 1.0) <= 1e-12) {
        out.energies.push_back(config.energy_of_beta(1.0));
        out.mismatch_residuals.push_back(shooting_mismatch(1.0, b0));
        out.marginal.push_back(true);
        return out;
    }
    for (int n = 0; n < n_max && 2.0 * n + 1.0 < b0 - 1e-12; ++n) {
        double lo = 2.0 * n + 1.0;
        double hi = 2.0 * n + 2.0 <= b0 ? 2.0 * n + 2.0 - 1e-9 : b0;
        double m_lo = shooting_mismatch(lo, b0);
        const double m_hi = shooting_mismatch(hi, b0);
        if ((m_lo > 0.0) == (m_hi > 0.0))
            throw BracketError("shoot_bound_states: no root in bracket for n = " + std::to_string(n));
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const double m = shooting_mismatch(mid, b0);
            if ((m > 0.0) == (m_lo > 0.0)) {
                lo = mid;
                m_lo = m;
            } else {
                hi = mid;
            }
        }
        const double beta = 0.5 * (lo + hi);
        out.energies.push_back(config.energy_of_beta(beta));
        out.mismatch_residuals.push_back(shooting_mismatch(beta, b0));
        out.marginal.push_back(false);
    }
    return out;
}

// ---------------------------------------------------------------------------

/// Adds multiples of 2 pi so that adjacent samples never jump by more than pi.
inline std::vector<double> unwrap_phase(std::span<const double> phase) {
    std::vector<double> out(phase.begin(), phase.end());
    double offset = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double jump = phase[i] - phase[i - 1];
        if (jump > std::numbers::pi)
            offset -= 2.0 * std::numbers::pi;
        else if (jump < -std::numbers::pi)
            offset += 2.0 * std::numbers::pi;
        out[i] = phase[i] + offset;
    }
    return out;
}

/// d delta / d beta from a five-point stencil of the unwrapped phase of
/// a reflection coefficient, sampled at beta + {-2, -1, 1, 2} h.
template <class PhaseFn>
double phase_derivative_fd(PhaseFn&& phase, double beta, double h = 1e-3) {
    const double raw[5] = {phase(beta - 2.0 * h), phase(beta - h), phase(beta), phase(beta + h), phase(beta + 2.0 * h)};
    const std::vector<double> p = unwrap_phase(raw);
    return (p[0] - 8.0 * p[1] + 8.0 * p[3] - p[4]) / (12.0 * h);
}

}  // namespace stepharm::oracle
