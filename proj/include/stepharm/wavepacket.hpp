#pragma once

// Continuum superposition psi(x, t) = \int dk c(k) u_k(x) e^{-i Omega(k) t}
// of the improper eigenfunctions
//   u_k(x) = (2 pi)^{-1/2} Pi(beta) F_eps(alpha x) e^{-alpha^2 x^2 / 2}   (x < 0)
//          = (2 pi)^{-1/2} (e^{-ikx} + zeta(beta) e^{ikx})               (x >= 0),
// with a Gaussian envelope and launch phase gamma(k) = k x_start, so the
// incoming packet sits at x_start at t = 0 and would hit a mirror at
// t = x_start / v.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stepharm/config.hpp"
#include "stepharm/errors.hpp"
#include "stepharm/hermite_contour.hpp"
#include "stepharm/parallel.hpp"
#include "stepharm/quadrature.hpp"
#include "stepharm/scattering.hpp"

namespace stepharm {

struct WavePacketSpec {
    double k_center = 1.0;
    double sigma_k = 0.05;
    double x_start = 80.0;
    PotentialConfig config;

    /// Position-space standard deviation of |psi|^2 at launch.
    double position_width() const { return 0.5 / sigma_k; }
    double group_velocity() const { return config.hbar * k_center / config.mass; }
    /// Fraction of the launched |psi|^2 lying at x < 0.
    double initial_overlap() const {
        return 0.5 * std::erfc(x_start / (std::numbers::sqrt2 * position_width()));
    }

    void validate() const {
        config.validate();
        if (!(k_center > 0) || !(sigma_k > 0) || !(x_start > 0))
            throw std::invalid_argument("WavePacketSpec: k_center, sigma_k and x_start must be positive");
        if (!(k_center - 4.0 * sigma_k > 0.0))
            throw std::invalid_argument("WavePacketSpec: packet must satisfy k_center - 4 sigma_k > 0");
        if (!(initial_overlap() < 1e-6))
            throw std::invalid_argument("WavePacketSpec: x_start too small, launched packet overlaps x < 0");
    }
};

struct FrameSet {
    std::vector<double> times;
    std::vector<double> x_grid;
    std::vector<std::vector<Complex>> psi;  // psi[time][x]
    std::size_t k_nodes = 0;
};

struct EvolveOptions {
    bool include_interior = false;
    bool mirror = false;  // replace the barrier by a hard wall, zeta = -1
    double tol = 1e-6;
    std::size_t initial_panels = 4;
    std::size_t max_panels = 1024;
    ContourSpec contour;
};

inline Complex improper_eigenfunction(double beta, const PotentialConfig& config, double x,
                                      const ContourSpec& contour = {}) {
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    if (x < 0.0) {
        const double y = config.alpha() * x;
        return inv_sqrt_2pi * pi_coefficient(beta, config) * f_epsilon(beta, y, contour) * std::exp(-0.5 * y * y);
    }
    const double k = config.wavenumber(beta);
    const Complex in = std::polar(1.0, -k * x);
    return inv_sqrt_2pi * (in + zeta(beta, config) * std::conj(in));
}

inline double envelope(const WavePacketSpec& spec, double k) {
    const double s2 = spec.sigma_k * spec.sigma_k;
    const double dk = k - spec.k_center;
    return std::pow(2.0 * std::numbers::pi * s2, -0.25) * std::exp(-dk * dk / (4.0 * s2));
}

namespace detail {

inline FrameSet evolve_fixed(const WavePacketSpec& spec, std::span<const double> x_grid,
                             std::span<const double> times, const EvolveOptions& opt, std::size_t panels) {
    const auto& rule = quad::gauss_legendre<16>();
    const PotentialConfig& cfg = spec.config;
    const double k_lo = std::max(spec.k_center - 5.0 * spec.sigma_k, 1e-3 * spec.sigma_k);
    const double k_hi = spec.k_center + 5.0 * spec.sigma_k;
    const double width = (k_hi - k_lo) / static_cast<double>(panels);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double alpha = cfg.alpha();

    const std::size_t nk = panels * rule.nodes.size();
    std::vector<double> ks(nk), omegas(nk), betas(nk);
    std::vector<Complex> weights(nk), zetas(nk), pis(nk);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = k_lo + width * (static_cast<double>(p) + 0.5);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const std::size_t j = p * rule.nodes.size() + i;
            const double k = mid + 0.5 * width * rule.nodes[i];
            ks[j] = k;
            betas[j] = cfg.beta_of_wavenumber(k);
            omegas[j] = cfg.u0 / cfg.hbar + cfg.hbar * k * k / (2.0 * cfg.mass);
            weights[j] = 0.5 * width * rule.weights[i] * inv_sqrt_2pi * envelope(spec, k) *
                         std::polar(1.0, k * spec.x_start);
            zetas[j] = opt.mirror ? Complex(-1.0, 0.0) : zeta(betas[j], cfg);
            if (opt.include_interior && !opt.mirror) pis[j] = pi_coefficient(betas[j], cfg);
        }
    }

    // modes[x][k] = c(k) dk * sqrt(2 pi) u_k(x), without the time factor
    std::vector<std::vector<Complex>> modes(x_grid.size(), std::vector<Complex>(nk));
    parallel_for(x_grid.size(), [&](std::size_t ix) {
        const double x = x_grid[ix];
        auto& row = modes[ix];
        if (x >= 0.0) {
            for (std::size_t j = 0; j < nk; ++j) {
                const Complex in = std::polar(1.0, -ks[j] * x);
                row[j] = weights[j] * (in + zetas[j] * std::conj(in));
            }
        } else if (!opt.mirror) {
            const double y = alpha * x;
            const double gauss = std::exp(-0.5 * y * y);
            for (std::size_t j = 0; j < nk; ++j)
                row[j] = weights[j] * pis[j] * f_epsilon(betas[j], y, opt.contour) * gauss;
        }
    });

    FrameSet out;
    out.times.assign(times.begin(), times.end());
    out.x_grid.assign(x_grid.begin(), x_grid.end());
    out.k_nodes = nk;
    out.psi.assign(times.size(), std::vector<Complex>(x_grid.size()));
    parallel_for(times.size(), [&](std::size_t it) {
        std::vector<Complex> phase(nk);
        for (std::size_t j = 0; j < nk; ++j) phase[j] = std::polar(1.0, -omegas[j] * times[it]);
        for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
            Complex acc;
            const auto& row = modes[ix];
            for (std::size_t j = 0; j < nk; ++j) acc += row[j] * phase[j];
            out.psi[it][ix] = acc;
        }
    });
    return out;
}

}  // namespace detail

/// Frames of psi on x_grid at each time. The k-quadrature panel count is
/// doubled until no frame value moves by more than opt.tol.
inline FrameSet evolve(const WavePacketSpec& spec, std::span<const double> x_grid, std::span<const double> times,
                       const EvolveOptions& opt = {}) {
    spec.validate();
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (!(x_grid[i] > x_grid[i - 1])) throw std::invalid_argument("evolve: x_grid must be strictly increasing");
    if (!opt.include_interior && !x_grid.empty() && x_grid.front() < 0.0)
        throw std::invalid_argument("evolve: x < 0 samples need include_interior");

    std::size_t panels = std::max<std::size_t>(1, opt.initial_panels);
    FrameSet prev = detail::evolve_fixed(spec, x_grid, times, opt, panels);
    while (panels < opt.max_panels) {
        panels *= 2;
        FrameSet next = detail::evolve_fixed(spec, x_grid, times, opt, panels);
        double change = 0.0;
        for (std::size_t t = 0; t < next.psi.size(); ++t)
            for (std::size_t i = 0; i < next.psi[t].size(); ++i)
                change = std::max(change, std::abs(next.psi[t][i] - prev.psi[t][i]));
        if (change < opt.tol) return next;
        prev = std::move(next);
    }
    throw ConvergenceError("evolve: k-quadrature did not converge");
}

struct Moments {
    double mass = 0.0;
    double centroid = 0.0;
    double width = 0.0;
};

/// Trapezoid moments of |psi|^2 over a strictly increasing grid.
inline Moments density_moments(std::span<const double> x, std::span<const Complex> psi) {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double h = 0.5 * (x[i] - x[i - 1]);
        const double a = std::norm(psi[i - 1]), b = std::norm(psi[i]);
        m0 += h * (a + b);
        m1 += h * (a * x[i - 1] + b * x[i]);
        m2 += h * (a * x[i - 1] * x[i - 1] + b * x[i] * x[i]);
    }
    Moments m;
    m.mass = m0;
    if (m0 > 0.0) {
        m.centroid = m1 / m0;
        m.width = std::sqrt(std::max(0.0, m2 / m0 - m.centroid * m.centroid));
    }
    return m;
}

struct DelayMeasurement {
    double delay = 0.0;         // arrival_time - mirror_time
    double arrival_time = 0.0;  // reflected centroid reaches x_start
    double mirror_time = 0.0;   // 2 x_start / v
    double width = 0.0;         // packet standard deviation at arrival
};

/// Times the reflected |psi|^2 centroid crossing the detector at x_start and
/// compares with an instantaneous mirror bounce.
inline DelayMeasurement measure_delay(const WavePacketSpec& spec, const EvolveOptions& options = {}) {
    spec.validate();
    EvolveOptions opt = options;
    opt.include_interior = false;

    const double v = spec.group_velocity();
    const double x_d = spec.x_start;
    const double k_hi = spec.k_center + 5.0 * spec.sigma_k;
    const double sigma0 = spec.position_width();
    const double t_mirror = 2.0 * x_d / v;

    auto centroid_at = [&](double t) {
        const double spread = spec.config.hbar * spec.sigma_k * t / spec.config.mass;
        const double sigma_t = std::sqrt(sigma0 * sigma0 + spread * spread);
        const double x_max = 2.0 * x_d + 12.0 * sigma_t;
        const double dx = std::min(sigma0 / 8.0, std::numbers::pi / (4.0 * k_hi));
        const auto n = static_cast<std::size_t>(std::ceil(x_max / dx)) + 1;
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = x_max * static_cast<double>(i) / static_cast<double>(n - 1);
        const double ts[1] = {t};
        const FrameSet f = evolve(spec, xs, ts, opt);
        return density_moments(xs, f.psi[0]);
    };

    double t0 = t_mirror;
    double t1 = t_mirror + spec.config.period() / 2.0;
    Moments m0 = centroid_at(t0);
    Moments m1 = centroid_at(t1);
    for (int it = 0; it < 30; ++it) {
        const double f0 = m0.centroid - x_d, f1 = m1.centroid - x_d;
        if (std::abs(f1) < 1e-9 * x_d) break;
        if (f1 == f0) throw ConvergenceError("measure_delay: centroid is stationary");
        const double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
        t0 = t1;
        m0 = m1;
        t1 = t2;
        m1 = centroid_at(t1);
    }
    if (std::abs(m1.centroid - x_d) > 1e-6 * x_d)
        throw ConvergenceError("measure_delay: centroid crossing did not converge");
    if (m1.width > 0.5 * x_d) throw DispersionError("measure_delay: reflected packet too broad to localize");
    return {t1 - t_mirror, t1, t_mirror, m1.width};
}

}  // namespace stepharm
