#pragma once

// Composite Gauss-Legendre rules with panel doubling.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "stepharm/errors.hpp"

namespace stepharm::quad {

template <std::size_t N>
struct GaussLegendreRule {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};
};

// Newton iteration on P_N starting from the Tricomi estimate of each root.
template <std::size_t N>
GaussLegendreRule<N> make_gauss_legendre() {
    GaussLegendreRule<N> rule;
    const std::size_t half = (N + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 1; j <= N; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / static_cast<double>(j);
            }
            dp = static_cast<double>(N) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[N - 1 - i] = x;
        rule.weights[i] = rule.weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

template <std::size_t N = 16>
const GaussLegendreRule<N>& gauss_legendre() {
    static const GaussLegendreRule<N> rule = make_gauss_legendre<N>();
    return rule;
}

template <class T>
struct PanelSum {
    T value{};
    double magnitude = 0.0;  // integral of |f|, used as a rounding-noise floor
};

template <class T, class F>
PanelSum<T> integrate_panels(F&& f, double a, double b, std::size_t panels) {
    const auto& rule = gauss_legendre<16>();
    PanelSum<T> out;
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        const double half = 0.5 * width;
        const double mid = lo + half;
        T panel{};
        double mag = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const T v = f(mid + half * rule.nodes[i]);
            panel += rule.weights[i] * v;
            mag += rule.weights[i] * std::abs(v);
        }
        out.value += half * panel;
        out.magnitude += half * mag;
    }
    return out;
}

struct AdaptiveOptions {
    std::size_t initial_panels = 4;
    std::size_t max_panels = 1u << 14;
    double tol = 1e-12;
};

// Doubles the panel count until two successive sums agree to
// tol * (1 + |sum|), or to the rounding floor of the integrand.
template <class T, class F>
T integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt, const char* what) {
    if (a == b) return T{};
    std::size_t panels = std::max<std::size_t>(1, opt.initial_panels);
    PanelSum<T> prev = integrate_panels<T>(f, a, b, panels);
    while (panels < opt.max_panels) {
        panels *= 2;
        const PanelSum<T> next = integrate_panels<T>(f, a, b, panels);
        const double diff = std::abs(next.value - prev.value);
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * next.magnitude;
        if (diff <= std::max(opt.tol * (1.0 + std::abs(next.value)), floor)) return next.value;
        prev = next;
    }
    throw ConvergenceError(std::string(what) + ": panel refinement did not converge");
}

}  // namespace stepharm::quad
