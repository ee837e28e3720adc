#pragma once

// Contour-integral solution of the Hermite equation
//   F'' - 2 y F' + (eps - 1) F = 0,   beta = (eps + 1) / 2,
//   F(y) = \int_{Gamma_2} t^{-beta} exp(-t^2 + 2 t y) dt,
// with Gamma_2 wrapping the branch cut on the positive real axis
// anticlockwise. The contour is deformed into a circle of radius r plus the
// two cut edges [r, inf), giving
//   F(y) = I_r(y) + (exp(-2 pi i beta) - 1) \int_r^inf t^{-beta} e^{-t^2 + 2ty} dt.
// arg t is taken in [0, 2 pi).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stepharm/config.hpp"
#include "stepharm/errors.hpp"
#include "stepharm/quadrature.hpp"
#include "stepharm/special_fn.hpp"

namespace stepharm {

struct ContourSpec {
    double circle_radius = 1.0;
    double line_truncation = 0.0;  // 0 selects t_max automatically
    std::size_t circle_nodes = 64;
    std::size_t line_nodes = 64;
    double target_tol = 1e-12;
    std::size_t max_nodes = 16u << 13;

    void validate() const {
        if (!(circle_radius > 0)) throw std::invalid_argument("ContourSpec: circle_radius must be > 0");
        if (line_truncation != 0.0 && !(line_truncation > circle_radius))
            throw std::invalid_argument("ContourSpec: line_truncation must exceed circle_radius");
        if (circle_nodes < 16 || line_nodes < 16)
            throw std::invalid_argument("ContourSpec: node counts must be >= 16");
        if (!(target_tol > 0)) throw std::invalid_argument("ContourSpec: target_tol must be > 0");
    }
};

/// Coefficient of the cut-edge integral, exp(-2 pi i beta) - 1
/// = -2 i exp(-i pi beta) sin(pi beta).
inline Complex cut_coefficient(double beta) {
    const double s = sin_pi(beta);
    const double c = cos_pi(beta);
    return Complex(0.0, -2.0) * Complex(c, -s) * s;
}

/// J(beta) = F(0) = sin(pi beta) Gamma((1 - beta)/2) / (i e^{i pi beta}),
/// evaluated through 2 pi sin(pi beta / 2) / (i e^{i pi beta} Gamma((beta + 1)/2)),
/// which has no poles.
inline Complex j_beta(double beta) {
    if (!std::isfinite(beta)) throw DomainError("j_beta: beta must be finite");
    const double mag = 2.0 * std::numbers::pi * sin_pi(0.5 * beta) * reciprocal_gamma(0.5 * (beta + 1.0));
    // 1 / (i e^{i pi beta}) = -sin(pi beta) - i cos(pi beta)
    return mag * Complex(-sin_pi(beta), -cos_pi(beta));
}

namespace detail {

inline double line_exponent(double t, double beta, double y) { return -t * t + 2.0 * t * y - beta * std::log(t); }

inline double line_truncation(double beta, double y, double r, double tol) {
    const double drop = std::log(tol / 100.0);
    double peak = line_exponent(r, beta, y);
    double t = r;
    const double step = 0.25;
    while (true) {
        t += step;
        const double h = line_exponent(t, beta, y);
        peak = std::max(peak, h);
        if (t > std::max(y, r) + 1.0 && h < peak + drop) return t;
    }
}

}  // namespace detail

/// F_eps(y) along Gamma_2 by panel Gauss-Legendre on the circle and the cut edge.
inline Complex f_epsilon(double beta, double y, const ContourSpec& contour = {}) {
    contour.validate();
    if (!std::isfinite(y) || !std::isfinite(beta)) throw DomainError("f_epsilon: beta and y must be finite");
    const double r = contour.circle_radius;
    const double log_r = std::log(r);
    const double one_minus_beta = 1.0 - beta;

    auto circle = [&](double theta) {
        const Complex e1(std::cos(theta), std::sin(theta));
        const Complex e2(std::cos(2.0 * theta), std::sin(2.0 * theta));
        const Complex w = one_minus_beta * Complex(log_r, theta) - r * r * e2 + 2.0 * y * r * e1;
        return Complex(0.0, 1.0) * std::exp(w);
    };
    quad::AdaptiveOptions copt;
    copt.initial_panels = contour.circle_nodes / 16;
    copt.max_panels = contour.max_nodes / 16;
    copt.tol = contour.target_tol;
    Complex result = quad::integrate_adaptive<Complex>(circle, 0.0, 2.0 * std::numbers::pi, copt, "f_epsilon circle");

    const Complex coeff = cut_coefficient(beta);
    if (coeff != Complex(0.0, 0.0)) {
        const double t_max = contour.line_truncation > 0.0
                                 ? contour.line_truncation
                                 : detail::line_truncation(beta, y, r, contour.target_tol);
        // The whole integrand is folded into one exponent so that e^{2ty}
        // damping and t^{-beta} growth never multiply separately.
        auto line = [&](double t) { return std::exp(detail::line_exponent(t, beta, y)); };
        quad::AdaptiveOptions lopt;
        lopt.initial_panels = std::max<std::size_t>(contour.line_nodes / 16,
                                                    static_cast<std::size_t>(std::ceil(t_max - r)));
        lopt.max_panels = contour.max_nodes / 16;
        lopt.tol = contour.target_tol;
        result += coeff * quad::integrate_adaptive<double>(line, r, t_max, lopt, "f_epsilon cut edge");
    }
    return result;
}

inline Complex f_epsilon(const BetaPoint& point, double y, const ContourSpec& contour = {}) {
    return f_epsilon(point.beta, y, contour);
}

/// dF_eps/dy = 2 F_{eps - 2}, i.e. the contour integral at beta - 1.
inline Complex f_epsilon_derivative(double beta, double y, const ContourSpec& contour = {}) {
    return 2.0 * f_epsilon(beta - 1.0, y, contour);
}

inline Complex f_epsilon_derivative(const BetaPoint& point, double y, const ContourSpec& contour = {}) {
    return f_epsilon_derivative(point.beta, y, contour);
}

/// Physicists' Hermite polynomial by the three-term recurrence.
inline double hermite_poly(int n, double y) {
    if (n < 0) throw DomainError("hermite_poly: n must be >= 0");
    double h0 = 1.0;
    if (n == 0) return h0;
    double h1 = 2.0 * y;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2.0 * y * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

/// Leading y -> +inf behaviour -2i e^{-i pi beta} sqrt(pi) sin(pi beta) e^{y^2} / y^beta.
/// Not valid for beta = 1, 2, ... where F is a polynomial.
inline Complex asymptotic_f2(double beta, double y) {
    if (!(y > 0)) throw DomainError("asymptotic_f2: requires y > 0");
    if (beta >= 1.0 && beta == std::floor(beta))
        throw DomainError("asymptotic_f2: integer beta gives a Hermite polynomial, no e^{y^2} growth");
    return std::sqrt(std::numbers::pi) * cut_coefficient(beta) * std::exp(y * y - beta * std::log(y));
}

inline Complex asymptotic_f2(const BetaPoint& point, double y) { return asymptotic_f2(point.beta, y); }

}  // namespace stepharm
