#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "stepharm/oracle.hpp"
#include "stepharm/parallel.hpp"
#include "stepharm/quadrature.hpp"
#include "stepharm/spectrum.hpp"

using namespace stepharm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const Complex I(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

std::vector<double> grid(double a, double b, double h) {
    std::vector<double> v;
    const auto n = static_cast<int>(std::lround((b - a) / h));
    for (int i = 0; i <= n; ++i) v.push_back(a + h * i);
    return v;
}
}  // namespace

TEST_CASE("tanh-sinh and exp-sinh on known integrals") {
    CHECK_THAT(oracle::tanh_sinh<double>([](double x) { return std::sqrt(x); }, 0.0, 1.0), WithinRel(2.0 / 3.0, 1e-13));
    CHECK_THAT(oracle::tanh_sinh<double>([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12), WithinRel(2.0, 1e-10));
    CHECK_THAT(oracle::exp_sinh<double>([](double x) { return std::exp(-x * x); }), WithinRel(std::sqrt(kPi) / 2.0, 1e-13));
    CHECK_THAT(oracle::exp_sinh<double>([](double x) { return std::exp(-x * x) / std::sqrt(x); }), WithinRel(std::tgamma(0.25) / 2.0, 1e-10));
}

TEST_CASE("contour_quadrature_j special values") {
    CHECK_THAT(oracle::contour_quadrature_j(0.5).real(), WithinRel(-std::tgamma(0.25), 1e-8));
    CHECK(std::abs(oracle::contour_quadrature_j(0.5).imag()) < 1e-8);
    CHECK(std::abs(oracle::contour_quadrature_j(0.0)) < 1e-10);
    CHECK(std::abs(oracle::contour_quadrature_j(-1.0)) < 1e-10);
    CHECK(std::abs(oracle::contour_quadrature_j(1.0) - 2.0 * kPi * I) < 1e-10);
}

TEST_CASE("two routes to J agree") {
    for (double b : {-1.5, -0.5, 0.3, 0.5, 0.9, 1.3, 2.6, 4.1}) {
        const Complex j = j_beta(b);
        CHECK(std::abs(oracle::contour_quadrature_j(b) - j) < 1e-8 * (1.0 + std::abs(j)));
        CHECK(std::abs(f_epsilon(b, 0.0) - j) < 1e-8 * (1.0 + std::abs(j)));
    }
    for (double b : {-1.5, -0.5, 0.3, 0.5, 0.9}) CHECK(std::abs(oracle::cut_edge_quadrature_j(b) - j_beta(b)) < 1e-8 * (1.0 + std::abs(j_beta(b))));
    CHECK_THROWS_AS(oracle::cut_edge_quadrature_j(1.0), DomainError);
}

TEST_CASE("numerov_hermite reproduces Hermite polynomials") {
    const auto ys = grid(-3.0, 2.0, 0.05);
    const auto f = oracle::numerov_hermite(2.0, ys, 0.0, 4.0 * kPi * I);
    for (std::size_t i = 0; i < ys.size(); ++i) CHECK(std::abs(f[i] - 4.0 * kPi * I * ys[i]) < 1e-8 * (1.0 + std::abs(4.0 * kPi * ys[i])));
    const auto flat = oracle::numerov_hermite(1.0, ys, Complex(2.5, -1.0), 0.0);
    for (const auto& v : flat) CHECK(std::abs(v - Complex(2.5, -1.0)) < 1e-12);
}

TEST_CASE("numerov_hermite reproduces the contour solution on [-4, 1]") {
    const auto ys = grid(-4.0, 1.0, 0.01);
    for (double b : {0.8, 1.3, 2.6}) {
        const auto f = oracle::numerov_hermite(b, ys, oracle::contour_quadrature_j(b), 2.0 * oracle::contour_quadrature_j(b - 1.0));
        for (std::size_t i = 0; i < ys.size(); i += 25) {
            const Complex ref = f_epsilon(b, ys[i]);
            CHECK(std::abs(f[i] - ref) < 1e-6 * std::abs(ref));
        }
    }
}

TEST_CASE("numerov_hermite grid requirements") {
    const std::vector<double> no_origin = {0.5, 1.0, 1.5};
    CHECK_THROWS_AS(oracle::numerov_hermite(1.3, no_origin, 1.0, 0.0), std::invalid_argument);
    const std::vector<double> uneven = {-1.0, 0.0, 0.3};
    CHECK_THROWS_AS(oracle::numerov_hermite(1.3, uneven, 1.0, 0.0), std::invalid_argument);
    const std::vector<double> single = {0.0};
    CHECK_THROWS_AS(oracle::numerov_hermite(1.3, single, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("RK4 converges at fourth order") {
    const double b = 1.3;
    const oracle::HermiteState s0{j_beta(b), 2.0 * j_beta(b - 1.0)};
    const Complex exact = f_epsilon(b, -3.0);
    const double e1 = std::abs(oracle::rk4_hermite(b, 0.0, s0, -3.0, 40).f - exact);
    const double e2 = std::abs(oracle::rk4_hermite(b, 0.0, s0, -3.0, 80).f - exact);
    const double e3 = std::abs(oracle::rk4_hermite(b, 0.0, s0, -3.0, 160).f - exact);
    const double order1 = std::log2(e1 / e2), order2 = std::log2(e2 / e3);
    CHECK(order1 > 3.7);
    CHECK(order1 < 4.3);
    CHECK(order2 > 3.7);
    CHECK(order2 < 4.3);
}

TEST_CASE("shooting finds the analytic levels") {
    const auto cfg = PotentialConfig::from_beta0(4.5);
    const auto shot = oracle::shoot_bound_states(cfg, 8);
    const auto levels = solve_levels(cfg);
    REQUIRE(shot.energies.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(shot.energies[i] - levels[i].energy) < 1e-6);
        CHECK(std::abs(shot.mismatch_residuals[i]) < 1e-6);
        CHECK_FALSE(shot.marginal[i]);
    }
    CHECK(oracle::shoot_bound_states(cfg, 1).energies.size() == 1);
}

TEST_CASE("shooting edge cases") {
    CHECK(oracle::shoot_bound_states(PotentialConfig::from_beta0(0.7), 4).energies.empty());
    const auto marginal = oracle::shoot_bound_states(PotentialConfig::from_beta0(1.0), 4);
    REQUIRE(marginal.energies.size() == 1);
    CHECK(marginal.marginal[0]);
    CHECK_THAT(marginal.energies[0], WithinAbs(0.5, 1e-12));
    CHECK(std::abs(marginal.mismatch_residuals[0]) < 1e-6);
    CHECK_THROWS_AS(oracle::shoot_bound_states(PotentialConfig::from_beta0(2.0), 0), std::invalid_argument);
}

TEST_CASE("unwrap_phase and phase_derivative_fd") {
    std::vector<double> raw;
    for (int i = 0; i < 200; ++i) raw.push_back(std::remainder(0.1 * i, 2.0 * kPi));
    const auto u = oracle::unwrap_phase(raw);
    for (int i = 0; i < 200; ++i) CHECK_THAT(u[static_cast<std::size_t>(i)], WithinAbs(0.1 * i, 1e-12));
    auto wrapped = [](double b) { return std::remainder(3.0 * b * b, 2.0 * kPi); };
    CHECK_THAT(oracle::phase_derivative_fd(wrapped, 2.0), WithinRel(12.0, 1e-10));
}

TEST_CASE("Gauss-Legendre rule is exact to degree 31") {
    const auto& r = quad::gauss_legendre<16>();
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK_THAT(wsum, WithinAbs(2.0, 1e-14));
    for (int d = 0; d <= 31; ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i < 16; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
        CHECK_THAT(s, WithinAbs(d % 2 ? 0.0 : 2.0 / (d + 1), 1e-14));
    }
}

TEST_CASE("integrate_adaptive converges or reports failure") {
    quad::AdaptiveOptions opt;
    CHECK_THAT(quad::integrate_adaptive<double>([](double x) { return std::cos(40.0 * x); }, 0.0, 3.0, opt, "cos"),
               WithinAbs(std::sin(120.0) / 40.0, 1e-12));
    CHECK(quad::integrate_adaptive<double>([](double x) { return x; }, 2.0, 2.0, opt, "empty") == 0.0);
    opt.max_panels = 4;
    CHECK_THROWS_AS(quad::integrate_adaptive<double>([](double x) { return std::cos(400.0 * x); }, 0.0, 3.0, opt, "cos"), ConvergenceError);
}

TEST_CASE("parallel_for covers every index and propagates errors") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) { if (i == 37) throw std::runtime_error("boom"); }, 4), std::runtime_error);
    parallel_for(0, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("STEPHARM_THREADS caps the worker count") {
    ::setenv("STEPHARM_THREADS", "3", 1);
    CHECK(thread_count() == 3);
    ::setenv("STEPHARM_THREADS", "0", 1);
    CHECK(thread_count() >= 1);
    ::unsetenv("STEPHARM_THREADS");
}
