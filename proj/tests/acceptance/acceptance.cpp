// Acceptance criteria for the step-harmonic library. Prints one PASS/FAIL
// line per criterion with the measured figure, its tolerance and runtime.
// Usage: acceptance [id]   (no id runs all twelve)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "stepharm/stepharm.hpp"

using namespace stepharm;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);
const double kFigureSteps[] = {1.5, 2.0, 2.5, 3.5, 4.0, 4.5};

struct Outcome {
    bool passed = false;
    double measured = 0.0;
    std::string tolerance;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double time_limit;  // seconds, 0 for none
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome j_route_independence() {
    double worst = 0.0;
    for (double b : {-1.5, -0.5, 0.3, 0.5, 0.9, 1.3, 2.6, 4.1}) {
        const Complex j = j_beta(b);
        worst = std::max(worst, std::abs(oracle::contour_quadrature_j(b) - j) / (1.0 + std::abs(j)));
        if (b >= 1.0) worst = std::max(worst, std::abs(f_epsilon(b, 0.0) - j) / (1.0 + std::abs(j)));
    }
    return {worst < 1e-8, worst, "1e-08", ""};
}

Outcome hermite_degeneracy() {
    double worst = 0.0;
    for (int n = 0; n <= 5; ++n) {
        const double scale = 2.0 * kPi / std::tgamma(n + 1.0);
        for (int i = -40; i <= 40; ++i) {
            const double y = 0.05 * i;
            const double h = hermite_poly(n, y);
            const double err = std::abs(f_epsilon(n + 1.0, y) - scale * h * I) / (1.0 + std::abs(h) * scale);
            worst = std::max(worst, err);
        }
    }
    return {worst < 1e-6, worst, "1e-06", ""};
}

Outcome level_counts() {
    const double steps[] = {0.7, 1.5, 2.0, 2.5, 3.5, 4.0, 4.5};
    const int expected[] = {0, 1, 1, 1, 2, 2, 2};
    int mismatches = 0;
    std::ostringstream d;
    for (std::size_t i = 0; i < std::size(steps); ++i) {
        const auto cfg = PotentialConfig::from_beta0(steps[i]);
        const int got = static_cast<int>(solve_levels(cfg).size());
        if (got != expected[i] || level_count(cfg) != expected[i]) ++mismatches;
        d << (i ? " " : "") << steps[i] << "->" << got;
    }
    return {mismatches == 0, static_cast<double>(mismatches), "0 mismatches", d.str()};
}

Outcome shooting_agreement() {
    double worst = 0.0;
    bool counts_match = true;
    for (double b0 : {1.5, 2.5, 4.5}) {
        const auto cfg = PotentialConfig::from_beta0(b0);
        const auto levels = solve_levels(cfg);
        const auto shot = oracle::shoot_bound_states(cfg, 16);
        counts_match = counts_match && shot.energies.size() == levels.size();
        for (std::size_t i = 0; i < std::min(levels.size(), shot.energies.size()); ++i)
            worst = std::max(worst, std::abs(shot.energies[i] - levels[i].energy) / (cfg.hbar * cfg.omega()));
    }
    return {counts_match && worst < 1e-6, worst, "1e-06", counts_match ? "" : "level count mismatch"};
}

Outcome tall_step_asymptote() {
    const auto levels = solve_levels(PotentialConfig::from_beta0(200.0));
    double worst = 0.0;
    std::ostringstream d;
    for (std::size_t n = 0; n < 3; ++n) {
        const double gap = std::abs(levels[n].beta_n - (2.0 * n + 2.0));
        worst = std::max(worst, gap);
        d << (n ? " " : "") << "n=" << n << ":" << fmt("%.4f", gap);
    }
    return {worst < 0.05, worst, "0.05", d.str()};
}

Outcome high_energy_delay() {
    const auto cfg = PotentialConfig::from_beta0(1.5);
    auto ratio = [&](double b) { return delay_time(b, cfg) * cfg.omega() / kPi; };
    const double dev = std::abs(ratio(400.0) - 1.0);
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    std::ostringstream d;
    for (double b : {50.0, 100.0, 200.0, 400.0}) {
        const double r = std::abs(ratio(b) - 1.0);
        monotone = monotone && r < prev;
        prev = r;
        d << (b > 50 ? " " : "") << b << ":" << fmt("%.5f", ratio(b));
    }
    d << (monotone ? " monotone" : " NOT monotone");
    return {dev < 0.02 && monotone, dev, "0.02", d.str()};
}

Outcome threshold_trichotomy() {
    const double gap = 1e-6;
    bool ok = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::ostringstream d;
    auto dp = [&](double b0) { return delta_prime(b0 + gap, PotentialConfig::from_beta0(b0)); };
    for (double b0 : {2.5, 4.5}) {
        const double v = dp(b0);
        ok = ok && v > 1e3;
        worst_margin = std::min(worst_margin, v / 1e3);
        d << b0 << ":" << fmt("%.4g", v) << "(>1e3) ";
    }
    for (double b0 : {1.5, 3.5}) {
        const double v = dp(b0);
        ok = ok && v < -1e3;
        worst_margin = std::min(worst_margin, -v / 1e3);
        d << b0 << ":" << fmt("%.4g", v) << "(<-1e3) ";
    }
    for (double b0 : {2.0, 3.0, 4.0}) {
        const double v = dp(b0);
        ok = ok && std::abs(v) < 0.1;
        worst_margin = std::min(worst_margin, 0.1 / std::abs(v));
        d << b0 << ":" << fmt("%.4g", v) << "(|.|<0.1) ";
    }
    // measured: smallest ratio of achieved to required magnitude (>= 1 passes)
    return {ok, worst_margin, "margin >= 1", d.str()};
}

Outcome resonances() {
    const auto low = find_resonances(PotentialConfig::from_beta0(1.5), 10.0);
    double worst = 0.0;
    std::ostringstream d;
    std::vector<double> heights;
    for (double target : {3.0, 5.0, 7.0}) {
        double best = std::numeric_limits<double>::infinity();
        double height = 0.0;
        for (const auto& r : low)
            if (std::abs(r.beta_peak - target) < best) {
                best = std::abs(r.beta_peak - target);
                height = r.tau_peak;
            }
        worst = std::max(worst, best);
        heights.push_back(height);
    }
    for (const auto& r : low) d << fmt("%.4f", r.beta_peak) << "/" << fmt("%.4f", r.tau_peak / kPi) << " ";
    const bool ok = worst <= 0.2 && heights[0] > heights[1] && heights[1] > heights[2];
    const auto high = find_resonances(PotentialConfig::from_beta0(3.5), 10.0);
    const bool none_near_3 = std::none_of(high.begin(), high.end(), [](const Resonance& r) { return std::abs(r.beta_peak - 3.0) <= 0.5; });
    d << "| beta0=3.5 first peak " << (high.empty() ? std::string("none") : fmt("%.4f", high.front().beta_peak));
    return {ok && none_near_3, worst, "0.2", d.str()};
}

Outcome phase_derivative() {
    double worst = 0.0;
    std::size_t samples = 0;
    for (double b0 : kFigureSteps) {
        const auto cfg = PotentialConfig::from_beta0(b0);
        const auto peaks = find_resonances(cfg, b0 + 21.0);
        for (int i = 1; b0 + 0.1 + 0.01 * i < b0 + 20.0; ++i) {
            const double b = b0 + 0.1 + 0.01 * i;
            if (std::any_of(peaks.begin(), peaks.end(), [&](const Resonance& r) { return std::abs(b - r.beta_peak) <= 0.05; })) continue;
            const double fd = oracle::phase_derivative_fd([&](double x) { return phase_shift(x, cfg); }, b);
            const double exact = delta_prime(b, cfg);
            worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
            ++samples;
        }
    }
    return {worst < 1e-5, worst, "1e-05", std::to_string(samples) + " samples"};
}

Outcome junction_continuity() {
    double worst = 0.0;
    for (double b0 : kFigureSteps) {
        const auto cfg = PotentialConfig::from_beta0(b0);
        for (const auto& l : solve_levels(cfg)) worst = std::max(worst, verify::bound_junction_residual(l, cfg));
        for (double d : {0.05, 0.3, 1.7, 4.2, 9.9}) worst = std::max(worst, verify::improper_junction_residual(b0 + d, cfg));
    }
    return {worst < 1e-8, worst, "1e-08", ""};
}

Outcome wavepacket_delay() {
    const auto cfg = PotentialConfig::from_beta0(1.5);
    auto spec_for = [&](double bt) {
        WavePacketSpec s;
        s.config = cfg;
        s.k_center = cfg.wavenumber(bt);
        s.sigma_k = s.k_center / 30.0;
        s.x_start = 8.0 * s.position_width();
        return s;
    };
    double worst = 0.0;
    std::ostringstream d;
    for (double bt : {5.0, 6.0, 8.0}) {
        const double measured = measure_delay(spec_for(bt)).delay;
        const double rel = std::abs(measured / delay_time(bt, cfg) - 1.0);
        worst = std::max(worst, rel);
        d << bt << ":" << fmt("%+.4f", measured / delay_time(bt, cfg) - 1.0) << " ";
    }
    EvolveOptions mirror;
    mirror.mirror = true;
    const double mirror_delay = std::abs(measure_delay(spec_for(6.0), mirror).delay) * cfg.omega() / kPi;
    d << "mirror:" << fmt("%.2e", mirror_delay);
    return {worst < 0.05 && mirror_delay < 0.02, worst, "0.05 (mirror 0.02)", d.str()};
}

Outcome unitarity() {
    double worst = 0.0;
    for (double b0 : kFigureSteps) {
        const auto cfg = PotentialConfig::from_beta0(b0);
        for (int i = 1; i <= 1000; ++i) worst = std::max(worst, std::abs(std::abs(zeta(b0 + 0.02 * i, cfg)) - 1.0));
    }
    return {worst < 1e-10, worst, "1e-10", "1000 samples per beta0"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "J route independence", 5.0, j_route_independence},
        {2, "Hermite degeneracy", 30.0, hermite_degeneracy},
        {3, "Level counts", 10.0, level_counts},
        {4, "Analytic vs shooting energies", 60.0, shooting_agreement},
        {5, "Tall-step asymptote", 0.0, tall_step_asymptote},
        {6, "High-energy delay", 0.0, high_energy_delay},
        {7, "Threshold trichotomy", 0.0, threshold_trichotomy},
        {8, "Resonances", 0.0, resonances},
        {9, "Phase-derivative consistency", 0.0, phase_derivative},
        {10, "Junction continuity", 0.0, junction_continuity},
        {11, "Wave-packet delay", 600.0, wavepacket_delay},
        {12, "Unitarity", 0.0, unitarity},
    };

    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
            return 2;
        }
    }

    int failures = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::numeric_limits<double>::quiet_NaN(), "-", std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.time_limit <= 0.0 || secs < c.time_limit;
        const bool pass = o.passed && in_time;
        failures += pass ? 0 : 1;
        std::string limit = c.time_limit > 0 ? " (limit " + fmt("%.0f", c.time_limit) + "s)" : "";
        std::printf("[%s] C%02d %-30s measured=%.6g tol=%s runtime=%.3fs%s%s%s\n", pass ? "PASS" : "FAIL", c.id, c.title,
                    o.measured, o.tolerance.c_str(), secs, limit.c_str(), o.detail.empty() ? "" : "  ", o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
