// stepharm: batch front end writing CSV or JSON tables for the step-harmonic
// potential (levels, delay curves, eigenfunctions, wave packets, resonances)
// and running the oracle cross-checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "stepharm/stepharm.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace stepharm;

constexpr const char* kToolVersion = "1.0.0";

enum Exit : int { kOk = 0, kVerifyFailed = 1, kBadArgs = 2, kMissingLevel = 3, kNumerical = 4 };

struct ExitError {
    int code;
    std::string message;
};

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return v;
        },
        c);
}

json json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            // round-trip through the CSV text so both formats carry the same digits
            if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? json(std::stod(format_double(v))) : json();
            else return json(v);
        },
        c);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Output {
    std::string format = "csv";
    std::string path;  // empty: stdout
};

void emit(const Output& out, const std::string& command, const json& parameters, const Table& table,
          const std::optional<json>& summary = std::nullopt) {
    json manifest = {{"command", command},
                     {"parameters", parameters},
                     {"tool_version", kToolVersion},
                     {"timestamp", utc_timestamp()}};
    std::ostringstream os;
    if (out.format == "json") {
        json doc = {{"manifest", manifest}};
        json data = json::array();
        for (const auto& row : table.rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
            data.push_back(std::move(obj));
        }
        doc["data"] = std::move(data);
        if (summary) doc["summary"] = *summary;
        os << doc.dump(2) << '\n';
    } else {
        os << "# manifest: " << manifest.dump() << '\n';
        if (summary) os << "# summary: " << summary->dump() << '\n';
        for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << '\n';
        }
    }
    if (out.path.empty()) {
        std::cout << os.str();
        return;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw ExitError{kBadArgs, "cannot open output file " + out.path};
    f << os.str();
}

// Unit options shared by every physics subcommand.
struct Units {
    std::optional<double> beta0, hbar, mass, kappa, u0;

    void add_to(CLI::App* app) {
        app->add_option("--beta0", beta0, "Dimensionless step height (hbar = m = omega = 1)");
        app->add_option("--hbar", hbar, "Reduced Planck constant");
        app->add_option("--mass", mass, "Particle mass");
        app->add_option("--kappa", kappa, "Oscillator spring constant");
        app->add_option("--u0", u0, "Step height U0");
    }

    PotentialConfig resolve() const {
        const bool physical = hbar || mass || kappa || u0;
        if (beta0 && physical) throw ExitError{kBadArgs, "--beta0 cannot be combined with --hbar/--mass/--kappa/--u0"};
        PotentialConfig c;
        if (beta0) {
            if (!(*beta0 >= 0.5)) throw ExitError{kBadArgs, "--beta0 must be >= 0.5"};
            c.u0 = *beta0 - 0.5;
        } else {
            if (hbar) c.hbar = *hbar;
            if (mass) c.mass = *mass;
            if (kappa) c.kappa = *kappa;
            if (u0) c.u0 = *u0;
        }
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw ExitError{kBadArgs, e.what()};
        }
        return c;
    }

    json to_json(const PotentialConfig& c) const {
        return {{"hbar", c.hbar}, {"mass", c.mass}, {"kappa", c.kappa}, {"u0", c.u0}, {"beta0", c.beta0()}};
    }
};

void add_output(CLI::App* app, Output& out) {
    app->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", out.path, "Output file (default: standard output)");
}

int run_levels(const Units& units, const Output& out) {
    const auto cfg = units.resolve();
    Table t{{"n", "beta_n", "energy_over_hbar_omega", "k_n", "marginal"}, {}};
    for (const auto& l : solve_levels(cfg))
        t.rows.push_back({static_cast<long long>(l.n), l.beta_n, l.energy / (cfg.hbar * cfg.omega()), l.k_n, l.marginal});
    emit(out, "levels", units.to_json(cfg), t);
    return kOk;
}

struct DelayArgs {
    std::optional<double> beta_min, beta_max;
    int steps = 2000;
};

int run_delay(const Units& units, const DelayArgs& a, const Output& out) {
    const auto cfg = units.resolve();
    const double b0 = cfg.beta0();
    const double lo = a.beta_min.value_or(b0 + 0.01);
    const double hi = a.beta_max.value_or(b0 + 20.0);
    if (!(lo > b0)) throw ExitError{kBadArgs, "--beta-min must exceed beta0"};
    if (!(hi > lo) || a.steps < 2) throw ExitError{kBadArgs, "need --beta-max > --beta-min and --steps >= 2"};

    std::vector<double> betas(static_cast<std::size_t>(a.steps)), values(betas.size());
    for (std::size_t i = 0; i < betas.size(); ++i)
        betas[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(a.steps - 1);
    parallel_for(betas.size(), [&](std::size_t i) { values[i] = delay_time(betas[i], cfg) * cfg.omega() / std::numbers::pi; });

    Table t{{"beta", "tau_omega_over_pi"}, {}};
    for (std::size_t i = 0; i < betas.size(); ++i) t.rows.push_back({betas[i], values[i]});
    json params = units.to_json(cfg);
    params["beta_min"] = lo;
    params["beta_max"] = hi;
    params["steps"] = a.steps;
    emit(out, "delay", params, t);
    return kOk;
}

struct EigenArgs {
    int n = 0;
    double x_min = -6.0, x_max = 6.0;
    int points = 241;
};

int run_eigenfunction(const Units& units, const EigenArgs& a, const Output& out) {
    const auto cfg = units.resolve();
    if (!(a.x_max > a.x_min) || a.points < 2 || a.n < 0) throw ExitError{kBadArgs, "need --x-max > --x-min, --points >= 2, --n >= 0"};
    const auto levels = solve_levels(cfg);
    if (a.n >= static_cast<int>(levels.size()))
        throw ExitError{kMissingLevel, "level n = " + std::to_string(a.n) + " does not exist (beta0 = " +
                                           format_double(cfg.beta0()) + " has " + std::to_string(levels.size()) + " levels)"};
    std::vector<double> xs(static_cast<std::size_t>(a.points));
    for (std::size_t i = 0; i < xs.size(); ++i)
        xs[i] = a.x_min + (a.x_max - a.x_min) * static_cast<double>(i) / static_cast<double>(a.points - 1);
    const auto u = bound_eigenfunction(levels[static_cast<std::size_t>(a.n)], cfg, xs);

    Table t{{"x", "re_u", "im_u", "density"}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({xs[i], u[i].real(), u[i].imag(), std::norm(u[i])});
    json params = units.to_json(cfg);
    params["n"] = a.n;
    params["x_min"] = a.x_min;
    params["x_max"] = a.x_max;
    params["points"] = a.points;
    emit(out, "eigenfunction", params, t);
    return kOk;
}

struct PacketArgs {
    std::optional<double> k_center, sigma_k, x_start, t_max, x_min, x_max;
    int frames = 50;
    std::optional<int> points;
    bool interior = false;
    bool mirror = false;
};

int run_wavepacket(const Units& units, const PacketArgs& a, const Output& out) {
    const auto cfg = units.resolve();
    WavePacketSpec spec;
    spec.config = cfg;
    spec.k_center = a.k_center.value_or(cfg.wavenumber(cfg.beta0() + 4.5));
    spec.sigma_k = a.sigma_k.value_or(spec.k_center / 30.0);
    spec.x_start = a.x_start.value_or(4.0 / spec.sigma_k);
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ExitError{kBadArgs, e.what()};
    }
    const double v = spec.group_velocity();
    const double t_max = a.t_max.value_or(2.5 * spec.x_start / v);
    const double x_min = a.x_min.value_or(a.interior ? -6.0 / cfg.alpha() : 0.0);
    const double x_max = a.x_max.value_or(2.0 * spec.x_start);
    if (!(t_max >= 0) || a.frames < 1 || !(x_max > x_min)) throw ExitError{kBadArgs, "need --t-max >= 0, --frames >= 1, --x-max > --x-min"};
    if (x_min < 0 && !a.interior) throw ExitError{kBadArgs, "--x-min < 0 requires --interior"};
    const double dx = std::min(spec.position_width() / 8.0, std::numbers::pi / (4.0 * (spec.k_center + 5.0 * spec.sigma_k)));
    const int points = a.points.value_or(static_cast<int>(std::ceil((x_max - x_min) / dx)) + 1);
    if (points < 2) throw ExitError{kBadArgs, "--points must be >= 2"};

    std::vector<double> xs(static_cast<std::size_t>(points)), ts(static_cast<std::size_t>(a.frames));
    for (std::size_t i = 0; i < xs.size(); ++i)
        xs[i] = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < ts.size(); ++i)
        ts[i] = a.frames == 1 ? t_max : t_max * static_cast<double>(i) / static_cast<double>(a.frames - 1);

    EvolveOptions opt;
    opt.include_interior = a.interior;
    opt.mirror = a.mirror;
    const FrameSet frames = evolve(spec, xs, ts, opt);
    const DelayMeasurement m = measure_delay(spec, opt);

    const double beta_c = cfg.beta_of_wavenumber(spec.k_center);
    const double analytic = a.mirror ? 0.0 : delay_time(beta_c, cfg);
    json summary = {{"beta_center", beta_c},
                    {"measured_delay", m.delay},
                    {"analytic_delay", analytic},
                    {"measured_delay_omega_over_pi", m.delay * cfg.omega() / std::numbers::pi},
                    {"analytic_delay_omega_over_pi", analytic * cfg.omega() / std::numbers::pi},
                    {"relative_difference", a.mirror ? json() : json(m.delay / analytic - 1.0)},
                    {"arrival_time", m.arrival_time},
                    {"mirror_time", m.mirror_time},
                    {"width_at_arrival", m.width}};

    Table t{{"t", "x", "re_psi", "im_psi", "density"}, {}};
    for (std::size_t it = 0; it < ts.size(); ++it)
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const Complex p = frames.psi[it][ix];
            t.rows.push_back({ts[it], xs[ix], p.real(), p.imag(), std::norm(p)});
        }
    json params = units.to_json(cfg);
    params["k_center"] = spec.k_center;
    params["sigma_k"] = spec.sigma_k;
    params["x_start"] = spec.x_start;
    params["t_max"] = t_max;
    params["frames"] = a.frames;
    params["x_min"] = x_min;
    params["x_max"] = x_max;
    params["points"] = points;
    params["interior"] = a.interior;
    params["mirror"] = a.mirror;
    emit(out, "wavepacket", params, t, summary);
    return kOk;
}

int run_resonances(const Units& units, std::optional<double> beta_max, const Output& out) {
    const auto cfg = units.resolve();
    const double hi = beta_max.value_or(cfg.beta0() + 20.0);
    if (!(hi > cfg.beta0() + 1.0)) throw ExitError{kBadArgs, "--beta-max must exceed beta0 + 1"};
    Table t{{"beta_peak", "tau_peak_omega_over_pi", "width"}, {}};
    for (const auto& r : find_resonances(cfg, hi))
        t.rows.push_back({r.beta_peak, r.tau_peak * cfg.omega() / std::numbers::pi, r.width});
    json params = units.to_json(cfg);
    params["beta_max"] = hi;
    emit(out, "resonances", params, t);
    return kOk;
}

int run_verify(const std::string& report_path) {
    const auto results = verify::run_all();
    json checks = json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        std::printf("[%s] %-36s residual=%.3e tol=%.1e (%.2fs)%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.residual, r.tolerance, r.seconds, r.error.empty() ? "" : " error: ", r.error.c_str());
        checks.push_back({{"name", r.name},
                          {"residual", std::isfinite(r.residual) ? json(r.residual) : json()},
                          {"tolerance", r.tolerance},
                          {"passed", r.passed},
                          {"seconds", r.seconds},
                          {"error", r.error}});
    }
    std::printf("%zu checks, %s\n", results.size(), all ? "all passed" : "FAILURES");
    json doc = {{"manifest", {{"command", "verify"}, {"parameters", json::object()}, {"tool_version", kToolVersion}, {"timestamp", utc_timestamp()}}},
                {"data", checks},
                {"passed", all}};
    std::ofstream f(report_path, std::ios::binary);
    if (!f) throw ExitError{kBadArgs, "cannot open report file " + report_path};
    f << doc.dump(2) << '\n';
    return all ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Step-harmonic potential: spectrum, scattering delay and wave packets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Units units;
    Output out;

    auto* levels = app.add_subcommand("levels", "Bound-state energies");
    units.add_to(levels);
    add_output(levels, out);

    DelayArgs delay_args;
    auto* delay = app.add_subcommand("delay", "Delay time tau*omega/pi across the continuum");
    units.add_to(delay);
    add_output(delay, out);
    delay->add_option("--beta-min", delay_args.beta_min, "First beta (default beta0 + 0.01)");
    delay->add_option("--beta-max", delay_args.beta_max, "Last beta (default beta0 + 20)");
    delay->add_option("--steps", delay_args.steps, "Number of samples");

    EigenArgs eig_args;
    auto* eig = app.add_subcommand("eigenfunction", "Normalized bound-state eigenfunction");
    units.add_to(eig);
    add_output(eig, out);
    eig->add_option("--n", eig_args.n, "Level index");
    eig->add_option("--x-min", eig_args.x_min);
    eig->add_option("--x-max", eig_args.x_max);
    eig->add_option("--points", eig_args.points);

    PacketArgs pk;
    auto* packet = app.add_subcommand("wavepacket", "Gaussian packet reflected by the step");
    units.add_to(packet);
    add_output(packet, out);
    packet->add_option("--k-center", pk.k_center, "Central wavenumber (default: beta = beta0 + 4.5)");
    packet->add_option("--sigma-k", pk.sigma_k, "Wavenumber spread (default k_center / 30)");
    packet->add_option("--x-start", pk.x_start, "Launch position (default 4 / sigma_k)");
    packet->add_option("--t-max", pk.t_max, "Last frame time (default 2.5 x_start / v)");
    packet->add_option("--frames", pk.frames, "Number of frames");
    packet->add_option("--x-min", pk.x_min);
    packet->add_option("--x-max", pk.x_max);
    packet->add_option("--points", pk.points);
    packet->add_flag("--interior", pk.interior, "Also evaluate psi inside the well (x < 0)");
    packet->add_flag("--mirror", pk.mirror, "Replace the step by a hard wall");

    std::optional<double> res_beta_max;
    auto* res = app.add_subcommand("resonances", "Delay-time resonance peaks");
    units.add_to(res);
    add_output(res, out);
    res->add_option("--beta-max", res_beta_max, "Scan limit (default beta0 + 20)");

    std::string report = "verify_report.json";
    auto* ver = app.add_subcommand("verify", "Run the oracle cross-check suite");
    ver->add_option("--out", report, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadArgs;
    }

    try {
        if (*levels) return run_levels(units, out);
        if (*delay) return run_delay(units, delay_args, out);
        if (*eig) return run_eigenfunction(units, eig_args, out);
        if (*packet) return run_wavepacket(units, pk, out);
        if (*res) return run_resonances(units, res_beta_max, out);
        if (*ver) return run_verify(report);
    } catch (const ExitError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArgs;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kBadArgs;
}
