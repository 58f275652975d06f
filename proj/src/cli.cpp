// cli.cpp: dephase subcommands over JSON configs with flag overrides

#include "dephasing/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "dephasing/asymptotics.hpp"
#include "dephasing/dynamics.hpp"
#include "dephasing/embedfit.hpp"
#include "dephasing/errors.hpp"
#include "dephasing/qrf.hpp"
#include "dephasing/serialization.hpp"
#include "dephasing/spectral.hpp"

namespace dephasing::cli {

namespace {

using io::Json;

constexpr const char* kBathHelp =
    "  bath            {\"beta\": number | \"inf\", \"density\": {...}} (required)\n"
    "  bath.density    {\"kind\": ohmic_exp | drude_lorentz | power_law | tabulated,\n"
    "                   \"omega_scale\": number (required), \"coupling2\": number (default 1),\n"
    "                   \"exponent\": number (power_law only), \"table\": [[w, J], ...] and\n"
    "                   \"lowfreq\": [gamma_J, c] (tabulated only)}\n";
constexpr const char* kQuadHelp =
    "  tol             relative quadrature tolerance in [1e-14, 1e-2] (default 1e-10)\n"
    "  omega_c         splitting frequency (default min(Omega, 1/t) clamped to [1e-3 Omega, Omega])\n"
    "  max_panels      subdivision and panel cap (default 200000)\n";
constexpr const char* kGridHelp =
    "  grid            {\"t_min\": number (default 0), \"t_max\": number (required),\n"
    "                   \"n_points\": integer (default 101), \"spacing\": linear | log (default linear)}\n";
constexpr const char* kOutputHelp = "  output          output file path (default stdout)\n";
constexpr const char* kThreadsHelp = "  threads         worker threads for grid evaluation, 0 = all cores (default 1)\n";

struct Overrides {
    std::string config;
    std::optional<double> tol;
    std::optional<double> omega_c;
    std::optional<long long> max_panels;
    std::optional<long long> threads;
    std::optional<std::string> beta;
    std::optional<std::string> output;
    std::optional<double> t_min;
    std::optional<double> t_max;
    std::optional<long long> n_points;
    std::optional<std::string> spacing;
    std::optional<std::string> format;
    std::optional<std::string> input;
    std::optional<long long> k_max;
    std::optional<double> floor;
    bool no_powers{false};
    bool no_rate{false};
    std::optional<long long> n_modes;
    std::optional<double> omega_max;
    std::optional<std::string> modes_output;
    std::optional<double> growth_limit;
};

Json load_config(const std::string& path) {
    if (path.empty()) return Json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        Json j = Json::parse(in);
        if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
        return j;
    } catch (const Json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

Json parse_beta(const std::string& text) {
    if (text == "inf" || text == "infinity") return Json("inf");
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return Json(v);
    } catch (const std::exception&) {
        throw ConfigError("--beta must be a number or inf");
    }
}

Json& grid_of(Json& cfg) {
    if (!cfg.contains("grid")) cfg["grid"] = Json::object();
    return cfg["grid"];
}

void apply_overrides(Json& cfg, const Overrides& o) {
    if (o.tol) cfg["tol"] = *o.tol;
    if (o.omega_c) cfg["omega_c"] = *o.omega_c;
    if (o.max_panels) cfg["max_panels"] = *o.max_panels;
    if (o.threads) cfg["threads"] = *o.threads;
    if (o.output) cfg["output"] = *o.output;
    if (o.beta) {
        if (!cfg.contains("bath") || !cfg["bath"].is_object()) {
            throw ConfigError("--beta needs a bath object in the config");
        }
        cfg["bath"]["beta"] = parse_beta(*o.beta);
    }
    if (o.t_min) grid_of(cfg)["t_min"] = *o.t_min;
    if (o.t_max) grid_of(cfg)["t_max"] = *o.t_max;
    if (o.n_points) grid_of(cfg)["n_points"] = *o.n_points;
    if (o.spacing) grid_of(cfg)["spacing"] = *o.spacing;
    if (o.format) cfg["format"] = *o.format;
    if (o.input) cfg["input"] = *o.input;
    if (o.k_max) cfg["k_max"] = *o.k_max;
    if (o.floor) cfg["floor"] = *o.floor;
    if (o.no_powers) cfg["powers_allowed"] = false;
    if (o.no_rate) cfg["rate"] = false;
    if (o.n_modes) cfg["n_modes"] = *o.n_modes;
    if (o.omega_max) cfg["omega_max"] = *o.omega_max;
    if (o.modes_output) cfg["modes_output"] = *o.modes_output;
    if (o.growth_limit) cfg["growth_limit"] = *o.growth_limit;
}

double get_number(const Json& cfg, const char* key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
    return cfg.at(key).get<double>();
}

long long get_integer(const Json& cfg, const char* key, long long fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg.at(key).is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
    return cfg.at(key).get<long long>();
}

bool get_bool(const Json& cfg, const char* key, bool fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg.at(key).is_boolean()) throw ConfigError(std::string(key) + " must be true or false");
    return cfg.at(key).get<bool>();
}

std::optional<std::string> get_string(const Json& cfg, const char* key) {
    if (!cfg.contains(key)) return std::nullopt;
    if (!cfg.at(key).is_string()) throw ConfigError(std::string(key) + " must be a string");
    return cfg.at(key).get<std::string>();
}

spectral::BathSpec bath_of(const Json& cfg) {
    if (!cfg.contains("bath")) throw ConfigError("config needs a bath object");
    return io::bath_from_json(cfg.at("bath"));
}

quad::QuadConfig quad_of(const Json& cfg) {
    quad::QuadConfig q;
    q.rel_tol = get_number(cfg, "tol", q.rel_tol);
    if (cfg.contains("omega_c")) q.omega_c = get_number(cfg, "omega_c", 0.0);
    const long long panels = get_integer(cfg, "max_panels", static_cast<long long>(q.max_panels));
    if (panels <= 0) throw ConfigError("max_panels must be positive");
    q.max_panels = static_cast<std::size_t>(panels);
    q.validate();
    return q;
}

unsigned threads_of(const Json& cfg) {
    const long long n = get_integer(cfg, "threads", 1);
    if (n < 0 || n > 1024) throw ConfigError("threads must lie in [0, 1024]");
    return static_cast<unsigned>(n);
}

std::vector<double> grid_from(const Json& cfg, std::optional<std::vector<double>> fallback = std::nullopt) {
    if (!cfg.contains("grid")) {
        if (fallback) return *fallback;
        throw ConfigError("config needs a grid object with at least t_max");
    }
    const Json& g = cfg.at("grid");
    io::require_known_keys(g, {"t_min", "t_max", "n_points", "spacing"}, "grid");
    if (!g.contains("t_max")) throw ConfigError("grid.t_max is required");
    const double t_min = get_number(g, "t_min", 0.0);
    const double t_max = get_number(g, "t_max", 0.0);
    const long long n = get_integer(g, "n_points", 101);
    if (n < 1) throw ConfigError("grid.n_points must be at least 1");
    const std::string spacing = get_string(g, "spacing").value_or("linear");
    dynamics::Spacing sp = dynamics::Spacing::Linear;
    if (spacing == "log") {
        sp = dynamics::Spacing::Log;
    } else if (spacing != "linear") {
        throw ConfigError("grid.spacing must be linear or log");
    }
    return dynamics::time_grid(t_min, t_max, static_cast<std::size_t>(n), sp);
}

// Writes through `emit` to the configured output file, or to `out`.
void with_output(const Json& cfg, std::ostream& out, const std::function<void(std::ostream&)>& emit) {
    const auto path = get_string(cfg, "output");
    if (!path) {
        emit(out);
        return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + *path + "'");
    emit(file);
}

std::vector<double> number_array(const Json& cfg, const char* key) {
    if (!cfg.contains(key) || !cfg.at(key).is_array()) {
        throw ConfigError(std::string(key) + " must be an array of numbers");
    }
    std::vector<double> v;
    for (const Json& x : cfg.at(key)) {
        if (!x.is_number()) throw ConfigError(std::string(key) + " must be an array of numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

std::vector<int> bit_array(const Json& cfg, const char* key) {
    if (!cfg.contains(key) || !cfg.at(key).is_array()) throw ConfigError(std::string(key) + " must be an array of 0/1");
    std::vector<int> v;
    for (const Json& x : cfg.at(key)) {
        if (!x.is_number_integer()) throw ConfigError(std::string(key) + " must be an array of 0/1");
        v.push_back(x.get<int>());
    }
    return v;
}

void cmd_gamma(const Json& cfg, std::ostream& out, std::ostream& err) {
    io::require_known_keys(cfg, {"bath", "tol", "omega_c", "max_panels", "threads", "grid", "rate", "output"},
                           "gamma config");
    const auto bath = bath_of(cfg);
    const auto q = quad_of(cfg);
    const auto times = grid_from(cfg);
    const bool rate = get_bool(cfg, "rate", true);
    const auto curve = dynamics::evaluate_curve(bath, times, q, rate, threads_of(cfg));
    with_output(cfg, out, [&](std::ostream& os) { io::write_curve_csv(os, curve); });
    err << "gamma: " << times.size() << " points, rel_tol " << q.rel_tol << "\n";
}

void cmd_classify(const Json& cfg, std::ostream& out, std::ostream&) {
    io::require_known_keys(cfg, {"bath", "tol", "output"}, "classify config");
    const auto bath = bath_of(cfg);
    const double tol = get_number(cfg, "tol", 1e-10);
    if (!(tol >= 1e-14 && tol <= 1e-2)) throw ConfigError("tol must lie in [1e-14, 1e-2]");
    const auto regime = spectral::classify(bath, tol);
    Json j = io::regime_to_json(regime);
    j["beta"] = io::beta_to_json(bath.beta());
    with_output(cfg, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void cmd_asymptote(const Json& cfg, std::ostream& out, std::ostream& err) {
    io::require_known_keys(cfg,
                           {"bath", "tol", "omega_c", "max_panels", "grid", "fit_window", "format", "output"},
                           "asymptote config");
    const auto bath = bath_of(cfg);
    const auto q = quad_of(cfg);
    const auto times = grid_from(cfg);
    std::optional<asymptotics::FitWindow> window;
    if (cfg.contains("fit_window")) {
        const auto w = number_array(cfg, "fit_window");
        if (w.size() != 2) throw ConfigError("fit_window must be [t_lo, t_hi]");
        window = asymptotics::FitWindow{w[0], w[1]};
    }
    const std::string format = get_string(cfg, "format").value_or("json");
    if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
    const auto report = asymptotics::residual_report(bath, times, q, window);
    with_output(cfg, out, [&](std::ostream& os) {
        if (format == "json") {
            os << io::residual_report_to_json(report).dump(2) << '\n';
        } else {
            io::write_residual_csv(os, report);
        }
    });
    if (report.constant) {
        err << "asymptote: C_hat = " << io::format_double(report.constant->value) << " from "
            << report.constant->n_points << " points\n";
    }
}

void cmd_qrf(const Json& cfg, std::ostream& out, std::ostream&) {
    io::require_known_keys(cfg, {"bath", "tol", "omega_c", "max_panels", "j", "l", "t", "ladder", "growth_limit", "output"},
                           "qrf config");
    const auto bath = bath_of(cfg);
    const auto q = quad_of(cfg);
    qrf::MultiTimeSpec spec{bit_array(cfg, "j"), bit_array(cfg, "l"), number_array(cfg, "t")};
    const auto ladder = cfg.contains("ladder") ? number_array(cfg, "ladder") : qrf::kDefaultLadder;
    const double limit = get_number(cfg, "growth_limit", 1.2);
    const auto report = qrf::qrf_check(bath, spec, q, ladder, limit);
    with_output(cfg, out, [&](std::ostream& os) { os << io::qrf_report_to_json(report).dump(2) << '\n'; });
}

void cmd_embed_fit(const Json& cfg, std::ostream& out, std::ostream& err) {
    io::require_known_keys(cfg,
                           {"input", "bath", "grid", "tol", "omega_c", "max_panels", "threads", "k_max", "floor",
                            "powers_allowed", "output"},
                           "embed-fit config");
    const long long k_max = get_integer(cfg, "k_max", embedfit::kDefaultKMax);
    if (k_max < 1 || k_max > 64) throw ConfigError("k_max must lie in [1, 64]");
    const double floor = get_number(cfg, "floor", embedfit::kDefaultFloor);
    const bool powers = get_bool(cfg, "powers_allowed", true);
    std::vector<embedfit::Sample> samples;
    if (const auto input = get_string(cfg, "input")) {
        if (cfg.contains("bath") || cfg.contains("grid")) {
            throw ConfigError("embed-fit takes either input or bath+grid, not both");
        }
        std::ifstream in(*input);
        if (!in) throw ConfigError("cannot open input file '" + *input + "'");
        samples = io::read_samples_csv(in);
    } else {
        const auto bath = bath_of(cfg);
        const auto curve = dynamics::evaluate_curve(bath, grid_from(cfg), quad_of(cfg), false, threads_of(cfg));
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            samples.push_back({curve.times[i], std::exp(-curve.gamma_values[i])});
        }
    }
    const auto report = embedfit::certify_curve(samples, static_cast<int>(k_max), floor, powers);
    with_output(cfg, out, [&](std::ostream& os) { os << io::fit_report_to_json(report).dump(2) << '\n'; });
    err << "embed-fit: " << embedfit::to_string(report.verdict) << " on [" << report.t_min << ", " << report.t_max
        << "]\n";
}

void cmd_bath(const Json& cfg, std::ostream& out, std::ostream& err) {
    io::require_known_keys(cfg,
                           {"bath", "n_modes", "omega_max", "grid", "tol", "omega_c", "max_panels", "threads",
                            "modes_output", "output"},
                           "bath config");
    const auto bath = bath_of(cfg);
    const long long n = get_integer(cfg, "n_modes", 10000);
    if (n < 1) throw ConfigError("n_modes must be at least 1");
    const double omega_max = get_number(cfg, "omega_max", 20.0 * bath.density().omega_scale());
    const auto fb = dynamics::sample_bath(bath.density(), static_cast<std::size_t>(n), omega_max);
    const auto times = grid_from(cfg, dynamics::time_grid(0.0, 10.0, 11, dynamics::Spacing::Linear));
    const auto curve = dynamics::evaluate_curve(bath, times, quad_of(cfg), false, threads_of(cfg));

    if (const auto path = get_string(cfg, "modes_output")) {
        std::ofstream file(*path, std::ios::binary);
        if (!file) throw ConfigError("cannot open modes_output file '" + *path + "'");
        io::write_finite_bath_csv(file, fb);
    }
    double worst = 0.0;
    with_output(cfg, out, [&](std::ostream& os) {
        os << "t,gamma_finite,gamma_exact,abs_diff\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double finite = dynamics::finite_bath_gamma(fb, bath.beta(), times[i]);
            const double diff = std::abs(finite - curve.gamma_values[i]);
            worst = std::max(worst, diff);
            os << io::format_double(times[i]) << ',' << io::format_double(finite) << ','
               << io::format_double(curve.gamma_values[i]) << ',' << io::format_double(diff) << '\n';
        }
    });
    err << "bath: " << n << " modes on [0, " << omega_max << "], max |diff| = " << worst << "\n";
}

CLI::App* add_command(CLI::App& app, const char* name, const char* description, const std::string& keys,
                      Overrides& o) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", o.config, "JSON config file");
    sub->add_option("--tol", o.tol, "override tol");
    sub->add_option("--beta", o.beta, "override bath.beta (number or inf)");
    sub->add_option("--output", o.output, "override output path");
    sub->footer("Config keys:\n" + keys);
    return sub;
}

void add_quad_flags(CLI::App* sub, Overrides& o) {
    sub->add_option("--omega-c", o.omega_c, "override omega_c");
    sub->add_option("--max-panels", o.max_panels, "override max_panels");
}

void add_grid_flags(CLI::App* sub, Overrides& o) {
    sub->add_option("--t-min", o.t_min, "override grid.t_min");
    sub->add_option("--t-max", o.t_max, "override grid.t_max");
    sub->add_option("--n-points", o.n_points, "override grid.n_points");
    sub->add_option("--spacing", o.spacing, "override grid.spacing (linear|log)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"dephase: exact pure-dephasing decoherence of a qubit in a bosonic bath"};
    app.require_subcommand(1);
    Overrides o;

    const std::string common = std::string(kBathHelp);
    CLI::App* gamma = add_command(app, "gamma", "Gamma(t), |coherence| and rate on a time grid (CSV)",
                                  common + kQuadHelp + kGridHelp + kThreadsHelp +
                                      "  rate            also compute the dephasing rate (default true)\n" +
                                      kOutputHelp,
                                  o);
    add_quad_flags(gamma, o);
    add_grid_flags(gamma, o);
    gamma->add_option("--threads", o.threads, "override threads");
    gamma->add_flag("--no-rate", o.no_rate, "skip the rate column");

    CLI::App* classify = add_command(app, "classify", "Regime and decoherence constants (JSON)",
                                     common + "  tol             quadrature tolerance for Gamma_infinity (default 1e-10)\n" +
                                         kOutputHelp,
                                     o);

    CLI::App* asymptote =
        add_command(app, "asymptote", "Exact Gamma(t) against the predicted long-time law (JSON or CSV)",
                    common + kQuadHelp + kGridHelp +
                        "  fit_window      [t_lo, t_hi] for the constant estimate (default last 25% of the grid)\n"
                        "  format          json | csv (default json)\n" +
                        kOutputHelp,
                    o);
    add_quad_flags(asymptote, o);
    add_grid_flags(asymptote, o);
    asymptote->add_option("--format", o.format, "override format");

    CLI::App* qrf_cmd = add_command(
        app, "qrf", "Multi-time regression check along a scaling ladder (JSON)",
        common + kQuadHelp +
            "  j, l            arrays of 0/1 of equal length n >= 1 (required)\n"
            "  t               array of n nonnegative times (required)\n"
            "  ladder          scaling factors (default [10, 30, 100, 300])\n"
            "  growth_limit    allowed growth of the normalized deviation (default 1.2)\n" +
            kOutputHelp,
        o);
    add_quad_flags(qrf_cmd, o);
    qrf_cmd->add_option("--growth-limit", o.growth_limit, "override growth_limit");

    CLI::App* embed = add_command(
        app, "embed-fit", "Exponential-sum certification of a coherence curve (JSON)",
        "  input           CSV file with header t,value on a uniform grid, or instead:\n" + common + kQuadHelp +
            kGridHelp + kThreadsHelp +
            "  k_max           largest number of terms (default 8)\n"
            "  floor           residual floor for the verdict (default 0.01)\n"
            "  powers_allowed  allow t^n e^{-lt} terms (default true)\n" +
            kOutputHelp,
        o);
    add_quad_flags(embed, o);
    add_grid_flags(embed, o);
    embed->add_option("--threads", o.threads, "override threads");
    embed->add_option("--input", o.input, "override input");
    embed->add_option("--k-max", o.k_max, "override k_max");
    embed->add_option("--floor", o.floor, "override floor");
    embed->add_flag("--no-powers", o.no_powers, "disallow t^n prefactors");

    CLI::App* bath_cmd = add_command(
        app, "bath", "Discretised finite bath and its convergence table (CSV)",
        common + kQuadHelp +
            "  grid            as for gamma (default t in [0, 10], 11 points)\n"
            "  n_modes         number of modes (default 10000)\n"
            "  omega_max       discretisation cutoff (default 20 omega_scale)\n"
            "  modes_output    CSV path for omega,g_abs2 (default: not written)\n" +
            kThreadsHelp + kOutputHelp,
        o);
    add_quad_flags(bath_cmd, o);
    add_grid_flags(bath_cmd, o);
    bath_cmd->add_option("--threads", o.threads, "override threads");
    bath_cmd->add_option("--n-modes", o.n_modes, "override n_modes");
    bath_cmd->add_option("--omega-max", o.omega_max, "override omega_max");
    bath_cmd->add_option("--modes-output", o.modes_output, "override modes_output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        Json cfg = load_config(o.config);
        apply_overrides(cfg, o);
        if (gamma->parsed()) cmd_gamma(cfg, out, err);
        if (classify->parsed()) cmd_classify(cfg, out, err);
        if (asymptote->parsed()) cmd_asymptote(cfg, out, err);
        if (qrf_cmd->parsed()) cmd_qrf(cfg, out, err);
        if (embed->parsed()) cmd_embed_fit(cfg, out, err);
        if (bath_cmd->parsed()) cmd_bath(cfg, out, err);
        return kOk;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kDivergence;
    } catch (const AccuracyError& e) {
        err << "error: " << e.what() << " (estimate " << e.estimate() << ", error " << e.error_estimate() << ")\n";
        return kAccuracy;
    } catch (const Json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace dephasing::cli
