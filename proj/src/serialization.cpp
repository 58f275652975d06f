// serialization.cpp: JSON and CSV reading and writing

#include "dephasing/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "dephasing/errors.hpp"

namespace dephasing::io {

namespace {

double number_at(const Json& j, const char* key, std::string_view context) {
    const Json& v = j.at(key);
    if (!v.is_number()) {
        std::ostringstream msg;
        msg << context << "." << key << " must be a number";
        throw ConfigError(msg.str());
    }
    return v.get<double>();
}

double optional_number(const Json& j, const char* key, double fallback, std::string_view context) {
    return j.contains(key) ? number_at(j, key, context) : fallback;
}

Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

void require_known_keys(const Json& object, std::initializer_list<std::string_view> allowed,
                        std::string_view context) {
    if (!object.is_object()) {
        std::ostringstream msg;
        msg << context << " must be a JSON object";
        throw ConfigError(msg.str());
    }
    for (const auto& item : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            std::ostringstream msg;
            msg << "unknown key '" << item.key() << "' in " << context;
            throw ConfigError(msg.str());
        }
    }
}

spectral::SpectralDensity density_from_json(const Json& j) {
    using spectral::SpectralDensity;
    require_known_keys(j, {"kind", "omega_scale", "exponent", "coupling2", "table", "lowfreq"}, "density");
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        throw ConfigError("density.kind must be one of ohmic_exp, drude_lorentz, power_law, tabulated");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (!j.contains("omega_scale")) throw ConfigError("density.omega_scale is required");
    const double omega = number_at(j, "omega_scale", "density");
    const double coupling = optional_number(j, "coupling2", 1.0, "density");

    if (kind == "ohmic_exp" || kind == "drude_lorentz") {
        if (j.contains("table") || j.contains("lowfreq")) {
            throw ConfigError("density.table and density.lowfreq apply to kind tabulated only");
        }
        if (j.contains("exponent") && number_at(j, "exponent", "density") != 1.0) {
            throw ConfigError("Ohmic kinds have exponent 1");
        }
        return kind == "ohmic_exp" ? SpectralDensity::ohmic_exp(omega, coupling)
                                   : SpectralDensity::drude_lorentz(omega, coupling);
    }
    if (kind == "power_law") {
        if (j.contains("table") || j.contains("lowfreq")) {
            throw ConfigError("density.table and density.lowfreq apply to kind tabulated only");
        }
        if (!j.contains("exponent")) throw ConfigError("density.exponent is required for power_law");
        return SpectralDensity::power_law(number_at(j, "exponent", "density"), omega, coupling);
    }
    if (kind == "tabulated") {
        if (!j.contains("table") || !j.at("table").is_array()) {
            throw ConfigError("density.table must be an array of [omega, J] pairs");
        }
        if (!j.contains("lowfreq") || !j.at("lowfreq").is_array() || j.at("lowfreq").size() != 2 ||
            !j.at("lowfreq")[0].is_number() || !j.at("lowfreq")[1].is_number()) {
            throw ConfigError("density.lowfreq must be [gamma_J, c]");
        }
        std::vector<spectral::TableNode> table;
        for (const Json& row : j.at("table")) {
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
                throw ConfigError("density.table rows must be [omega, J] number pairs");
            }
            table.push_back({row[0].get<double>(), row[1].get<double>()});
        }
        const spectral::LowFrequencyLaw law{j.at("lowfreq")[0].get<double>(), j.at("lowfreq")[1].get<double>()};
        if (j.contains("exponent") && number_at(j, "exponent", "density") != law.exponent) {
            throw ConfigError("density.exponent disagrees with lowfreq[0]");
        }
        return SpectralDensity::tabulated(std::move(table), law, omega, coupling);
    }
    throw ConfigError("unknown density.kind '" + kind + "'");
}

Json density_to_json(const spectral::SpectralDensity& d) {
    Json j;
    j["kind"] = std::string(spectral::to_string(d.kind()));
    j["omega_scale"] = d.omega_scale();
    j["exponent"] = d.exponent();
    j["coupling2"] = d.coupling2();
    if (d.kind() == spectral::DensityKind::Tabulated) {
        Json rows = Json::array();
        for (const auto& node : d.table()) rows.push_back(Json::array({node.omega, node.value}));
        j["table"] = rows;
        const auto law = d.declared_law();
        j["lowfreq"] = Json::array({law->exponent, law->coefficient});
    }
    return j;
}

Json beta_to_json(double beta) { return std::isinf(beta) ? Json("inf") : Json(beta); }

spectral::BathSpec bath_from_json(const Json& j) {
    require_known_keys(j, {"beta", "density"}, "bath");
    if (!j.contains("beta")) throw ConfigError("bath.beta is required (number or \"inf\")");
    if (!j.contains("density")) throw ConfigError("bath.density is required");
    const Json& b = j.at("beta");
    double beta = 0.0;
    if (b.is_string()) {
        const std::string s = b.get<std::string>();
        if (s != "inf" && s != "infinity") throw ConfigError("bath.beta string must be \"inf\"");
        beta = spectral::kInfiniteBeta;
    } else if (b.is_number()) {
        beta = b.get<double>();
    } else {
        throw ConfigError("bath.beta must be a number or \"inf\"");
    }
    return spectral::BathSpec(beta, density_from_json(j.at("density")));
}

Json bath_to_json(const spectral::BathSpec& b) {
    Json j;
    j["beta"] = beta_to_json(b.beta());
    j["density"] = density_to_json(b.density());
    return j;
}

Json regime_to_json(const spectral::Regime& regime) {
    Json j;
    j["class"] = std::string(spectral::to_string(regime.cls));
    j["gamma_lowfreq"] = regime.gamma_lowfreq;
    const auto& c = regime.constants;
    if (c.gamma0) j["gamma0"] = *c.gamma0;
    if (c.alpha) j["alpha"] = *c.alpha;
    if (c.gamma_infinity) j["gamma_infinity"] = *c.gamma_infinity;
    if (c.a) j["a"] = *c.a;
    if (c.delta) j["delta"] = *c.delta;
    j["constant_estimable"] = c.constant_estimable;
    return j;
}

Json residual_report_to_json(const asymptotics::ResidualReport& report) {
    Json j;
    const auto& law = report.law;
    j["regime"] = std::string(spectral::to_string(law.regime.cls));
    Json constants;
    constants["gamma_lowfreq"] = law.regime.gamma_lowfreq;
    if (law.linear) constants["gamma0"] = *law.linear;
    if (law.log) constants["alpha"] = *law.log;
    if (law.power) {
        constants["a"] = law.power->coefficient;
        constants["power_exponent"] = law.power->exponent;
    }
    if (report.constant) {
        constants["c_hat"] = report.constant->value;
        constants["c_hat_stddev"] = report.constant->stddev;
        constants["c_hat_points"] = report.constant->n_points;
    }
    j["constants"] = constants;
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json r;
        r["t"] = row.t;
        r["exact"] = row.exact;
        r["law"] = row.law;
        r["residual"] = row.residual;
        if (row.normalized) r["normalized"] = *row.normalized;
        rows.push_back(r);
    }
    j["residuals"] = rows;
    return j;
}

Json qrf_report_to_json(const qrf::QrfReport& report) {
    Json j;
    j["n"] = report.spec.size();
    j["j"] = report.spec.j;
    j["l"] = report.spec.l;
    j["t"] = report.spec.t;
    j["T"] = report.total_time;
    j["min_t"] = report.min_time;
    j["lhs"] = report.lhs;
    j["rhs"] = report.rhs;
    j["gamma0T"] = report.gamma0_t;
    j["normalized_dev"] = report.normalized_dev;
    j["pass"] = report.pass;
    j["growth_limit"] = report.growth_limit;
    Json ladder = Json::array();
    for (const auto& p : report.ladder) {
        Json r;
        r["s"] = p.s;
        r["T"] = p.total_time;
        r["min_t"] = p.min_time;
        r["lhs"] = p.lhs;
        r["rhs"] = p.rhs;
        r["gamma0T"] = p.gamma0_t;
        r["lhs_normalized"] = p.lhs_normalized;
        r["rhs_normalized"] = p.rhs_normalized;
        ladder.push_back(r);
    }
    j["ladder"] = ladder;
    return j;
}

Json fit_report_to_json(const embedfit::FitReport& report) {
    Json j;
    j["interval"] = Json::array({report.t_min, report.t_max});
    j["n_samples"] = report.n_samples;
    j["verdict"] = std::string(embedfit::to_string(report.verdict));
    j["max_rel_residual"] = report.max_rel_residual;
    j["floor"] = report.floor;
    j["k_at_floor"] = report.k_at_floor ? Json(*report.k_at_floor) : Json(nullptr);
    j["ill_conditioned"] = report.ill_conditioned;
    Json curve = Json::array();
    for (const auto& kr : report.residual_vs_K) {
        Json r;
        r["K"] = kr.k;
        r["residual"] = kr.residual;
        curve.push_back(r);
    }
    j["residual_vs_K"] = curve;
    Json terms = Json::array();
    for (const auto& term : report.model.terms) {
        Json r;
        r["coeff"] = complex_to_json(term.coeff);
        r["rate"] = complex_to_json(term.rate);
        r["power"] = term.power;
        terms.push_back(r);
    }
    j["model"] = terms;
    return j;
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_curve_csv(std::ostream& out, const dynamics::DephasingCurve& curve) {
    out << "t,gamma,abs_coherence,rate\n";
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        out << format_double(curve.times[i]) << ',' << format_double(curve.gamma_values[i]) << ','
            << format_double(std::exp(-curve.gamma_values[i])) << ','
            << (curve.rates.empty() ? std::string() : format_double(curve.rates[i])) << '\n';
    }
}

void write_residual_csv(std::ostream& out, const asymptotics::ResidualReport& report) {
    const bool normalized = std::any_of(report.rows.begin(), report.rows.end(),
                                        [](const auto& r) { return r.normalized.has_value(); });
    out << "t,exact,law,residual" << (normalized ? ",normalized" : "") << '\n';
    for (const auto& row : report.rows) {
        out << format_double(row.t) << ',' << format_double(row.exact) << ',' << format_double(row.law) << ','
            << format_double(row.residual);
        if (normalized) out << ',' << (row.normalized ? format_double(*row.normalized) : std::string());
        out << '\n';
    }
}

void write_finite_bath_csv(std::ostream& out, const dynamics::FiniteBath& bath) {
    out << "omega,g_abs2\n";
    for (const auto& m : bath.modes) out << format_double(m.omega) << ',' << format_double(m.g_abs2) << '\n';
}

std::vector<embedfit::Sample> read_samples_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<embedfit::Sample> samples;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            std::string compact;
            for (char ch : line) {
                if (ch != ' ') compact += ch;
            }
            if (compact != "t,value") throw ConfigError("sample CSV must start with the header t,value");
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("sample CSV line " + std::to_string(line_no) + " needs two columns");
        }
        try {
            std::size_t used_t = 0;
            std::size_t used_v = 0;
            const std::string ts = line.substr(0, comma);
            const std::string vs = line.substr(comma + 1);
            const double t = std::stod(ts, &used_t);
            const double v = std::stod(vs, &used_v);
            if (vs.find_first_not_of(" \t", used_v) != std::string::npos ||
                ts.find_first_not_of(" \t", used_t) != std::string::npos) {
                throw std::invalid_argument("trailing characters");
            }
            samples.push_back({t, v});
        } catch (const std::exception&) {
            throw ConfigError("sample CSV line " + std::to_string(line_no) + " is not two numbers");
        }
    }
    if (!header_seen) throw ConfigError("sample CSV is empty");
    return samples;
}

}  // namespace dephasing::io
