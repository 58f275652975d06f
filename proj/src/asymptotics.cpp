// asymptotics.cpp: Long-time laws, constant estimation and residual reports

#include "dephasing/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dephasing/errors.hpp"

namespace dephasing::asymptotics {

double AsymptoticLaw::known_terms(double t) const {
    double value = 0.0;
    if (linear) value += *linear * t;
    if (log && *log != 0.0) value += *log * std::log(t);
    if (power) value += power->coefficient * std::pow(t, power->exponent);
    if (constant) value += *constant;
    return value;
}

AsymptoticLaw predict_law(const BathSpec& bath, double quad_tol) {
    const Regime regime = spectral::classify(bath, quad_tol);
    const auto& c = regime.constants;
    AsymptoticLaw law{regime, std::nullopt, std::nullopt, std::nullopt, std::nullopt, c.constant_estimable};
    switch (regime.cls) {
        case RegimeClass::Exponential:
            law.linear = c.gamma0;
            law.log = c.alpha;
            break;
        case RegimeClass::PowerLaw:
            law.log = c.alpha;
            break;
        case RegimeClass::Partial:
            law.constant = c.gamma_infinity;
            break;
        case RegimeClass::SubexponentialPower:
        case RegimeClass::Superexponential:
            law.power = PowerTerm{*c.a, 1.0 - *c.delta};
            break;
    }
    return law;
}

namespace {

void require_estimable(const AsymptoticLaw& law) {
    if (law.regime.cls == RegimeClass::Partial) {
        throw RegimeError("no additive constant to estimate in the partial regime (Gamma tends to Gamma_infinity)");
    }
    if (!law.constant_estimable) {
        throw RegimeError("this regime has no additive constant (residual is O(t^-delta ln t))");
    }
}

ConstantEstimate mean_over(const AsymptoticLaw& law, const dynamics::DephasingCurve& curve,
                           std::size_t first, std::size_t last) {
    if (curve.times.size() != curve.gamma_values.size()) {
        throw PreconditionError("curve times and values differ in length");
    }
    std::vector<double> diffs;
    for (std::size_t i = first; i < last; ++i) {
        const double t = curve.times[i];
        if (!(t > 0.0)) continue;
        diffs.push_back(curve.gamma_values[i] - law.known_terms(t));
    }
    if (diffs.empty()) throw PreconditionError("fit window contains no grid points with t > 0");
    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(diffs.size());
    double var = 0.0;
    for (double d : diffs) var += (d - mean) * (d - mean);
    const double stddev = diffs.size() > 1 ? std::sqrt(var / static_cast<double>(diffs.size() - 1)) : 0.0;
    return {mean, stddev, diffs.size()};
}

}  // namespace

ConstantEstimate estimate_constant(const AsymptoticLaw& law, const dynamics::DephasingCurve& curve) {
    require_estimable(law);
    const std::size_t n = curve.times.size();
    if (n == 0) throw PreconditionError("empty curve");
    const std::size_t count = std::max<std::size_t>(1, (n + 3) / 4);
    return mean_over(law, curve, n - count, n);
}

ConstantEstimate estimate_constant(const AsymptoticLaw& law, const dynamics::DephasingCurve& curve,
                                   double t_fit) {
    if (!(t_fit > 0.0)) throw DomainError("t_fit must be positive");
    return estimate_constant(law, curve, FitWindow{t_fit, 2.0 * t_fit});
}

ConstantEstimate estimate_constant(const AsymptoticLaw& law, const dynamics::DephasingCurve& curve,
                                   FitWindow window) {
    require_estimable(law);
    if (!(window.t_lo > 0.0 && window.t_hi >= window.t_lo)) {
        throw DomainError("fit window needs 0 < t_lo <= t_hi");
    }
    const auto& ts = curve.times;
    const double slack = 1e-12 * window.t_hi;
    if (ts.empty() || ts.front() > window.t_lo + slack || ts.back() < window.t_hi - slack) {
        std::ostringstream msg;
        msg << "curve does not cover the fit window [" << window.t_lo << ", " << window.t_hi << "]";
        throw PreconditionError(msg.str());
    }
    const auto lo = std::lower_bound(ts.begin(), ts.end(), window.t_lo - slack) - ts.begin();
    const auto hi = std::upper_bound(ts.begin(), ts.end(), window.t_hi + slack) - ts.begin();
    return mean_over(law, curve, static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
}

ResidualReport residual_report(const BathSpec& bath, const std::vector<double>& times,
                               const quad::QuadConfig& cfg, std::optional<FitWindow> window) {
    AsymptoticLaw law = predict_law(bath, cfg.rel_tol);
    if (law.regime.cls == RegimeClass::Partial) {
        throw RegimeError("residual report is defined for regimes with full decoherence only");
    }
    for (double t : times) {
        if (!(t > 0.0)) throw DomainError("residual report needs times > 0");
    }
    const dynamics::DephasingCurve curve = dynamics::evaluate_curve(bath, times, cfg, false);

    ResidualReport report{law, std::nullopt, {}};
    double c_hat = 0.0;
    if (law.constant_estimable) {
        report.constant = window ? estimate_constant(law, curve, *window) : estimate_constant(law, curve);
        c_hat = report.constant->value;
    }
    const bool superexp = law.regime.cls == RegimeClass::Superexponential;
    const double delta = law.regime.gamma_lowfreq;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double predicted = law.known_terms(t) + c_hat;
        ResidualRow row{t, curve.gamma_values[i], predicted, curve.gamma_values[i] - predicted, std::nullopt};
        if (superexp && t > 1.0) row.normalized = row.residual / (std::pow(t, -delta) * std::log(t));
        report.rows.push_back(row);
    }
    return report;
}

double coherence_law(const BathSpec& bath, double t) {
    if (!(t >= 0.0)) throw DomainError("coherence_law requires t >= 0");
    const AsymptoticLaw law = predict_law(bath);
    if (law.regime.cls == RegimeClass::Partial) return std::exp(-*law.constant);
    if (t == 0.0) {
        if (law.log && *law.log != 0.0) {
            throw DomainError("law with a logarithmic term is singular at t = 0");
        }
        return 1.0;
    }
    return std::exp(-law.known_terms(t));
}

}  // namespace dephasing::asymptotics
