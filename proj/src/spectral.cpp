// spectral.cpp: Spectral density models, J_eff and regime classification

#include "dephasing/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dephasing/errors.hpp"
#include "dephasing/quad.hpp"
#include "dephasing/quadrature.hpp"

namespace dephasing::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kExponentTol = 1e-12;

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << name << " must be positive and finite (got " << value << ")";
        throw DomainError(msg.str());
    }
}

// ω^γ with the conventions 0^0 = 1 and 0^γ = ∞ for γ < 0.
double power_of(double omega, double gamma) {
    if (omega == 0.0) {
        if (gamma > 0.0) return 0.0;
        if (gamma == 0.0) return 1.0;
        return std::numeric_limits<double>::infinity();
    }
    return std::pow(omega, gamma);
}

// Fritsch–Carlson node slopes with the three-point shape-preserving end conditions.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        delta[k] = (y[k + 1] - y[k]) / h[k];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) continue;
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto end_slope = [](double h0, double h1, double del0, double del1) {
        double slope = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (slope * del0 <= 0.0) {
            slope = 0.0;
        } else if (del0 * del1 <= 0.0 && std::abs(slope) > std::abs(3.0 * del0)) {
            slope = 3.0 * del0;
        }
        return slope;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

}  // namespace

std::string_view to_string(DensityKind kind) {
    switch (kind) {
        case DensityKind::OhmicExpCutoff: return "ohmic_exp";
        case DensityKind::DrudeLorentz: return "drude_lorentz";
        case DensityKind::PowerLawExpCutoff: return "power_law";
        case DensityKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

std::string_view to_string(RegimeClass cls) {
    switch (cls) {
        case RegimeClass::Partial: return "Partial";
        case RegimeClass::Exponential: return "Exponential";
        case RegimeClass::SubexponentialPower: return "SubexponentialPower";
        case RegimeClass::PowerLaw: return "PowerLaw";
        case RegimeClass::Superexponential: return "Superexponential";
    }
    return "unknown";
}

SpectralDensity SpectralDensity::ohmic_exp(double omega_scale, double coupling2) {
    require_positive(omega_scale, "omega_scale");
    require_positive(coupling2, "coupling2");
    SpectralDensity d;
    d.kind_ = DensityKind::OhmicExpCutoff;
    d.omega_scale_ = omega_scale;
    d.exponent_ = 1.0;
    d.coupling2_ = coupling2;
    return d;
}

SpectralDensity SpectralDensity::drude_lorentz(double omega_scale, double coupling2) {
    SpectralDensity d = ohmic_exp(omega_scale, coupling2);
    d.kind_ = DensityKind::DrudeLorentz;
    return d;
}

SpectralDensity SpectralDensity::power_law(double exponent, double omega_scale, double coupling2) {
    if (!(exponent > -1.0) || !std::isfinite(exponent)) {
        throw DomainError("power_law exponent must be finite and > -1");
    }
    SpectralDensity d = ohmic_exp(omega_scale, coupling2);
    d.kind_ = DensityKind::PowerLawExpCutoff;
    d.exponent_ = exponent;
    return d;
}

SpectralDensity SpectralDensity::tabulated(std::vector<TableNode> table, LowFrequencyLaw law,
                                           double omega_scale, double coupling2) {
    require_positive(omega_scale, "omega_scale");
    require_positive(coupling2, "coupling2");
    if (!(law.exponent > -1.0) || !std::isfinite(law.exponent)) {
        throw DomainError("declared low-frequency exponent must be finite and > -1");
    }
    require_positive(law.coefficient, "declared low-frequency coefficient");
    for (std::size_t i = 0; i < table.size(); ++i) {
        const TableNode& node = table[i];
        if (!(node.omega >= 0.0) || !std::isfinite(node.omega) || !(node.value >= 0.0) ||
            !std::isfinite(node.value)) {
            throw DomainError("table entries need finite omega >= 0 and J >= 0");
        }
        if (i > 0 && !(node.omega > table[i - 1].omega)) {
            throw DomainError("table omegas must be strictly increasing");
        }
    }
    SpectralDensity d;
    d.kind_ = DensityKind::Tabulated;
    d.omega_scale_ = omega_scale;
    d.exponent_ = law.exponent;
    d.coupling2_ = coupling2;
    d.law_coefficient_ = law.coefficient;
    d.first_positive_ = (!table.empty() && table.front().omega == 0.0) ? 1 : 0;
    if (table.size() < d.first_positive_ + 2) {
        throw DomainError("tabulated density needs at least two nodes with omega > 0");
    }
    d.table_ = std::move(table);

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = d.first_positive_; i < d.table_.size(); ++i) {
        xs.push_back(d.table_[i].omega);
        ys.push_back(d.table_[i].value);
    }
    d.slopes_ = pchip_slopes(xs, ys);

    // Quadratic G(ω) = c + bω + aω² through (0, c), (ω1, G1), (ω2, G2).
    const double w1 = xs[0];
    const double w2 = xs[1];
    const double r1 = (ys[0] / std::pow(w1, law.exponent) - law.coefficient) / w1;
    const double r2 = (ys[1] / std::pow(w2, law.exponent) - law.coefficient) / w2;
    d.near_zero_curv_ = (r2 - r1) / (w2 - w1);
    d.near_zero_slope_ = r1 - d.near_zero_curv_ * w1;
    return d;
}

std::optional<LowFrequencyLaw> SpectralDensity::declared_law() const {
    if (kind_ == DensityKind::Tabulated) return LowFrequencyLaw{exponent_, law_coefficient_};
    return LowFrequencyLaw{exponent_, unscaled_factor(0.0)};
}

double SpectralDensity::tabulated_value(double omega) const {
    const std::size_t begin = first_positive_;
    const std::size_t last = table_.size() - 1;
    const double w_max = table_[last].omega;
    if (omega >= w_max) return table_[last].value * std::exp(-(omega - w_max) / omega_scale_);
    auto it = std::upper_bound(table_.begin() + static_cast<std::ptrdiff_t>(begin), table_.end(), omega,
                               [](double w, const TableNode& node) { return w < node.omega; });
    const auto k = static_cast<std::size_t>(it - table_.begin()) - 1;
    const double x0 = table_[k].omega;
    const double x1 = table_[k + 1].omega;
    const double h = x1 - x0;
    const double u = (omega - x0) / h;
    const double d0 = slopes_[k - begin];
    const double d1 = slopes_[k + 1 - begin];
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    const double value = h00 * table_[k].value + h10 * h * d0 + h01 * table_[k + 1].value + h11 * h * d1;
    return std::max(0.0, value);
}

double SpectralDensity::unscaled_factor(double omega) const {
    switch (kind_) {
        case DensityKind::OhmicExpCutoff: return std::exp(-omega / omega_scale_);
        case DensityKind::DrudeLorentz: {
            const double w2 = omega_scale_ * omega_scale_;
            return w2 / (omega * omega + w2);
        }
        case DensityKind::PowerLawExpCutoff:
            return 2.0 * std::pow(omega_scale_, 1.0 - exponent_) * std::exp(-omega / omega_scale_);
        case DensityKind::Tabulated: {
            const double w1 = table_[first_positive_].omega;
            if (omega <= w1) {
                const double q = law_coefficient_ + near_zero_slope_ * omega +
                                 near_zero_curv_ * omega * omega;
                return std::max(0.0, q);
            }
            return tabulated_value(omega) / std::pow(omega, exponent_);
        }
    }
    return 0.0;
}

double SpectralDensity::operator()(double omega) const {
    if (!(omega >= 0.0)) throw DomainError("spectral density evaluated at negative omega");
    if (std::isinf(omega)) return 0.0;
    const double g = unscaled_factor(omega);
    if (omega == 0.0) return coupling2_ * g * power_of(0.0, exponent_);
    if (kind_ == DensityKind::Tabulated && omega > table_[first_positive_].omega) {
        return coupling2_ * tabulated_value(omega);
    }
    return coupling2_ * power_of(omega, exponent_) * g;
}

double SpectralDensity::smooth_factor(double omega) const {
    if (!(omega >= 0.0)) throw DomainError("smooth factor evaluated at negative omega");
    if (std::isinf(omega)) return 0.0;
    return coupling2_ * unscaled_factor(omega);
}

double SpectralDensity::smooth_factor_at_zero() const { return coupling2_ * unscaled_factor(0.0); }

std::optional<double> SpectralDensity::smooth_factor_slope_at_zero() const {
    switch (kind_) {
        case DensityKind::OhmicExpCutoff: return -coupling2_ / omega_scale_;
        case DensityKind::DrudeLorentz: return 0.0;
        case DensityKind::PowerLawExpCutoff: return -coupling2_ * unscaled_factor(0.0) / omega_scale_;
        case DensityKind::Tabulated: return coupling2_ * near_zero_slope_;
    }
    return std::nullopt;
}

SpectralDensity SpectralDensity::scaled(double factor) const {
    require_positive(factor, "scale factor");
    SpectralDensity copy = *this;
    copy.coupling2_ *= factor;
    return copy;
}

double evaluate(const SpectralDensity& density, double omega) { return density(omega); }

double omega_coth_half(double beta, double omega) {
    if (std::isinf(beta)) return std::abs(omega);
    const double x = beta * omega;
    if (std::abs(x) < 1e-3) {
        const double w2 = omega * omega;
        return 2.0 / beta + beta * w2 / 6.0 - beta * beta * beta * w2 * w2 / 360.0;
    }
    return omega / std::tanh(0.5 * x);
}

BathSpec::BathSpec(double beta, SpectralDensity density) : beta_(beta), density_(std::move(density)) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive or infinite");
}

double BathSpec::lowfreq_exponent() const noexcept {
    return zero_temperature() ? density_.exponent() : density_.exponent() - 1.0;
}

double BathSpec::effective(double omega) const {
    if (!(omega > 0.0)) throw DomainError("effective spectral density needs omega > 0");
    if (zero_temperature()) return density_(omega);
    if (beta_ * omega < 1e-3) {
        return density_.smooth_factor(omega) * power_of(omega, density_.exponent() - 1.0) *
               omega_coth_half(beta_, omega);
    }
    return density_(omega) / std::tanh(0.5 * beta_ * omega);
}

double BathSpec::effective_smooth_factor(double omega) const {
    if (!(omega >= 0.0)) throw DomainError("effective smooth factor at negative omega");
    if (zero_temperature()) return density_.smooth_factor(omega);
    if (std::isinf(omega)) return 0.0;
    return density_.smooth_factor(omega) * omega_coth_half(beta_, omega);
}

double BathSpec::effective_smooth_factor_at_zero() const {
    const double g0 = density_.smooth_factor_at_zero();
    return zero_temperature() ? g0 : 2.0 * g0 / beta_;
}

std::optional<double> BathSpec::effective_smooth_factor_slope_at_zero() const {
    const auto slope = density_.smooth_factor_slope_at_zero();
    if (!slope) return std::nullopt;
    return zero_temperature() ? *slope : 2.0 * *slope / beta_;
}

double effective(const BathSpec& bath, double omega) { return bath.effective(omega); }

EffectiveAtZero effective_at_zero(const BathSpec& bath) {
    const double g = bath.lowfreq_exponent();
    const double h0 = bath.effective_smooth_factor_at_zero();
    const auto h1 = bath.effective_smooth_factor_slope_at_zero();
    EffectiveAtZero out{0.0, std::nullopt};
    if (std::abs(g) <= kExponentTol) {
        out.value = h0;
        out.derivative = h1;
    } else if (g < 0.0) {
        out.value = std::numeric_limits<double>::infinity();
    } else if (std::abs(g - 1.0) <= kExponentTol) {
        out.derivative = h0;
    } else if (g > 1.0) {
        out.derivative = 0.0;
    }
    return out;
}

RegimeClass classify_exponent(double g) {
    if (!std::isfinite(g) || g <= -1.0 + kExponentTol) {
        std::ostringstream msg;
        msg << "J_eff(w)/w^2 is not integrable at w = 0 (low-frequency exponent " << g
            << "); Gamma(t) diverges. Regularize the 1/f (flicker) singularity, e.g. J ~ w^eps with eps > 0";
        throw DivergenceError(msg.str());
    }
    if (std::abs(g) <= kExponentTol) return RegimeClass::Exponential;
    if (g < 0.0) return RegimeClass::Superexponential;
    if (std::abs(g - 1.0) <= kExponentTol) return RegimeClass::PowerLaw;
    if (g < 1.0) return RegimeClass::SubexponentialPower;
    return RegimeClass::Partial;
}

Regime classify(const BathSpec& bath, double quad_tol) {
    const double g = bath.lowfreq_exponent();
    Regime regime{classify_exponent(g), g, {}};
    RegimeConstants& c = regime.constants;
    switch (regime.cls) {
        case RegimeClass::Exponential:
            c.gamma0 = gamma0(bath);
            c.alpha = bath.effective_smooth_factor_slope_at_zero();
            c.constant_estimable = true;
            break;
        case RegimeClass::PowerLaw:
            c.alpha = alpha_const(bath);
            c.constant_estimable = true;
            break;
        case RegimeClass::Partial:
            c.gamma_infinity = gamma_infinity(bath, quad_tol);
            break;
        case RegimeClass::SubexponentialPower:
        case RegimeClass::Superexponential:
            c.a = a_const(bath);
            c.delta = g;
            c.constant_estimable = regime.cls == RegimeClass::SubexponentialPower;
            break;
    }
    return regime;
}

double gamma0(const BathSpec& bath) {
    if (classify_exponent(bath.lowfreq_exponent()) != RegimeClass::Exponential) {
        throw RegimeError("gamma0 is defined only in the exponential regime");
    }
    return 0.5 * kPi * bath.effective_smooth_factor_at_zero();
}

double alpha_const(const BathSpec& bath) {
    switch (classify_exponent(bath.lowfreq_exponent())) {
        case RegimeClass::Exponential: {
            const auto slope = bath.effective_smooth_factor_slope_at_zero();
            if (!slope) throw RegimeError("alpha needs J_eff'(0), which does not exist for this density");
            return *slope;
        }
        case RegimeClass::PowerLaw: return bath.effective_smooth_factor_at_zero();
        default: throw RegimeError("alpha is defined only in the exponential and power-law regimes");
    }
}

double gamma_infinity(const BathSpec& bath, double quad_tol) {
    const double g = bath.lowfreq_exponent();
    if (classify_exponent(g) != RegimeClass::Partial) {
        throw DivergenceError("Gamma_infinity = int J_eff/w^2 diverges outside the partial regime");
    }
    if (!(quad_tol > 0.0)) throw DomainError("quad_tol must be positive");
    const double omega = bath.density().omega_scale();
    // ω = Ω u^p on [0, Ω] makes the integrand smooth at u = 0.
    const double p = std::max(1.0, 1.0 / (g - 1.0));
    auto low = [&](double u) {
        const double w = omega * std::pow(u, p);
        return p * std::pow(omega, g - 1.0) * std::pow(u, p * (g - 1.0) - 1.0) *
               bath.effective_smooth_factor(w);
    };
    auto high = [&](double w) { return bath.effective(w) / (w * w); };
    const double tol = std::max(quad_tol, 1e-14);
    const quad::Estimate a = quad::integrate(low, 0.0, 1.0, 0.0, 0.5 * tol);
    const quad::Estimate b = quad::integrate_to_infinity(high, omega, 0.0, 0.5 * tol);
    return a.value + b.value;
}

double a_const(const BathSpec& bath) {
    const double g = bath.lowfreq_exponent();
    const RegimeClass cls = classify_exponent(g);
    if (cls != RegimeClass::SubexponentialPower && cls != RegimeClass::Superexponential) {
        throw RegimeError("A is defined only in the sub- and superexponential regimes");
    }
    const double h0 = bath.effective_smooth_factor_at_zero();
    if (!(h0 > 0.0) || !std::isfinite(h0)) {
        throw RegimeError("A needs a finite positive low-frequency coefficient G(0)");
    }
    return h0 * quad::universal_constant(2.0 - g);
}

}  // namespace dephasing::spectral
