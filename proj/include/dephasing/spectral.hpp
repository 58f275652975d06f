// spectral.hpp: Spectral densities J(ω), the effective density J_eff(ω) and
// low-frequency regime classification with the closed-form decoherence constants.

#pragma once

#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace dephasing::spectral {

enum class DensityKind { OhmicExpCutoff, DrudeLorentz, PowerLawExpCutoff, Tabulated };

std::string_view to_string(DensityKind kind);

// Leading small-ω behaviour J(ω) ~ coefficient · ω^exponent (before the λ² factor).
struct LowFrequencyLaw {
    double exponent;
    double coefficient;
};

struct TableNode {
    double omega;
    double value;
};

// Immutable spectral density model. Every kind is factorised as
//   J(ω) = λ² · ω^γ_J · G(ω)
// with G smooth at ω = 0 and G(0) > 0; G is exposed as smooth_factor().
class SpectralDensity {
public:
    // λ² ω e^{-ω/Ω}
    static SpectralDensity ohmic_exp(double omega_scale, double coupling2 = 1.0);
    // λ² ω Ω² / (ω² + Ω²)
    static SpectralDensity drude_lorentz(double omega_scale, double coupling2 = 1.0);
    // λ² 2 Ω^{1-γ} ω^γ e^{-ω/Ω}, γ > -1
    static SpectralDensity power_law(double exponent, double omega_scale, double coupling2 = 1.0);
    // Monotone piecewise-cubic interpolation of the table, the declared law
    // below the first positive node and an e^{-(ω-ω_max)/Ω} tail.
    static SpectralDensity tabulated(std::vector<TableNode> table, LowFrequencyLaw law,
                                     double omega_scale, double coupling2 = 1.0);

    DensityKind kind() const noexcept { return kind_; }
    double omega_scale() const noexcept { return omega_scale_; }
    double exponent() const noexcept { return exponent_; }
    double coupling2() const noexcept { return coupling2_; }
    const std::vector<TableNode>& table() const noexcept { return table_; }
    std::optional<LowFrequencyLaw> declared_law() const;

    // J(ω); throws DomainError for ω < 0.
    double operator()(double omega) const;

    // λ² G(ω) = J(ω) / ω^γ_J, finite at ω = 0.
    double smooth_factor(double omega) const;
    double smooth_factor_at_zero() const;
    // d/dω [λ² G(ω)] at 0; empty when the one-sided limit does not exist.
    std::optional<double> smooth_factor_slope_at_zero() const;

    // Same model with λ² multiplied by `factor`.
    SpectralDensity scaled(double factor) const;

private:
    SpectralDensity() = default;

    double unscaled_factor(double omega) const;
    double tabulated_value(double omega) const;

    DensityKind kind_{DensityKind::OhmicExpCutoff};
    double omega_scale_{1.0};
    double exponent_{1.0};
    double coupling2_{1.0};

    // Tabulated only.
    std::vector<TableNode> table_;
    std::vector<double> slopes_;     // PCHIP node derivatives from first positive node on
    std::size_t first_positive_{0};  // index of the first node with ω > 0
    double law_coefficient_{0.0};
    double near_zero_slope_{0.0};    // G'(0) of the quadratic joining (0,c), (ω1,G1), (ω2,G2)
    double near_zero_curv_{0.0};
};

double evaluate(const SpectralDensity& density, double omega);

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

class BathSpec {
public:
    // beta > 0, possibly +infinity for the zero-temperature kernel.
    BathSpec(double beta, SpectralDensity density);

    double beta() const noexcept { return beta_; }
    bool zero_temperature() const noexcept { return beta_ == kInfiniteBeta; }
    const SpectralDensity& density() const noexcept { return density_; }

    // J_eff(ω) = J(ω) coth(βω/2), or J(ω) at β = ∞. Requires ω > 0.
    double effective(double omega) const;

    // Exponent g with J_eff(ω) ~ ω^g near 0: γ_J - 1 at finite β, γ_J at β = ∞.
    double lowfreq_exponent() const noexcept;

    // H(ω) = J_eff(ω) / ω^g, smooth at 0. Defined for ω ≥ 0.
    double effective_smooth_factor(double omega) const;
    double effective_smooth_factor_at_zero() const;
    std::optional<double> effective_smooth_factor_slope_at_zero() const;

    BathSpec with_beta(double beta) const { return BathSpec(beta, density_); }

private:
    double beta_;
    SpectralDensity density_;
};

// ω coth(βω/2), with the Laurent series 2/β + βω²/6 - β³ω⁴/360 for βω < 1e-3.
double omega_coth_half(double beta, double omega);

double effective(const BathSpec& bath, double omega);

struct EffectiveAtZero {
    double value;                      // J_eff(0), possibly +infinity
    std::optional<double> derivative;  // J_eff'(0), empty when undefined
};

EffectiveAtZero effective_at_zero(const BathSpec& bath);

enum class RegimeClass { Partial, Exponential, SubexponentialPower, PowerLaw, Superexponential };

std::string_view to_string(RegimeClass cls);

struct RegimeConstants {
    std::optional<double> gamma0;          // Γ₀ (Exponential)
    std::optional<double> alpha;           // α (Exponential, PowerLaw)
    std::optional<double> gamma_infinity;  // Γ∞ (Partial)
    std::optional<double> a;               // A (Sub-/Superexponential)
    std::optional<double> delta;           // δ, the exponent of J_eff (Sub-/Superexponential)
    bool constant_estimable{false};        // an additive C exists but is not given analytically
};

struct Regime {
    RegimeClass cls;
    double gamma_lowfreq;
    RegimeConstants constants;
};

// Throws DivergenceError when J_eff/ω² is not integrable at 0.
RegimeClass classify_exponent(double lowfreq_exponent);

// Full classification with all computable constants attached.
Regime classify(const BathSpec& bath, double quad_tol = 1e-10);

double gamma0(const BathSpec& bath);
double alpha_const(const BathSpec& bath);
double gamma_infinity(const BathSpec& bath, double quad_tol = 1e-10);
double a_const(const BathSpec& bath);

}  // namespace dephasing::spectral
