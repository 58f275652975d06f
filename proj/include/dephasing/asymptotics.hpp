// asymptotics.hpp: Predicted long-time decoherence laws and residuals against exact Γ(t)

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dephasing/dynamics.hpp"
#include "dephasing/quad.hpp"
#include "dephasing/spectral.hpp"

namespace dephasing::asymptotics {

using spectral::BathSpec;
using spectral::Regime;
using spectral::RegimeClass;

// A · t^exponent
struct PowerTerm {
    double coefficient;
    double exponent;
};

// Γ(t) ≈ linear·t + log·ln t + power + constant
struct AsymptoticLaw {
    Regime regime;
    std::optional<double> linear;     // Γ₀
    std::optional<double> log;        // α
    std::optional<PowerTerm> power;   // A t^{1-δ}
    std::optional<double> constant;   // Γ∞ (Partial only)
    bool constant_estimable{false};   // C exists but must be estimated

    // Sum of the analytically known terms at t > 0.
    double known_terms(double t) const;
};

AsymptoticLaw predict_law(const BathSpec& bath, double quad_tol = 1e-10);

struct ConstantEstimate {
    double value;
    double stddev;
    std::size_t n_points;
};

struct FitWindow {
    double t_lo;
    double t_hi;
};

// Ĉ = mean of Γ(t) - known terms over the last 25% of the grid points.
ConstantEstimate estimate_constant(const AsymptoticLaw& law, const dynamics::DephasingCurve& curve);
// Same over [t_fit, 2 t_fit].
ConstantEstimate estimate_constant(const AsymptoticLaw& law, const dynamics::DephasingCurve& curve,
                                   double t_fit);
ConstantEstimate estimate_constant(const AsymptoticLaw& law, const dynamics::DephasingCurve& curve,
                                   FitWindow window);

struct ResidualRow {
    double t;
    double exact;
    double law;
    double residual;
    std::optional<double> normalized;  // residual / (t^{-δ} ln t), superexponential only
};

struct ResidualReport {
    AsymptoticLaw law;
    std::optional<ConstantEstimate> constant;
    std::vector<ResidualRow> rows;
};

// Ĉ from the last 25% of `times` unless `window` is given.
ResidualReport residual_report(const BathSpec& bath, const std::vector<double>& times,
                               const quad::QuadConfig& cfg = {},
                               std::optional<FitWindow> window = std::nullopt);

// |ϱ₁₀(t)/ϱ₁₀(0)| predicted by the law without the additive constant.
double coherence_law(const BathSpec& bath, double t);

}  // namespace dephasing::asymptotics
