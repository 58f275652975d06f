// quad.hpp: Oscillatory singular integrals ∫ f(ω)(1-cos ωt)/ω^s dω and
// ∫ f(ω) sin(ωt)/ω^s dω by low-frequency Taylor subtraction, plus the
// universal moments and the cosine integral they reduce to.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace dephasing::quad {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct QuadConfig {
    // Splitting frequency; when empty, min(Ω, 1/t) clamped to [1e-3 Ω, Ω].
    std::optional<double> omega_c;
    double rel_tol{1e-10};
    std::size_t max_panels{200000};

    // Throws DomainError unless rel_tol ∈ [1e-14, 1e-2], omega_c > 0, max_panels > 0.
    void validate() const;
};

// A function continuous on [0, ∞), integrable, with known value and (when it
// exists) one-sided derivative at 0.
struct SmoothFactor {
    std::function<double(double)> eval;
    double value_at_zero{0.0};
    std::optional<double> slope_at_zero;
    double scale{1.0};  // characteristic frequency Ω
};

// ∫₀^∞ f(ω) (1 - cos ωt) / ω^s dω for s ∈ (0, 3), t ≥ 0.
double kernel_integral(const SmoothFactor& f, double t, double s, const QuadConfig& cfg);

// ∫₀^∞ f(ω) sin(ωt) / ω^s dω for s ∈ (-1, 2), t ≥ 0.
double sine_kernel_integral(const SmoothFactor& f, double t, double s, const QuadConfig& cfg);

// Cutoff actually used for (scale, t, cfg).
double resolve_cutoff(double scale, double t, const QuadConfig& cfg);

// ∫₀^∞ (1 - cos υ) / υ^s dυ for s ∈ (1, 3); computed once per s and cached.
double universal_constant(double s);

// For s ∈ (1, 3): universal_constant(s) · t^{s-1}.
// For s ∈ (0, 1]: the truncated ∫₀^{ω_c} (1 - cos ωt)/ω^s dω, which needs omega_c;
// at s = 1 this is ln(ω_c t) + γ_EM - Ci(ω_c t).
double universal_moment(double s, double t, std::optional<double> omega_c = std::nullopt);

// ∫₀^x (1 - cos υ) / υ^s dυ, s < 3, x ≥ 0.
double truncated_cos_moment(double s, double x);
// ∫₀^x sin υ / υ^s dυ, s < 2, x ≥ 0.
double truncated_sin_moment(double s, double x);

// Ci(x) = -∫_x^∞ cos u / u du, x > 0.
double cosine_integral(double x);
// Si(x) = ∫₀^x sin u / u du.
double sine_integral(double x);

}  // namespace dephasing::quad
