// dynamics.hpp: Exact pure-dephasing dynamics: Γ(t), γ(t), qubit evolution and finite baths

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "dephasing/quad.hpp"
#include "dephasing/spectral.hpp"

namespace dephasing::dynamics {

using spectral::BathSpec;
using spectral::SpectralDensity;

// Qubit density matrix in the σ_z basis; rho01 = conj(rho10).
struct QubitState {
    double rho11{1.0};
    double rho00{0.0};
    std::complex<double> rho10{0.0, 0.0};

    // Throws DomainError unless trace is 1 (1e-12), populations are nonnegative
    // and |rho10|² ≤ rho11·rho00.
    void validate() const;
};

struct Mode {
    double omega;
    double g_abs2;
};

struct FiniteBath {
    std::vector<Mode> modes;

    void validate() const;
};

struct DephasingCurve {
    std::vector<double> times;
    std::vector<double> gamma_values;
    std::vector<double> rates;  // empty when not requested
    BathSpec bath;
    double tol;
};

enum class Picture { Interaction, Schroedinger };
enum class Spacing { Linear, Log };

// Γ(t) = ∫₀^∞ J_eff(ω)(1 - cos ωt)/ω² dω.
double gamma_of_t(const BathSpec& bath, double t, const quad::QuadConfig& cfg = {});

// γ(t) = Γ'(t) = ∫₀^∞ J_eff(ω) sin(ωt)/ω dω. May be negative.
double dephasing_rate(const BathSpec& bath, double t, const quad::QuadConfig& cfg = {});

QubitState evolve(const QubitState& rho0, const BathSpec& bath, double t, double omega0 = 0.0,
                  Picture picture = Picture::Interaction, const quad::QuadConfig& cfg = {});

// Σ_k |g_k|² coth(βω_k/2)(1 - cos ω_k t)/ω_k²; coth dropped at β = ∞.
double finite_bath_gamma(const FiniteBath& bath, double beta, double t);

// Midpoint discretisation ω_k = (k - ½)Δ, |g_k|² = J(ω_k)Δ, Δ = omega_max / n_modes.
FiniteBath sample_bath(const SpectralDensity& density, std::size_t n_modes, double omega_max);

std::vector<double> time_grid(double t_min, double t_max, std::size_t n_points, Spacing spacing);

// Per-point evaluation over `times`, optionally split across `threads` workers
// (0 picks the hardware concurrency). Results do not depend on the thread count.
DephasingCurve evaluate_curve(const BathSpec& bath, const std::vector<double>& times,
                              const quad::QuadConfig& cfg = {}, bool with_rate = true,
                              unsigned threads = 1);

}  // namespace dephasing::dynamics
