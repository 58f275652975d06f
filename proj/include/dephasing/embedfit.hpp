// embedfit.hpp: Fits of decay curves by finite sums of t^n e^{-l t} terms

#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "dephasing/dynamics.hpp"

namespace dephasing::embedfit {

struct Sample {
    double t;
    double value;
};

struct ExpTerm {
    std::complex<double> coeff;
    std::complex<double> rate;  // Re(rate) ≥ 0
    int power;                  // 0 whenever Re(rate) = 0
};

struct ExpSumModel {
    std::vector<ExpTerm> terms;

    // Re Σ coeff · t^power · e^{-rate t}
    double operator()(double t) const;
    std::size_t size() const noexcept { return terms.size(); }
};

enum class Verdict { EmbeddableConsistent, NonExponential, Inconclusive };

std::string_view to_string(Verdict verdict);

struct KResidual {
    int k;
    double residual;
};

struct FitReport {
    ExpSumModel model;
    double max_rel_residual;             // max |fit - y| / max |y| on the grid
    std::vector<KResidual> residual_vs_K;  // nonincreasing
    Verdict verdict;
    std::optional<int> k_at_floor;       // smallest K reaching the floor
    double floor;
    double t_min;                        // fitted interval; no claim outside it
    double t_max;
    std::size_t n_samples;
    bool ill_conditioned;                // pencil rank fell below the requested K
};

inline constexpr double kDefaultFloor = 1e-2;
inline constexpr int kDefaultKMax = 8;

// Fits K = 1..k_max terms, warm-starting each K from K-1, on a uniform grid with
// at least 4·k_max samples. Throws PreconditionError otherwise.
FitReport fit_exp_sum(const std::vector<Sample>& samples, int k_max, bool powers_allowed = false,
                      double floor = kDefaultFloor);

// Same fit for strictly positive coherence values; verdict per the residual floor:
// embeddable-consistent once the residual reaches the floor, non-exponential when the
// last two increments of K each improve it by less than 10% while above the floor.
FitReport certify_curve(const std::vector<Sample>& coherence, int k_max = kDefaultKMax,
                        double floor = kDefaultFloor, bool powers_allowed = true);

// |ϱ₁₀(t)/ϱ₁₀(0)| = e^{-Γ(t)} sampled from a computed curve.
FitReport certify_curve(const dynamics::DephasingCurve& curve, int k_max = kDefaultKMax,
                        double floor = kDefaultFloor, bool powers_allowed = true);

}  // namespace dephasing::embedfit
