// qrf.hpp: Both sides of the multi-time regression identity for pure dephasing

#pragma once

#include <optional>
#include <vector>

#include "dephasing/quad.hpp"
#include "dephasing/spectral.hpp"

namespace dephasing::qrf {

using spectral::BathSpec;

struct MultiTimeSpec {
    std::vector<int> j;
    std::vector<int> l;
    std::vector<double> t;

    // Lengths equal and ≥ 1, bits in {0, 1}, times finite and ≥ 0.
    void validate() const;
    std::size_t size() const noexcept { return t.size(); }
    // Σ t_k over indices with j_k ≠ l_k.
    double total_time() const;
    // min t_k over the same indices; empty when j = l.
    std::optional<double> min_time() const;
    std::size_t n_differing() const;
    MultiTimeSpec scaled(double s) const;
};

// ½∫ J_eff/ω² |Σ_k (j_k - l_k)(e^{iωT_k} - e^{iωT_{k-1}})|² dω, expanded into Γ at pairwise gaps.
double lhs_correlator_exponent(const BathSpec& bath, const MultiTimeSpec& m, const quad::QuadConfig& cfg = {});

// Σ_{k: j_k ≠ l_k} Γ(t_k).
double rhs_product_exponent(const BathSpec& bath, const MultiTimeSpec& m, const quad::QuadConfig& cfg = {});

struct LadderPoint {
    double s;
    double total_time;
    double min_time;
    double lhs;
    double rhs;
    double gamma0_t;
    double lhs_normalized;  // |lhs - Γ₀T| / ln(min t)
    double rhs_normalized;  // |rhs - Γ₀T| / ln(min t)
};

struct QrfReport {
    MultiTimeSpec spec;  // base times, before scaling
    std::vector<LadderPoint> ladder;
    // At the largest ladder point.
    double total_time;
    double min_time;
    double lhs;
    double rhs;
    double gamma0_t;
    double normalized_dev;  // |lhs - rhs| / ln(min t)
    double growth_limit;
    bool pass;
};

inline const std::vector<double> kDefaultLadder{10.0, 30.0, 100.0, 300.0};

// Evaluates the spec scaled by every s in `ladder`. Passes when neither normalized
// deviation exceeds growth_limit times its value at the first ladder point.
// Requires an exponential-regime bath with an analytic density and s·min t > 1.
QrfReport qrf_check(const BathSpec& bath, const MultiTimeSpec& m, const quad::QuadConfig& cfg = {},
                    const std::vector<double>& ladder = kDefaultLadder, double growth_limit = 1.2);

}  // namespace dephasing::qrf
