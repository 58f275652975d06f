// quadrature.hpp: Adaptive Gauss–Kronrod integration, half-period panel sums
// for Fourier-type tails and Wynn's epsilon algorithm.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dephasing::quad {

using Integrand = std::function<double(double)>;

struct Estimate {
    double value{0.0};
    double error{0.0};
    std::size_t evaluations{0};
};

// Single 21-point Kronrod rule with the embedded 10-point Gauss error estimate.
Estimate gauss_kronrod21(const Integrand& f, double a, double b);

// Globally adaptive bisection on [a, b] until error ≤ max(abs_tol, rel_tol·|I|).
// Throws AccuracyError after max_intervals subintervals.
Estimate integrate(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                   std::size_t max_intervals = 2000);

// ∫_a^∞ f via ω = a + u/(1-u) on [0, 1).
Estimate integrate_to_infinity(const Integrand& f, double a, double abs_tol, double rel_tol,
                               std::size_t max_intervals = 4000);

// Wynn epsilon extrapolation of a sequence of partial sums.
class EpsilonAccelerator {
public:
    explicit EpsilonAccelerator(std::size_t window = 40) : window_(window) {}

    void push(double partial_sum);
    double estimate() const noexcept { return estimate_; }
    // Spread of the last three extrapolated values.
    double error() const noexcept { return error_; }
    std::size_t size() const noexcept { return count_; }

private:
    std::size_t window_;
    std::vector<double> sums_;
    std::vector<double> history_;
    double estimate_{0.0};
    double error_{0.0};
    std::size_t count_{0};
};

enum class Oscillator { Cos, Sin };

// ∫_a^∞ g(ω) cos(ωt) dω or ∫_a^∞ g(ω) sin(ωt) dω, summed panel by panel between
// consecutive zeros of the oscillator and accelerated with the epsilon algorithm.
// Throws AccuracyError when max_panels is reached.
Estimate oscillatory_tail(const Integrand& g, double a, double t, Oscillator osc, double abs_tol,
                          std::size_t max_panels);

// ∫_a^b h(ω) dω where h oscillates with frequency t: split at multiples of π/t.
Estimate panel_integral(const Integrand& h, double a, double b, double t, double abs_tol,
                        std::size_t max_panels);

}  // namespace dephasing::quad
