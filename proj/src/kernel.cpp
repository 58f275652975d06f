// kernel.cpp: ∫ f(1-cos ωt)/ω^s and ∫ f sin(ωt)/ω^s by cutoff splitting and Taylor subtraction

#include <algorithm>
#include <cmath>

#include "dephasing/errors.hpp"
#include "dephasing/quad.hpp"
#include "dephasing/quadrature.hpp"

namespace dephasing::quad {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 1 - cos x without cancellation near 0.
double one_minus_cos(double x) {
    const double h = std::sin(0.5 * x);
    return 2.0 * h * h;
}

}  // namespace

void QuadConfig::validate() const {
    if (!(rel_tol >= 1e-14 && rel_tol <= 1e-2)) {
        throw DomainError("rel_tol must lie in [1e-14, 1e-2]");
    }
    if (omega_c && !(*omega_c > 0.0 && std::isfinite(*omega_c))) {
        throw DomainError("omega_c must be positive and finite");
    }
    if (max_panels == 0) throw DomainError("max_panels must be positive");
}

double resolve_cutoff(double scale, double t, const QuadConfig& cfg) {
    if (cfg.omega_c) return *cfg.omega_c;
    if (!(t > 0.0)) return scale;
    return std::clamp(std::min(scale, 1.0 / t), 1e-3 * scale, scale);
}

double kernel_integral(const SmoothFactor& f, double t, double s, const QuadConfig& cfg) {
    cfg.validate();
    if (!(s > 0.0 && s < 3.0)) throw DomainError("kernel_integral requires s in (0, 3)");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("kernel_integral requires finite t >= 0");
    if (t == 0.0) return 0.0;

    const double wc = resolve_cutoff(f.scale, t, cfg);
    const double f0 = f.value_at_zero;
    const double f1 = f.slope_at_zero.value_or(0.0);
    const double tol = cfg.rel_tol;

    // Subtracted Taylor terms, integrated exactly on [0, ω_c].
    const double x = wc * t;
    const double moment0 = f0 != 0.0 ? f0 * std::pow(t, s - 1.0) * truncated_cos_moment(s, x) : 0.0;
    const double moment1 =
        f1 != 0.0 ? f1 * std::pow(t, s - 2.0) * truncated_cos_moment(s - 1.0, x) : 0.0;

    // Above ω_c: direct up to ω_1 where ωt reaches π/2, then non-oscillatory minus cosine parts.
    const double w1 = std::max(wc, 0.5 * kPi / t);
    auto direct = [&](double w) { return f.eval(w) * one_minus_cos(w * t) / std::pow(w, s); };
    auto plain = [&](double w) { return f.eval(w) / std::pow(w, s); };

    const Estimate middle = integrate(direct, wc, w1, 0.0, 0.1 * tol, cfg.max_panels);
    const Estimate smooth = integrate_to_infinity(plain, w1, 0.0, 0.1 * tol, cfg.max_panels);
    double magnitude = std::abs(moment0) + std::abs(moment1) + std::abs(middle.value) +
                       std::abs(smooth.value);
    const double floor = std::numeric_limits<double>::min();
    const Estimate wave =
        oscillatory_tail(plain, w1, t, Oscillator::Cos, std::max(0.1 * tol * magnitude, floor),
                         cfg.max_panels);
    magnitude += std::abs(wave.value);

    auto remainder = [&](double w) {
        return (f.eval(w) - f0 - f1 * w) / std::pow(w, s) * one_minus_cos(w * t);
    };
    const Estimate low =
        integrate(remainder, 0.0, wc, std::max(0.1 * tol * magnitude, floor), 0.1 * tol, cfg.max_panels);

    return low.value + moment0 + moment1 + middle.value + smooth.value - wave.value;
}

double sine_kernel_integral(const SmoothFactor& f, double t, double s, const QuadConfig& cfg) {
    cfg.validate();
    if (!(s > -1.0 && s < 2.0)) throw DomainError("sine_kernel_integral requires s in (-1, 2)");
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("sine_kernel_integral requires finite t >= 0");
    }
    if (t == 0.0) return 0.0;

    const double wc = resolve_cutoff(f.scale, t, cfg);
    const double f0 = f.value_at_zero;
    const double f1 = f.slope_at_zero.value_or(0.0);
    const double tol = cfg.rel_tol;

    const double x = wc * t;
    const double moment0 = f0 != 0.0 ? f0 * std::pow(t, s - 1.0) * truncated_sin_moment(s, x) : 0.0;
    const double moment1 =
        f1 != 0.0 ? f1 * std::pow(t, s - 2.0) * truncated_sin_moment(s - 1.0, x) : 0.0;

    auto plain = [&](double w) { return f.eval(w) / std::pow(w, s); };
    const double floor = std::numeric_limits<double>::min();
    // The leading half-period sets the size of the alternating tail.
    auto leading = [&](double w) { return plain(w) * std::sin(w * t); };
    const double first_zero = (std::floor(x / kPi) + 1.0) * kPi / t;
    double magnitude = std::abs(moment0) + std::abs(moment1) +
                       std::abs(integrate(leading, wc, first_zero, 0.0, 1e-6, cfg.max_panels).value);
    const Estimate wave = oscillatory_tail(plain, wc, t, Oscillator::Sin,
                                           std::max(0.1 * tol * magnitude, floor), cfg.max_panels);
    magnitude += std::abs(wave.value);

    auto remainder = [&](double w) {
        return (f.eval(w) - f0 - f1 * w) / std::pow(w, s) * std::sin(w * t);
    };
    const Estimate low =
        integrate(remainder, 0.0, wc, std::max(0.1 * tol * magnitude, floor), 0.1 * tol, cfg.max_panels);

    return low.value + moment0 + moment1 + wave.value;
}

}  // namespace dephasing::quad
