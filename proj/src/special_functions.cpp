// special_functions.cpp: Ci, Si, truncated oscillatory moments and the cached universal constants

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "dephasing/errors.hpp"
#include "dephasing/quad.hpp"
#include "dephasing/quadrature.hpp"

namespace dephasing::quad {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesLimit = 4.0;   // moments switch from power series to quadrature here
constexpr double kCiSeriesLimit = 8.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMomentPanels = 4000;

// E1(ix) by the modified Lentz continued fraction; valid and fast for x > 2.
std::complex<double> exp_integral_imag(double x) {
    using cd = std::complex<double>;
    const double tiny = 1e-300;
    cd b(1.0, x);
    cd c(1.0 / tiny, 0.0);
    cd d = 1.0 / b;
    cd h = d;
    for (int i = 2; i < 10000; ++i) {
        const double a = -static_cast<double>((i - 1) * (i - 1));
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cd del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 4.0 * kEps) break;
    }
    return h * cd(std::cos(x), -std::sin(x));
}

double ci_series(double x) {
    const double x2 = x * x;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
        const double add = term / (2.0 * k);
        sum += add;
        if (std::abs(add) < kEps * 1e-3) break;
    }
    return kEulerGamma + std::log(x) + sum;
}

double si_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 200; ++k) {
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        const double add = term / (2.0 * k + 1.0);
        sum += add;
        if (std::abs(add) < kEps * 1e-3 * std::abs(sum)) break;
    }
    return sum;
}

// Σ_{k≥1} (-1)^{k+1} X^{2k+1-σ} / ((2k)! (2k+1-σ)), i.e. ∫₀^X (1-cos υ)/υ^σ dυ.
double cos_moment_series(double sigma, double x) {
    if (x == 0.0) return 0.0;
    const double x2 = x * x;
    const double base = std::pow(x, 1.0 - sigma);
    double power = 1.0;  // X^{2k} / (2k)!
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        power *= x2 / ((2.0 * k - 1.0) * (2.0 * k));
        const double add = power / (2.0 * k + 1.0 - sigma);
        sum += (k % 2 == 1) ? add : -add;
        if (add < kEps * 1e-3 * std::abs(sum)) break;
    }
    return base * sum;
}

// Σ_{k≥0} (-1)^k X^{2k+2-σ} / ((2k+1)! (2k+2-σ)), i.e. ∫₀^X sin υ/υ^σ dυ.
double sin_moment_series(double sigma, double x) {
    if (x == 0.0) return 0.0;
    const double x2 = x * x;
    const double base = std::pow(x, 1.0 - sigma);
    double power = x;  // X^{2k+1} / (2k+1)!
    double sum = power / (2.0 - sigma);
    for (int k = 1; k < 200; ++k) {
        power *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
        const double add = power / (2.0 * k + 2.0 - sigma);
        sum += (k % 2 == 1) ? -add : add;
        if (add < kEps * 1e-3 * std::abs(sum)) break;
    }
    return base * sum;
}

// ∫_x^∞ cos υ / υ^σ dυ or ∫_x^∞ sin υ / υ^σ dυ, σ > 0.
double power_tail(double sigma, double x, Oscillator osc) {
    auto g = [sigma](double u) { return std::pow(u, -sigma); };
    const double tol = 1e-15 * std::max(1.0, std::pow(x, -sigma));
    return oscillatory_tail(g, x, 1.0, osc, tol, 200000).value;
}

// ∫_a^b cos υ / υ^σ (or sin) for 0 < a < b by half-period panels, or by the
// difference of tails when [a, b] spans too many periods.
double power_oscillatory(double sigma, double a, double b, Oscillator osc) {
    if ((b - a) / kPi <= static_cast<double>(kMomentPanels)) {
        auto h = [sigma, osc](double u) {
            return (osc == Oscillator::Cos ? std::cos(u) : std::sin(u)) * std::pow(u, -sigma);
        };
        return panel_integral(h, a, b, 1.0, 1e-15, kMomentPanels).value;
    }
    if (sigma <= 0.0) {
        throw AccuracyError("oscillatory moment does not converge for non-positive power",
                            std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::infinity());
    }
    return power_tail(sigma, a, osc) - power_tail(sigma, b, osc);
}

double power_integral(double sigma, double a, double b) {
    if (std::abs(sigma - 1.0) < 1e-14) return std::log(b / a);
    return (std::pow(b, 1.0 - sigma) - std::pow(a, 1.0 - sigma)) / (1.0 - sigma);
}

struct ConstantCache {
    std::shared_mutex mutex;
    std::map<double, double> values;
};

ConstantCache& constant_cache() {
    static ConstantCache cache;
    return cache;
}

}  // namespace

double cosine_integral(double x) {
    if (!(x > 0.0)) throw DomainError("cosine_integral requires x > 0");
    if (std::isinf(x)) return 0.0;
    if (x <= kCiSeriesLimit) return ci_series(x);
    return -exp_integral_imag(x).real();
}

double sine_integral(double x) {
    if (std::isnan(x)) throw DomainError("sine_integral of NaN");
    if (x < 0.0) return -sine_integral(-x);
    if (std::isinf(x)) return kPi / 2.0;
    if (x <= kCiSeriesLimit) return si_series(x);
    return kPi / 2.0 + exp_integral_imag(x).imag();
}

double truncated_cos_moment(double s, double x) {
    if (!(s < 3.0)) throw DomainError("truncated_cos_moment requires s < 3");
    if (!(x >= 0.0)) throw DomainError("truncated_cos_moment requires x >= 0");
    if (x <= kSeriesLimit) return cos_moment_series(s, x);
    if (std::abs(s - 1.0) < 1e-14) return std::log(x) + kEulerGamma - cosine_integral(x);
    if (s > 1.0) {
        return universal_constant(s) - std::pow(x, 1.0 - s) / (s - 1.0) +
               power_tail(s, x, Oscillator::Cos);
    }
    return cos_moment_series(s, kSeriesLimit) + power_integral(s, kSeriesLimit, x) -
           power_oscillatory(s, kSeriesLimit, x, Oscillator::Cos);
}

double truncated_sin_moment(double s, double x) {
    if (!(s < 2.0)) throw DomainError("truncated_sin_moment requires s < 2");
    if (!(x >= 0.0)) throw DomainError("truncated_sin_moment requires x >= 0");
    if (x <= kSeriesLimit) return sin_moment_series(s, x);
    if (std::abs(s - 1.0) < 1e-14) return sine_integral(x);
    return sin_moment_series(s, kSeriesLimit) +
           power_oscillatory(s, kSeriesLimit, x, Oscillator::Sin);
}

double universal_constant(double s) {
    if (!(s > 1.0 && s < 3.0)) throw DomainError("universal_constant requires s in (1, 3)");
    ConstantCache& cache = constant_cache();
    {
        std::shared_lock lock(cache.mutex);
        const auto it = cache.values.find(s);
        if (it != cache.values.end()) return it->second;
    }
    // ∫₀^X series + ∫_X^∞ υ^{-s} - ∫_X^∞ cos υ/υ^s.
    const double value = cos_moment_series(s, kSeriesLimit) +
                         std::pow(kSeriesLimit, 1.0 - s) / (s - 1.0) -
                         power_tail(s, kSeriesLimit, Oscillator::Cos);
    std::unique_lock lock(cache.mutex);
    cache.values.emplace(s, value);
    return value;
}

double universal_moment(double s, double t, std::optional<double> omega_c) {
    if (!(s > 0.0 && s < 3.0)) throw DomainError("universal_moment requires s in (0, 3)");
    if (!(t >= 0.0)) throw DomainError("universal_moment requires t >= 0");
    if (t == 0.0) return 0.0;
    if (s > 1.0) return universal_constant(s) * std::pow(t, s - 1.0);
    if (!omega_c || !(*omega_c > 0.0)) {
        throw DomainError("universal_moment with s <= 1 needs a positive cutoff omega_c");
    }
    return std::pow(t, s - 1.0) * truncated_cos_moment(s, *omega_c * t);
}

}  // namespace dephasing::quad
