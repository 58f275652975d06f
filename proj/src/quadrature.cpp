// quadrature.cpp: Gauss–Kronrod rules, adaptive bisection and panel sums

#include "dephasing/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "dephasing/errors.hpp"

namespace dephasing::quad {

namespace {

// QUADPACK qk21 abscissae and weights. Gauss nodes are xgk[1], xgk[3], ..., xgk[9].
constexpr std::array<double, 11> kXgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208058049931, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Interval {
    double a;
    double b;
    double value;
    double error;
    double abs_value;  // ∫|f| estimate, used for the roundoff floor
    bool operator<(const Interval& other) const { return error < other.error; }
};

// Rule plus the auxiliary integrals QUADPACK uses for its error heuristic.
Interval rule21(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double result_gauss = 0.0;
    double result_kronrod = fc * kWgk[10];
    double result_abs = std::abs(result_kronrod);
    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double v1 = f(center - dx);
        const double v2 = f(center + dx);
        f1[j] = v1;
        f2[j] = v2;
        result_kronrod += kWgk[j] * (v1 + v2);
        result_abs += kWgk[j] * (std::abs(v1) + std::abs(v2));
        if (j % 2 == 1) result_gauss += kWg[j / 2] * (v1 + v2);
    }
    const double mean = 0.5 * result_kronrod;
    double result_asc = kWgk[10] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 10; ++j) {
        result_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double scale = std::abs(half);
    result_kronrod *= half;
    result_gauss *= half;
    result_abs *= scale;
    result_asc *= scale;

    double err = std::abs(result_kronrod - result_gauss);
    if (result_asc != 0.0 && err != 0.0) {
        err = result_asc * std::min(1.0, std::pow(200.0 * err / result_asc, 1.5));
    }
    if (result_abs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        err = std::max(50.0 * kEps * result_abs, err);
    }
    return Interval{a, b, result_kronrod, err, result_abs};
}

}  // namespace

Estimate gauss_kronrod21(const Integrand& f, double a, double b) {
    const Interval r = rule21(f, a, b);
    return Estimate{r.value, r.error, 21};
}

Estimate integrate(const Integrand& f, double a, double b, double abs_tol, double rel_tol,
                   std::size_t max_intervals) {
    if (a == b) return {};
    std::priority_queue<Interval> heap;
    Interval first = rule21(f, a, b);
    double total = first.value;
    double total_err = first.error;
    double total_abs = first.abs_value;
    std::size_t evals = 21;
    heap.push(first);

    auto target = [&] {
        return std::max({abs_tol, rel_tol * std::abs(total), 100.0 * kEps * total_abs});
    };

    while (total_err > target()) {
        if (heap.size() >= max_intervals) {
            std::ostringstream msg;
            msg << "adaptive quadrature on [" << a << ", " << b << "] did not reach tolerance "
                << target() << " (error estimate " << total_err << ")";
            throw AccuracyError(msg.str(), total, total_err);
        }
        const Interval worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        // Interval cannot be split any further in floating point.
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) break;
        heap.pop();
        const Interval left = rule21(f, worst.a, mid);
        const Interval right = rule21(f, mid, worst.b);
        evals += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift from incremental updates.
    double value = 0.0;
    double error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return Estimate{value, error, evals};
}

Estimate integrate_to_infinity(const Integrand& f, double a, double abs_tol, double rel_tol,
                               std::size_t max_intervals) {
    const double length = std::max(1.0, std::abs(a));
    auto mapped = [&](double u) {
        const double one_minus = 1.0 - u;
        const double omega = a + length * u / one_minus;
        const double value = f(omega);
        if (value == 0.0) return 0.0;
        return value * length / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, abs_tol, rel_tol, max_intervals);
}

void EpsilonAccelerator::push(double partial_sum) {
    ++count_;
    sums_.push_back(partial_sum);
    if (sums_.size() > window_) sums_.erase(sums_.begin());

    // Wynn table over the window; the even columns hold the extrapolants.
    const std::size_t n = sums_.size();
    std::vector<double> prev(n + 1, 0.0);  // ε_{-1}
    std::vector<double> cur(sums_.begin(), sums_.end());
    double best = cur.back();
    for (std::size_t column = 1; column < n; ++column) {
        std::vector<double> next(cur.size() - 1);
        bool broke = false;
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const double diff = cur[i + 1] - cur[i];
            if (diff == 0.0 || !std::isfinite(diff)) {
                broke = true;
                break;
            }
            next[i] = prev[i + 1] + 1.0 / diff;
        }
        if (broke) break;
        prev = std::move(cur);
        cur = std::move(next);
        if (column % 2 == 0 && std::isfinite(cur.back())) best = cur.back();
    }
    history_.push_back(best);
    if (history_.size() > 3) history_.erase(history_.begin());
    estimate_ = best;
    if (history_.size() < 3) {
        error_ = std::numeric_limits<double>::infinity();
    } else {
        error_ = std::abs(history_[2] - history_[1]) + std::abs(history_[1] - history_[0]);
    }
}

Estimate oscillatory_tail(const Integrand& g, double a, double t, Oscillator osc, double abs_tol,
                          std::size_t max_panels) {
    const double pi = std::acos(-1.0);
    const double half_period = pi / t;
    const double offset = osc == Oscillator::Cos ? 0.5 : 0.0;
    auto zero = [&](double k) { return (k + offset) * half_period; };
    auto integrand = [&](double w) {
        const double phase = osc == Oscillator::Cos ? std::cos(w * t) : std::sin(w * t);
        return g(w) * phase;
    };

    double k = std::ceil(a / half_period - offset);
    if (zero(k) <= a) k += 1.0;

    const double panel_tol = 1e-2 * abs_tol;
    Estimate out;
    double sum = 0.0;
    double quad_err = 0.0;
    EpsilonAccelerator accel(30);

    double lo = a;
    double last_panel = std::numeric_limits<double>::infinity();
    for (std::size_t panel = 0; panel < max_panels; ++panel) {
        const double hi = zero(k);
        k += 1.0;
        const Estimate e = integrate(integrand, lo, hi, panel_tol, 1e-13);
        lo = hi;
        sum += e.value;
        quad_err += e.error;
        out.evaluations += e.evaluations;
        accel.push(sum);

        const bool tiny = std::abs(e.value) <= 1e-3 * abs_tol && std::abs(last_panel) <= 1e-3 * abs_tol;
        last_panel = e.value;
        if (panel >= 4 && tiny) {
            out.value = sum;
            out.error = quad_err + std::abs(e.value);
            return out;
        }
        if (panel >= 10 && accel.error() <= abs_tol) {
            out.value = accel.estimate();
            out.error = quad_err + accel.error();
            return out;
        }
    }
    std::ostringstream msg;
    msg << "oscillatory tail from " << a << " (t = " << t << ") not converged after " << max_panels
        << " panels";
    throw AccuracyError(msg.str(), accel.estimate(), accel.error());
}

Estimate panel_integral(const Integrand& h, double a, double b, double t, double abs_tol,
                        std::size_t max_panels) {
    if (b <= a) return {};
    const double pi = std::acos(-1.0);
    const double width = (t > 0.0) ? pi / t : (b - a);
    const double count = std::ceil((b - a) / width);
    if (count > static_cast<double>(max_panels)) {
        std::ostringstream msg;
        msg << "finite oscillatory integral on [" << a << ", " << b << "] needs " << count
            << " panels (max_panels = " << max_panels << ")";
        throw AccuracyError(msg.str(), std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::infinity());
    }
    const auto n = static_cast<std::size_t>(count);
    Estimate out;
    double lo = a;
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = (i + 1 == n) ? b : a + static_cast<double>(i + 1) * width;
        const Estimate e = integrate(h, lo, hi, abs_tol / static_cast<double>(n), 1e-13);
        out.value += e.value;
        out.error += e.error;
        out.evaluations += e.evaluations;
        lo = hi;
    }
    return out;
}

}  // namespace dephasing::quad
