// dynamics.cpp: Γ(t), γ(t), evolution of the coherence and discrete baths

#include "dephasing/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "dephasing/errors.hpp"

namespace dephasing::dynamics {

namespace {

constexpr double kExponentTol = 1e-12;

// J_eff = ω^e f(ω) with f regular at 0; e = g below 2, else 1 so that s = 2 - e stays in (0, 3).
struct Factorisation {
    quad::SmoothFactor factor;
    double e;
};

Factorisation factorise(const BathSpec& bath) {
    const double g = bath.lowfreq_exponent();
    spectral::classify_exponent(g);
    const double e = g < 2.0 - kExponentTol ? g : 1.0;
    const double shift = g - e;
    quad::SmoothFactor f;
    f.scale = bath.density().omega_scale();
    const double h0 = bath.effective_smooth_factor_at_zero();
    if (shift == 0.0) {
        f.eval = [&bath](double w) { return bath.effective_smooth_factor(w); };
        f.value_at_zero = h0;
        f.slope_at_zero = bath.effective_smooth_factor_slope_at_zero();
    } else {
        f.eval = [&bath, shift](double w) { return bath.effective_smooth_factor(w) * std::pow(w, shift); };
        f.value_at_zero = 0.0;
        f.slope_at_zero = std::abs(shift - 1.0) <= kExponentTol ? h0 : 0.0;
    }
    return {f, e};
}

double one_minus_cos(double x) {
    const double h = std::sin(0.5 * x);
    return 2.0 * h * h;
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and nonnegative");
}

}  // namespace

void QubitState::validate() const {
    const double tol = 1e-12;
    if (!(rho11 >= -tol && rho00 >= -tol)) throw DomainError("populations must be nonnegative");
    if (std::abs(rho11 + rho00 - 1.0) > tol) throw DomainError("density matrix trace must be 1");
    if (std::norm(rho10) > rho11 * rho00 + tol) {
        throw DomainError("density matrix is not positive: |rho10|^2 > rho11*rho00");
    }
}

void FiniteBath::validate() const {
    if (modes.empty()) throw DomainError("finite bath needs at least one mode");
    for (const Mode& m : modes) {
        if (!(m.omega > 0.0) || !std::isfinite(m.omega)) throw DomainError("mode frequencies must be positive");
        if (!(m.g_abs2 >= 0.0) || !std::isfinite(m.g_abs2)) throw DomainError("|g_k|^2 must be nonnegative");
    }
}

double gamma_of_t(const BathSpec& bath, double t, const quad::QuadConfig& cfg) {
    require_time(t);
    const Factorisation fz = factorise(bath);
    if (t == 0.0) return 0.0;
    return quad::kernel_integral(fz.factor, t, 2.0 - fz.e, cfg);
}

double dephasing_rate(const BathSpec& bath, double t, const quad::QuadConfig& cfg) {
    require_time(t);
    const Factorisation fz = factorise(bath);
    if (t == 0.0) return 0.0;
    return quad::sine_kernel_integral(fz.factor, t, 1.0 - fz.e, cfg);
}

QubitState evolve(const QubitState& rho0, const BathSpec& bath, double t, double omega0, Picture picture,
                  const quad::QuadConfig& cfg) {
    rho0.validate();
    QubitState out = rho0;
    if (rho0.rho10 == std::complex<double>(0.0, 0.0)) {
        require_time(t);
        return out;
    }
    out.rho10 = rho0.rho10 * std::exp(-gamma_of_t(bath, t, cfg));
    if (picture == Picture::Schroedinger) out.rho10 *= std::polar(1.0, -omega0 * t);
    return out;
}

double finite_bath_gamma(const FiniteBath& bath, double beta, double t) {
    bath.validate();
    if (!(beta > 0.0)) throw DomainError("beta must be positive or infinite");
    require_time(t);
    double sum = 0.0;
    for (const Mode& m : bath.modes) {
        const double thermal = std::isinf(beta) ? 1.0 : 1.0 / std::tanh(0.5 * beta * m.omega);
        sum += m.g_abs2 * thermal * one_minus_cos(m.omega * t) / (m.omega * m.omega);
    }
    return sum;
}

FiniteBath sample_bath(const SpectralDensity& density, std::size_t n_modes, double omega_max) {
    if (n_modes == 0) throw DomainError("n_modes must be at least 1");
    if (!(omega_max > 0.0) || !std::isfinite(omega_max)) throw DomainError("omega_max must be positive");
    const double delta = omega_max / static_cast<double>(n_modes);
    FiniteBath bath;
    bath.modes.reserve(n_modes);
    for (std::size_t k = 1; k <= n_modes; ++k) {
        const double w = (static_cast<double>(k) - 0.5) * delta;
        bath.modes.push_back({w, density(w) * delta});
    }
    return bath;
}

std::vector<double> time_grid(double t_min, double t_max, std::size_t n_points, Spacing spacing) {
    if (n_points == 0) throw DomainError("time grid needs at least one point");
    if (!(t_min >= 0.0) || !(t_max >= t_min) || !std::isfinite(t_max)) {
        throw DomainError("time grid needs 0 <= t_min <= t_max < inf");
    }
    if (spacing == Spacing::Log && !(t_min > 0.0)) throw DomainError("log spacing needs t_min > 0");
    std::vector<double> grid(n_points);
    if (n_points == 1) {
        grid[0] = t_min;
        return grid;
    }
    const double last = static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double u = static_cast<double>(i) / last;
        grid[i] = spacing == Spacing::Linear ? t_min + (t_max - t_min) * u
                                             : t_min * std::pow(t_max / t_min, u);
    }
    grid.back() = t_max;
    return grid;
}

DephasingCurve evaluate_curve(const BathSpec& bath, const std::vector<double>& times,
                              const quad::QuadConfig& cfg, bool with_rate, unsigned threads) {
    cfg.validate();
    factorise(bath);
    for (std::size_t i = 0; i < times.size(); ++i) {
        require_time(times[i]);
        if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("time grid must be increasing");
    }
    DephasingCurve curve{times, std::vector<double>(times.size()), {}, bath, cfg.rel_tol};
    if (with_rate) curve.rates.resize(times.size());

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, times.size())));

    std::vector<std::exception_ptr> failures(workers);
    auto run = [&](unsigned worker) {
        try {
            for (std::size_t i = worker; i < times.size(); i += workers) {
                curve.gamma_values[i] = gamma_of_t(bath, times[i], cfg);
                if (with_rate) curve.rates[i] = dephasing_rate(bath, times[i], cfg);
            }
        } catch (...) {
            failures[worker] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (std::thread& th : pool) th.join();
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return curve;
}

}  // namespace dephasing::dynamics
