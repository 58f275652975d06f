// qrf.cpp: Multi-time correlator exponents and the asymptotic regression check

#include "dephasing/qrf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dephasing/dynamics.hpp"
#include "dephasing/errors.hpp"

namespace dephasing::qrf {

void MultiTimeSpec::validate() const {
    if (t.empty()) throw DomainError("multi-time spec needs n >= 1");
    if (j.size() != t.size() || l.size() != t.size()) {
        throw DomainError("j, l and t must have the same length");
    }
    for (std::size_t k = 0; k < t.size(); ++k) {
        if ((j[k] != 0 && j[k] != 1) || (l[k] != 0 && l[k] != 1)) {
            throw DomainError("j and l entries must be 0 or 1");
        }
        if (!(t[k] >= 0.0) || !std::isfinite(t[k])) throw DomainError("times must be finite and >= 0");
    }
}

double MultiTimeSpec::total_time() const {
    double total = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (j[k] != l[k]) total += t[k];
    }
    return total;
}

std::optional<double> MultiTimeSpec::min_time() const {
    std::optional<double> out;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (j[k] != l[k]) out = out ? std::min(*out, t[k]) : t[k];
    }
    return out;
}

std::size_t MultiTimeSpec::n_differing() const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < t.size(); ++k) n += j[k] != l[k] ? 1 : 0;
    return n;
}

MultiTimeSpec MultiTimeSpec::scaled(double s) const {
    MultiTimeSpec out = *this;
    for (double& tk : out.t) tk *= s;
    return out;
}

double lhs_correlator_exponent(const BathSpec& bath, const MultiTimeSpec& m, const quad::QuadConfig& cfg) {
    m.validate();
    const std::size_t n = m.size();
    // c_m = d_m - d_{m+1}, m = 0..n, with d_0 = d_{n+1} = 0 and d_k = j_k - l_k.
    std::vector<double> d(n + 2, 0.0);
    for (std::size_t k = 0; k < n; ++k) d[k + 1] = m.j[k] - m.l[k];
    std::vector<double> c(n + 1);
    std::vector<double> times(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        c[i] = d[i] - d[i + 1];
        if (i > 0) times[i] = times[i - 1] + m.t[i - 1];
    }
    std::map<double, double> weights;
    for (std::size_t a = 0; a <= n; ++a) {
        for (std::size_t b = a + 1; b <= n; ++b) {
            const double w = c[a] * c[b];
            const double gap = times[b] - times[a];
            if (w != 0.0 && gap > 0.0) weights[gap] -= w;
        }
    }
    double total = 0.0;
    for (const auto& [gap, w] : weights) {
        if (w != 0.0) total += w * dynamics::gamma_of_t(bath, gap, cfg);
    }
    return std::max(0.0, total);
}

double rhs_product_exponent(const BathSpec& bath, const MultiTimeSpec& m, const quad::QuadConfig& cfg) {
    m.validate();
    double total = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (m.j[k] != m.l[k]) total += dynamics::gamma_of_t(bath, m.t[k], cfg);
    }
    return total;
}

QrfReport qrf_check(const BathSpec& bath, const MultiTimeSpec& m, const quad::QuadConfig& cfg,
                    const std::vector<double>& ladder, double growth_limit) {
    m.validate();
    if (bath.density().kind() == spectral::DensityKind::Tabulated) {
        throw PreconditionError("qrf_check needs an analytic density (twice differentiable near 0)");
    }
    const double g0 = spectral::gamma0(bath);
    const auto base_min = m.min_time();
    if (!base_min) throw PreconditionError("qrf_check needs at least one index with j_k != l_k");
    if (ladder.empty()) throw PreconditionError("scaling ladder is empty");
    if (!(growth_limit >= 1.0)) throw DomainError("growth_limit must be >= 1");

    QrfReport report{m, {}, 0, 0, 0, 0, 0, 0, growth_limit, true};
    for (double s : ladder) {
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("ladder factors must be positive");
        const MultiTimeSpec scaled = m.scaled(s);
        const double min_t = *scaled.min_time();
        if (!(min_t > 1.0)) throw PreconditionError("qrf_check needs min t > 1 at every ladder point");
        const double total = scaled.total_time();
        const double lhs = lhs_correlator_exponent(bath, scaled, cfg);
        const double rhs = rhs_product_exponent(bath, scaled, cfg);
        const double log_min = std::log(min_t);
        report.ladder.push_back({s, total, min_t, lhs, rhs, g0 * total,
                                 std::abs(lhs - g0 * total) / log_min, std::abs(rhs - g0 * total) / log_min});
    }
    const LadderPoint& first = report.ladder.front();
    for (const LadderPoint& p : report.ladder) {
        if (p.lhs_normalized > growth_limit * first.lhs_normalized ||
            p.rhs_normalized > growth_limit * first.rhs_normalized) {
            report.pass = false;
        }
    }
    const LadderPoint& last = report.ladder.back();
    report.total_time = last.total_time;
    report.min_time = last.min_time;
    report.lhs = last.lhs;
    report.rhs = last.rhs;
    report.gamma0_t = last.gamma0_t;
    report.normalized_dev = std::abs(last.lhs - last.rhs) / std::log(last.min_time);
    return report;
}

}  // namespace dephasing::qrf
