// embedfit.cpp: Matrix-pencil initialisation and variable-projection refinement of exponential sums

#include "dephasing/embedfit.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dephasing/errors.hpp"

namespace dephasing::embedfit {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kRankTol = 1e-13;
constexpr double kMinRate = 1e-6;  // τ units; keeps p = √a away from the flat point p = 0

// One node of the model in the normalised time τ ∈ [0, 1]: a real rate with
// powers 0..max_power, or a damped oscillation pair e^{-aτ}(cos bτ, sin bτ).
struct Node {
    double p;  // a = p²
    double b;
    bool pair;
    int max_power;

    int terms() const { return pair ? 2 : max_power + 1; }
};

int count_terms(const std::vector<Node>& nodes) {
    int total = 0;
    for (const Node& n : nodes) total += n.terms();
    return total;
}

struct Problem {
    VectorXd tau;
    VectorXd y;  // values divided by max |y|
};

MatrixXd design(const Problem& prob, const std::vector<Node>& nodes) {
    const Eigen::Index n = prob.tau.size();
    MatrixXd phi(n, count_terms(nodes));
    Eigen::Index col = 0;
    for (const Node& node : nodes) {
        const double a = node.p * node.p;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double tau = prob.tau[i];
            const double decay = std::exp(-a * tau);
            if (node.pair) {
                phi(i, col) = decay * std::cos(node.b * tau);
                phi(i, col + 1) = decay * std::sin(node.b * tau);
            } else {
                double power = 1.0;
                for (int k = 0; k <= node.max_power; ++k) {
                    phi(i, col + k) = power * decay;
                    power *= tau;
                }
            }
        }
        col += node.terms();
    }
    return phi;
}

VectorXd linear_coefficients(const MatrixXd& phi, const VectorXd& y) {
    VectorXd norms = phi.colwise().norm().transpose();
    for (Eigen::Index k = 0; k < norms.size(); ++k) {
        if (!(norms[k] > 0.0)) norms[k] = 1.0;
    }
    const MatrixXd scaled = phi * norms.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<MatrixXd> qr(scaled);
    qr.setThreshold(1e-14);
    return qr.solve(y).cwiseQuotient(norms);
}

std::vector<double> pack(const std::vector<Node>& nodes) {
    std::vector<double> theta;
    for (const Node& n : nodes) {
        theta.push_back(n.p);
        if (n.pair) theta.push_back(n.b);
    }
    return theta;
}

std::vector<Node> unpack(const std::vector<Node>& shape, const VectorXd& theta) {
    std::vector<Node> nodes = shape;
    Eigen::Index i = 0;
    for (Node& n : nodes) {
        n.p = theta[i++];
        if (n.pair) n.b = theta[i++];
    }
    return nodes;
}

// Variable projection: residual of the best linear fit for given rates.
struct ProjectedResidual {
    using Scalar = double;
    using InputType = VectorXd;
    using ValueType = VectorXd;
    using JacobianType = MatrixXd;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

    const Problem* prob;
    std::vector<Node> shape;
    int n_inputs;

    int inputs() const { return n_inputs; }
    int values() const { return static_cast<int>(prob->y.size()); }

    int operator()(const VectorXd& theta, VectorXd& residual) const {
        const MatrixXd phi = design(*prob, unpack(shape, theta));
        residual = prob->y - phi * linear_coefficients(phi, prob->y);
        return 0;
    }
};

struct Candidate {
    std::vector<Node> nodes;
    VectorXd coeffs;
    double max_residual{std::numeric_limits<double>::infinity()};
};

Candidate evaluate(const Problem& prob, std::vector<Node> nodes) {
    Candidate c;
    const MatrixXd phi = design(prob, nodes);
    c.coeffs = linear_coefficients(phi, prob.y);
    const VectorXd r = prob.y - phi * c.coeffs;
    c.max_residual = r.cwiseAbs().maxCoeff();
    if (!std::isfinite(c.max_residual)) c.max_residual = std::numeric_limits<double>::infinity();
    c.nodes = std::move(nodes);
    return c;
}

Candidate refine(const Problem& prob, const std::vector<Node>& start) {
    const std::vector<double> theta0 = pack(start);
    VectorXd theta = Eigen::Map<const VectorXd>(theta0.data(), static_cast<Eigen::Index>(theta0.size()));
    ProjectedResidual functor{&prob, start, static_cast<int>(theta.size())};
    Eigen::NumericalDiff<ProjectedResidual, Eigen::Central> numdiff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ProjectedResidual, Eigen::Central>> lm(numdiff);
    lm.parameters.maxfev = 400 * static_cast<int>(theta.size() + 1);
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-14;
    lm.minimize(theta);

    Candidate refined = evaluate(prob, unpack(start, theta));
    Candidate initial = evaluate(prob, start);
    return refined.max_residual <= initial.max_residual ? refined : initial;
}

struct Pencil {
    MatrixXd v;  // right singular vectors of the Hankel matrix
    VectorXd sigma;
    Eigen::Index l;
};

Pencil build_pencil(const VectorXd& y) {
    const Eigen::Index n = y.size();
    const Eigen::Index l = n / 2;
    MatrixXd hankel(n - l, l + 1);
    for (Eigen::Index i = 0; i < n - l; ++i) {
        for (Eigen::Index j = 0; j <= l; ++j) hankel(i, j) = y[i + j];
    }
    Eigen::BDCSVD<MatrixXd> svd(hankel, Eigen::ComputeThinV);
    return {svd.matrixV(), svd.singularValues(), l};
}

// Rates of the k-term pencil, converted to nodes; returns false when the rank is short.
bool pencil_nodes(const Pencil& pencil, int k, double dtau, std::vector<Node>& nodes) {
    Eigen::Index rank = 0;
    const double s0 = pencil.sigma.size() > 0 ? pencil.sigma[0] : 0.0;
    for (Eigen::Index i = 0; i < pencil.sigma.size(); ++i) {
        if (pencil.sigma[i] > kRankTol * s0) ++rank;
    }
    const Eigen::Index m = std::min<Eigen::Index>(k, rank);
    nodes.clear();
    if (m == 0) return false;
    const MatrixXd vm = pencil.v.leftCols(m);
    const MatrixXd v1 = vm.topRows(pencil.l);
    const MatrixXd v2 = vm.bottomRows(pencil.l);
    const MatrixXd a = v1.completeOrthogonalDecomposition().solve(v2);
    Eigen::EigenSolver<MatrixXd> eig(a, false);
    const double max_rate = 50.0 / dtau;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const std::complex<double> z = eig.eigenvalues()[i];
        if (z.imag() < 0.0) continue;
        double rate = max_rate;
        double freq = 0.0;
        if (std::abs(z) > 0.0) {
            const std::complex<double> lambda = -std::log(z) / dtau;
            rate = std::clamp(lambda.real(), kMinRate, max_rate);
            freq = std::abs(lambda.imag());
        }
        if (z.imag() > 0.0) {
            nodes.push_back({std::sqrt(rate), freq, true, 0});
        } else {
            nodes.push_back({std::sqrt(rate), 0.0, false, 0});
        }
    }
    // A lone pair can overshoot k by one when m is odd; drop the slowest-decaying real term.
    while (count_terms(nodes) > k && !nodes.empty()) nodes.pop_back();
    return rank >= k;
}

ExpSumModel to_model(const Candidate& best, double t0, double span, double y_scale) {
    ExpSumModel model;
    Eigen::Index col = 0;
    auto binom = [](int n, int k) {
        double r = 1.0;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    for (const Node& node : best.nodes) {
        const double a = node.p * node.p;
        const double rate = a / span;
        const double shift = std::exp(a * t0 / span) * y_scale;
        if (node.pair) {
            const double omega = node.b / span;
            const double phase = node.b * t0 / span;
            const double cc = best.coeffs[col];
            const double cs = best.coeffs[col + 1];
            const double big_a = (cc * std::cos(phase) - cs * std::sin(phase)) * shift;
            const double big_b = (cc * std::sin(phase) + cs * std::cos(phase)) * shift;
            if (std::abs(omega) < 1e-10) {
                model.terms.push_back({{big_a, 0.0}, {rate, 0.0}, 0});
            } else {
                const std::complex<double> c(0.5 * big_a, -0.5 * big_b);
                model.terms.push_back({c, {rate, -omega}, 0});
                model.terms.push_back({std::conj(c), {rate, omega}, 0});
            }
        } else {
            // Σ_k c_k ((t - t0)/T)^k expanded in powers of t.
            for (int j = 0; j <= node.max_power; ++j) {
                double coeff = 0.0;
                for (int k = j; k <= node.max_power; ++k) {
                    coeff += best.coeffs[col + k] * binom(k, j) * std::pow(-t0, k - j) / std::pow(span, k);
                }
                model.terms.push_back({{coeff * shift, 0.0}, {rate, 0.0}, rate > 0.0 ? j : 0});
            }
        }
        col += node.terms();
    }
    return model;
}

void validate_samples(const std::vector<Sample>& samples, int k_max, double floor) {
    if (k_max < 1) throw PreconditionError("K must be at least 1");
    if (!(floor > 0.0)) throw DomainError("residual floor must be positive");
    if (samples.size() < 4 * static_cast<std::size_t>(k_max)) {
        std::ostringstream msg;
        msg << "fitting K = " << k_max << " terms needs at least " << 4 * k_max << " samples (got "
            << samples.size() << ")";
        throw PreconditionError(msg.str());
    }
    const double dt = samples[1].t - samples[0].t;
    if (!(dt > 0.0)) throw PreconditionError("sample times must be increasing");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].t) || !std::isfinite(samples[i].value)) {
            throw PreconditionError("samples must be finite");
        }
        if (i > 0 && std::abs((samples[i].t - samples[i - 1].t) - dt) > 1e-6 * dt) {
            throw PreconditionError("samples must lie on a uniform grid");
        }
    }
}

}  // namespace

double ExpSumModel::operator()(double t) const {
    std::complex<double> sum(0.0, 0.0);
    for (const ExpTerm& term : terms) {
        sum += term.coeff * std::pow(t, term.power) * std::exp(-term.rate * t);
    }
    return sum.real();
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::EmbeddableConsistent: return "embeddable-consistent";
        case Verdict::NonExponential: return "non-exponential";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

FitReport fit_exp_sum(const std::vector<Sample>& samples, int k_max, bool powers_allowed, double floor) {
    validate_samples(samples, k_max, floor);
    const std::size_t n = samples.size();
    const double t0 = samples.front().t;
    const double span = samples.back().t - t0;

    Problem prob{VectorXd(static_cast<Eigen::Index>(n)), VectorXd(static_cast<Eigen::Index>(n))};
    double y_scale = 0.0;
    for (const Sample& s : samples) y_scale = std::max(y_scale, std::abs(s.value));
    if (!(y_scale > 0.0)) throw PreconditionError("samples are identically zero");
    for (std::size_t i = 0; i < n; ++i) {
        prob.tau[static_cast<Eigen::Index>(i)] = (samples[i].t - t0) / span;
        prob.y[static_cast<Eigen::Index>(i)] = samples[i].value / y_scale;
    }
    const double dtau = 1.0 / static_cast<double>(n - 1);
    const Pencil pencil = build_pencil(prob.y);

    FitReport report{{}, 0.0, {}, Verdict::Inconclusive, std::nullopt, floor,
                     samples.front().t, samples.back().t, n, false};
    Candidate best;
    for (int k = 1; k <= k_max; ++k) {
        std::vector<std::vector<Node>> starts;
        std::vector<Node> from_pencil;
        if (!pencil_nodes(pencil, k, dtau, from_pencil)) report.ill_conditioned = true;
        if (!from_pencil.empty()) starts.push_back(from_pencil);
        if (!best.nodes.empty()) {
            for (double rate : {0.3, 1.0, 3.0, 10.0, 30.0, 100.0}) {
                std::vector<Node> grown = best.nodes;
                grown.push_back({std::sqrt(rate), 0.0, false, 0});
                starts.push_back(grown);
            }
            if (powers_allowed) {
                for (std::size_t i = 0; i < best.nodes.size(); ++i) {
                    if (best.nodes[i].pair) continue;
                    std::vector<Node> raised = best.nodes;
                    raised[i].max_power += 1;
                    starts.push_back(raised);
                }
            }
        } else {
            starts.push_back({{1.0, 0.0, false, 0}});
        }
        for (const auto& start : starts) {
            if (count_terms(start) > k) continue;
            Candidate c = refine(prob, start);
            if (c.max_residual < best.max_residual) best = std::move(c);
        }
        report.residual_vs_K.push_back({k, best.max_residual});
        if (!report.k_at_floor && best.max_residual <= floor) report.k_at_floor = k;
    }

    report.model = to_model(best, t0, span, y_scale);
    report.max_rel_residual = best.max_residual;

    const auto& r = report.residual_vs_K;
    if (report.k_at_floor) {
        report.verdict = Verdict::EmbeddableConsistent;
    } else if (r.size() >= 3) {
        const double r2 = r[r.size() - 3].residual;
        const double r1 = r[r.size() - 2].residual;
        const double r0 = r.back().residual;
        if (r1 > 0.9 * r2 && r0 > 0.9 * r1) report.verdict = Verdict::NonExponential;
    }
    return report;
}

FitReport certify_curve(const std::vector<Sample>& coherence, int k_max, double floor, bool powers_allowed) {
    for (const Sample& s : coherence) {
        if (!(s.value > 0.0)) throw PreconditionError("coherence values must be strictly positive");
    }
    return fit_exp_sum(coherence, k_max, powers_allowed, floor);
}

FitReport certify_curve(const dynamics::DephasingCurve& curve, int k_max, double floor, bool powers_allowed) {
    std::vector<Sample> samples;
    samples.reserve(curve.times.size());
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        samples.push_back({curve.times[i], std::exp(-curve.gamma_values[i])});
    }
    return certify_curve(samples, k_max, floor, powers_allowed);
}

}  // namespace dephasing::embedfit
