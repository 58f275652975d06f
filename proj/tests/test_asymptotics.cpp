#include <doctest.h>

#include <cmath>
#include <vector>

#include "dephasing/asymptotics.hpp"
#include "dephasing/errors.hpp"
#include "oracle.hpp"

using namespace dephasing;
using asymptotics::BathSpec;
using asymptotics::RegimeClass;
using spectral::SpectralDensity;

namespace {

dynamics::DephasingCurve synthetic(const std::vector<double>& times, double (*f)(double)) {
    dynamics::DephasingCurve c{times, {}, {}, BathSpec(1.0, SpectralDensity::ohmic_exp(1.0)), 0.0};
    for (double t : times) c.gamma_values.push_back(f(t));
    return c;
}

std::vector<double> linspace(double a, double b, int n) {
    return dynamics::time_grid(a, b, static_cast<std::size_t>(n), dynamics::Spacing::Linear);
}

}  // namespace

TEST_SUITE("asymptotics") {
    TEST_CASE("predicted laws per regime") {
        const auto ohm = asymptotics::predict_law(BathSpec(1.0, SpectralDensity::ohmic_exp(1.0)));
        CHECK(ohm.regime.cls == RegimeClass::Exponential);
        CHECK(*ohm.linear == doctest::Approx(oracle::kPi));
        CHECK(*ohm.log == doctest::Approx(-2.0));
        CHECK_FALSE(ohm.power);
        CHECK_FALSE(ohm.constant);
        CHECK(ohm.constant_estimable);

        const auto drude = asymptotics::predict_law(BathSpec(1.0, SpectralDensity::drude_lorentz(1.0)));
        CHECK(*drude.linear == doctest::Approx(oracle::kPi));
        CHECK(*drude.log == 0.0);

        const auto cold = asymptotics::predict_law(BathSpec(spectral::kInfiniteBeta, SpectralDensity::ohmic_exp(1.0)));
        CHECK(cold.regime.cls == RegimeClass::PowerLaw);
        CHECK_FALSE(cold.linear);
        CHECK(*cold.log == 1.0);

        const auto partial = asymptotics::predict_law(BathSpec(spectral::kInfiniteBeta, SpectralDensity::power_law(2.0, 1.0, 0.5)));
        CHECK(*partial.constant == doctest::Approx(1.0).epsilon(1e-9));
        CHECK_FALSE(partial.constant_estimable);

        const auto sub = asymptotics::predict_law(BathSpec(1.0, SpectralDensity::power_law(1.5, 1.0, 0.5)));
        REQUIRE(sub.power);
        CHECK(sub.power->exponent == doctest::Approx(0.5));
        CHECK(sub.power->coefficient == doctest::Approx(2.0 * std::sqrt(2.0 * oracle::kPi)));
        CHECK(sub.constant_estimable);

        const auto super = asymptotics::predict_law(BathSpec(1.0, SpectralDensity::power_law(0.5, 1.0, 0.5)));
        REQUIRE(super.power);
        CHECK(super.power->exponent == doctest::Approx(1.5));
        CHECK_FALSE(super.constant_estimable);

        CHECK_THROWS_AS(asymptotics::predict_law(BathSpec(1.0, SpectralDensity::power_law(-0.2, 1.0))), DivergenceError);
    }

    TEST_CASE("law constants are the spectral constants") {
        const BathSpec b(0.7, SpectralDensity::drude_lorentz(2.0, 1.3));
        const auto law = asymptotics::predict_law(b);
        CHECK(*law.linear == spectral::gamma0(b));
        CHECK(*law.log == spectral::alpha_const(b));
        const BathSpec s(0.7, SpectralDensity::power_law(1.3, 2.0));
        CHECK(asymptotics::predict_law(s).power->coefficient == spectral::a_const(s));
    }

    TEST_CASE("constant recovered from an exact member of the law family") {
        const auto law = asymptotics::predict_law(BathSpec(1.0, SpectralDensity::ohmic_exp(1.0)));
        const auto curve = synthetic(linspace(10.0, 40.0, 31),
                                     [](double t) { return oracle::kPi * t - 2.0 * std::log(t) + 0.7; });
        const auto tail = asymptotics::estimate_constant(law, curve);
        CHECK(std::abs(tail.value - 0.7) <= 1e-10);
        CHECK(tail.stddev <= 1e-10);
        CHECK(tail.n_points == 8);
        const auto fit = asymptotics::estimate_constant(law, curve, 15.0);
        CHECK(std::abs(fit.value - 0.7) <= 1e-10);
        CHECK(fit.n_points == 16);
        const auto window = asymptotics::estimate_constant(law, curve, asymptotics::FitWindow{20.0, 25.0});
        CHECK(window.n_points == 6);
        CHECK_THROWS_AS(asymptotics::estimate_constant(law, curve, 25.0), PreconditionError);
        CHECK_THROWS_AS(asymptotics::estimate_constant(law, curve, asymptotics::FitWindow{5.0, 20.0}), PreconditionError);
        CHECK_THROWS_AS(asymptotics::estimate_constant(law, curve, -1.0), DomainError);
    }

    TEST_CASE("zero temperature Ohmic constant tends to zero") {
        const BathSpec b(spectral::kInfiniteBeta, SpectralDensity::ohmic_exp(1.0));
        const auto law = asymptotics::predict_law(b);
        const auto curve = dynamics::evaluate_curve(b, linspace(50.0, 200.0, 61), {}, false);
        const auto c = asymptotics::estimate_constant(law, curve);
        CHECK(std::abs(c.value) < 1e-4);
    }

    TEST_CASE("constant estimation is refused where no constant exists") {
        const auto curve = synthetic({1.0, 2.0, 3.0, 4.0}, [](double t) { return t; });
        const auto partial = asymptotics::predict_law(BathSpec(spectral::kInfiniteBeta, SpectralDensity::power_law(2.0, 1.0, 0.5)));
        CHECK_THROWS_AS(asymptotics::estimate_constant(partial, curve), RegimeError);
        const auto super = asymptotics::predict_law(BathSpec(1.0, SpectralDensity::power_law(0.5, 1.0)));
        CHECK_THROWS_AS(asymptotics::estimate_constant(super, curve), RegimeError);
    }

    TEST_CASE("Ohmic residuals shrink with t") {
        const BathSpec b(1.0, SpectralDensity::ohmic_exp(1.0));
        const auto report = asymptotics::residual_report(b, {50.0, 100.0, 150.0, 200.0});
        REQUIRE(report.rows.size() == 4);
        REQUIRE(report.constant);
        for (std::size_t i = 1; i < report.rows.size(); ++i) {
            CHECK(std::abs(report.rows[i].residual) <= std::abs(report.rows[i - 1].residual));
        }
        CHECK(std::abs(report.rows.back().residual) < 1e-2);
        CHECK(report.rows[0].law == doctest::Approx(oracle::kPi * 50 - 2 * std::log(50.0) + report.constant->value));
        CHECK_FALSE(report.rows[0].normalized);
    }

    TEST_CASE("power-law regime residual against the closed form") {
        const BathSpec b(spectral::kInfiniteBeta, SpectralDensity::ohmic_exp(1.0));
        const auto report = asymptotics::residual_report(b, linspace(10.0, 100.0, 91), {}, asymptotics::FitWindow{75.0, 100.0});
        CHECK(std::abs(report.rows.back().residual) < 1e-3);
        CHECK(report.rows.back().exact == doctest::Approx(0.5 * std::log1p(1e4)).epsilon(1e-10));
    }

    TEST_CASE("residuals are nonincreasing over the last decade for built-in baths") {
        const BathSpec baths[] = {BathSpec(1.0, SpectralDensity::ohmic_exp(1.0)),
                                  BathSpec(1.0, SpectralDensity::drude_lorentz(1.0)),
                                  BathSpec(2.0, SpectralDensity::ohmic_exp(0.5)),
                                  BathSpec(spectral::kInfiniteBeta, SpectralDensity::drude_lorentz(1.0))};
        const auto times = dynamics::time_grid(20.0, 200.0, 10, dynamics::Spacing::Log);
        for (const auto& b : baths) {
            const auto report = asymptotics::residual_report(b, times, {}, asymptotics::FitWindow{200.0, 200.0});
            for (std::size_t i = 1; i < report.rows.size(); ++i) {
                CHECK(std::abs(report.rows[i].residual) <= std::abs(report.rows[i - 1].residual) + 1e-9);
            }
        }
    }

    TEST_CASE("subexponential remainder settles to a constant") {
        // Γ(t) - A t^{1-δ} converges like t^{-δ}; its increments over a log grid shrink steadily
        const BathSpec b(1.0, SpectralDensity::power_law(1.5, 1.0, 0.5));
        const auto law = asymptotics::predict_law(b);
        const auto times = dynamics::time_grid(10.0, 10000.0, 13, dynamics::Spacing::Log);
        std::vector<double> rem;
        for (double t : times) rem.push_back(dynamics::gamma_of_t(b, t) - law.known_terms(t));
        for (std::size_t i = 2; i < rem.size(); ++i) {
            CHECK(std::abs(rem[i] - rem[i - 1]) < std::abs(rem[i - 1] - rem[i - 2]));
        }
        CHECK(std::abs(rem.back() - rem[rem.size() - 2]) < 1e-2);
        const auto report = asymptotics::residual_report(b, times);
        REQUIRE(report.constant);
        CHECK(std::abs(report.rows.back().residual) < 0.05 * std::abs(report.rows.front().residual));
    }

    TEST_CASE("superexponential residual is normalized and stays bounded") {
        const BathSpec b(1.0, SpectralDensity::power_law(0.5, 1.0, 0.5));
        const auto times = dynamics::time_grid(10.0, 1000.0, 9, dynamics::Spacing::Log);
        const auto report = asymptotics::residual_report(b, times);
        CHECK_FALSE(report.constant);
        double worst = 0.0;
        for (const auto& row : report.rows) {
            REQUIRE(row.normalized);
            worst = std::max(worst, std::abs(*row.normalized));
        }
        CHECK(worst < 10.0);
        // relative to the leading term the residual vanishes
        const auto& last = report.rows.back();
        CHECK(std::abs(last.residual) / last.exact < 1e-2);
    }

    TEST_CASE("residual report preconditions") {
        CHECK_THROWS_AS(asymptotics::residual_report(BathSpec(spectral::kInfiniteBeta, SpectralDensity::power_law(2.0, 1.0)), {1.0, 2.0}),
                        RegimeError);
        CHECK_THROWS_AS(asymptotics::residual_report(BathSpec(1.0, SpectralDensity::ohmic_exp(1.0)), {0.0, 2.0}), DomainError);
    }

    TEST_CASE("flicker regularization approaches the Gaussian-like law") {
        const BathSpec b(1.0, SpectralDensity::power_law(0.1, 1.0, 0.5));
        const double a = spectral::a_const(b);
        CHECK(a == doctest::Approx(2.0 * oracle::universal(2.9)).epsilon(1e-10));
        const double ratio = dynamics::gamma_of_t(b, 100.0) / std::pow(100.0, 1.9);
        CHECK(std::abs(ratio - a) <= 0.05 * a);
    }

    TEST_CASE("coherence law") {
        const BathSpec ohm(1.0, SpectralDensity::ohmic_exp(1.0));
        for (double t : {1.0, 2.0, 7.0}) {
            CHECK(asymptotics::coherence_law(ohm, t) == doctest::Approx(t * t * std::exp(-oracle::kPi * t)).epsilon(1e-12));
        }
        CHECK_THROWS_AS(asymptotics::coherence_law(ohm, 0.0), DomainError);
        const BathSpec partial(spectral::kInfiniteBeta, SpectralDensity::power_law(2.0, 1.0, 0.5));
        CHECK(asymptotics::coherence_law(partial, 5.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
        CHECK(asymptotics::coherence_law(partial, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
        const BathSpec drude(1.0, SpectralDensity::drude_lorentz(1.0));
        CHECK(asymptotics::coherence_law(drude, 0.0) == 1.0);
        const BathSpec sub(1.0, SpectralDensity::power_law(1.5, 1.0, 0.5));
        CHECK(asymptotics::coherence_law(sub, 0.0) == 1.0);
        CHECK(asymptotics::coherence_law(sub, 4.0) == doctest::Approx(std::exp(-2.0 * std::sqrt(2 * oracle::kPi) * 2.0)).epsilon(1e-12));
    }
}
