#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dephasing/dynamics.hpp"
#include "dephasing/errors.hpp"
#include "dephasing/qrf.hpp"
#include "oracle.hpp"

using namespace dephasing;
using qrf::MultiTimeSpec;
using spectral::BathSpec;
using spectral::SpectralDensity;

namespace {

const BathSpec& ohmic_warm() {
    static const BathSpec b(1.0, SpectralDensity::ohmic_exp(1.0));
    return b;
}

// ½∫ J/ω² |Σ_k d_k (e^{iωT_k} - e^{iωT_{k-1}})|² dω for J = ω e^{-ω} at β = ∞, summed directly.
double direct_lhs(const MultiTimeSpec& m) {
    auto weight = [&m](double w) {
        std::complex<double> sum = 0.0;
        double prev = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) {
            const double next = prev + m.t[k];
            const double d = m.j[k] - m.l[k];
            sum += d * (std::polar(1.0, w * next) - std::polar(1.0, w * prev));
            prev = next;
        }
        return std::norm(sum);
    };
    auto f = [&](double w) { return 0.5 * std::exp(-w) / w * weight(w); };
    return oracle::integrate(f, 0.0, 80.0, 4000);
}

}  // namespace

TEST_SUITE("qrf") {
    TEST_CASE("spec derived quantities") {
        const MultiTimeSpec m{{1, 0, 1}, {0, 0, 0}, {2.0, 5.0, 3.0}};
        CHECK_NOTHROW(m.validate());
        CHECK(m.total_time() == 5.0);
        CHECK(*m.min_time() == 2.0);
        CHECK(m.n_differing() == 2);
        CHECK(m.scaled(3.0).t == std::vector<double>{6.0, 15.0, 9.0});
        const MultiTimeSpec same{{1, 0}, {1, 0}, {1.0, 2.0}};
        CHECK_FALSE(same.min_time());
        CHECK(same.total_time() == 0.0);
        CHECK_THROWS_AS((MultiTimeSpec{{1}, {0, 1}, {1.0}}.validate()), DomainError);
        CHECK_THROWS_AS((MultiTimeSpec{{2}, {0}, {1.0}}.validate()), DomainError);
        CHECK_THROWS_AS((MultiTimeSpec{{1}, {0}, {-1.0}}.validate()), DomainError);
        CHECK_THROWS_AS((MultiTimeSpec{{}, {}, {}}.validate()), DomainError);
    }

    TEST_CASE("coinciding indices give zero exponents") {
        const MultiTimeSpec m{{1, 0, 1}, {1, 0, 1}, {1.0, 2.0, 3.0}};
        CHECK(qrf::lhs_correlator_exponent(ohmic_warm(), m) == 0.0);
        CHECK(qrf::rhs_product_exponent(ohmic_warm(), m) == 0.0);
    }

    TEST_CASE("single interval reduces to Gamma") {
        const MultiTimeSpec m{{1}, {0}, {3.7}};
        const double g = dynamics::gamma_of_t(ohmic_warm(), 3.7);
        CHECK(qrf::lhs_correlator_exponent(ohmic_warm(), m) == doctest::Approx(g).epsilon(1e-14));
        CHECK(qrf::rhs_product_exponent(ohmic_warm(), m) == g);
    }

    TEST_CASE("two equal steps in the same branch give Gamma of the sum") {
        for (double s : {0.5, 2.0, 10.0}) {
            const MultiTimeSpec m{{1, 1}, {0, 0}, {s, s}};
            CHECK(qrf::lhs_correlator_exponent(ohmic_warm(), m) ==
                  doctest::Approx(dynamics::gamma_of_t(ohmic_warm(), 2 * s)).epsilon(1e-10));
        }
    }

    TEST_CASE("right side sums Gamma over differing indices") {
        const MultiTimeSpec m{{1, 0, 0}, {0, 0, 1}, {1.5, 4.0, 2.5}};
        CHECK(qrf::rhs_product_exponent(ohmic_warm(), m) ==
              doctest::Approx(dynamics::gamma_of_t(ohmic_warm(), 1.5) + dynamics::gamma_of_t(ohmic_warm(), 2.5)).epsilon(1e-15));
    }

    TEST_CASE("pairwise expansion agrees with direct integration of the weight") {
        const BathSpec cold(spectral::kInfiniteBeta, SpectralDensity::ohmic_exp(1.0));
        const MultiTimeSpec specs[] = {{{1, 0}, {0, 1}, {1.0, 1.0}},
                                       {{1, 1}, {0, 0}, {0.7, 0.7}},
                                       {{1, 0, 1}, {0, 0, 0}, {1.0, 2.5, 0.7}},
                                       {{0, 1, 1, 0}, {1, 0, 1, 1}, {0.3, 1.1, 2.0, 0.9}}};
        for (const auto& m : specs) {
            CHECK(qrf::lhs_correlator_exponent(cold, m) == doctest::Approx(direct_lhs(m)).epsilon(1e-8));
        }
    }

    TEST_CASE("Cauchy-Schwarz bound and nonnegativity") {
        const MultiTimeSpec specs[] = {{{1, 0}, {0, 1}, {1.0, 1.0}},
                                       {{1, 0, 1}, {0, 1, 0}, {0.5, 3.0, 1.2}},
                                       {{1, 1, 1}, {0, 0, 0}, {2.0, 0.1, 5.0}},
                                       {{0, 1, 0, 1}, {1, 0, 1, 0}, {1.0, 1.0, 1.0, 1.0}}};
        for (const auto& m : specs) {
            const double lhs = qrf::lhs_correlator_exponent(ohmic_warm(), m);
            const double rhs = qrf::rhs_product_exponent(ohmic_warm(), m);
            CHECK(lhs >= 0.0);
            CHECK(lhs <= static_cast<double>(m.n_differing()) * rhs * (1.0 + 1e-12));
        }
    }

    TEST_CASE("exchanging j and l leaves both exponents unchanged") {
        const MultiTimeSpec m{{1, 0, 1}, {0, 1, 1}, {1.3, 0.4, 2.2}};
        const MultiTimeSpec swapped{m.l, m.j, m.t};
        CHECK(qrf::lhs_correlator_exponent(ohmic_warm(), m) == qrf::lhs_correlator_exponent(ohmic_warm(), swapped));
        CHECK(qrf::rhs_product_exponent(ohmic_warm(), m) == qrf::rhs_product_exponent(ohmic_warm(), swapped));
    }

    TEST_CASE("exponents scale linearly in the coupling") {
        const BathSpec scaled(1.0, SpectralDensity::ohmic_exp(1.0, 2.5));
        const MultiTimeSpec m{{1, 0}, {0, 1}, {3.0, 2.0}};
        CHECK(qrf::lhs_correlator_exponent(scaled, m) ==
              doctest::Approx(2.5 * qrf::lhs_correlator_exponent(ohmic_warm(), m)).epsilon(1e-9));
        CHECK(qrf::rhs_product_exponent(scaled, m) ==
              doctest::Approx(2.5 * qrf::rhs_product_exponent(ohmic_warm(), m)).epsilon(1e-9));
    }

    TEST_CASE("regression check on the scaling ladder") {
        const MultiTimeSpec m{{1, 0}, {0, 1}, {1.0, 1.0}};
        const auto report = qrf::qrf_check(ohmic_warm(), m);
        REQUIRE(report.ladder.size() == 4);
        CHECK(report.pass);
        CHECK(report.total_time == 600.0);
        CHECK(report.min_time == 300.0);
        CHECK(report.gamma0_t == doctest::Approx(600.0 * oracle::kPi));
        for (const auto& p : report.ladder) {
            CHECK(p.lhs_normalized <= 1.2 * report.ladder.front().lhs_normalized);
            CHECK(p.rhs_normalized <= 1.2 * report.ladder.front().rhs_normalized);
        }
        CHECK(report.normalized_dev == doctest::Approx(std::abs(report.lhs - report.rhs) / std::log(300.0)));
        // both sides share the leading Γ₀T term; the rest is O(ln t)
        CHECK(std::abs(report.lhs - report.gamma0_t) / report.gamma0_t < 3e-2);
        CHECK(std::abs(report.rhs - report.gamma0_t) / report.gamma0_t < 3e-2);
    }

    TEST_CASE("single interval ladder has identical deviations") {
        const auto report = qrf::qrf_check(ohmic_warm(), {{0}, {1}, {1.0}});
        for (const auto& p : report.ladder) CHECK(p.lhs_normalized == doctest::Approx(p.rhs_normalized).epsilon(1e-13));
        CHECK(report.pass);
    }

    TEST_CASE("growth beyond the limit fails the check") {
        const MultiTimeSpec m{{1, 0}, {0, 1}, {1.0, 1.0}};
        // descending ladder: the deviation per ln(min t) grows along it
        const auto report = qrf::qrf_check(ohmic_warm(), m, {}, {300.0, 10.0}, 1.0);
        CHECK_FALSE(report.pass);
    }

    TEST_CASE("regression check preconditions") {
        const MultiTimeSpec m{{1, 0}, {0, 1}, {1.0, 1.0}};
        CHECK_THROWS_AS(qrf::qrf_check(ohmic_warm(), {{1}, {1}, {1.0}}), PreconditionError);
        CHECK_THROWS_AS(qrf::qrf_check(ohmic_warm(), m, {}, {0.5}), PreconditionError);
        CHECK_THROWS_AS(qrf::qrf_check(ohmic_warm(), m, {}, {}), PreconditionError);
        CHECK_THROWS_AS(qrf::qrf_check(BathSpec(spectral::kInfiniteBeta, SpectralDensity::ohmic_exp(1.0)), m), RegimeError);
        const auto tab = SpectralDensity::tabulated({{0.5, 0.3}, {1.0, 0.37}, {2.0, 0.27}}, {1.0, 1.0}, 1.0);
        CHECK_THROWS_AS(qrf::qrf_check(BathSpec(1.0, tab), m), PreconditionError);
        CHECK_THROWS_AS(qrf::qrf_check(ohmic_warm(), m, {}, qrf::kDefaultLadder, 0.5), DomainError);
    }
}
