#include <doctest.h>

#include <cmath>

#include "dephasing/errors.hpp"
#include "dephasing/quad.hpp"
#include "oracle.hpp"

using namespace dephasing;

namespace {

quad::SmoothFactor exp_factor(double a) {
    return {[a](double w) { return std::exp(-a * w); }, 1.0, -a, 1.0 / a};
}

}  // namespace

TEST_SUITE("quad") {
    TEST_CASE("cosine integral against 40-digit reference values") {
        struct Row {
            double x, ci;
        };
        const Row rows[] = {{0.5, -0.17778407880661290134},  {1.0, 0.33740392290096813466},
                            {5.0, -0.19002974965664387862},  {8.0, 0.12243388253200955729},
                            {8.5, 0.099431358573421916042},  {10.0, -0.045456433004455372635},
                            {20.0, 0.04441982084535331654},  {100.0, -0.0051488251426104921444},
                            {1e4, -3.0551916724485212665e-5}};
        for (const Row& r : rows) {
            CAPTURE(r.x);
            CHECK(std::abs(quad::cosine_integral(r.x) - r.ci) <= 1e-12);
        }
    }

    TEST_CASE("sine integral against 40-digit reference values") {
        struct Row {
            double x, si;
        };
        const Row rows[] = {{0.5, 0.49310741804306668916}, {1.0, 0.94608307036718301494},
                            {5.0, 1.5499312449446741373},  {8.0, 1.5741868217069420521},
                            {8.5, 1.629597099590385592},   {10.0, 1.6583475942188740493},
                            {20.0, 1.5482417010434398402}, {100.0, 1.5622254668890562934},
                            {1e4, 1.5708915453859619157}};
        for (const Row& r : rows) {
            CAPTURE(r.x);
            CHECK(std::abs(quad::sine_integral(r.x) - r.si) <= 1e-12);
        }
        CHECK(quad::sine_integral(-1.0) == -quad::sine_integral(1.0));
        CHECK(quad::sine_integral(0.0) == 0.0);
    }

    TEST_CASE("cosine integral decays and rejects x <= 0") {
        CHECK(std::abs(quad::cosine_integral(1e4)) < 1e-3);
        CHECK(quad::cosine_integral(1.0) == doctest::Approx(0.337404).epsilon(1e-6));
        CHECK_THROWS_AS(quad::cosine_integral(0.0), DomainError);
        CHECK_THROWS_AS(quad::cosine_integral(-1.0), DomainError);
    }

    TEST_CASE("derivative of ln x + gamma - Ci(x) is (1 - cos x)/x") {
        for (double x : {0.3, 1.0, 7.9, 8.1, 30.0}) {
            const double h = 1e-5 * x;
            auto F = [](double u) { return std::log(u) + quad::kEulerGamma - quad::cosine_integral(u); };
            const double fd = (F(x + h) - F(x - h)) / (2 * h);
            CAPTURE(x);
            CHECK(fd == doctest::Approx((1.0 - std::cos(x)) / x).epsilon(1e-7));
        }
    }

    TEST_CASE("universal constant against the Gamma-function closed form") {
        for (double s : {1.1, 1.3, 1.5, 1.8, 2.0, 2.2, 2.5, 2.9}) {
            CAPTURE(s);
            CHECK(quad::universal_constant(s) == doctest::Approx(oracle::universal(s)).epsilon(1e-10));
        }
        CHECK(quad::universal_constant(1.5) == doctest::Approx(std::sqrt(2 * oracle::kPi)).epsilon(1e-12));
        CHECK(quad::universal_constant(2.0) == doctest::Approx(oracle::kPi / 2).epsilon(1e-12));
        CHECK(quad::universal_constant(2.9) == doctest::Approx(5.494959433998350735).epsilon(1e-10));
        CHECK(quad::universal_constant(1.1) == doctest::Approx(10.554721095085653815).epsilon(1e-10));
        CHECK_THROWS_AS(quad::universal_constant(1.0), DomainError);
        CHECK_THROWS_AS(quad::universal_constant(3.0), DomainError);
    }

    TEST_CASE("universal moment scaling and truncated forms") {
        CHECK(quad::universal_moment(2.0, 3.0) == doctest::Approx(1.5 * oracle::kPi).epsilon(1e-12));
        CHECK(quad::universal_moment(1.5, 0.0) == 0.0);
        CHECK(quad::universal_moment(2.5, 4.0) == doctest::Approx(oracle::universal(2.5) * 4.0 * std::sqrt(4.0)).epsilon(1e-10));
        const double wc = 0.7;
        const double t = 30.0;
        CHECK(quad::universal_moment(1.0, t, wc) ==
              doctest::Approx(std::log(wc * t) + quad::kEulerGamma - quad::cosine_integral(wc * t)).epsilon(1e-13));
        CHECK_THROWS_AS(quad::universal_moment(0.5, 1.0), DomainError);
        CHECK_THROWS_AS(quad::universal_moment(0.0, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(quad::universal_moment(3.0, 1.0), DomainError);
        CHECK_THROWS_AS(quad::universal_moment(2.0, -1.0), DomainError);
    }

    TEST_CASE("truncated moments agree with graded quadrature") {
        for (double s : {-0.5, 0.3, 1.0, 1.4, 2.0, 2.7}) {
            for (double x : {0.5, 3.9, 4.1, 25.0, 300.0}) {
                auto f = [s](double u) {
                    const double h = std::sin(0.5 * u);
                    return 2.0 * h * h / std::pow(u, s);
                };
                const double ref = oracle::integrate_graded(f, 1e-12, x, 2.0, 4) +
                                   (s < 2.999 ? 0.5 * std::pow(1e-12, 3.0 - s) / (3.0 - s) : 0.0);
                CAPTURE(s);
                CAPTURE(x);
                CHECK(quad::truncated_cos_moment(s, x) == doctest::Approx(ref).epsilon(1e-10));
            }
        }
        for (double s : {-0.5, 0.0, 0.6, 1.0, 1.5}) {
            for (double x : {0.5, 3.9, 4.1, 25.0, 300.0}) {
                auto f = [s](double u) { return std::sin(u) / std::pow(u, s); };
                const double ref = oracle::integrate_graded(f, 1e-12, x, 2.0, 4) + std::pow(1e-12, 2.0 - s) / (2.0 - s);
                CAPTURE(s);
                CAPTURE(x);
                CHECK(quad::truncated_sin_moment(s, x) == doctest::Approx(ref).epsilon(1e-10));
            }
        }
        CHECK_THROWS_AS(quad::truncated_cos_moment(3.0, 1.0), DomainError);
        CHECK_THROWS_AS(quad::truncated_sin_moment(2.0, 1.0), DomainError);
    }

    TEST_CASE("kernel integral against closed forms for f = e^{-aw}") {
        const quad::QuadConfig cfg;
        CHECK(quad::kernel_integral(exp_factor(1.0), 5.0, 1.0, cfg) ==
              doctest::Approx(0.5 * std::log(26.0)).epsilon(1e-10));
        CHECK(quad::kernel_integral(exp_factor(1.0), 5.0, 1.0, cfg) == doctest::Approx(1.6290482690107408).epsilon(1e-12));
        for (double a : {0.5, 1.0, 3.0}) {
            for (double t : {1e-3, 0.2, 1.0, 7.0, 60.0, 2000.0}) {
                CAPTURE(a);
                CAPTURE(t);
                CHECK(quad::kernel_integral(exp_factor(a), t, 1.0, cfg) ==
                      doctest::Approx(oracle::log_kernel_exp(a, t)).epsilon(1e-9));
                CHECK(quad::kernel_integral(exp_factor(a), t, 2.0, cfg) ==
                      doctest::Approx(oracle::square_kernel_exp(a, t)).epsilon(1e-9));
                CHECK(quad::sine_kernel_integral(exp_factor(a), t, 1.0, cfg) ==
                      doctest::Approx(oracle::sine_kernel_exp(a, t)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("kernel integral with f identically 1 on a smooth cutoff") {
        // f(ω) = e^{-ω/100}: s = 2 gives (π/2) t plus corrections vanishing with the cutoff.
        const quad::QuadConfig cfg;
        const double t = 3.0;
        const double value = quad::kernel_integral(exp_factor(0.01), t, 2.0, cfg);
        CHECK(value == doctest::Approx(oracle::square_kernel_exp(0.01, t)).epsilon(1e-9));
        CHECK(std::abs(value - 0.5 * oracle::kPi * t) < 0.1);
    }

    TEST_CASE("kernel integral at t = 0 and domain checks") {
        const quad::QuadConfig cfg;
        CHECK(quad::kernel_integral(exp_factor(1.0), 0.0, 1.5, cfg) == 0.0);
        CHECK(quad::sine_kernel_integral(exp_factor(1.0), 0.0, 0.5, cfg) == 0.0);
        CHECK_THROWS_AS(quad::kernel_integral(exp_factor(1.0), 1.0, 3.0, cfg), DomainError);
        CHECK_THROWS_AS(quad::kernel_integral(exp_factor(1.0), 1.0, 0.0, cfg), DomainError);
        CHECK_THROWS_AS(quad::kernel_integral(exp_factor(1.0), -1.0, 1.0, cfg), DomainError);
        CHECK_THROWS_AS(quad::sine_kernel_integral(exp_factor(1.0), 1.0, 2.0, cfg), DomainError);
    }

    TEST_CASE("config validation") {
        quad::QuadConfig cfg;
        CHECK_NOTHROW(cfg.validate());
        cfg.rel_tol = 1e-15;
        CHECK_THROWS_AS(cfg.validate(), DomainError);
        cfg.rel_tol = 0.1;
        CHECK_THROWS_AS(cfg.validate(), DomainError);
        cfg.rel_tol = 1e-8;
        cfg.omega_c = -1.0;
        CHECK_THROWS_AS(cfg.validate(), DomainError);
        cfg.omega_c = 2.0;
        cfg.max_panels = 0;
        CHECK_THROWS_AS(cfg.validate(), DomainError);
    }

    TEST_CASE("default cutoff") {
        const quad::QuadConfig cfg;
        CHECK(quad::resolve_cutoff(2.0, 0.1, cfg) == 2.0);
        CHECK(quad::resolve_cutoff(2.0, 4.0, cfg) == 0.25);
        CHECK(quad::resolve_cutoff(2.0, 1e6, cfg) == doctest::Approx(2e-3));
        quad::QuadConfig fixed;
        fixed.omega_c = 0.3;
        CHECK(quad::resolve_cutoff(2.0, 4.0, fixed) == 0.3);
    }

    TEST_CASE("result does not depend on the cutoff") {
        const double tol = 1e-10;
        quad::SmoothFactor f{[](double w) { return std::exp(-w) * (1.0 + w * w) / (1.0 + 0.3 * w); }, 1.0, -1.3, 1.0};
        for (double s : {0.4, 1.0, 1.5, 2.0, 2.6}) {
            for (double t : {0.3, 4.0, 80.0}) {
                quad::QuadConfig a;
                a.rel_tol = tol;
                a.omega_c = quad::resolve_cutoff(1.0, t, {});
                quad::QuadConfig b = a;
                b.omega_c = 2.0 * *a.omega_c;
                const double va = quad::kernel_integral(f, t, s, a);
                const double vb = quad::kernel_integral(f, t, s, b);
                CAPTURE(s);
                CAPTURE(t);
                CHECK(std::abs(va - vb) <= 5 * tol * std::abs(va));
                CHECK(va >= 0.0);
            }
        }
    }

    TEST_CASE("linearity in f") {
        const quad::QuadConfig cfg;
        auto f = exp_factor(1.0);
        auto g = exp_factor(2.5);
        quad::SmoothFactor h{[](double w) { return 2.0 * std::exp(-w) - 0.5 * std::exp(-2.5 * w); }, 1.5,
                             -2.0 + 1.25, 1.0};
        for (double t : {0.5, 5.0, 50.0}) {
            const double combo = 2.0 * quad::kernel_integral(f, t, 1.7, cfg) - 0.5 * quad::kernel_integral(g, t, 1.7, cfg);
            CHECK(quad::kernel_integral(h, t, 1.7, cfg) == doctest::Approx(combo).epsilon(5 * cfg.rel_tol));
        }
    }

    TEST_CASE("missing slope at zero subtracts the value only") {
        quad::SmoothFactor f = exp_factor(1.0);
        f.slope_at_zero.reset();
        const quad::QuadConfig cfg;
        CHECK(quad::kernel_integral(f, 40.0, 2.0, cfg) == doctest::Approx(oracle::square_kernel_exp(1.0, 40.0)).epsilon(1e-9));
    }
}

TEST_CASE("truncated log moment identity with independent quadrature" * doctest::test_suite("quad")) {
    for (double X : {1.0, 10.0, 100.0}) {
        auto f = [](double u) {
            const double h = std::sin(0.5 * u);
            return 2.0 * h * h / u;
        };
        const double lhs = oracle::integrate(f, 0.0, X, static_cast<int>(4 * X) + 4);
        const double rhs = std::log(X) + quad::kEulerGamma - quad::cosine_integral(X);
        CAPTURE(X);
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
}
