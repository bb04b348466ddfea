#include <doctest.h>

#include <cmath>
#include <complex>

#include "ectdim/quadrature.hpp"

using namespace ectdim;

TEST_CASE("16-point Gauss-Legendre on polynomials and sin") {
    auto cubic = [](double x) { return x * x * x; };
    CHECK(quad::gauss_legendre_16(cubic, 0.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));

    auto s = [](double x) { return std::sin(x); };
    CHECK(quad::gauss_legendre_16(s, 0.0, 3.14159265358979323846) ==
          doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Kronrod panel value and error estimate") {
    auto f = [](double x) { return std::exp(-x); };
    auto est = quad::gauss_kronrod_15(f, 0.0, 2.0);
    CHECK(est.value == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
    CHECK(est.error < 1e-10);
}

TEST_CASE("adaptive integration of a real integrand") {
    auto f = [](double x) { return 1.0 / (1.0 + x * x); };
    auto res = quad::integrate_adaptive(f, {0.0, 1.0, 10.0, 100.0});
    CHECK(res.value == doctest::Approx(std::atan(100.0)).epsilon(1e-10));
}

TEST_CASE("adaptive integration of a complex integrand") {
    auto f = [](double x) { return std::exp(std::complex<double>(0.0, x)); };
    auto res = quad::integrate_adaptive(f, {0.0, 1.0});
    const std::complex<double> expected{std::sin(1.0), 1.0 - std::cos(1.0)};
    CHECK(std::abs(res.value - expected) < 1e-12);
}

TEST_CASE("adaptive integration subdivides a peaked integrand") {
    auto f = [](double x) {
        const double w = 1e-3;
        return w / (w * w + (x - 0.3) * (x - 0.3));
    };
    auto res = quad::integrate_adaptive(f, {0.0, 1.0});
    const double expected = std::atan(0.7 / 1e-3) + std::atan(0.3 / 1e-3);
    CHECK(res.value == doctest::Approx(expected).epsilon(1e-8));
    CHECK(res.panels > 4);
}

TEST_CASE("panel budget exhaustion raises ConvergenceError") {
    quad::AdaptiveOptions opts;
    opts.rel_tol = 1e-300;  // unattainable
    opts.max_panels = 4;
    auto f = [](double x) { return std::sqrt(std::abs(x - 0.37)); };
    CHECK_THROWS_AS(quad::integrate_adaptive(f, {0.0, 1.0}, opts), ConvergenceError);
    try {
        quad::integrate_adaptive(f, {0.0, 1.0}, opts);
    } catch (const ConvergenceError& e) {
        CHECK(e.achieved_error() > 0.0);
    }
}

TEST_CASE("near-zero integrals converge via the absolute floor") {
    auto f = [](double) { return 0.0; };
    auto res = quad::integrate_adaptive(f, {0.0, 1.0});
    CHECK(res.value == 0.0);
}
