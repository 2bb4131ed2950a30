#include <doctest.h>

#include <cmath>

#include "dsr/angles.hpp"
#include "dsr/quadrature.hpp"

using namespace dsr;

TEST_CASE("polynomial and transcendental integrals") {
    QuadratureSpec spec;
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, spec) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi, spec) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, spec) ==
          doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
}

TEST_CASE("orientation and empty interval") {
    QuadratureSpec spec;
    CHECK(integrate([](double x) { return x; }, 2.0, 2.0, spec) == 0.0);
    CHECK(integrate([](double x) { return x; }, 1.0, 0.0, spec) ==
          doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("semi-infinite tails") {
    QuadratureSpec spec;
    // int_1^inf x^-3 dx = 1/2
    CHECK(integrate_to_infinity([](double v) { return std::pow(v, -3.0); }, 1.0, spec) ==
          doctest::Approx(0.5).epsilon(1e-10));
    // int_2^inf e^-v dv = e^-2
    CHECK(integrate_to_infinity([](double v) { return std::exp(-v); }, 2.0, spec) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
    // mildly singular decay near the exclusion edge, alpha = 2.5 shape
    const double val =
        integrate_to_infinity([](double v) { return std::pow(v, -2.5); }, 3.0, spec);
    CHECK(val == doctest::Approx(std::pow(3.0, -1.5) / 1.5).epsilon(1e-9));
    CHECK_THROWS_AS(integrate_to_infinity([](double v) { return v; }, 0.0, spec),
                    QuadratureError);
}

TEST_CASE("non-convergence is reported, never silently returned") {
    QuadratureSpec spec;
    spec.max_intervals = 8;
    spec.rel_tol = 1e-14;
    spec.abs_tol = 1e-300;
    auto nasty = [](double x) { return std::sin(1.0 / (x + 1e-6)); };
    CHECK_THROWS_AS(integrate(nasty, 0.0, 1.0, spec), QuadratureError);
}

TEST_CASE("halving the tolerance leaves converged results in place") {
    QuadratureSpec loose;
    loose.rel_tol = 1e-6;
    QuadratureSpec tight = loose;
    tight.rel_tol = 5e-7;
    auto f = [](double x) { return std::log1p(x) * std::cos(3.0 * x); };
    const double a = integrate(f, 0.0, 5.0, loose);
    const double b = integrate(f, 0.0, 5.0, tight);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}
