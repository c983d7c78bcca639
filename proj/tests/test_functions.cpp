#include <catch_amalgamated.hpp>

#include <cmath>

#include "multimin/functions.hpp"
#include "multimin/quadrature.hpp"

using namespace multimin;

TEST_CASE("expression parser") {
    CHECK(from_expression("2*x + 1").f(3.0) == 7.0);
    CHECK(from_expression("x^2 - x").f(4.0) == 12.0);
    CHECK(from_expression("-x").f(2.5) == -2.5);
    CHECK(from_expression("sin(pi/2)").f(0.0) == Catch::Approx(1.0));
    CHECK(from_expression("exp(ln(x))").f(5.0) == Catch::Approx(5.0));
    CHECK(from_expression("abs(-3) * sqrt(x)").f(9.0) == Catch::Approx(9.0));
    CHECK(from_expression("2^3^1").f(0.0) == 8.0);
    CHECK(from_expression("(1 + 2) * (3 - 1)").f(0.0) == 6.0);
    CHECK_THROWS_AS(from_expression("sin(x"), std::invalid_argument);
    CHECK_THROWS_AS(from_expression("foo(x)"), std::invalid_argument);
    CHECK_THROWS_AS(from_expression("x y"), std::invalid_argument);
}

TEST_CASE("named function resolution") {
    CHECK(named_function("zero").f(3.0) == 0.0);
    CHECK(named_function("one").f(3.0) == 1.0);
    CHECK(named_function("identity").f(3.0) == 3.0);
    CHECK(named_function("3").f(99.0) == 3.0);
    CHECK(named_function("sin").f(1.0) == Catch::Approx(std::sin(1.0)));
    CHECK(named_function("x*x").f(4.0) == 16.0);
    CHECK(named_omega("barrier", 2.0).f(1.0) == Catch::Approx(1.0));
}

TEST_CASE("antiderivative operation") {
    SECTION("barrier coefficient has the logarithmic closed form") {
        // omega(x) = 1/(1-x): antiderivative at 0.5 is ln 2
        const ScalarFunction omega = builtin::barrier_omega(1.0);
        CHECK(antiderivative(omega, 0.5) == Catch::Approx(std::log(2.0)).epsilon(1e-12));
        // quadrature cross-check of the same integrand
        const double quad = integrate_adaptive([](double x) { return 1.0 / (1.0 - x); }, 0.0, 0.5, 1e-12);
        CHECK(quad == Catch::Approx(std::log(2.0)).epsilon(1e-9));
    }

    SECTION("zero endpoint") {
        CHECK(antiderivative(builtin::barrier_omega(1.0), 0.0) == 0.0);
    }

    SECTION("polynomial antiderivative of the identity") {
        CHECK(antiderivative(builtin::identity(), 3.0) == 4.5);
    }

    SECTION("domain cap is enforced for barrier-type integrands") {
        CHECK_THROWS_AS(antiderivative(builtin::barrier_omega(1.0), 1.0), std::invalid_argument);
    }

    SECTION("quadrature fallback agrees with closed forms") {
        ScalarFunction bare;
        bare.f = [](double x) { return std::cos(x); };
        for (double xi : {0.1, 0.7, 2.0, -1.3}) {
            CHECK(antiderivative(bare, xi) == Catch::Approx(std::sin(xi)).margin(1e-10));
        }
    }
}

TEST_CASE("adaptive quadrature accuracy") {
    CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          Catch::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
    CHECK(integrate_adaptive([](double x) { return x * x; }, -1.0, 2.0) == Catch::Approx(3.0).epsilon(1e-10));
    // orientation
    CHECK(integrate_adaptive([](double x) { return x; }, 1.0, 0.0) == Catch::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("fixed-panel quadrature is smooth in the endpoint") {
    // central difference through the integral reproduces the integrand
    const auto F = [](double xi) { return integrate_fixed([](double x) { return std::sin(3.0 * x); }, 0.0, xi, 16); };
    for (double xi : {0.3, 0.8, 1.7}) {
        const double h = 1e-6;
        const double fd = (F(xi + h) - F(xi - h)) / (2.0 * h);
        CHECK(fd == Catch::Approx(std::sin(3.0 * xi)).margin(1e-8));
    }
}

TEST_CASE("central derivative helper") {
    const auto f = [](double x) { return std::exp(2.0 * x); };
    CHECK(central_derivative(f, 0.5) == Catch::Approx(2.0 * std::exp(1.0)).epsilon(1e-8));
}
