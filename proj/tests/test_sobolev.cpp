#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holobound/quadrature.hpp"
#include "holobound/sobolev.hpp"

#include <cmath>
#include <stdexcept>

using namespace holobound;

namespace {

// Composite Simpson on 10^4 panels, written directly from the integral
// (1/d) int_0^d (e^{(n-1)d} cosh t / 2 + sinh t / (n d))^{n-1} dt.
double simpson_gallot(int n, double d)
{
    const int panels = 10000;
    auto f = [&](double t) {
        if (d == 0.0) return std::pow(0.5 + t / n, n - 1); // t plays the role of u here
        return std::pow(0.5 * std::exp((n - 1) * d) * std::cosh(t) + std::sinh(t) / (n * d), n - 1);
    };
    const double upper = d == 0.0 ? 1.0 : d;
    const double h = upper / panels;
    double sum = f(0.0) + f(upper);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
    const double integral = sum * h / 3.0;
    return std::pow(d == 0.0 ? integral : integral / d, 1.0 / n);
}

} // namespace

TEST_CASE("gallot constant at d = 0 is the analytic limit")
{
    CHECK(gallot_constant(2, 0.0) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
    CHECK(std::abs(gallot_constant(2, 0.0) - gallot_constant(2, 1e-6)) < 1e-5);
    // (int_0^1 (1/2 + u/3)^2 du)^{1/3} = (1/4 + 1/6 + 1/27)^{1/3}
    CHECK(gallot_constant(3, 0.0) == doctest::Approx(std::cbrt(0.25 + 1.0 / 6.0 + 1.0 / 27.0)).epsilon(1e-12));
}

TEST_CASE("gallot constant matches fixed-grid quadrature")
{
    for (int n : {2, 3, 4})
        for (double d : {0.0, 0.5, 1.0, 2.0}) {
            CAPTURE(n);
            CAPTURE(d);
            CHECK(std::abs(gallot_constant(n, d, 1e-11) - simpson_gallot(n, d)) < 1e-8);
        }
    // 40-digit references.
    CHECK(gallot_constant(3, 1.0) == doctest::Approx(2.756602801602906242).epsilon(1e-12));
    CHECK(gallot_constant(4, 2.0) == doctest::Approx(94.65604047050404193).epsilon(1e-12));
}

TEST_CASE("gallot constant is nondecreasing in d")
{
    for (int n = 2; n <= 6; ++n) {
        double previous = 0.0;
        for (int i = 0; i <= 30; ++i) {
            const double value = gallot_constant(n, 0.1 * i);
            CHECK(value >= previous);
            previous = value;
        }
    }
}

TEST_CASE("halving the tolerance stays within the tolerance")
{
    for (double tol : {1e-6, 1e-9}) {
        const double a = gallot_constant(3, 1.5, tol);
        const double b = gallot_constant(3, 1.5, tol / 2);
        CHECK(std::abs(a - b) < tol);
    }
}

TEST_CASE("sinhc series and direct evaluation agree at the crossover")
{
    for (double x : {9.999e-5, 1e-4, 1.0001e-4, -1e-4}) {
        const double series = 1.0 + x * x / 6.0 + x * x * x * x / 120.0;
        CHECK(sinhc(x) == doctest::Approx(series).epsilon(1e-12));
        CHECK(sinhc(x) == doctest::Approx(std::sinh(x) / x).epsilon(1e-12));
    }
    CHECK(sinhc(0.0) == 1.0);
}

TEST_CASE("sobolev parameters")
{
    const SobolevParams two = sobolev_params(2, 0.0);
    CHECK(two.p == doctest::Approx(4.0 / 3.0));
    CHECK(two.q == 2.0);
    CHECK(two.B == 1.0);
    CHECK(2.0 / (2.0 - two.p) == doctest::Approx(3.0));
    CHECK(two.C_over_D_times_Vpow == doctest::Approx(1.5 * std::sqrt(3.0)).epsilon(1e-12));

    const SobolevParams four = sobolev_params(4, 0.7);
    CHECK(four.q == 1.5);
    CHECK(four.q == doctest::Approx(four.p / (2.0 - four.p)));
    CHECK(four.C_over_D_times_Vpow == doctest::Approx(2.0 * 5.0 * four.c_prime / 4.0));

    for (int n = 2; n <= 12; ++n) {
        const SobolevParams sp = sobolev_params(n, 0.0);
        CHECK(sp.p >= 1.0);
        CHECK(sp.p <= n / (n - 1.0));
    }
}

TEST_CASE("sobolev rejects invalid input")
{
    CHECK_THROWS_AS(gallot_constant(2, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(gallot_constant(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_params(2, NAN), std::invalid_argument);
}

TEST_CASE("gauss-kronrod integrates smooth functions")
{
    const QuadratureResult r = integrate_gauss_kronrod([](double x) { return std::exp(x); }, 0.0, 2.0, 1e-13);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
    const QuadratureResult osc = integrate_gauss_kronrod([](double x) { return std::cos(40 * x); }, 0.0, 1.0, 1e-12);
    CHECK(osc.value == doctest::Approx(std::sin(40.0) / 40.0).epsilon(1e-10));
}
