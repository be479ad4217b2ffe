#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holobound/constants.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace holobound;

namespace {

// Direct partial product in long double, no tail bound. Independent of the
// log-space path in the library.
long double naive_log_product(long double x, long double y, long double z, int terms)
{
    long double sum = 0;
    long double zi = 1;
    for (int i = 0; i < terms; ++i) {
        sum += std::log(x + y * zi / std::sqrt(2 * zi - 1)) / zi;
        zi *= z;
    }
    return sum;
}

double naive_epsilon(int n, int terms)
{
    const long double q = (n + 2.0L) / n;
    long double prod = 1;
    long double qi = 1;
    for (int i = 1; i <= terms; ++i) {
        qi *= q;
        prod *= 1 - 1 / qi;
    }
    return static_cast<double>(prod);
}

} // namespace

TEST_CASE("moser product agrees with doubled partial products")
{
    // N = 60 vs 120 terms agree far below 1e-10 for z = 2.
    const long double a60 = naive_log_product(1, 1, 2, 60);
    const long double a120 = naive_log_product(1, 1, 2, 120);
    REQUIRE(std::abs(a60 - a120) < 1e-15L);

    const double v = moser_product({1.0, 1.0, 2.0, 1e-12});
    CHECK(v == doctest::Approx(static_cast<double>(std::exp(a120))).epsilon(1e-10));
    // 40-digit reference value.
    CHECK(v == doctest::Approx(5.2143786387368543545).epsilon(1e-12));
    CHECK(v <= std::exp(1.0 / (1.0 - 1.0 / std::sqrt(2.0))));
}

TEST_CASE("moser product reference values")
{
    CHECK(moser_product({1.0, 0.5, 1.5, 1e-13}) == doctest::Approx(4.6978459708540959662).epsilon(1e-11));
    CHECK(moser_product({0.3, 2.0, 3.0, 1e-13}) == doctest::Approx(4.4667603041553519762).epsilon(1e-11));
}

TEST_CASE("moser product homogeneity A(tx, ty, z) = t^{z/(z-1)} A(x, y, z)")
{
    CHECK(moser_product({2, 2, 2, 1e-10}) == doctest::Approx(4.0 * moser_product({1, 1, 2, 1e-10})).epsilon(1e-8));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(0.05, 5.0);
    std::uniform_real_distribution<double> zs(1.1, 10.0);
    const double tol = 1e-11;
    for (int trial = 0; trial < 100; ++trial) {
        const double t = pos(rng), x = pos(rng), y = pos(rng), z = zs(rng);
        const double lhs = log_moser_product({t * x, t * y, z, tol});
        const double rhs = z / (z - 1.0) * std::log(t) + log_moser_product({x, y, z, tol});
        CHECK(std::abs(lhs - rhs) <= 10 * tol + 1e-13 * std::abs(lhs));
    }
}

TEST_CASE("moser product limits and monotonicity")
{
    CHECK(moser_product({1.0, 1e-300, 2.0, 1e-12}) == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(0.1, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = pos(rng), y = pos(rng), z = 1.0 + pos(rng);
        const double base = log_moser_product({x, y, z, 1e-13});
        CHECK(log_moser_product({x * 1.01, y, z, 1e-13}) > base);
        CHECK(log_moser_product({x, y * 1.01, z, 1e-13}) > base);
    }
}

TEST_CASE("moser product tail bound is honest")
{
    // Tightening the tolerance a thousandfold moves log A by less than the loose tolerance.
    for (double z : {1.05, 1.5, 2.0, 7.0}) {
        const double loose = log_moser_product({1.0, 2.0, z, 1e-8});
        const double tight = log_moser_product({1.0, 2.0, z, 1e-11});
        CHECK(std::abs(loose - tight) < 1e-8);
        CHECK(std::abs(tight - static_cast<double>(naive_log_product(1, 2, z, 4000))) < 1e-10);
    }
}

TEST_CASE("moser upper bound dominates the product")
{
    CHECK(moser_upper_bound(1.0, 2.0) == doctest::Approx(30.393037797774780).epsilon(1e-12));
    CHECK(moser_upper_bound(0.0, 2.0) == 1.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ys(1e-6, 5.0);
    std::uniform_real_distribution<double> zs(1.0 + 1e-3, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double y = ys(rng), z = zs(rng);
        CHECK(log_moser_product({1.0, y, z, 1e-12}) <= log_moser_upper_bound(y, z));
    }
}

TEST_CASE("moser product rejects invalid queries")
{
    CHECK_THROWS_AS(moser_product({1.0, 1.0, 1.0, 1e-10}), std::invalid_argument);
    CHECK_THROWS_AS(moser_product({1.0, 1.0, 0.5, 1e-10}), std::invalid_argument);
    CHECK_THROWS_AS(moser_product({0.0, 1.0, 2.0, 1e-10}), std::invalid_argument);
    CHECK_THROWS_AS(moser_product({1.0, -1.0, 2.0, 1e-10}), std::invalid_argument);
    CHECK_THROWS_AS(moser_product({1.0, 1.0, 2.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(moser_product({NAN, 1.0, 2.0, 1e-10}), std::invalid_argument);
    CHECK_THROWS_AS(moser_product({1.0, INFINITY, 2.0, 1e-10}), std::invalid_argument);
    CHECK_THROWS_AS(moser_upper_bound(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("dimension constants for n = 2")
{
    const DimensionConstants dc = dimension_constants(2, 1e-13);
    CHECK(dc.q == 2.0);
    CHECK(dc.b_n == 1.0);
    CHECK(dc.a1_n == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(std::abs(dc.epsilon_n - 0.2887880950866024213) <= 1e-13);
    CHECK(std::abs(dc.epsilon_n - naive_epsilon(2, 60)) <= 1e-13);
    CHECK(dc.a2_n == doctest::Approx(std::pow(4.0, 1.0 / dc.epsilon_n)).epsilon(1e-12));
    CHECK(dc.a_n == doctest::Approx(dc.a2_n * dc.a2_n).epsilon(1e-12));
}

TEST_CASE("dimension constants match their series definitions")
{
    for (int n = 2; n <= 10; ++n) {
        const DimensionConstants dc = dimension_constants(n, 1e-14);
        const double q = (n + 2.0) / n;
        double b = 0, weighted = 0;
        for (int i = 1; i < 2000; ++i) {
            b += std::pow(q, -i);
            weighted += i * std::pow(q, -i);
        }
        CHECK(dc.b_n == doctest::Approx(b).epsilon(1e-12));
        CHECK(dc.log_a1_n == doctest::Approx(weighted * std::log(q)).epsilon(1e-12));
        CHECK(std::abs(dc.epsilon_n - naive_epsilon(n, 3000)) <= 1e-14);
        CHECK(dc.epsilon_n > 0.0);
        CHECK(dc.epsilon_n < 1.0);
        CHECK(dc.a1_n >= 1.0);
        CHECK(dc.log_a_n >= dc.log_a2_n);
        CHECK(dc.log_a2_n >= dc.log_a1_n);
    }
}

TEST_CASE("epsilon(n) decreases with n")
{
    // Factors 1 - q^{-i} shrink as q = (n+2)/n approaches 1.
    double previous = 1.0;
    for (int n = 2; n <= 10; ++n) {
        const double eps = dimension_constants(n).epsilon_n;
        CHECK(eps < previous);
        previous = eps;
    }
}

TEST_CASE("a(n) overflows gracefully")
{
    const DimensionConstants dc = dimension_constants(10);
    CHECK(std::isfinite(dc.log_a_n));
    CHECK(dc.log_a_n > 709.0);
    CHECK(std::isinf(dc.a_n));
    CHECK_THROWS_AS(dimension_constants(1), std::invalid_argument);
}
