#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holobound/errors.hpp"
#include "holobound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace holobound;
using std::numbers::pi;

TEST_CASE("unit square torus with half holonomy")
{
    const VerificationRecord r = verify_bundle(rectangular_torus({1.0, 1.0}, {0.5, 0.0}));
    CHECK(r.lambda_true_closed == doctest::Approx(pi * pi).epsilon(1e-14));
    CHECK(r.diam == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
    CHECK(r.vol == doctest::Approx(1.0));
    CHECK(r.alpha == doctest::Approx(2.0));
    CHECK(r.beta == doctest::Approx(2.0));
    REQUIRE(r.flat);
    REQUIRE(r.parallel);
    REQUIRE(r.general);
    CHECK(r.flat->pass);
    CHECK(r.parallel->pass);
    CHECK(r.general->pass);
    CHECK(r.flat->ratio == doctest::Approx(r.flat->lambda_threshold / (pi * pi)));
    CHECK(r.ordering_ok);
    CHECK(r.pass);
    CHECK(r.error.empty());
}

TEST_CASE("sweep over characters passes")
{
    SweepSpec spec;
    spec.rho_values = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    spec.side_lengths = {1.0};
    const auto records = sweep(spec);
    REQUIRE(records.size() == 10);
    for (const auto& r : records) {
        CHECK(r.error.empty());
        CHECK(r.pass);
        CHECK(r.ordering_ok);
        CHECK(r.flat->ratio <= 1.0);
        CHECK(r.general->lambda_threshold <= r.flat->lambda_threshold);
    }

    VerifyOptions halved;
    halved.beta_scale = 0.5;
    for (const auto& r : sweep(spec, halved)) CHECK(r.pass);

    VerifyOptions curved;
    curved.kappa = 0.7;
    for (const auto& r : sweep(spec, curved)) CHECK(r.pass);
}

TEST_CASE("sweep ordering and layout")
{
    SweepSpec spec;
    spec.n = 3;
    spec.rho_values = {0.1, 0.4};
    spec.side_lengths = {0.5, 2.0};
    spec.bundles = {rectangular_torus({1.0, 1.0, 1.0}, {0.2, 0.3, 0.0})};
    const auto bundles = sweep_bundles(spec);
    REQUIRE(bundles.size() == 5);
    CHECK(bundles[0].rho[0] == 0.1);
    CHECK(bundles[0].basis(1, 1) == 0.5);
    CHECK(bundles[1].rho[0] == 0.1);
    CHECK(bundles[1].basis(1, 1) == 2.0);
    CHECK(bundles[2].rho[0] == 0.4);
    CHECK(bundles[4].rho[1] == 0.3);
    CHECK(bundles[3].basis(2, 2) == 1.0);

    CHECK(sweep(SweepSpec{}).empty());
    CHECK(sweep_csv({}) == sweep_csv_header() + "\n");
}

TEST_CASE("sweep CSV is deterministic")
{
    SweepSpec spec;
    spec.rho_values = {0.0, 0.25};
    spec.side_lengths = {1.0, 1.5};
    const std::string a = sweep_csv(sweep(spec));
    const std::string b = sweep_csv(sweep(spec));
    CHECK(a == b);

    std::istringstream lines(a);
    std::string line;
    std::getline(lines, line);
    CHECK(line == sweep_csv_header());
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        // 15 columns, 14 separators; the error column is last.
        CHECK(std::count(line.begin(), line.end(), ',') >= 14);
        if (rows <= 2) CHECK(line.find("trivial holonomy") != std::string::npos);
        else CHECK(line.find(",true,") != std::string::npos);
    }
    CHECK(rows == 4);
    CHECK(a.find("1;0|0;1.5") != std::string::npos);
}

TEST_CASE("trivial character is recorded, not fatal")
{
    SweepSpec spec;
    spec.rho_values = {0.0, 0.5};
    spec.side_lengths = {1.0};
    const auto records = sweep(spec);
    REQUIRE(records.size() == 2);
    CHECK_FALSE(records[0].error.empty());
    CHECK_FALSE(records[0].pass);
    CHECK(records[1].pass);
    CHECK_THROWS_AS(verify_bundle(rectangular_torus({1.0, 1.0}, {0.0, 0.0})), VacuousBound);
}

TEST_CASE("discrete cross-check")
{
    VerifyOptions opts;
    opts.discrete = true;
    opts.dims = {32, 32};
    const VerificationRecord r = verify_bundle(rectangular_torus({1.0, 1.0}, {0.5, 0.0}), opts);
    REQUIRE(r.lambda_true_discrete);
    const double h = 1.0 / 32.0;
    CHECK(*r.lambda_true_discrete == doctest::Approx(4.0 * std::pow(std::sin(pi / 64.0), 2) / (h * h)).epsilon(1e-9));
    CHECK(*r.lambda_true_discrete <= r.lambda_true_closed);

    opts.dims = {32};
    CHECK_THROWS_AS(verify_bundle(rectangular_torus({1.0, 1.0}, {0.5, 0.0}), opts), std::invalid_argument);
}

TEST_CASE("invalid options")
{
    VerifyOptions opts;
    opts.beta_scale = 1.5;
    CHECK_THROWS_AS(verify_bundle(rectangular_torus({1.0, 1.0}, {0.5, 0.0}), opts), std::invalid_argument);
    opts.beta_scale = 0.0;
    CHECK_THROWS_AS(verify_bundle(rectangular_torus({1.0, 1.0}, {0.5, 0.0}), opts), std::invalid_argument);
}
