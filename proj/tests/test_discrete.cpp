#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "holobound/discrete.hpp"
#include "holobound/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace holobound;
using std::numbers::pi;
using Vec = DiscreteOperator::Vector;

namespace {

Vec random_vector(Eigen::Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = {normal(rng), normal(rng)};
    return v;
}

std::vector<double> dense_eigenvalues(const DiscreteOperator& op)
{
    Eigen::SelfAdjointEigenSolver<DiscreteOperator::Block> es(op.to_dense(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd values = es.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

} // namespace

TEST_CASE("trivial bundle annihilates constants")
{
    const DiscreteOperator op = assemble(rectangular_torus({1.0, 2.0}, {0.0, 0.0}), {8, 6});
    const Vec ones = Vec::Constant(op.size(), {1.0, 0.0});
    CHECK((op * ones).norm() < 1e-12);
}

TEST_CASE("operator is Hermitian and nonnegative")
{
    const DiscreteOperator op = assemble(rectangular_torus({1.0, 1.3}, {0.27, 0.61}), {12, 9});
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec u = random_vector(op.size(), rng);
        const Vec v = random_vector(op.size(), rng);
        const std::complex<double> left = u.dot(op * v);
        const std::complex<double> right = (op * u).dot(v);
        CHECK(std::abs(left - right) <= 1e-12 * op.norm_bound() * u.norm() * v.norm());
        CHECK(u.dot(op * u).real() >= -1e-12 * u.squaredNorm());
    }
}

TEST_CASE("four-point circle with half holonomy")
{
    const DiscreteOperator op = assemble(CircleBundle{4.0, 0.5}, 4);
    const auto values = dense_eigenvalues(op);
    const double low = 2.0 - std::sqrt(2.0), high = 2.0 + std::sqrt(2.0);
    CHECK(values[0] == doctest::Approx(low).epsilon(1e-12));
    CHECK(values[1] == doctest::Approx(low).epsilon(1e-12));
    CHECK(values[2] == doctest::Approx(high).epsilon(1e-12));
    CHECK(values[3] == doctest::Approx(high).epsilon(1e-12));
}

TEST_CASE("dense spectrum matches the closed form")
{
    struct Case {
        TorusBundle bundle;
        std::vector<int> dims;
    };
    const std::vector<Case> cases = {
        {rectangular_torus({2.0}, {0.3}), {64}},
        {rectangular_torus({1.0, 1.0}, {0.5, 0.0}), {16, 16}},
        {rectangular_torus({1.0, 2.5}, {0.13, 0.77}), {32, 24}},
        {rectangular_torus({1.0, 1.0, 1.5}, {0.2, 0.5, 0.9}), {8, 8, 6}},
    };
    for (const Case& c : cases) {
        const DiscreteOperator op = assemble(c.bundle, c.dims);
        REQUIRE(op.size() <= 1024);
        const auto dense = dense_eigenvalues(op);
        const auto exact = discrete_exact_spectrum(op).eigenvalues;
        REQUIRE(dense.size() == exact.size());
        for (std::size_t i = 0; i < dense.size(); ++i) CHECK(std::abs(dense[i] - exact[i]) <= 1e-10 * op.norm_bound());
    }
}

TEST_CASE("gauge invariance under integer shifts of rho")
{
    const auto a = discrete_exact_spectrum(rectangular_torus({1.0, 1.0}, {0.3, 0.1}), {10, 10}).eigenvalues;
    const auto b = discrete_exact_spectrum(rectangular_torus({1.0, 1.0}, {1.3, -0.9}), {10, 10}).eigenvalues;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    const auto c = dense_eigenvalues(assemble(rectangular_torus({1.0, 1.0}, {1.3, -0.9}), {10, 10}));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - c[i]) < 1e-9);
}

TEST_CASE("iterative solver on the circle")
{
    const DiscreteOperator op = assemble(CircleBundle{2.0 * pi, 0.3}, 256);
    const DiscreteReport r = smallest_eigenvalues(op, 4);
    REQUIRE(r.converged);
    const auto exact = discrete_exact_spectrum(op, 4).eigenvalues;
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(r.eigenvalues[i] - exact[i]) <= 1e-9);
        CHECK(r.residual_norms[i] <= r.residual_tolerance);
    }
}

TEST_CASE("iterative solver on the torus")
{
    const DiscreteOperator op = assemble(rectangular_torus({1.0, 1.0}, {0.5, 0.0}), {64, 64});
    const DiscreteReport r = smallest_eigenvalues(op, 6);
    REQUIRE(r.converged);
    const auto exact = discrete_exact_spectrum(op, 6).eigenvalues;
    for (int i = 0; i < 6; ++i) CHECK(std::abs(r.eigenvalues[i] - exact[i]) <= 1e-8);
    // Eigenvectors are orthonormal.
    const DiscreteOperator::Block gram = r.eigenvectors.adjoint() * r.eigenvectors;
    CHECK((gram - DiscreteOperator::Block::Identity(6, 6)).norm() < 1e-10);
}

TEST_CASE("solver is deterministic for a fixed seed")
{
    const DiscreteOperator op = assemble(rectangular_torus({1.0, 1.2}, {0.2, 0.7}), {20, 20});
    SolverOptions opts;
    opts.seed = 17;
    const DiscreteReport a = smallest_eigenvalues(op, 3, opts);
    const DiscreteReport b = smallest_eigenvalues(op, 3, opts);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.matvecs == b.matvecs);
}

TEST_CASE("trivial bundle ground state is constant")
{
    const DiscreteOperator op = assemble(rectangular_torus({1.0, 1.0}, {0.0, 0.0}), {24, 24});
    const DiscreteReport r = smallest_eigenvalues(op, 1);
    REQUIRE(r.converged);
    CHECK(std::abs(r.eigenvalues[0]) < 1e-9);
    const Vec v = r.eigenvectors.col(0);
    const std::complex<double> phase = v[0] / std::abs(v[0]);
    const double spread = (v / phase - Vec::Constant(v.size(), std::abs(v[0]))).norm();
    CHECK(spread < 1e-7);
}

TEST_CASE("discretisation converges at second order")
{
    const auto circle = convergence_study(CircleBundle{1.0, 0.3}, {64, 128, 256, 512});
    REQUIRE(circle.size() == 4);
    CHECK_FALSE(circle[0].order.has_value());
    for (std::size_t i = 1; i < circle.size(); ++i) {
        REQUIRE(circle[i].order.has_value());
        CHECK(*circle[i].order >= 1.8);
        CHECK(*circle[i].order <= 2.2);
        CHECK(circle[i].error < circle[i - 1].error);
    }
    // Leading error term: lambda^2 h^2 / 12 from sin^2 x = x^2 - x^4/3 + ...
    const double lam = 4.0 * pi * pi * 0.09;
    CHECK(circle.back().error == doctest::Approx(lam * lam * circle.back().h * circle.back().h / 12.0).epsilon(1e-3));

    const auto torus = convergence_study(rectangular_torus({1.0, 1.0}, {0.5, 0.0}), {16, 32, 64, 128});
    for (std::size_t i = 1; i < torus.size(); ++i) {
        REQUIRE(torus[i].order.has_value());
        CHECK(*torus[i].order >= 1.8);
        CHECK(*torus[i].order <= 2.2);
    }

    const auto trivial = convergence_study(CircleBundle{1.0, 0.0}, {16, 32});
    for (const auto& row : trivial) {
        CHECK(row.error < 1e-12);
        CHECK_FALSE(row.order.has_value());
    }
}

TEST_CASE("Moser lemma on discrete eigenvectors")
{
    for (int index : {0, 1, 3}) {
        const MoserLemmaReport r = check_moser_lemma(rectangular_torus({1.0, 1.0}, {0.5, 0.0}), {32, 32}, index);
        CHECK(r.pass);
        CHECK(r.lhs <= r.rhs);
        CHECK(r.moser_factor > 1.0);
        CHECK(r.sup_norm >= r.l2_norm * (1.0 - 1e-12));
    }
    const MoserLemmaReport skew = check_moser_lemma(rectangular_torus({1.0, 1.7, 0.8}, {0.3, 0.6, 0.1}), {8, 10, 6}, 2);
    CHECK(skew.pass);

    // Trivial bundle: the constant eigenvector gives equality with A = 1.
    const DiscreteOperator op = assemble(rectangular_torus({1.0, 1.0}, {0.0, 0.0}), {16, 16});
    const MoserLemmaReport flat = check_moser_lemma(op, std::sqrt(2.0) / 2.0, Vec::Constant(op.size(), {0.5, 0.0}));
    CHECK(flat.eigenvalue == doctest::Approx(0.0));
    CHECK(flat.moser_factor == 1.0);
    CHECK(flat.lhs == doctest::Approx(flat.rhs).epsilon(1e-14));
    CHECK(flat.pass);
}

TEST_CASE("Moser lemma rejects non-eigenvectors")
{
    const DiscreteOperator op = assemble(rectangular_torus({1.0, 1.0}, {0.5, 0.0}), {16, 16});
    std::mt19937_64 rng(9);
    CHECK_THROWS_AS(check_moser_lemma(op, 0.7071, random_vector(op.size(), rng)), std::invalid_argument);
    CHECK_THROWS_AS(check_moser_lemma(op, 0.7071, Vec::Zero(op.size())), std::invalid_argument);
}

TEST_CASE("invalid discretisations")
{
    Eigen::MatrixXd skew(2, 2);
    skew << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(assemble(TorusBundle{skew, Eigen::VectorXd::Zero(2)}, {8, 8}), std::invalid_argument);
    CHECK_THROWS_AS(assemble(rectangular_torus({1.0, 1.0}, {0.0, 0.0}), {8}), std::invalid_argument);
    CHECK_THROWS_AS(assemble(CircleBundle{1.0, 0.0}, 0), std::invalid_argument);
    const DiscreteOperator op = assemble(CircleBundle{1.0, 0.2}, 8);
    CHECK_THROWS_AS(smallest_eigenvalues(op, 8), std::invalid_argument);
    CHECK_THROWS_AS(op.to_dense(4), std::invalid_argument);
}
