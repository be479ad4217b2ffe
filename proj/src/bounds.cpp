#include "holobound/bounds.hpp"

#include "holobound/constants.hpp"
#include "holobound/errors.hpp"
#include "holobound/sobolev.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace holobound {

namespace {

constexpr int kMaxBisections = 4000;

void check_n_d(int n, double d)
{
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!std::isfinite(d) || d < 0.0) throw std::invalid_argument("d must be finite and nonnegative");
}

double dimensionless_d(const GeometryParams& geo)
{
    return std::sqrt(geo.kappa) * geo.diam;
}

double require_beta(const HolonomyData& hol)
{
    if (!hol.beta) throw std::invalid_argument("beta is required for this theorem");
    if (*hol.beta <= 0.0) throw VacuousBound("beta = 0: no holonomy obstruction, the bound is vacuous");
    return *hol.beta;
}

std::optional<double> sobolev_C(const GeometryParams& geo, const SobolevParams& sp)
{
    if (!geo.vol) return std::nullopt;
    return sp.C_over_D_times_Vpow * geo.diam * std::pow(*geo.vol, -1.0 / geo.n);
}

ThresholdProblem flat_problem(const GeometryParams& geo, double alpha, ConstantsUsed& used)
{
    validate(geo);
    if (!std::isfinite(alpha) || alpha > 2.0) throw std::invalid_argument("alpha must lie in [0, 2]");
    if (alpha <= 0.0) throw VacuousBound("alpha = 0: no holonomy obstruction, the bound is vacuous");

    const double d = dimensionless_d(geo);
    const SobolevParams sp = sobolev_params(geo.n, d);
    used.d = d;
    used.c_prime = sp.c_prime;
    used.coefficient = c0_from_c_prime(geo.n, sp.c_prime);
    used.coefficient_name = "c0";
    used.offset = (geo.n - 1) * geo.kappa;
    used.log_target = std::log(alpha / (2.0 * geo.diam));
    used.sobolev_C = sobolev_C(geo, sp);
    used.modulus = "sqrt(lambda + (n-1) kappa)";
    return {used.coefficient * geo.diam, used.offset, used.log_target};
}

ThresholdProblem parallel_problem(const GeometryParams& geo, const HolonomyData& hol, ConstantsUsed& used)
{
    validate(geo, hol);
    const double beta = require_beta(hol);
    const int n = geo.n;

    const double d = dimensionless_d(geo);
    const SobolevParams sp = sobolev_params(n, d);
    used.d = d;
    used.c_prime = sp.c_prime;
    used.coefficient = c0_from_c_prime(n, sp.c_prime);
    used.coefficient_name = "c0";
    used.offset = (n - 1) * geo.kappa + n * n * hol.r;
    used.log_target = std::log(beta);
    used.sobolev_C = sobolev_C(geo, sp);
    used.modulus = "sqrt(lambda + (n-1) kappa + n^2 r)";
    return {used.coefficient * geo.diam, used.offset, used.log_target};
}

ThresholdProblem general_problem(const GeometryParams& geo, const HolonomyData& hol, ConstantsUsed& used)
{
    validate(geo, hol);
    const double beta = require_beta(hol);
    const int n = geo.n;

    const double d = dimensionless_d(geo);
    const SobolevParams sp = sobolev_params(n, d);
    const DimensionConstants dc = dimension_constants(n);
    used.d = d;
    used.c_prime = sp.c_prime;
    used.coefficient = c1_from_c_prime(n, sp.c_prime, dc.epsilon_n);
    used.coefficient_name = "c1";
    used.log_a_n = dc.log_a_n;
    const double nr_over_beta = n * hol.r / beta;
    used.offset = (n - 1) * geo.kappa + n * n * hol.r + nr_over_beta * nr_over_beta;
    used.log_target = std::log(beta) - dc.log_a_n;
    used.sobolev_C = sobolev_C(geo, sp);
    used.modulus = "L / sqrt(2), L^2 = 2 (lambda + (n-1) kappa + n^2 r + n^2 r^2 / beta^2)";
    return {used.coefficient * geo.diam, used.offset, used.log_target};
}

BoundResult finish(Theorem theorem, const ThresholdProblem& problem, const ConstantsUsed& used, double tol)
{
    BoundResult result;
    result.theorem = theorem;
    result.constants_used = used;
    result.lambda_explicit = explicit_bound(problem);
    result.lambda_threshold = solve_threshold(problem, tol, &result.log_lambda_threshold);
    return result;
}

} // namespace

std::string to_string(Theorem theorem)
{
    switch (theorem) {
    case Theorem::flat: return "flat";
    case Theorem::general: return "general";
    case Theorem::parallel: return "parallel";
    }
    return "unknown";
}

Theorem theorem_from_string(const std::string& name)
{
    if (name == "flat") return Theorem::flat;
    if (name == "general") return Theorem::general;
    if (name == "parallel") return Theorem::parallel;
    throw std::invalid_argument("unknown theorem '" + name + "'");
}

void validate(const GeometryParams& geo)
{
    if (geo.n < 2) throw std::invalid_argument("geometry: n must be at least 2");
    if (!std::isfinite(geo.kappa) || geo.kappa < 0.0) throw std::invalid_argument("geometry: kappa must be finite and nonnegative");
    if (!std::isfinite(geo.diam) || geo.diam <= 0.0) throw std::invalid_argument("geometry: diam must be finite and positive");
    if (geo.vol && (!std::isfinite(*geo.vol) || *geo.vol <= 0.0)) throw std::invalid_argument("geometry: vol must be positive");
}

void validate(const GeometryParams& geo, const HolonomyData& hol)
{
    validate(geo);
    if (hol.alpha && (!std::isfinite(*hol.alpha) || *hol.alpha < 0.0 || *hol.alpha > 2.0))
        throw std::invalid_argument("holonomy: alpha must lie in [0, 2]");
    if (hol.beta && (!std::isfinite(*hol.beta) || *hol.beta < 0.0))
        throw std::invalid_argument("holonomy: beta must be finite and nonnegative");
    if (!std::isfinite(hol.r) || hol.r < 0.0) throw std::invalid_argument("holonomy: r must be finite and nonnegative");
    // beta >= alpha / (2 diam) always holds for the same connection.
    if (hol.alpha && hol.beta && *hol.beta < *hol.alpha / (2.0 * geo.diam) * (1.0 - 1e-12))
        throw std::invalid_argument("holonomy: beta < alpha / (2 diam) is inconsistent");
}

double c0_from_c_prime(int n, double c_prime)
{
    const double moser_factor = 1.0 / (1.0 - std::sqrt(n / (n + 2.0)));
    return std::sqrt(2.0) * ((2.0 * n + 2.0) / n) * c_prime * moser_factor;
}

double c1_from_c_prime(int n, double c_prime, double epsilon_n)
{
    return std::sqrt(2.0) * (n + 1.0) * (n + 2.0) * c_prime / (n * epsilon_n);
}

double c0(int n, double d, double tol)
{
    check_n_d(n, d);
    return c0_from_c_prime(n, gallot_constant(n, d, tol));
}

double c1(int n, double d, double tol)
{
    check_n_d(n, d);
    return c1_from_c_prime(n, gallot_constant(n, d, tol), dimension_constants(n).epsilon_n);
}

double ThresholdProblem::log_value(double lambda) const
{
    return 0.5 * std::log(lambda) + coefficient * std::sqrt(lambda + offset);
}

double solve_threshold(const ThresholdProblem& problem, double tol, double* log_lambda)
{
    if (!(tol > 0.0)) throw std::invalid_argument("solve_threshold: tol must be positive");
    if (!std::isfinite(problem.coefficient) || problem.coefficient <= 0.0 || !std::isfinite(problem.offset) ||
        problem.offset < 0.0)
        throw std::invalid_argument("solve_threshold: invalid problem");
    if (problem.log_target == -std::numeric_limits<double>::infinity())
        throw VacuousBound("solve_threshold: target is zero");
    if (!std::isfinite(problem.log_target)) throw TargetUnreachable("solve_threshold: target is not finite");

    // g(u) = u/2 + c sqrt(e^u + K) - log T is strictly increasing in u = log lambda.
    // With u = s + v and s = 2 (log T - c sqrt K) the large terms cancel exactly:
    // g = v/2 + c e^u / (sqrt(e^u + K) + sqrt K). g(0) >= 0, and at the lower end
    // e^u <= T^2, so g <= -1 there.
    const double c = problem.coefficient;
    const double root_k = std::sqrt(problem.offset);
    const double shift = 2.0 * (problem.log_target - c * root_k);
    auto g = [&](double v) {
        const double se = std::exp(0.5 * (shift + v));
        if (problem.offset == 0.0) return 0.5 * v + c * se;
        return 0.5 * v + c * se * se / (std::sqrt(se * se + problem.offset) + root_k);
    };
    // c (sqrt(T^2 + K) - sqrt K), arranged to avoid overflow for large T.
    double gap;
    if (problem.offset == 0.0) {
        gap = c * std::exp(problem.log_target);
    } else if (problem.log_target <= 0.0) {
        const double t2 = std::exp(2.0 * problem.log_target);
        gap = c * t2 / (std::sqrt(t2 + problem.offset) + root_k);
    } else {
        const double t = std::exp(problem.log_target);
        gap = c * t / (std::sqrt(1.0 + problem.offset / t / t) + root_k / t);
    }
    double hi = 0.0;
    double lo = -2.0 * gap - 2.0;
    if (!std::isfinite(shift) || !std::isfinite(lo) || !(g(lo) < 0.0))
        throw TargetUnreachable("solve_threshold: could not bracket the threshold");

    const double width_tol = std::log1p(tol);
    for (int it = 0; it < kMaxBisections && hi - lo > width_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    lo += shift;
    if (log_lambda) *log_lambda = lo;
    return std::exp(lo);
}

double explicit_bound(const ThresholdProblem& problem)
{
    const double log_first = -std::log(problem.coefficient);
    const double log_second = problem.log_target - problem.coefficient * std::sqrt(problem.offset) - 1.0;
    return std::exp(2.0 * std::min(log_first, log_second));
}

double bound_flat_explicit(const GeometryParams& geo, double alpha)
{
    ConstantsUsed used;
    return explicit_bound(flat_problem(geo, alpha, used));
}

double bound_flat_threshold(const GeometryParams& geo, double alpha, double tol)
{
    ConstantsUsed used;
    return solve_threshold(flat_problem(geo, alpha, used), tol);
}

double bound_parallel_explicit(const GeometryParams& geo, const HolonomyData& hol)
{
    ConstantsUsed used;
    return explicit_bound(parallel_problem(geo, hol, used));
}

double bound_parallel_threshold(const GeometryParams& geo, const HolonomyData& hol, double tol)
{
    ConstantsUsed used;
    return solve_threshold(parallel_problem(geo, hol, used), tol);
}

double bound_general_explicit(const GeometryParams& geo, const HolonomyData& hol)
{
    ConstantsUsed used;
    return explicit_bound(general_problem(geo, hol, used));
}

double bound_general_threshold(const GeometryParams& geo, const HolonomyData& hol, double tol)
{
    ConstantsUsed used;
    return solve_threshold(general_problem(geo, hol, used), tol);
}

BoundResult bound_flat(const GeometryParams& geo, double alpha, double tol)
{
    ConstantsUsed used;
    const ThresholdProblem problem = flat_problem(geo, alpha, used);
    return finish(Theorem::flat, problem, used, tol);
}

BoundResult bound_parallel(const GeometryParams& geo, const HolonomyData& hol, double tol)
{
    ConstantsUsed used;
    const ThresholdProblem problem = parallel_problem(geo, hol, used);
    return finish(Theorem::parallel, problem, used, tol);
}

BoundResult bound_general(const GeometryParams& geo, const HolonomyData& hol, double tol)
{
    ConstantsUsed used;
    const ThresholdProblem problem = general_problem(geo, hol, used);
    return finish(Theorem::general, problem, used, tol);
}

} // namespace holobound
