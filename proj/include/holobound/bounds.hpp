#pragma once

#include <optional>
#include <string>

namespace holobound {

/// Base manifold data: Ric >= -(n-1) kappa, diam M <= diam, volume vol.
/// The volume is bookkeeping only; no bound depends on it.
struct GeometryParams {
    int n = 2;
    double kappa = 0.0;
    double diam = 1.0;
    std::optional<double> vol;
};

/// Holonomy data of the bundle. alpha is dimensionless, beta has units
/// 1/length and r (a bound on |R^E|) has units 1/length^2.
struct HolonomyData {
    std::optional<double> alpha;
    std::optional<double> beta;
    double r = 0.0;
};

enum class Theorem { flat, general, parallel };

std::string to_string(Theorem theorem);
Theorem theorem_from_string(const std::string& name);

/// Which constants went into a bound, and how they were composed.
struct ConstantsUsed {
    double d = 0.0;          ///< sqrt(kappa) * diam
    double c_prime = 0.0;
    double coefficient = 0.0; ///< c0 or c1
    std::string coefficient_name;
    std::optional<double> log_a_n; ///< general theorem only
    double offset = 0.0;      ///< K in sqrt(lambda + K)
    double log_target = 0.0;  ///< log of the right-hand side
    std::optional<double> sobolev_C; ///< C = (2c'/(2-p)) diam V^{-1/n}, when vol is given
    std::string modulus;
};

struct BoundResult {
    Theorem theorem = Theorem::flat;
    std::optional<double> lambda_explicit;
    double lambda_threshold = 0.0;
    double log_lambda_threshold = 0.0;
    ConstantsUsed constants_used;
};

void validate(const GeometryParams& geo);
void validate(const GeometryParams& geo, const HolonomyData& hol);

/// c0(n, d) = sqrt(2) ((2n+2)/n) c'(n, d) / (1 - sqrt(n/(n+2))).
double c0(int n, double d, double tol = 1e-12);
double c0_from_c_prime(int n, double c_prime);

/// c1(n, d) = sqrt(2) (n+1)(n+2) c'(n, d) / (n epsilon(n)).
double c1(int n, double d, double tol = 1e-12);
double c1_from_c_prime(int n, double c_prime, double epsilon_n);

/// The monotone map lambda -> sqrt(lambda) exp(coefficient sqrt(lambda + offset))
/// whose level set at exp(log_target) is the threshold bound. The
/// coefficient already includes the diameter.
struct ThresholdProblem {
    double coefficient = 0.0;
    double offset = 0.0;
    double log_target = 0.0;

    double log_value(double lambda) const;
};

/// Largest lambda found with F(lambda) < target, to relative accuracy `tol`
/// in lambda. Every eigenvalue is strictly above the returned value.
/// Works in log(lambda), so tiny thresholds (general theorem, large n) keep
/// full relative accuracy; the log is returned through `log_lambda`.
double solve_threshold(const ThresholdProblem& problem, double tol, double* log_lambda = nullptr);

/// Square of min{1/(coefficient), target exp(-coefficient sqrt(offset) - 1)}.
double explicit_bound(const ThresholdProblem& problem);

double bound_flat_explicit(const GeometryParams& geo, double alpha);
double bound_flat_threshold(const GeometryParams& geo, double alpha, double tol = 1e-12);
double bound_parallel_explicit(const GeometryParams& geo, const HolonomyData& hol);
double bound_parallel_threshold(const GeometryParams& geo, const HolonomyData& hol, double tol = 1e-12);
double bound_general_explicit(const GeometryParams& geo, const HolonomyData& hol);
double bound_general_threshold(const GeometryParams& geo, const HolonomyData& hol, double tol = 1e-12);

/// Full result records, with provenance.
BoundResult bound_flat(const GeometryParams& geo, double alpha, double tol = 1e-12);
BoundResult bound_parallel(const GeometryParams& geo, const HolonomyData& hol, double tol = 1e-12);
BoundResult bound_general(const GeometryParams& geo, const HolonomyData& hol, double tol = 1e-12);

} // namespace holobound
