#pragma once

namespace holobound {

/// Arguments of the Moser iteration product
///   A(x, y, z) = prod_{i>=0} (x + y z^i / sqrt(2 z^i - 1))^{1/z^i}.
/// `tol` is an absolute tolerance on log A.
struct ProductQuery {
    double x = 1.0;
    double y = 1.0;
    double z = 2.0;
    double tol = 1e-12;
};

/// log A(x, y, z), accurate to `query.tol`. Partial sums run until a
/// closed-form bound on the remaining tail drops below the tolerance.
double log_moser_product(const ProductQuery& query);

/// A(x, y, z). Overflows to +inf only when log A itself exceeds ~709.
double moser_product(const ProductQuery& query);

/// exp(y / (1 - 1/sqrt(z))), an upper bound for A(1, y, z).
double moser_upper_bound(double y, double z);
double log_moser_upper_bound(double y, double z);

/// Dimension constants of the modified Moser iteration.
///
/// q = (n+2)/n, epsilon = prod_{i>=1} (1 - q^{-i}), b = sum_{i>=1} q^{-i} = n/2,
/// a1 = q^{sum i q^{-i}} = q^{n(n+2)/4}, a2 = a1^{1/epsilon}, a = a2^{(n+2)/n}.
///
/// a2 and a overflow a double for n >= 8, so their logarithms are carried
/// alongside; downstream code only consumes the log forms.
struct DimensionConstants {
    int n = 2;
    double q = 2.0;
    double epsilon_n = 0.0;
    double b_n = 0.0;
    double a1_n = 0.0;
    double a2_n = 0.0;
    double a_n = 0.0;
    double log_a1_n = 0.0;
    double log_a2_n = 0.0;
    double log_a_n = 0.0;
    /// Absolute accuracy of epsilon_n.
    double tol = 0.0;
};

DimensionConstants dimension_constants(int n, double tol = 1e-14);

/// Partial-product value of epsilon(n) with its certified error.
struct EpsilonEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    int terms = 0;
};

EpsilonEstimate epsilon_product(int n, double tol);

} // namespace holobound
