#include "holobound/constants.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace holobound {

namespace {

constexpr int kMaxProductTerms = 50'000'000;

double log_add_exp(double a, double b)
{
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

void check_query(const ProductQuery& query)
{
    if (!std::isfinite(query.x) || !std::isfinite(query.y) || !std::isfinite(query.z) ||
        !std::isfinite(query.tol))
        throw std::invalid_argument("moser_product: non-finite argument");
    if (!(query.x > 0.0)) throw std::invalid_argument("moser_product: x must be positive");
    if (!(query.y > 0.0)) throw std::invalid_argument("moser_product: y must be positive");
    if (!(query.z > 1.0)) throw std::invalid_argument("moser_product: z must exceed 1");
    if (!(query.tol > 0.0)) throw std::invalid_argument("moser_product: tol must be positive");
}

// Bound on |sum_{i>N} r^i (a + b i)| with r = 1/z, using
//   sum_{i>=m} r^i     = r^m / (1 - r)
//   sum_{i>=m} i r^i   = r^m (m - (m-1) r) / (1 - r)^2.
double product_tail_bound(int last, double log_r, double r, double a, double b)
{
    const double m = static_cast<double>(last) + 1.0;
    const double rm = std::exp(m * log_r);
    const double one_minus_r = -std::expm1(log_r);
    return rm * (a / one_minus_r + b * (m - (m - 1.0) * r) / (one_minus_r * one_minus_r));
}

} // namespace

double log_moser_product(const ProductQuery& query)
{
    check_query(query);
    const double log_x = std::log(query.x);
    const double log_y = std::log(query.y);
    const double log_z = std::log(query.z);
    const double log_r = -log_z;
    const double r = 1.0 / query.z;

    // Every factor satisfies z^{i/2}/sqrt(2) <= z^i/sqrt(2 z^i - 1) <= z^{i/2}, so
    //   log x <= log(x + y z^i / sqrt(2 z^i - 1)) <= log(x + y) + (i/2) log z
    // and |log-factor| <= a + b i with the constants below.
    const double tail_a = std::abs(std::log(query.x + query.y)) + std::abs(log_x);
    const double tail_b = 0.5 * log_z;

    double sum = 0.0;
    double compensation = 0.0;
    for (int i = 0; i < kMaxProductTerms; ++i) {
        const double di = static_cast<double>(i);
        // log(z^i / sqrt(2 z^i - 1)) = (i/2) log z - (1/2) log(2 - z^{-i})
        const double log_weight = 0.5 * di * log_z - 0.5 * std::log(2.0 - std::exp(-di * log_z));
        const double log_factor = log_add_exp(log_x, log_y + log_weight);
        const double term = std::exp(di * log_r) * log_factor;

        const double corrected = term - compensation;
        const double next = sum + corrected;
        compensation = (next - sum) - corrected;
        sum = next;

        if (product_tail_bound(i, log_r, r, tail_a, tail_b) < query.tol) return sum;
    }
    throw std::runtime_error("moser_product: tail bound did not reach tol (z too close to 1)");
}

double moser_product(const ProductQuery& query)
{
    return std::exp(log_moser_product(query));
}

double log_moser_upper_bound(double y, double z)
{
    if (!std::isfinite(y) || !std::isfinite(z))
        throw std::invalid_argument("moser_upper_bound: non-finite argument");
    if (!(y >= 0.0)) throw std::invalid_argument("moser_upper_bound: y must be nonnegative");
    if (!(z > 1.0)) throw std::invalid_argument("moser_upper_bound: z must exceed 1");
    return y / (1.0 - 1.0 / std::sqrt(z));
}

double moser_upper_bound(double y, double z)
{
    return std::exp(log_moser_upper_bound(y, z));
}

EpsilonEstimate epsilon_product(int n, double tol)
{
    if (n < 2) throw std::invalid_argument("dimension_constants: n must be at least 2");
    if (!(tol > 0.0)) throw std::invalid_argument("dimension_constants: tol must be positive");
    const double q = (n + 2.0) / n;
    const double log_q = std::log(q);

    // log prod_{i>N} (1 - q^{-i}) >= -sum_{i>N} q^{-i} / (1 - q^{-N-1})
    //                            = -q^{-N-1} / ((1 - 1/q)(1 - q^{-N-1})).
    EpsilonEstimate est;
    double log_eps = 0.0;
    for (int i = 1; i < 1'000'000; ++i) {
        const double inv_qi = std::exp(-i * log_q);
        log_eps += std::log1p(-inv_qi);
        const double next = std::exp(-(i + 1) * log_q);
        const double tail = next / ((1.0 - 1.0 / q) * (1.0 - next));
        const double value = std::exp(log_eps);
        const double error = value * -std::expm1(-tail);
        if (error < tol) {
            est.value = value;
            est.error_bound = error;
            est.terms = i;
            return est;
        }
    }
    throw std::runtime_error("dimension_constants: epsilon product did not converge");
}

DimensionConstants dimension_constants(int n, double tol)
{
    const EpsilonEstimate eps = epsilon_product(n, tol);

    DimensionConstants dc;
    dc.n = n;
    dc.q = (n + 2.0) / n;
    dc.epsilon_n = eps.value;
    dc.tol = eps.error_bound;
    dc.b_n = n / 2.0;
    dc.log_a1_n = (n * (n + 2.0) / 4.0) * std::log(dc.q);
    dc.log_a2_n = dc.log_a1_n / dc.epsilon_n;
    dc.log_a_n = dc.log_a2_n * dc.q;
    dc.a1_n = std::exp(dc.log_a1_n);
    dc.a2_n = std::exp(dc.log_a2_n);
    dc.a_n = std::exp(dc.log_a_n);
    return dc;
}

} // namespace holobound
