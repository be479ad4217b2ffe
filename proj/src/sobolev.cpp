#include "holobound/sobolev.hpp"

#include "holobound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holobound {

namespace {

void check_args(int n, double d)
{
    if (n < 2) throw std::invalid_argument("gallot_constant: n must be at least 2");
    if (!std::isfinite(d) || d < 0.0) throw std::invalid_argument("gallot_constant: d must be finite and nonnegative");
}

} // namespace

double sinhc(double x)
{
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
    }
    return std::sinh(x) / x;
}

double gallot_integrand(int n, double d, double u)
{
    const double du = d * u;
    const double base = 0.5 * std::exp((n - 1) * d) * std::cosh(du) + u * sinhc(du) / n;
    return std::pow(base, n - 1);
}

double gallot_constant(int n, double d, double tol)
{
    check_args(n, d);
    if (!(tol > 0.0)) throw std::invalid_argument("gallot_constant: tol must be positive");

    auto f = [n, d](double u) { return gallot_integrand(n, d, u); };

    // c' = I^{1/n}, so dc' = I^{1/n - 1} dI / n. A coarse pass fixes the
    // integral tolerance that delivers `tol` on c' (relative once c' > 1).
    const QuadratureResult coarse = integrate_gauss_kronrod(f, 0.0, 1.0, 1e-3 * std::abs(f(1.0)) + 1e-300, 64);
    const double c_coarse = std::pow(coarse.value, 1.0 / n);
    const double scale = n * coarse.value / c_coarse;
    const double integral_tol = std::max(0.5 * tol * std::max(1.0, c_coarse) * scale, 64.0 * 2.2e-16 * coarse.value);

    const QuadratureResult fine = integrate_gauss_kronrod(f, 0.0, 1.0, integral_tol);
    if (!fine.converged) throw std::runtime_error("gallot_constant: quadrature did not reach tolerance");
    return std::pow(fine.value, 1.0 / n);
}

SobolevParams sobolev_params(int n, double d, double tol)
{
    check_args(n, d);
    SobolevParams sp;
    sp.n = n;
    sp.d = d;
    sp.p = (n + 2.0) / (n + 1.0);
    sp.q = (n + 2.0) / n;
    sp.B = 1.0;
    // The Sobolev inequality needs p in [1, n/(n-1)].
    if (sp.p < 1.0 || sp.p > n / (n - 1.0))
        throw std::logic_error("sobolev_params: exponent outside the admissible range");
    sp.c_prime = gallot_constant(n, d, tol);
    sp.C_over_D_times_Vpow = 2.0 * sp.c_prime / (2.0 - sp.p);
    return sp;
}

} // namespace holobound
