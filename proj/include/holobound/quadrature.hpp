#pragma once

#include <functional>

namespace holobound {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Adaptive 7/15-point Gauss-Kronrod integration of a smooth integrand on
/// [a, b]. Intervals are bisected until the summed Kronrod-minus-Gauss error
/// estimate falls below `abs_tol`.
QuadratureResult integrate_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                         double abs_tol, int max_intervals = 4096);

} // namespace holobound
