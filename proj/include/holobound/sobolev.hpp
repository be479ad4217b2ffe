#pragma once

namespace holobound {

/// sinh(x)/x, with a Taylor branch near zero.
double sinhc(double x);

/// Integrand of the Sobolev constant after substituting t = d u:
///   (e^{(n-1)d} cosh(d u) / 2 + sinh(d u) / (n d))^{n-1},  u in [0, 1].
/// At d = 0 this is (1/2 + u/n)^{n-1}.
double gallot_integrand(int n, double d, double u);

/// c'(n, d) = (int_0^1 gallot_integrand(n, d, u) du)^{1/n}, accurate to
/// `tol`, absolute below 1 and relative above. d = sqrt(kappa) * diameter is dimensionless.
double gallot_constant(int n, double d, double tol = 1e-12);

/// Sobolev data for the exponent choice p = (n+2)/(n+1) used by the
/// eigenvalue estimates: ||f||_{2q} <= B ||f||_2 + C ||df||_2 with
/// C = C_over_D_times_Vpow * diam * V^{-1/n}.
struct SobolevParams {
    int n = 2;
    double d = 0.0;
    double p = 0.0;
    double q = 0.0;
    double B = 1.0;
    double C_over_D_times_Vpow = 0.0;
    double c_prime = 0.0;
};

SobolevParams sobolev_params(int n, double d, double tol = 1e-12);

} // namespace holobound
