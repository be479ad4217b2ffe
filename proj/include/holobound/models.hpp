#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace holobound {

/// Hermitian line bundle over the circle of length L with holonomy
/// exp(2 pi i rho) around the circle.
struct CircleBundle {
    double L = 1.0;
    double rho = 0.0;
};

/// Flat U(1) bundle over the torus R^n / Gamma. Columns of `basis` generate
/// Gamma; the character is chi(B k) = exp(2 pi i <rho, k>) in lattice
/// coordinates k.
struct TorusBundle {
    Eigen::MatrixXd basis;
    Eigen::VectorXd rho;

    int dim() const { return static_cast<int>(basis.rows()); }
};

/// Torus with basis diag(lengths).
TorusBundle rectangular_torus(const std::vector<double>& lengths, const std::vector<double>& rho);

/// Flat bundle of higher rank: the commuting holonomy is diagonalised into
/// one character per summand.
struct FlatTorusBundle {
    Eigen::MatrixXd basis;
    std::vector<Eigen::VectorXd> characters;
};

enum class SpectrumSource { closed_form, discrete };

std::string to_string(SpectrumSource source);

struct SpectrumResult {
    std::vector<double> eigenvalues; ///< ascending, with multiplicity
    SpectrumSource source = SpectrumSource::closed_form;
};

void validate(const CircleBundle& b);
void validate(const TorusBundle& b);

/// True when the lattice generators are mutually orthogonal.
bool is_rectangular(const Eigen::MatrixXd& basis, double rel_tol = 1e-12);

/// Distance from rho to the nearest integer.
double distance_to_integer(double rho);

/// The `count` smallest values of (4 pi^2 / L^2)(rho + k)^2, k in Z.
SpectrumResult circle_spectrum(const CircleBundle& b, int count);

/// sup_{k>=1} |exp(2 pi i k rho) - 1| / (k L).
double circle_beta(const CircleBundle& b);

/// The `count` smallest values of 4 pi^2 |B^{-T}(k + rho)|^2, k in Z^n.
SpectrumResult torus_spectrum(const TorusBundle& b, int count);

/// max over nonzero lattice vectors gamma of |chi(gamma) - 1| / |gamma|.
/// See docs/holonomy.md for why closed geodesics realise the supremum.
double torus_beta(const TorusBundle& b);

struct DiameterEstimate {
    double value = 0.0;     ///< exact value, or the grid maximum (a lower estimate)
    double upper = 0.0;     ///< guaranteed upper bound
    double tolerance = 0.0; ///< upper - value; zero when exact
    bool exact = false;
};

/// Diameter of the flat torus, i.e. the covering radius of Gamma. Exact for
/// orthogonal generators; otherwise a grid search over the fundamental cell
/// with `grid` points per axis (0 picks a default).
DiameterEstimate torus_diameter(const TorusBundle& b, int grid = 0);

/// max |chi(gamma) - 1| over nonzero gamma with |gamma| <= 2 diam.
double torus_alpha(const TorusBundle& b, double diam);

/// As above, using the upper diameter estimate.
double torus_alpha(const TorusBundle& b);

/// Certified interval for a holonomy constant of a higher-rank bundle.
struct HolonomyInterval {
    double lower = 0.0;
    double upper = 0.0;
};

/// For a direct sum of m characters, every unit vector has weight >= 1/m on
/// some summand, so min_j beta_j / sqrt(m) <= beta <= min_j beta_j.
HolonomyInterval flat_sum_beta(const FlatTorusBundle& b);
HolonomyInterval flat_sum_alpha(const FlatTorusBundle& b);
SpectrumResult flat_sum_spectrum(const FlatTorusBundle& b, int count);

} // namespace holobound
