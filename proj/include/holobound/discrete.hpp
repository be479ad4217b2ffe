#pragma once

#include "holobound/eigensolver.hpp"
#include "holobound/models.hpp"
#include "holobound/peierls_laplacian.hpp"

#include <optional>
#include <vector>

namespace holobound {

using DiscreteOperator = PeierlsLaplacian<double>;
using DiscreteReport = EigenSolveReport<double>;

DiscreteOperator assemble(const CircleBundle& b, int points);
/// Only rectangular tori are supported; grid axes follow the lattice generators.
DiscreteOperator assemble(const TorusBundle& b, const std::vector<int>& dims);

/// All eigenvalues of the discrete operator, sum_j 4 sin^2(pi (k_j + rho_j) / N_j) / h_j^2,
/// ascending. `count` > 0 keeps only that many of the smallest.
SpectrumResult discrete_exact_spectrum(const DiscreteOperator& op, int count = 0);
SpectrumResult discrete_exact_spectrum(const CircleBundle& b, int points, int count = 0);
SpectrumResult discrete_exact_spectrum(const TorusBundle& b, const std::vector<int>& dims, int count = 0);

DiscreteReport smallest_eigenvalues(const DiscreteOperator& op, int k, const SolverOptions& opts = {});

struct ConvergenceRow {
    double h = 0.0;
    double lambda_discrete = 0.0;
    double lambda_continuum = 0.0;
    double error = 0.0;
    /// log(e_prev / e) / log(h_prev / h); absent on the first row or when an error is zero.
    std::optional<double> order;
};

/// Smallest discrete eigenvalue against the continuum value on a ladder of
/// grids. For tori every axis gets N points.
std::vector<ConvergenceRow> convergence_study(const CircleBundle& b, const std::vector<int>& points);
std::vector<ConvergenceRow> convergence_study(const TorusBundle& b, const std::vector<int>& points);

struct MoserLemmaReport {
    double eigenvalue = 0.0;
    double residual = 0.0;
    double sup_norm = 0.0;  ///< ||s||_inf
    double l2_norm = 0.0;   ///< ||s||_2, normalised counting measure
    double moser_factor = 0.0; ///< A(1, C Lambda, q)
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// Checks ||s||_inf <= A(1, (2(n+1)c'/n) sqrt(lambda) diam, (n+2)/n) ||s||_2 for
/// a discrete section. The section must be an eigenvector of `op` (relative
/// residual <= residual_tol * ||A||); anything else is rejected.
MoserLemmaReport check_moser_lemma(const DiscreteOperator& op, double diam,
                                   const DiscreteOperator::Vector& section, double residual_tol = 1e-8);

/// Solves for eigenpair `eigen_index` (0-based) of the discretised bundle and
/// checks it. Throws NotConverged if the solve does not converge.
MoserLemmaReport check_moser_lemma(const TorusBundle& b, const std::vector<int>& dims, int eigen_index,
                                   const SolverOptions& opts = {});

} // namespace holobound
