#include "holobound/discrete.hpp"

#include "holobound/constants.hpp"
#include "holobound/errors.hpp"
#include "holobound/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace holobound {

namespace {

std::vector<double> axis_lengths(const TorusBundle& b)
{
    validate(b);
    if (!is_rectangular(b.basis)) throw std::invalid_argument("discrete: only rectangular tori are supported");
    std::vector<double> lengths(b.dim());
    for (int j = 0; j < b.dim(); ++j) lengths[j] = b.basis.col(j).norm();
    return lengths;
}

std::vector<ConvergenceRow> study(const std::vector<int>& points, double continuum,
                                  const std::function<DiscreteOperator(int)>& make)
{
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i] <= points[i - 1]) throw std::invalid_argument("convergence_study: grid sizes must increase");
    std::vector<ConvergenceRow> rows;
    for (int N : points) {
        const DiscreteOperator op = make(N);
        ConvergenceRow row;
        row.h = *std::max_element(op.spacings().begin(), op.spacings().end());
        row.lambda_discrete = discrete_exact_spectrum(op, 1).eigenvalues.front();
        row.lambda_continuum = continuum;
        row.error = std::abs(row.lambda_discrete - continuum);
        if (!rows.empty() && rows.back().error > 0.0 && row.error > 0.0)
            row.order = std::log(rows.back().error / row.error) / std::log(rows.back().h / row.h);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

DiscreteOperator assemble(const CircleBundle& b, int points)
{
    validate(b);
    return DiscreteOperator({points}, {b.L}, {b.rho});
}

DiscreteOperator assemble(const TorusBundle& b, const std::vector<int>& dims)
{
    const std::vector<double> lengths = axis_lengths(b);
    if (static_cast<int>(dims.size()) != b.dim()) throw std::invalid_argument("assemble: dims must match the torus dimension");
    return DiscreteOperator(dims, lengths, std::vector<double>(b.rho.data(), b.rho.data() + b.rho.size()));
}

SpectrumResult discrete_exact_spectrum(const DiscreteOperator& op, int count)
{
    // Per-axis eigenvalues 4 sin^2(pi (k + rho) / N) / h^2, summed over axes.
    std::vector<double> values{0.0};
    for (int j = 0; j < op.dim(); ++j) {
        const int N = op.dims()[j];
        const double h = op.spacings()[j];
        std::vector<double> axis(N);
        for (int k = 0; k < N; ++k) {
            const double s = std::sin(std::numbers::pi * (k + op.rho()[j]) / N);
            axis[k] = 4.0 * s * s / (h * h);
        }
        std::vector<double> combined;
        combined.reserve(values.size() * axis.size());
        for (double v : values)
            for (double a : axis) combined.push_back(v + a);
        values = std::move(combined);
    }
    if (count > 0 && count < static_cast<int>(values.size())) {
        std::partial_sort(values.begin(), values.begin() + count, values.end());
        values.resize(count);
    } else {
        std::sort(values.begin(), values.end());
    }
    return {values, SpectrumSource::discrete};
}

SpectrumResult discrete_exact_spectrum(const CircleBundle& b, int points, int count)
{
    return discrete_exact_spectrum(assemble(b, points), count);
}

SpectrumResult discrete_exact_spectrum(const TorusBundle& b, const std::vector<int>& dims, int count)
{
    return discrete_exact_spectrum(assemble(b, dims), count);
}

DiscreteReport smallest_eigenvalues(const DiscreteOperator& op, int k, const SolverOptions& opts)
{
    return smallest_eigenpairs(op, k, opts);
}

std::vector<ConvergenceRow> convergence_study(const CircleBundle& b, const std::vector<int>& points)
{
    const double continuum = circle_spectrum(b, 1).eigenvalues.front();
    return study(points, continuum, [&](int N) { return assemble(b, N); });
}

std::vector<ConvergenceRow> convergence_study(const TorusBundle& b, const std::vector<int>& points)
{
    const double continuum = torus_spectrum(b, 1).eigenvalues.front();
    return study(points, continuum, [&](int N) { return assemble(b, std::vector<int>(b.dim(), N)); });
}

MoserLemmaReport check_moser_lemma(const DiscreteOperator& op, double diam, const DiscreteOperator::Vector& section,
                                   double residual_tol)
{
    const int n = op.dim();
    if (n < 2) throw std::invalid_argument("check_moser_lemma: needs a torus of dimension >= 2");
    if (section.size() != op.size()) throw std::invalid_argument("check_moser_lemma: section has the wrong size");
    const double norm = section.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("check_moser_lemma: zero section");

    const DiscreteOperator::Vector image = op * section;
    MoserLemmaReport report;
    report.eigenvalue = std::max(0.0, section.dot(image).real() / (norm * norm));
    report.residual = (image - report.eigenvalue * section).norm() / norm;
    if (!(report.residual <= residual_tol * op.norm_bound()))
        throw std::invalid_argument("check_moser_lemma: section is not an eigenvector (residual " +
                                    std::to_string(report.residual) + ")");

    const double sites = static_cast<double>(op.size());
    report.sup_norm = section.cwiseAbs().maxCoeff();
    report.l2_norm = norm / std::sqrt(sites);

    // Flat torus: kappa = 0, so d = 0. With B = 1 and the volume cancelling,
    // C Lambda = (2(n+1) c'/n) sqrt(lambda) diam.
    const SobolevParams sp = sobolev_params(n, 0.0);
    const double y = sp.C_over_D_times_Vpow * std::sqrt(report.eigenvalue) * diam;
    report.moser_factor = y > 0.0 ? moser_product({1.0, y, sp.q, 1e-12}) : 1.0;
    report.lhs = report.sup_norm;
    report.rhs = report.moser_factor * report.l2_norm;
    report.pass = report.lhs <= report.rhs * (1.0 + 1e-12);
    return report;
}

MoserLemmaReport check_moser_lemma(const TorusBundle& b, const std::vector<int>& dims, int eigen_index,
                                   const SolverOptions& opts)
{
    if (eigen_index < 0) throw std::invalid_argument("check_moser_lemma: eigen_index must be nonnegative");
    const DiscreteOperator op = assemble(b, dims);
    const DiscreteReport solve = smallest_eigenvalues(op, eigen_index + 1, opts);
    if (!solve.converged) throw NotConverged("check_moser_lemma: eigensolve did not converge");
    const double diam = torus_diameter(b).upper;
    // Tolerance slightly above the solver's, so any converged pair is accepted.
    return check_moser_lemma(op, diam, solve.eigenvectors.col(eigen_index), 10.0 * opts.tol);
}

} // namespace holobound
