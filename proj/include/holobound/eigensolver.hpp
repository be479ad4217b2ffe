#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace holobound {

struct SolverOptions {
    /// Convergence when ||A x - theta x|| <= tol * ||A||_bound for each wanted pair.
    double tol = 1e-10;
    int max_restarts = 2000;
    /// Subspace dimension per restart cycle; 0 picks max(60, 4 * block size).
    int subspace = 0;
    std::uint64_t seed = 0;
};

template <typename Scalar = double>
struct EigenSolveReport {
    using Complex = std::complex<Scalar>;

    std::vector<Scalar> eigenvalues;
    /// ||A x - lambda x|| / ||x|| per pair.
    std::vector<Scalar> residual_norms;
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
    int iterations = 0;
    long long matvecs = 0;
    Scalar residual_tolerance = 0;
    bool converged = false;
};

namespace detail {

template <typename Block>
Block random_block(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng)
{
    using Complex = typename Block::Scalar;
    using Real = typename Complex::value_type;
    std::normal_distribution<Real> normal;
    Block out(rows, cols);
    // Column-major fill keeps the sequence independent of Eigen internals.
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Real re = normal(rng);
            const Real im = normal(rng);
            out(r, c) = Complex(re, im);
        }
    return out;
}

/// Orthonormalises `block` against basis.leftCols(used) and appends the
/// surviving directions; directions lost to cancellation are replaced by
/// fresh random vectors. Returns the number of columns appended.
template <typename Block>
Eigen::Index append_orthonormal(Block& basis, Eigen::Index used, Block block, std::mt19937_64& rng)
{
    using Real = typename Block::Scalar::value_type;
    const Eigen::Index rows = basis.rows();
    const Eigen::Index room = basis.cols() - used;
    if (block.cols() > room) block = block.leftCols(room).eval();

    // Block CGS2 against the existing basis, then Gram-Schmidt inside the block.
    std::vector<Real> before(block.cols());
    for (Eigen::Index c = 0; c < block.cols(); ++c) before[c] = block.col(c).norm();
    if (used > 0)
        for (int pass = 0; pass < 2; ++pass) block -= basis.leftCols(used) * (basis.leftCols(used).adjoint() * block);

    Eigen::Index added = 0;
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
        auto v = block.col(c);
        Real reference = before[c];
        Eigen::Index first = used; // columns before `first` are already projected out
        bool accepted = false;
        for (int attempt = 0; attempt < 4 && !accepted; ++attempt) {
            const Eigen::Index k = used + added;
            if (reference > 0)
                for (int pass = 0; pass < 2; ++pass)
                    if (k > first) v -= basis.middleCols(first, k - first) * (basis.middleCols(first, k - first).adjoint() * v);
            const Real after = v.norm();
            if (reference > 0 && after > Real(1e-10) * reference) {
                basis.col(k) = v / after;
                accepted = true;
            } else {
                v = random_block<Block>(rows, 1, rng).col(0);
                reference = v.norm();
                first = 0;
            }
        }
        if (accepted) ++added;
    }
    return added;
}

} // namespace detail

/// Smallest eigenpairs of a Hermitian operator that is only available through
/// `apply_block`. Thick-restart block Krylov with Rayleigh-Ritz extraction:
/// each cycle keeps the best Ritz vectors and grows a block Krylov space from
/// the residuals of the wanted ones. Start vectors come from `opts.seed`, so
/// results are reproducible.
template <typename Op>
auto smallest_eigenpairs(const Op& op, int k, const SolverOptions& opts)
{
    using Block = typename Op::Block;
    using Complex = typename Block::Scalar;
    using Real = typename Complex::value_type;

    const Eigen::Index n = op.size();
    if (k < 1 || k >= n) throw std::invalid_argument("smallest_eigenpairs: need 1 <= k < size");
    if (!(opts.tol > 0)) throw std::invalid_argument("smallest_eigenpairs: tol must be positive");

    const Eigen::Index block_size = std::min<Eigen::Index>(n, std::max(k + 2, 2 * k));
    const Eigen::Index dimension =
        std::min<Eigen::Index>(n, opts.subspace > 0 ? std::max<Eigen::Index>(opts.subspace, block_size + 1)
                                                    : std::max<Eigen::Index>(60, 4 * block_size));
    const Eigen::Index keep = std::min<Eigen::Index>(dimension - block_size, std::max(block_size, dimension / 3));

    std::mt19937_64 rng(opts.seed);
    EigenSolveReport<Real> report;
    report.residual_tolerance = static_cast<Real>(opts.tol) * op.norm_bound();

    Block basis(n, dimension);
    Block image(n, dimension);
    Eigen::Index used = 0;
    Block next = detail::random_block<Block>(n, block_size, rng);

    Block ritz_vectors, ritz_images;
    Eigen::Matrix<Real, Eigen::Dynamic, 1> ritz_values;

    for (int cycle = 0; cycle <= opts.max_restarts; ++cycle) {
        // Kept Ritz vectors already have their images.
        if (cycle > 0) {
            basis.leftCols(keep) = ritz_vectors.leftCols(keep);
            image.leftCols(keep) = ritz_images.leftCols(keep);
            used = keep;
        } else {
            used = 0;
        }

        while (used < dimension) {
            const Eigen::Index start = used;
            const Eigen::Index added = detail::append_orthonormal(basis, used, next, rng);
            if (added == 0) break;
            used += added;
            Block fresh;
            op.apply_block(basis.middleCols(start, added), fresh);
            image.middleCols(start, added) = fresh;
            report.matvecs += added;
            next = fresh;
        }

        Block projected = basis.leftCols(used).adjoint() * image.leftCols(used);
        projected = (projected + projected.adjoint()).eval() * Real(0.5);
        Eigen::SelfAdjointEigenSolver<Block> small(projected);
        const Eigen::Index wanted = std::min(used, std::max(keep, block_size));
        const Block coefficients = small.eigenvectors().leftCols(wanted);
        ritz_values = small.eigenvalues().head(wanted);
        ritz_vectors = basis.leftCols(used) * coefficients;
        ritz_images = image.leftCols(used) * coefficients;

        Block residuals(n, block_size);
        report.residual_norms.assign(k, Real(0));
        bool done = true;
        for (Eigen::Index c = 0; c < block_size; ++c) {
            residuals.col(c) = ritz_images.col(c) - ritz_values[c] * ritz_vectors.col(c);
            if (c < k) {
                const Real r = residuals.col(c).norm() / ritz_vectors.col(c).norm();
                report.residual_norms[c] = r;
                if (!(r <= report.residual_tolerance)) done = false;
            }
        }
        report.iterations = cycle + 1;
        if (done || used == n) break;
        next = residuals;
    }

    report.eigenvalues.assign(ritz_values.data(), ritz_values.data() + k);
    report.eigenvectors = ritz_vectors.leftCols(k);

    // Final residuals come from a fresh application, not the accumulated images.
    Block images;
    op.apply_block(report.eigenvectors, images);
    report.matvecs += k;
    report.converged = true;
    for (int c = 0; c < k; ++c) {
        report.residual_norms[c] = (images.col(c) - report.eigenvalues[c] * report.eigenvectors.col(c)).norm() /
                                   report.eigenvectors.col(c).norm();
        if (!(report.residual_norms[c] <= report.residual_tolerance)) report.converged = false;
    }
    return report;
}

} // namespace holobound
