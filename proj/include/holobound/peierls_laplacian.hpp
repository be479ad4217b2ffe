#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace holobound {

/// Gauge-covariant finite-difference Laplacian on a periodic rectangular grid.
///
///   (A s)(x) = sum_j (2 s(x) - e^{i t_j} s(x + e_j) - e^{-i t_j} s(x - e_j)) / h_j^2
///
/// with spacing h_j = L_j / N_j and link phase t_j = 2 pi rho_j / N_j, so the
/// product of link phases around axis j is the holonomy exp(2 pi i rho_j).
/// Sites are stored with axis 0 varying fastest. The operator is matrix-free.
template <typename Scalar = double>
class PeierlsLaplacian {
public:
    using Complex = std::complex<Scalar>;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
    using Block = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    PeierlsLaplacian(std::vector<int> dims, std::vector<Scalar> lengths, std::vector<Scalar> rho)
        : dims_(std::move(dims)), lengths_(std::move(lengths)), rho_(std::move(rho))
    {
        if (dims_.empty() || dims_.size() != lengths_.size() || dims_.size() != rho_.size())
            throw std::invalid_argument("PeierlsLaplacian: dims, lengths and rho must have equal nonzero size");
        size_ = 1;
        for (std::size_t j = 0; j < dims_.size(); ++j) {
            if (dims_[j] < 1) throw std::invalid_argument("PeierlsLaplacian: dims must be positive");
            if (!(lengths_[j] > 0)) throw std::invalid_argument("PeierlsLaplacian: lengths must be positive");
            strides_.push_back(size_);
            size_ *= dims_[j];
            const Scalar h = lengths_[j] / dims_[j];
            spacings_.push_back(h);
            inv_h2_.push_back(Scalar(1) / (h * h));
            const Scalar theta = 2 * std::numbers::pi_v<Scalar> * rho_[j] / dims_[j];
            phases_.push_back(theta);
            forward_.push_back(std::polar(Scalar(1), theta));
        }
    }

    Eigen::Index size() const { return size_; }
    int dim() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    const std::vector<Scalar>& lengths() const { return lengths_; }
    const std::vector<Scalar>& rho() const { return rho_; }
    const std::vector<Scalar>& spacings() const { return spacings_; }
    const std::vector<Scalar>& link_phases() const { return phases_; }

    /// Gershgorin bound on the spectrum: sum_j 4 / h_j^2.
    Scalar norm_bound() const
    {
        Scalar total = 0;
        for (Scalar v : inv_h2_) total += 4 * v;
        return total;
    }

    void apply(const Complex* in, Complex* out) const
    {
        const int n = dim();
        std::vector<int> coord(n, 0);
        for (Eigen::Index site = 0; site < size_; ++site) {
            Complex acc(0);
            for (int j = 0; j < n; ++j) {
                const Eigen::Index up = coord[j] + 1 == dims_[j] ? site - (dims_[j] - 1) * strides_[j] : site + strides_[j];
                const Eigen::Index down = coord[j] == 0 ? site + (dims_[j] - 1) * strides_[j] : site - strides_[j];
                acc += inv_h2_[j] * (Scalar(2) * in[site] - forward_[j] * in[up] - std::conj(forward_[j]) * in[down]);
            }
            out[site] = acc;
            for (int j = 0; j < n; ++j) {
                if (++coord[j] < dims_[j]) break;
                coord[j] = 0;
            }
        }
    }

    Vector operator*(const Vector& v) const
    {
        if (v.size() != size_) throw std::invalid_argument("PeierlsLaplacian: vector size mismatch");
        Vector out(size_);
        apply(v.data(), out.data());
        return out;
    }

    /// Column-wise application to a block of vectors.
    void apply_block(const Block& in, Block& out) const
    {
        out.resize(size_, in.cols());
        for (Eigen::Index c = 0; c < in.cols(); ++c) apply(in.col(c).data(), out.col(c).data());
    }

    /// Dense matrix, for oracle checks on small grids.
    Block to_dense(Eigen::Index max_size = 4096) const
    {
        if (size_ > max_size) throw std::invalid_argument("PeierlsLaplacian: too large to materialise");
        Block dense(size_, size_);
        Vector unit = Vector::Zero(size_);
        Vector column(size_);
        for (Eigen::Index c = 0; c < size_; ++c) {
            unit[c] = Complex(1);
            apply(unit.data(), column.data());
            dense.col(c) = column;
            unit[c] = Complex(0);
        }
        return dense;
    }

private:
    std::vector<int> dims_;
    std::vector<Scalar> lengths_;
    std::vector<Scalar> rho_;
    std::vector<Eigen::Index> strides_;
    std::vector<Scalar> spacings_;
    std::vector<Scalar> inv_h2_;
    std::vector<Scalar> phases_;
    std::vector<Complex> forward_;
    Eigen::Index size_ = 0;
};

} // namespace holobound
