#include "holobound/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace holobound {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr long long kMaxBoxPoints = 200'000'000;

double smallest_singular_value(const Eigen::MatrixXd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().minCoeff();
}

double largest_singular_value(const Eigen::MatrixXd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().maxCoeff();
}

/// Calls `visit` for every integer vector with lo[j] <= k[j] <= hi[j].
void for_each_in_box(const Eigen::VectorXi& lo, const Eigen::VectorXi& hi,
                     const std::function<void(const Eigen::VectorXi&)>& visit)
{
    const int n = static_cast<int>(lo.size());
    long long total = 1;
    for (int j = 0; j < n; ++j) {
        if (hi[j] < lo[j]) return;
        total *= static_cast<long long>(hi[j] - lo[j] + 1);
        if (total > kMaxBoxPoints) throw std::runtime_error("lattice enumeration box is too large");
    }
    Eigen::VectorXi k = lo;
    while (true) {
        visit(k);
        int j = 0;
        while (j < n && k[j] == hi[j]) {
            k[j] = lo[j];
            ++j;
        }
        if (j == n) return;
        ++k[j];
    }
}

/// Integer box containing every k with |k - center|_2 <= radius.
void box_around(const Eigen::VectorXd& center, double radius, Eigen::VectorXi& lo, Eigen::VectorXi& hi)
{
    const int n = static_cast<int>(center.size());
    lo.resize(n);
    hi.resize(n);
    for (int j = 0; j < n; ++j) {
        lo[j] = static_cast<int>(std::ceil(center[j] - radius));
        hi[j] = static_cast<int>(std::floor(center[j] + radius));
    }
}

/// |chi(gamma) - 1| = 2 |sin(pi <rho, k>)|, with the phase reduced mod 1 first.
double character_defect(const Eigen::VectorXd& rho, const Eigen::VectorXi& k)
{
    const double phase = std::remainder(rho.dot(k.cast<double>()), 1.0);
    return 2.0 * std::abs(std::sin(std::numbers::pi * phase));
}

} // namespace

TorusBundle rectangular_torus(const std::vector<double>& lengths, const std::vector<double>& rho)
{
    if (lengths.size() != rho.size()) throw std::invalid_argument("rectangular_torus: lengths and rho differ in size");
    const int n = static_cast<int>(lengths.size());
    TorusBundle b;
    b.basis = Eigen::MatrixXd::Zero(n, n);
    b.rho.resize(n);
    for (int j = 0; j < n; ++j) {
        b.basis(j, j) = lengths[j];
        b.rho[j] = rho[j];
    }
    validate(b);
    return b;
}

std::string to_string(SpectrumSource source)
{
    return source == SpectrumSource::closed_form ? "closed_form" : "discrete";
}

void validate(const CircleBundle& b)
{
    if (!std::isfinite(b.L) || b.L <= 0.0) throw std::invalid_argument("circle: L must be positive");
    if (!std::isfinite(b.rho) || b.rho < 0.0 || b.rho >= 1.0) throw std::invalid_argument("circle: rho must lie in [0, 1)");
}

void validate(const TorusBundle& b)
{
    const int n = b.dim();
    if (n < 1 || b.basis.cols() != n) throw std::invalid_argument("torus: basis must be a nonempty square matrix");
    if (b.rho.size() != n) throw std::invalid_argument("torus: character has the wrong dimension");
    if (!b.basis.allFinite() || !b.rho.allFinite()) throw std::invalid_argument("torus: non-finite entries");
    const double smin = smallest_singular_value(b.basis);
    if (!(smin > 1e-12 * largest_singular_value(b.basis))) throw std::invalid_argument("torus: basis is singular");
}

bool is_rectangular(const Eigen::MatrixXd& basis, double rel_tol)
{
    for (int i = 0; i < basis.cols(); ++i)
        for (int j = i + 1; j < basis.cols(); ++j)
            if (std::abs(basis.col(i).dot(basis.col(j))) > rel_tol * basis.col(i).norm() * basis.col(j).norm())
                return false;
    return true;
}

double distance_to_integer(double rho)
{
    return std::abs(std::remainder(rho, 1.0));
}

SpectrumResult circle_spectrum(const CircleBundle& b, int count)
{
    validate(b);
    if (count < 1) throw std::invalid_argument("circle_spectrum: count must be positive");
    const double scale = kTwoPi * kTwoPi / (b.L * b.L);
    std::vector<double> values;
    values.reserve(2 * count + 3);
    for (int k = -(count + 1); k <= count + 1; ++k) {
        const double shifted = b.rho + k;
        values.push_back(scale * shifted * shifted);
    }
    std::sort(values.begin(), values.end());
    values.resize(count);
    return {values, SpectrumSource::closed_form};
}

double circle_beta(const CircleBundle& b)
{
    validate(b);
    if (b.rho == 0.0) return 0.0;
    // |e^{2 pi i k rho} - 1| <= min(2, 2 pi k dist(rho, Z)), so the ratio never
    // exceeds 2 pi dist(rho, Z) / L, and terms with k L > 2 / best cannot win.
    const double ceiling = kTwoPi * distance_to_integer(b.rho) / b.L;
    double best = 0.0;
    for (long long k = 1;; ++k) {
        const double phase = std::remainder(static_cast<double>(k) * b.rho, 1.0);
        const double ratio = 2.0 * std::abs(std::sin(std::numbers::pi * phase)) / (static_cast<double>(k) * b.L);
        best = std::max(best, ratio);
        if (best >= ceiling * (1.0 - 1e-15)) break;
        if (best > 0.0 && static_cast<double>(k + 1) * b.L > 2.0 / best) break;
    }
    return best;
}

SpectrumResult torus_spectrum(const TorusBundle& b, int count)
{
    validate(b);
    if (count < 1) throw std::invalid_argument("torus_spectrum: count must be positive");
    const Eigen::MatrixXd dual = b.basis.inverse().transpose();
    const double smin = smallest_singular_value(dual);

    Eigen::VectorXd nearest = b.rho;
    for (int j = 0; j < nearest.size(); ++j) nearest[j] -= std::round(nearest[j]);
    double radius = std::max((dual * nearest).norm(), largest_singular_value(dual));

    // Every k with |dual (k + rho)| <= radius lies in the box |k + rho|_inf <= radius / smin.
    // Once that ball holds `count` points, nothing outside it can be smaller.
    while (true) {
        Eigen::VectorXi lo, hi;
        box_around(-b.rho, radius / smin, lo, hi);
        std::vector<double> values;
        for_each_in_box(lo, hi, [&](const Eigen::VectorXi& k) {
            const double norm = (dual * (k.cast<double>() + b.rho)).norm();
            if (norm <= radius) values.push_back(kTwoPi * kTwoPi * norm * norm);
        });
        if (static_cast<int>(values.size()) >= count) {
            std::sort(values.begin(), values.end());
            values.resize(count);
            return {values, SpectrumSource::closed_form};
        }
        radius *= 2.0;
    }
}

double torus_beta(const TorusBundle& b)
{
    validate(b);
    const int n = b.dim();
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        const Eigen::VectorXi e = Eigen::VectorXi::Unit(n, j);
        best = std::max(best, character_defect(b.rho, e) / b.basis.col(j).norm());
    }
    if (best == 0.0) {
        // Every generator has trivial holonomy, so the character is trivial.
        return 0.0;
    }

    // The defect is at most 2, so only |gamma| <= 2 / best can improve on best.
    const double radius = 2.0 / best;
    const double smin = smallest_singular_value(b.basis);
    Eigen::VectorXi lo, hi;
    box_around(Eigen::VectorXd::Zero(n), radius / smin, lo, hi);
    for_each_in_box(lo, hi, [&](const Eigen::VectorXi& k) {
        if (k.isZero()) return;
        const double length = (b.basis * k.cast<double>()).norm();
        if (length > radius) return;
        best = std::max(best, character_defect(b.rho, k) / length);
    });
    return best;
}

DiameterEstimate torus_diameter(const TorusBundle& b, int grid)
{
    validate(b);
    const int n = b.dim();
    DiameterEstimate est;
    if (is_rectangular(b.basis)) {
        est.value = 0.5 * b.basis.colwise().norm().norm();
        est.upper = est.value;
        est.exact = true;
        return est;
    }

    if (grid <= 0) grid = n == 2 ? 128 : 24;
    const Eigen::MatrixXd inverse = b.basis.inverse();
    const double smin = smallest_singular_value(b.basis);

    auto distance_to_lattice = [&](const Eigen::VectorXd& x) {
        const Eigen::VectorXd coords = inverse * x;
        Eigen::VectorXd rounded = coords;
        for (int j = 0; j < n; ++j) rounded[j] = std::round(rounded[j]);
        double best = (x - b.basis * rounded).norm();
        Eigen::VectorXi lo, hi;
        box_around(coords, best / smin, lo, hi);
        for_each_in_box(lo, hi, [&](const Eigen::VectorXi& k) {
            best = std::min(best, (x - b.basis * k.cast<double>()).norm());
        });
        return best;
    };

    Eigen::VectorXi lo = Eigen::VectorXi::Zero(n);
    Eigen::VectorXi hi = Eigen::VectorXi::Constant(n, grid - 1);
    double worst = 0.0;
    for_each_in_box(lo, hi, [&](const Eigen::VectorXi& idx) {
        const Eigen::VectorXd t = idx.cast<double>() / grid;
        worst = std::max(worst, distance_to_lattice(b.basis * t));
    });

    // Any point of the cell is within sum_j |b_j| / (2 grid) of a grid point,
    // and distance to the lattice is 1-Lipschitz.
    est.value = worst;
    est.tolerance = b.basis.colwise().norm().sum() / (2.0 * grid);
    est.upper = worst + est.tolerance;
    est.exact = false;
    return est;
}

double torus_alpha(const TorusBundle& b, double diam)
{
    validate(b);
    if (!(diam > 0.0)) throw std::invalid_argument("torus_alpha: diam must be positive");
    const int n = b.dim();
    const double reach = 2.0 * diam * (1.0 + 1e-12);
    const double smin = smallest_singular_value(b.basis);
    Eigen::VectorXi lo, hi;
    box_around(Eigen::VectorXd::Zero(n), reach / smin, lo, hi);
    double best = 0.0;
    bool any = false;
    for_each_in_box(lo, hi, [&](const Eigen::VectorXi& k) {
        if (k.isZero()) return;
        if ((b.basis * k.cast<double>()).norm() > reach) return;
        any = true;
        best = std::max(best, character_defect(b.rho, k));
    });
    if (!any) throw std::logic_error("torus_alpha: no loop of length <= 2 diam");
    return best;
}

double torus_alpha(const TorusBundle& b)
{
    return torus_alpha(b, torus_diameter(b).upper);
}

namespace {

TorusBundle summand(const FlatTorusBundle& b, std::size_t j)
{
    return TorusBundle{b.basis, b.characters.at(j)};
}

void check_nonempty(const FlatTorusBundle& b)
{
    if (b.characters.empty()) throw std::invalid_argument("flat bundle needs at least one character");
}

} // namespace

HolonomyInterval flat_sum_beta(const FlatTorusBundle& b)
{
    check_nonempty(b);
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.characters.size(); ++j) smallest = std::min(smallest, torus_beta(summand(b, j)));
    return {smallest / std::sqrt(static_cast<double>(b.characters.size())), smallest};
}

HolonomyInterval flat_sum_alpha(const FlatTorusBundle& b)
{
    check_nonempty(b);
    const double diam = torus_diameter(summand(b, 0)).upper;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.characters.size(); ++j)
        smallest = std::min(smallest, torus_alpha(summand(b, j), diam));
    return {smallest / std::sqrt(static_cast<double>(b.characters.size())), smallest};
}

SpectrumResult flat_sum_spectrum(const FlatTorusBundle& b, int count)
{
    check_nonempty(b);
    std::vector<double> values;
    for (std::size_t j = 0; j < b.characters.size(); ++j) {
        const SpectrumResult part = torus_spectrum(summand(b, j), count);
        values.insert(values.end(), part.eigenvalues.begin(), part.eigenvalues.end());
    }
    std::sort(values.begin(), values.end());
    values.resize(count);
    return {values, SpectrumSource::closed_form};
}

} // namespace holobound
