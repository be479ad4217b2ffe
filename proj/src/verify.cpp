#include "holobound/verify.hpp"

#include "holobound/bounds.hpp"
#include "holobound/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace holobound {

namespace {

TheoremCheck check(const BoundResult& bound, double lambda_true)
{
    TheoremCheck out;
    out.lambda_explicit = bound.lambda_explicit;
    out.lambda_threshold = bound.lambda_threshold;
    out.ratio = bound.lambda_threshold / lambda_true;
    out.pass = bound.lambda_threshold <= lambda_true * (1.0 + kSoundnessSlack);
    return out;
}

std::string number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string joined(const Eigen::VectorXd& v)
{
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += number(v[i]);
    }
    return out;
}

std::string basis_field(const Eigen::MatrixXd& basis)
{
    // Columns separated by '|', entries by ';'.
    std::string out;
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        if (c) out += '|';
        out += joined(basis.col(c));
    }
    return out;
}

std::string optional_number(const std::optional<TheoremCheck>& t, double TheoremCheck::*field)
{
    return t ? number((*t).*field) : std::string();
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

} // namespace

VerificationRecord verify_bundle(const TorusBundle& b, const VerifyOptions& opts)
{
    validate(b);
    if (!(opts.beta_scale > 0.0) || opts.beta_scale > 1.0)
        throw std::invalid_argument("verify: beta_scale must lie in (0, 1]");

    VerificationRecord rec;
    rec.bundle = b;
    rec.n = b.dim();
    rec.kappa = opts.kappa;
    const DiameterEstimate diam = torus_diameter(b);
    rec.diam = diam.upper;
    rec.diam_tolerance = diam.tolerance;
    rec.vol = std::abs(b.basis.determinant());
    rec.alpha = torus_alpha(b, rec.diam);
    rec.beta = torus_beta(b) * opts.beta_scale;
    rec.r = 0.0;
    if (rec.alpha == 0.0 || rec.beta == 0.0) throw VacuousBound("verify: trivial holonomy, no bound applies");
    rec.lambda_true_closed = torus_spectrum(b, 1).eigenvalues.front();

    if (opts.discrete) {
        if (static_cast<int>(opts.dims.size()) != rec.n) throw std::invalid_argument("verify: dims must match the torus");
        const DiscreteReport solve = smallest_eigenvalues(assemble(b, opts.dims), 1, opts.solver);
        if (!solve.converged) throw NotConverged("verify: discrete eigensolve did not converge");
        rec.lambda_true_discrete = solve.eigenvalues.front();
    }

    const GeometryParams geo{rec.n, opts.kappa, rec.diam, rec.vol};
    HolonomyData hol;
    hol.beta = rec.beta;
    hol.r = 0.0;
    // alpha / (2 diam) <= beta holds for the unscaled beta only.
    if (opts.beta_scale == 1.0) hol.alpha = rec.alpha;

    rec.flat = check(bound_flat(geo, rec.alpha, opts.tol), rec.lambda_true_closed);
    rec.parallel = check(bound_parallel(geo, hol, opts.tol), rec.lambda_true_closed);
    rec.general = check(bound_general(geo, hol, opts.tol), rec.lambda_true_closed);
    rec.ordering_ok = rec.general->lambda_threshold <= rec.flat->lambda_threshold * (1.0 + opts.tol);
    rec.pass = rec.flat->pass && rec.parallel->pass && rec.general->pass;
    return rec;
}

std::vector<TorusBundle> sweep_bundles(const SweepSpec& spec)
{
    std::vector<TorusBundle> out;
    if (!spec.rho_values.empty() && !spec.side_lengths.empty() && spec.n < 2)
        throw std::invalid_argument("sweep: n must be at least 2");
    for (double t : spec.rho_values) {
        for (double side : spec.side_lengths) {
            std::vector<double> lengths(spec.n, 1.0);
            std::vector<double> rho(spec.n, 0.0);
            lengths[1] = side;
            rho[0] = t;
            TorusBundle b;
            b.basis = Eigen::MatrixXd::Zero(spec.n, spec.n);
            b.rho = Eigen::VectorXd::Zero(spec.n);
            for (int j = 0; j < spec.n; ++j) {
                b.basis(j, j) = lengths[j];
                b.rho[j] = rho[j];
            }
            out.push_back(b);
        }
    }
    out.insert(out.end(), spec.bundles.begin(), spec.bundles.end());
    return out;
}

std::vector<VerificationRecord> sweep(const SweepSpec& spec, const VerifyOptions& opts)
{
    std::vector<VerificationRecord> records;
    for (const TorusBundle& b : sweep_bundles(spec)) {
        try {
            records.push_back(verify_bundle(b, opts));
        } catch (const std::exception& e) {
            VerificationRecord failed;
            failed.bundle = b;
            failed.n = b.dim();
            failed.kappa = opts.kappa;
            failed.error = e.what();
            records.push_back(failed);
        }
    }
    return records;
}

std::string sweep_csv_header()
{
    return "n,basis,rho,alpha,beta,diam,lambda_true,lambda_flat_explicit,lambda_flat_threshold,"
           "lambda_general_explicit,lambda_general_threshold,ratio_flat,ratio_general,pass,error";
}

std::string sweep_csv(const std::vector<VerificationRecord>& records)
{
    std::ostringstream out;
    out << sweep_csv_header() << '\n';
    for (const VerificationRecord& r : records) {
        const bool ok = r.error.empty();
        auto explicit_of = [](const std::optional<TheoremCheck>& t) {
            return t && t->lambda_explicit ? number(*t->lambda_explicit) : std::string();
        };
        out << r.n << ',' << basis_field(r.bundle.basis) << ',' << joined(r.bundle.rho) << ','
            << (ok ? number(r.alpha) : "") << ',' << (ok ? number(r.beta) : "") << ','
            << (ok ? number(r.diam) : "") << ',' << (ok ? number(r.lambda_true_closed) : "") << ','
            << explicit_of(r.flat) << ',' << optional_number(r.flat, &TheoremCheck::lambda_threshold) << ','
            << explicit_of(r.general) << ',' << optional_number(r.general, &TheoremCheck::lambda_threshold) << ','
            << optional_number(r.flat, &TheoremCheck::ratio) << ','
            << optional_number(r.general, &TheoremCheck::ratio) << ',' << (r.pass ? "true" : "false") << ','
            << csv_escape(r.error) << '\n';
    }
    return out.str();
}

} // namespace holobound
