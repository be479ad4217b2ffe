#pragma once

#include "holobound/discrete.hpp"
#include "holobound/models.hpp"

#include <optional>
#include <string>
#include <vector>

namespace holobound {

struct VerifyOptions {
    /// Ricci parameter fed to the bounds. The models are flat, so any kappa >= 0 is admissible.
    double kappa = 0.0;
    /// beta is multiplied by this before bounding; values in (0, 1] keep the bounds sound.
    double beta_scale = 1.0;
    double tol = 1e-12;
    bool discrete = false;
    std::vector<int> dims;
    SolverOptions solver;
};

struct TheoremCheck {
    std::optional<double> lambda_explicit;
    double lambda_threshold = 0.0;
    double ratio = 0.0; ///< lambda_threshold / lambda_true
    bool pass = false;
};

struct VerificationRecord {
    TorusBundle bundle;
    int n = 0;
    double kappa = 0.0;
    double diam = 0.0;
    double diam_tolerance = 0.0;
    double vol = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double r = 0.0;
    double lambda_true_closed = 0.0;
    std::optional<double> lambda_true_discrete;
    std::optional<TheoremCheck> flat;
    std::optional<TheoremCheck> parallel;
    std::optional<TheoremCheck> general;
    /// General-theorem threshold does not exceed the flat one.
    bool ordering_ok = false;
    bool pass = false;
    std::string error;
};

/// Relative slack allowed between a threshold and the true eigenvalue.
inline constexpr double kSoundnessSlack = 1e-9;

/// Throws VacuousBound for the trivial character.
VerificationRecord verify_bundle(const TorusBundle& b, const VerifyOptions& opts = {});

/// Grid of rectangular tori diag(1, side, 1, ...) with character (t, 0, ...),
/// iterated t-major, plus any explicitly listed bundles after them.
struct SweepSpec {
    int n = 2;
    std::vector<double> rho_values;
    std::vector<double> side_lengths;
    std::vector<TorusBundle> bundles;
};

std::vector<TorusBundle> sweep_bundles(const SweepSpec& spec);

/// Failures are recorded in the row's `error` field; the sweep always completes.
std::vector<VerificationRecord> sweep(const SweepSpec& spec, const VerifyOptions& opts = {});

/// Fixed CSV layout, numbers printed with 17 significant digits.
std::string sweep_csv(const std::vector<VerificationRecord>& records);
std::string sweep_csv_header();

} // namespace holobound
