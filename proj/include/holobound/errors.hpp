#pragma once

#include <stdexcept>
#include <string>

namespace holobound {

// Invalid arguments are reported with std::invalid_argument. The types below
// mark the numerical outcomes callers are expected to branch on.

/// The holonomy data gives no obstruction (alpha or beta is zero), so no
/// positive eigenvalue bound follows. Distinct from a bound that equals zero.
class VacuousBound : public std::domain_error {
public:
    explicit VacuousBound(const std::string& what) : std::domain_error(what) {}
};

/// Bracket expansion in a threshold solve ran out of iterations.
class TargetUnreachable : public std::runtime_error {
public:
    explicit TargetUnreachable(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative method stopped before meeting its tolerance.
class NotConverged : public std::runtime_error {
public:
    explicit NotConverged(const std::string& what) : std::runtime_error(what) {}
};

} // namespace holobound
