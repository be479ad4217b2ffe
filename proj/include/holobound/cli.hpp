#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace holobound::cli {

inline constexpr const char* kSchemaVersion = "1";

enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kSchemaViolation = 2,
    kNumericalFailure = 3,
    kVacuousBound = 4,
};

/// Thrown for configs that do not match the schema of their command.
class SchemaError : public std::invalid_argument {
public:
    explicit SchemaError(const std::string& what) : std::invalid_argument(what) {}
};

/// Checks a run configuration and returns it with defaults filled in.
/// Unknown keys, wrong types and out-of-range values raise SchemaError.
nlohmann::json validate_config(const nlohmann::json& config);

struct RunOutcome {
    int exit_code = kOk;
    /// The emitted artifact: a result or error object as JSON text, or CSV.
    std::string text;
    nlohmann::json document;
};

/// Executes one command. Never throws; failures become an error object and a
/// nonzero exit code.
RunOutcome run(const nlohmann::json& config);

/// Checks an emitted result document against the published result schema,
/// including re-validation of its `inputs` block. Returns an empty string
/// when valid, otherwise the first problem found.
std::string check_result_document(const nlohmann::json& doc);

} // namespace holobound::cli
