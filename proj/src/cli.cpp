#include "holobound/cli.hpp"

#include "holobound/bounds.hpp"
#include "holobound/constants.hpp"
#include "holobound/discrete.hpp"
#include "holobound/errors.hpp"
#include "holobound/models.hpp"
#include "holobound/sobolev.hpp"
#include "holobound/verify.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <vector>

namespace holobound::cli {

using nlohmann::json;

namespace {

enum class Kind { integer, number, boolean, string, numbers, integers, matrix };

struct Field {
    Kind kind;
    bool required = false;
    json fallback = nullptr; ///< filled in when absent; null means "leave absent"
    std::optional<double> min;
    bool exclusive_min = false;
    std::vector<std::string> choices;
};

using Schema = std::map<std::string, Field>;

Field integer(bool required, json fallback = nullptr, std::optional<double> min = std::nullopt)
{
    return {Kind::integer, required, std::move(fallback), min, false, {}};
}

Field number(bool required, json fallback = nullptr, std::optional<double> min = std::nullopt, bool exclusive = false)
{
    return {Kind::number, required, std::move(fallback), min, exclusive, {}};
}

Field choice(bool required, json fallback, std::vector<std::string> choices)
{
    return {Kind::string, required, std::move(fallback), std::nullopt, false, std::move(choices)};
}

Field list(Kind kind, bool required = false)
{
    return {kind, required, nullptr, std::nullopt, false, {}};
}

Schema common_fields()
{
    return {
        {"command", choice(true, nullptr, {"constants", "bound", "spectrum", "solve", "verify", "sweep"})},
        {"output", choice(false, "json", {"json", "csv"})},
        {"output_path", {Kind::string, false, nullptr, std::nullopt, false, {}}},
        {"seed", integer(false, 0, 0)},
        {"timing", {Kind::boolean, false, false, std::nullopt, false, {}}},
    };
}

void add_bundle_fields(Schema& s)
{
    s["bundle"] = choice(true, nullptr, {"circle", "torus"});
    s["L"] = number(false, nullptr, 0.0, true);
    s["rho"] = number(false, nullptr, 0.0);
    s["lengths"] = list(Kind::numbers);
    s["basis"] = list(Kind::matrix);
    s["char"] = list(Kind::numbers);
}

Schema schema_for(const std::string& command)
{
    Schema s = common_fields();
    if (command == "constants") {
        s["n"] = integer(true, nullptr, 2);
        s["d"] = number(false, 0.0, 0.0);
        s["tol"] = number(false, 1e-12, 0.0, true);
    } else if (command == "bound") {
        s["theorem"] = choice(false, "all", {"flat", "parallel", "general", "all"});
        s["n"] = integer(true, nullptr, 2);
        s["kappa"] = number(false, 0.0, 0.0);
        s["diam"] = number(true, nullptr, 0.0, true);
        s["vol"] = number(false, nullptr, 0.0, true);
        s["alpha"] = number(false, nullptr, 0.0);
        s["beta"] = number(false, nullptr, 0.0);
        s["r"] = number(false, 0.0, 0.0);
        s["tol"] = number(false, 1e-12, 0.0, true);
    } else if (command == "spectrum") {
        add_bundle_fields(s);
        s["count"] = integer(false, 5, 1);
    } else if (command == "solve") {
        add_bundle_fields(s);
        s["dims"] = list(Kind::integers, true);
        s["k"] = integer(false, 1, 1);
        s["tol"] = number(false, 1e-10, 0.0, true);
        s["max_restarts"] = integer(false, 2000, 1);
    } else if (command == "verify") {
        add_bundle_fields(s);
        s["kappa"] = number(false, 0.0, 0.0);
        s["beta_scale"] = number(false, 1.0, 0.0, true);
        s["tol"] = number(false, 1e-12, 0.0, true);
        s["discrete"] = {Kind::boolean, false, false, std::nullopt, false, {}};
        s["dims"] = list(Kind::integers);
    } else if (command == "sweep") {
        s["n"] = integer(false, 2, 2);
        s["rho_values"] = list(Kind::numbers, true);
        s["side_lengths"] = list(Kind::numbers, true);
        s["kappa"] = number(false, 0.0, 0.0);
        s["beta_scale"] = number(false, 1.0, 0.0, true);
        s["tol"] = number(false, 1e-12, 0.0, true);
    }
    return s;
}

bool is_number_array(const json& v)
{
    if (!v.is_array()) return false;
    for (const json& e : v)
        if (!e.is_number()) return false;
    return true;
}

void check_field(const std::string& key, const Field& f, const json& v)
{
    auto fail = [&](const std::string& why) { throw SchemaError("field '" + key + "' " + why); };
    switch (f.kind) {
    case Kind::integer:
        if (!v.is_number_integer()) fail("must be an integer");
        break;
    case Kind::number:
        if (!v.is_number() || !std::isfinite(v.get<double>())) fail("must be a finite number");
        break;
    case Kind::boolean:
        if (!v.is_boolean()) fail("must be a boolean");
        break;
    case Kind::string:
        if (!v.is_string()) fail("must be a string");
        if (!f.choices.empty() &&
            std::find(f.choices.begin(), f.choices.end(), v.get<std::string>()) == f.choices.end())
            fail("has an unsupported value");
        break;
    case Kind::numbers:
        if (!is_number_array(v) || v.empty()) fail("must be a nonempty array of numbers");
        break;
    case Kind::integers:
        if (!v.is_array() || v.empty()) fail("must be a nonempty array of integers");
        for (const json& e : v)
            if (!e.is_number_integer() || e.get<long long>() < 1) fail("must contain positive integers");
        break;
    case Kind::matrix:
        if (!v.is_array() || v.empty()) fail("must be an array of columns");
        for (const json& col : v)
            if (!is_number_array(col) || col.size() != v.size()) fail("must be a square array of columns");
        break;
    }
    if (f.min && (f.kind == Kind::integer || f.kind == Kind::number)) {
        const double x = v.get<double>();
        if (f.exclusive_min ? !(x > *f.min) : !(x >= *f.min)) fail("is out of range");
    }
}

void check_bundle(const json& c)
{
    const std::string bundle = c.at("bundle");
    if (bundle == "circle") {
        if (!c.contains("L") || !c.contains("rho")) throw SchemaError("circle bundle needs 'L' and 'rho'");
        if (c.contains("lengths") || c.contains("basis") || c.contains("char"))
            throw SchemaError("circle bundle takes only 'L' and 'rho'");
        if (c.at("rho").get<double>() >= 1.0) throw SchemaError("field 'rho' must lie in [0, 1)");
    } else {
        if (c.contains("L") || c.contains("rho")) throw SchemaError("torus bundle takes 'lengths' or 'basis', and 'char'");
        if (c.contains("lengths") == c.contains("basis")) throw SchemaError("torus bundle needs exactly one of 'lengths' or 'basis'");
        if (!c.contains("char")) throw SchemaError("torus bundle needs 'char'");
        const std::size_t n = c.contains("lengths") ? c.at("lengths").size() : c.at("basis").size();
        if (c.at("char").size() != n) throw SchemaError("field 'char' must match the torus dimension");
        if (c.contains("lengths"))
            for (const json& v : c.at("lengths"))
                if (!(v.get<double>() > 0.0)) throw SchemaError("field 'lengths' must be positive");
    }
}

CircleBundle circle_from(const json& c)
{
    return {c.at("L").get<double>(), c.at("rho").get<double>()};
}

TorusBundle torus_from(const json& c)
{
    const std::vector<double> rho = c.at("char").get<std::vector<double>>();
    if (c.contains("lengths")) return rectangular_torus(c.at("lengths").get<std::vector<double>>(), rho);
    const json& cols = c.at("basis");
    const int n = static_cast<int>(cols.size());
    TorusBundle b;
    b.basis.resize(n, n);
    b.rho.resize(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) b.basis(i, j) = cols[j][i].get<double>();
        b.rho[j] = rho[j];
    }
    validate(b);
    return b;
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

json bound_json(const BoundResult& r)
{
    const ConstantsUsed& c = r.constants_used;
    json constants = {
        {"d", c.d},
        {"c_prime", c.c_prime},
        {c.coefficient_name, c.coefficient},
        {"offset", c.offset},
        {"log_target", c.log_target},
        {"modulus", c.modulus},
    };
    if (c.log_a_n) constants["log_a_n"] = *c.log_a_n;
    if (c.sobolev_C) constants["sobolev_C"] = *c.sobolev_C;
    return {
        {"theorem", to_string(r.theorem)},
        {"lambda_explicit", optional_json(r.lambda_explicit)},
        {"lambda_threshold", r.lambda_threshold},
        {"log_lambda_threshold", r.log_lambda_threshold},
        {"constants_used", constants},
    };
}

json theorem_json(const std::optional<TheoremCheck>& t)
{
    if (!t) return nullptr;
    return {
        {"lambda_explicit", optional_json(t->lambda_explicit)},
        {"lambda_threshold", t->lambda_threshold},
        {"ratio", t->ratio},
        {"pass", t->pass},
    };
}

json basis_json(const Eigen::MatrixXd& basis)
{
    json cols = json::array();
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        json col = json::array();
        for (Eigen::Index r = 0; r < basis.rows(); ++r) col.push_back(basis(r, c));
        cols.push_back(col);
    }
    return cols;
}

json record_json(const VerificationRecord& r)
{
    json out = {
        {"n", r.n},
        {"basis", basis_json(r.bundle.basis)},
        {"char", std::vector<double>(r.bundle.rho.data(), r.bundle.rho.data() + r.bundle.rho.size())},
        {"error", r.error.empty() ? json(nullptr) : json(r.error)},
    };
    if (!r.error.empty()) {
        out["pass"] = false;
        return out;
    }
    out["kappa"] = r.kappa;
    out["diam"] = r.diam;
    out["diam_tolerance"] = r.diam_tolerance;
    out["vol"] = r.vol;
    out["alpha"] = r.alpha;
    out["beta"] = r.beta;
    out["r"] = r.r;
    out["lambda_true_closed"] = r.lambda_true_closed;
    out["lambda_true_discrete"] = optional_json(r.lambda_true_discrete);
    out["flat"] = theorem_json(r.flat);
    out["parallel"] = theorem_json(r.parallel);
    out["general"] = theorem_json(r.general);
    out["ordering_ok"] = r.ordering_ok;
    out["pass"] = r.pass;
    return out;
}

json run_constants(const json& c, json& tolerances)
{
    const int n = c.at("n");
    const double d = c.at("d");
    const double tol = c.at("tol");
    const DimensionConstants dc = dimension_constants(n, tol);
    const SobolevParams sp = sobolev_params(n, d, tol);
    tolerances["c_prime_abs"] = tol;
    tolerances["epsilon_n_abs"] = dc.tol;
    return {
        {"c_prime", sp.c_prime},
        {"c0", c0_from_c_prime(n, sp.c_prime)},
        {"c1", c1_from_c_prime(n, sp.c_prime, dc.epsilon_n)},
        {"p", sp.p},
        {"q", sp.q},
        {"B", sp.B},
        {"C_over_D_times_Vpow", sp.C_over_D_times_Vpow},
        {"epsilon_n", dc.epsilon_n},
        {"b_n", dc.b_n},
        {"a1_n", dc.a1_n},
        {"log_a2_n", dc.log_a2_n},
        {"log_a_n", dc.log_a_n},
        {"a2_n", std::isfinite(dc.a2_n) ? json(dc.a2_n) : json(nullptr)},
        {"a_n", std::isfinite(dc.a_n) ? json(dc.a_n) : json(nullptr)},
    };
}

json run_bound(const json& c, json& tolerances)
{
    GeometryParams geo;
    geo.n = c.at("n");
    geo.kappa = c.at("kappa");
    geo.diam = c.at("diam");
    if (c.contains("vol")) geo.vol = c.at("vol").get<double>();
    HolonomyData hol;
    if (c.contains("alpha")) hol.alpha = c.at("alpha").get<double>();
    if (c.contains("beta")) hol.beta = c.at("beta").get<double>();
    hol.r = c.at("r");
    const double tol = c.at("tol");
    tolerances["lambda_threshold_rel"] = tol;
    validate(geo, hol);

    const std::string theorem = c.at("theorem");
    json results = json::array();
    // "all" runs every theorem whose hypotheses and inputs are present.
    const bool all = theorem == "all";
    if (theorem == "flat" || (all && hol.alpha && hol.r == 0.0)) {
        if (!hol.alpha) throw SchemaError("the flat theorem needs 'alpha'");
        if (hol.r != 0.0) throw SchemaError("the flat theorem needs a flat connection, r = 0");
        results.push_back(bound_json(bound_flat(geo, *hol.alpha, tol)));
    }
    if (theorem == "parallel" || (all && hol.beta)) {
        if (!hol.beta) throw SchemaError("the parallel theorem needs 'beta'");
        results.push_back(bound_json(bound_parallel(geo, hol, tol)));
    }
    if (theorem == "general" || (all && hol.beta)) {
        if (!hol.beta) throw SchemaError("the general theorem needs 'beta'");
        results.push_back(bound_json(bound_general(geo, hol, tol)));
    }
    if (results.empty()) throw SchemaError("no theorem applies: give 'alpha' (with r = 0) or 'beta'");
    if (theorem != "all") return results.front();
    return {{"bounds", results}};
}

json run_spectrum(const json& c, json&)
{
    const int count = c.at("count");
    if (c.at("bundle") == "circle") {
        const CircleBundle b = circle_from(c);
        const SpectrumResult s = circle_spectrum(b, count);
        return {{"eigenvalues", s.eigenvalues}, {"source", to_string(s.source)}, {"beta", circle_beta(b)}};
    }
    const TorusBundle b = torus_from(c);
    const SpectrumResult s = torus_spectrum(b, count);
    const DiameterEstimate diam = torus_diameter(b);
    return {
        {"eigenvalues", s.eigenvalues},
        {"source", to_string(s.source)},
        {"alpha", torus_alpha(b, diam.upper)},
        {"beta", torus_beta(b)},
        {"diam", diam.upper},
        {"diam_tolerance", diam.tolerance},
    };
}

json run_solve(const json& c, json& tolerances, bool& failed)
{
    const std::vector<int> dims = c.at("dims").get<std::vector<int>>();
    SolverOptions opts;
    opts.tol = c.at("tol");
    opts.seed = c.at("seed").get<std::uint64_t>();
    opts.max_restarts = c.at("max_restarts");
    const int k = c.at("k");

    DiscreteOperator op = c.at("bundle") == "circle"
                              ? (dims.size() == 1 ? assemble(circle_from(c), dims[0])
                                                  : throw SchemaError("circle bundle needs a single grid size"))
                              : assemble(torus_from(c), dims);
    if (k >= op.size()) throw SchemaError("field 'k' must be smaller than the grid size");
    const DiscreteReport report = smallest_eigenvalues(op, k, opts);
    const SpectrumResult exact = discrete_exact_spectrum(op, k);
    tolerances["residual_abs"] = report.residual_tolerance;
    failed = !report.converged;
    return {
        {"eigenvalues", report.eigenvalues},
        {"residual_norms", report.residual_norms},
        {"iterations", report.iterations},
        {"matvecs", report.matvecs},
        {"converged", report.converged},
        {"exact_discrete_eigenvalues", exact.eigenvalues},
        {"spacings", op.spacings()},
    };
}

VerifyOptions verify_options(const json& c)
{
    VerifyOptions opts;
    opts.kappa = c.at("kappa");
    opts.beta_scale = c.at("beta_scale");
    opts.tol = c.at("tol");
    if (opts.beta_scale > 1.0) throw SchemaError("field 'beta_scale' must lie in (0, 1]");
    return opts;
}

json run_verify(const json& c, json& tolerances)
{
    if (c.at("bundle") != "torus") throw SchemaError("verify needs a torus bundle");
    VerifyOptions opts = verify_options(c);
    opts.discrete = c.at("discrete");
    opts.solver.seed = c.at("seed").get<std::uint64_t>();
    if (opts.discrete) {
        if (!c.contains("dims")) throw SchemaError("discrete verification needs 'dims'");
        opts.dims = c.at("dims").get<std::vector<int>>();
    }
    tolerances["lambda_threshold_rel"] = opts.tol;
    tolerances["soundness_slack_rel"] = kSoundnessSlack;
    return record_json(verify_bundle(torus_from(c), opts));
}

json run_sweep(const json& c, json& tolerances, std::vector<VerificationRecord>& records)
{
    SweepSpec spec;
    spec.n = c.at("n");
    spec.rho_values = c.at("rho_values").get<std::vector<double>>();
    spec.side_lengths = c.at("side_lengths").get<std::vector<double>>();
    const VerifyOptions opts = verify_options(c);
    tolerances["lambda_threshold_rel"] = opts.tol;
    tolerances["soundness_slack_rel"] = kSoundnessSlack;
    records = sweep(spec, opts);
    json rows = json::array();
    bool all_pass = true;
    for (const VerificationRecord& r : records) {
        rows.push_back(record_json(r));
        all_pass = all_pass && r.pass;
    }
    return {{"records", rows}, {"all_pass", all_pass}};
}

json error_document(const std::string& command, const std::string& kind, const std::string& message)
{
    return {
        {"version", kSchemaVersion},
        {"command", command},
        {"error", {{"kind", kind}, {"message", message}}},
    };
}

RunOutcome finish(RunOutcome out, const json& config)
{
    if (out.text.empty()) out.text = out.document.dump(2) + "\n";
    if (out.exit_code == kOk && config.is_object() && config.contains("output_path")) {
        std::ofstream file(config.at("output_path").get<std::string>(), std::ios::binary);
        if (!file) {
            return finish({kInternalError, "", error_document(config.value("command", ""), "io", "cannot open output path")},
                          json());
        }
        file << out.text;
    }
    return out;
}

} // namespace

json validate_config(const json& config)
{
    if (!config.is_object()) throw SchemaError("config must be a JSON object");
    if (!config.contains("command") || !config.at("command").is_string()) throw SchemaError("field 'command' is required");
    const Schema schema = schema_for(config.at("command").get<std::string>());
    check_field("command", schema.at("command"), config.at("command"));

    json out = json::object();
    for (const auto& [key, value] : config.items()) {
        const auto it = schema.find(key);
        if (it == schema.end()) throw SchemaError("unknown field '" + key + "'");
        check_field(key, it->second, value);
        out[key] = value;
    }
    for (const auto& [key, field] : schema) {
        if (out.contains(key)) continue;
        if (field.required) throw SchemaError("field '" + key + "' is required");
        if (!field.fallback.is_null()) out[key] = field.fallback;
    }

    const std::string command = out.at("command");
    if (out.contains("bundle")) check_bundle(out);
    if (out.at("output") == "csv" && command != "sweep") throw SchemaError("csv output is only available for sweep");
    if (command == "sweep")
        for (const json& v : out.at("side_lengths"))
            if (!(v.get<double>() > 0.0)) throw SchemaError("field 'side_lengths' must be positive");
    return out;
}

RunOutcome run(const json& config)
{
    const std::string command = config.is_object() && config.contains("command") && config.at("command").is_string()
                                    ? config.at("command").get<std::string>()
                                    : std::string();
    json validated;
    try {
        validated = validate_config(config);
    } catch (const std::exception& e) {
        return finish({kSchemaViolation, "", error_document(command, "schema", e.what())}, json());
    }

    const auto started = std::chrono::steady_clock::now();
    json tolerances = json::object();
    json outputs;
    std::vector<VerificationRecord> records;
    bool numerical_failure = false;
    try {
        if (command == "constants") outputs = run_constants(validated, tolerances);
        else if (command == "bound") outputs = run_bound(validated, tolerances);
        else if (command == "spectrum") outputs = run_spectrum(validated, tolerances);
        else if (command == "solve") outputs = run_solve(validated, tolerances, numerical_failure);
        else if (command == "verify") outputs = run_verify(validated, tolerances);
        else outputs = run_sweep(validated, tolerances, records);
    } catch (const VacuousBound& e) {
        return finish({kVacuousBound, "", error_document(command, "vacuous", e.what())}, json());
    } catch (const NotConverged& e) {
        return finish({kNumericalFailure, "", error_document(command, "numerical", e.what())}, json());
    } catch (const TargetUnreachable& e) {
        return finish({kNumericalFailure, "", error_document(command, "numerical", e.what())}, json());
    } catch (const std::invalid_argument& e) {
        return finish({kSchemaViolation, "", error_document(command, "schema", e.what())}, json());
    } catch (const std::exception& e) {
        return finish({kNumericalFailure, "", error_document(command, "numerical", e.what())}, json());
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);

    RunOutcome out;
    out.document = {
        {"version", kSchemaVersion},
        {"command", command},
        {"inputs", validated},
        {"outputs", outputs},
        {"tolerances", tolerances},
        {"seed", validated.at("seed")},
        {"timing_ms", validated.at("timing").get<bool>() ? json(elapsed.count()) : json(nullptr)},
    };
    if (numerical_failure) {
        // The unconverged report is still emitted, inside the error object.
        out.exit_code = kNumericalFailure;
        out.document["error"] = {{"kind", "numerical"}, {"message", "eigensolver did not converge"}};
    }
    if (validated.at("output") == "csv") out.text = sweep_csv(records);
    return finish(out, validated);
}

std::string check_result_document(const json& doc)
{
    if (!doc.is_object()) return "document is not an object";
    for (const char* key : {"version", "command", "inputs", "outputs", "tolerances", "seed", "timing_ms"})
        if (!doc.contains(key)) return std::string("missing key '") + key + "'";
    for (const auto& [key, value] : doc.items()) {
        static const std::vector<std::string> allowed = {"version", "command", "inputs", "outputs",
                                                         "tolerances", "seed", "timing_ms", "error"};
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) return "unexpected key '" + key + "'";
        (void)value;
    }
    if (doc.at("version") != kSchemaVersion) return "unsupported version";
    if (!doc.at("command").is_string()) return "command is not a string";
    if (!doc.at("outputs").is_object()) return "outputs is not an object";
    if (!doc.at("tolerances").is_object()) return "tolerances is not an object";
    if (!doc.at("seed").is_number_integer()) return "seed is not an integer";
    if (!doc.at("timing_ms").is_null() && !doc.at("timing_ms").is_number()) return "timing_ms is not a number";
    try {
        const json again = validate_config(doc.at("inputs"));
        if (again != doc.at("inputs")) return "inputs are not in canonical form";
        if (again.at("command") != doc.at("command")) return "command does not match inputs";
    } catch (const std::exception& e) {
        return std::string("inputs do not validate: ") + e.what();
    }
    return {};
}

} // namespace holobound::cli
