// Command-line front end. Every subcommand accepts either flags or
// --config file.json; both are turned into the same JSON run config.

#include "holobound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct Flags {
    std::string config_path;
    std::optional<int> n, count, k, max_restarts;
    std::optional<long long> seed;
    std::optional<double> d, tol, kappa, diam, vol, alpha, beta, r, L, rho, beta_scale;
    std::optional<std::string> theorem, output, output_path;
    std::vector<double> lengths, basis, character, rho_values, side_lengths;
    std::vector<int> dims;
    bool circle = false, torus = false, discrete = false, timing = false;
};

template <typename T>
void put(json& j, const char* key, const std::optional<T>& v)
{
    if (v) j[key] = *v;
}

template <typename T>
void put(json& j, const char* key, const std::vector<T>& v)
{
    if (!v.empty()) j[key] = v;
}

json config_from_flags(const std::string& command, const Flags& f)
{
    json j = {{"command", command}};
    put(j, "n", f.n);
    put(j, "count", f.count);
    put(j, "k", f.k);
    put(j, "max_restarts", f.max_restarts);
    put(j, "seed", f.seed);
    put(j, "d", f.d);
    put(j, "tol", f.tol);
    put(j, "kappa", f.kappa);
    put(j, "diam", f.diam);
    put(j, "vol", f.vol);
    put(j, "alpha", f.alpha);
    put(j, "beta", f.beta);
    put(j, "r", f.r);
    put(j, "L", f.L);
    put(j, "rho", f.rho);
    put(j, "beta_scale", f.beta_scale);
    put(j, "theorem", f.theorem);
    put(j, "output", f.output);
    put(j, "output_path", f.output_path);
    put(j, "lengths", f.lengths);
    put(j, "char", f.character);
    put(j, "rho_values", f.rho_values);
    put(j, "side_lengths", f.side_lengths);
    put(j, "dims", f.dims);
    if (!f.basis.empty()) {
        // Flattened column by column.
        const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(f.basis.size()))));
        json cols = json::array();
        if (n * n != f.basis.size()) {
            j["basis"] = f.basis; // rejected by the schema
        } else {
            for (std::size_t c = 0; c < n; ++c)
                cols.push_back(std::vector<double>(f.basis.begin() + c * n, f.basis.begin() + (c + 1) * n));
            j["basis"] = cols;
        }
    }
    if (f.circle) j["bundle"] = "circle";
    if (f.torus) j["bundle"] = "torus";
    if (f.discrete) j["discrete"] = true;
    if (f.timing) j["timing"] = true;
    return j;
}

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config_path, "Read the run configuration from a JSON file");
    sub->add_option("--output", f.output, "Output format: json or csv (sweep only)");
    sub->add_option("--out", f.output_path, "Write the result to this path instead of stdout");
    sub->add_option("--seed", f.seed, "Seed for every random choice");
    sub->add_flag("--timing", f.timing, "Report wall-clock timing (breaks byte-identical output)");
}

void add_bundle(CLI::App* sub, Flags& f)
{
    sub->add_flag("--circle", f.circle, "Circle bundle (needs --L, --rho)");
    sub->add_flag("--torus", f.torus, "Flat torus bundle (needs --lengths or --basis, and --char)");
    sub->add_option("--L", f.L, "Circle length");
    sub->add_option("--rho", f.rho, "Circle holonomy as a fraction of a full turn, in [0, 1)");
    sub->add_option("--lengths", f.lengths, "Side lengths of a rectangular torus");
    sub->add_option("--basis", f.basis, "Lattice basis, n*n numbers listed column by column");
    sub->add_option("--char", f.character, "Character in lattice coordinates, fractions of a full turn");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Eigenvalue lower bounds for connection Laplacians from holonomy"};
    app.require_subcommand(1);
    Flags f;

    auto* constants = app.add_subcommand("constants", "Sobolev, Moser and dimension constants");
    add_common(constants, f);
    constants->add_option("--n", f.n, "Dimension (>= 2)");
    constants->add_option("--d", f.d, "sqrt(kappa) * diameter");
    constants->add_option("--tol", f.tol, "Absolute tolerance");

    auto* bound = app.add_subcommand("bound", "Eigenvalue lower bounds from raw parameters");
    add_common(bound, f);
    bound->add_option("--theorem", f.theorem, "flat, parallel, general or all");
    bound->add_option("--n", f.n, "Dimension (>= 2)");
    bound->add_option("--kappa", f.kappa, "Ricci lower bound parameter, Ric >= -(n-1) kappa");
    bound->add_option("--diam", f.diam, "Diameter bound");
    bound->add_option("--vol", f.vol, "Volume (bookkeeping only)");
    bound->add_option("--alpha", f.alpha, "Holonomy constant for loops of length <= 2 diam");
    bound->add_option("--beta", f.beta, "Holonomy rate, units 1/length");
    bound->add_option("--r", f.r, "Curvature bound, units 1/length^2");
    bound->add_option("--tol", f.tol, "Relative tolerance of the threshold solve");

    auto* spectrum = app.add_subcommand("spectrum", "Closed-form spectra of model bundles");
    add_common(spectrum, f);
    add_bundle(spectrum, f);
    spectrum->add_option("--count", f.count, "Number of eigenvalues");

    auto* solve = app.add_subcommand("solve", "Discrete connection Laplacian eigensolve");
    add_common(solve, f);
    add_bundle(solve, f);
    solve->add_option("--dims", f.dims, "Grid points per axis");
    solve->add_option("--k", f.k, "Number of eigenpairs");
    solve->add_option("--tol", f.tol, "Residual tolerance relative to the operator norm bound");
    solve->add_option("--max-restarts", f.max_restarts, "Restart cap");

    auto* verify = app.add_subcommand("verify", "Check every bound against a model torus");
    add_common(verify, f);
    add_bundle(verify, f);
    verify->add_option("--kappa", f.kappa, "Ricci parameter passed to the bounds");
    verify->add_option("--beta-scale", f.beta_scale, "Multiply beta by this factor in (0, 1]");
    verify->add_option("--tol", f.tol, "Relative tolerance of the threshold solves");
    verify->add_flag("--discrete", f.discrete, "Also solve the discretised operator");
    verify->add_option("--dims", f.dims, "Grid points per axis for --discrete");

    auto* sweep = app.add_subcommand("sweep", "Verification over a grid of rectangular tori");
    add_common(sweep, f);
    sweep->add_option("--n", f.n, "Torus dimension");
    sweep->add_option("--rho-values", f.rho_values, "Characters (t, 0, ...) to sweep");
    sweep->add_option("--side-lengths", f.side_lengths, "Second side lengths to sweep");
    sweep->add_option("--kappa", f.kappa, "Ricci parameter passed to the bounds");
    sweep->add_option("--beta-scale", f.beta_scale, "Multiply beta by this factor in (0, 1]");
    sweep->add_option("--tol", f.tol, "Relative tolerance of the threshold solves");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return holobound::cli::kSchemaViolation;
    }

    CLI::App* chosen = app.get_subcommands().front();
    json config;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            std::cerr << "cannot read " << f.config_path << "\n";
            return holobound::cli::kSchemaViolation;
        }
        try {
            config = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cout << json{{"version", holobound::cli::kSchemaVersion},
                              {"command", chosen->get_name()},
                              {"error", {{"kind", "schema"}, {"message", e.what()}}}}
                             .dump(2)
                      << "\n";
            return holobound::cli::kSchemaViolation;
        }
        if (config.is_object() && !config.contains("command")) config["command"] = chosen->get_name();
        // Flags given next to --config override the file.
        const json overrides = config_from_flags(chosen->get_name(), f);
        if (config.is_object())
            for (const auto& [key, value] : overrides.items()) config[key] = value;
    } else {
        config = config_from_flags(chosen->get_name(), f);
    }

    const holobound::cli::RunOutcome outcome = holobound::cli::run(config);
    const bool to_file = outcome.exit_code == holobound::cli::kOk && config.is_object() && config.contains("output_path");
    if (!to_file) std::cout << outcome.text;
    return outcome.exit_code;
}
