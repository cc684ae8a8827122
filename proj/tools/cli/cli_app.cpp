#include "cli_app.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace mladlasso::cli {

namespace {

void add_fit_options(CLI::App& app, AdaptiveFitOptions& fit)
{
    app.add_option("--cv-folds", fit.folds, "Cross-validation folds")->capture_default_str();
    app.add_option("--grid-size", fit.grid_size, "Values in the automatic lambda grid")
        ->capture_default_str();
    app.add_option("--grid-min-ratio", fit.grid_min_ratio,
                   "Smallest grid value as a fraction of lambda_max")
        ->capture_default_str();
    app.add_option("--max-outer", fit.max_outer_iterations, "Maximum adaptive reweighting passes")
        ->capture_default_str();
    app.add_option("--outer-tol", fit.outer_tolerance,
                   "Relative change of B that stops the reweighting")
        ->capture_default_str();
    app.add_option("--tau", fit.support_threshold, "Row norm above which a covariate is selected")
        ->capture_default_str();
}

void add_solver_options(CLI::App& app, SolverOptions& solver)
{
    app.add_option("--epsilon", solver.smoothing_epsilon, "IRLS smoothing constant")
        ->capture_default_str();
    app.add_option("--max-iter", solver.max_iterations, "IRLS iteration limit")
        ->capture_default_str();
    app.add_option("--tol", solver.tolerance, "IRLS relative Frobenius tolerance")
        ->capture_default_str();
    app.add_flag("!--no-accelerate", solver.accelerate, "Plain IRLS steps without extrapolation");
}

void add_config_option(CLI::App& app, std::string& path)
{
    app.add_option("--config", path, "Flat key=value file; command-line flags take precedence");
}

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool given_on_command_line(const CLI::Option& option, const std::vector<std::string>& args)
{
    std::vector<std::string> names = option.get_lnames();
    for (const auto& f : option.get_fnames()) {
        names.push_back(f);
    }
    return std::any_of(args.begin(), args.end(), [&](const std::string& arg) {
        return std::any_of(names.begin(), names.end(), [&](const std::string& name) {
            const std::string flag = "--" + name;
            return arg == flag || arg.rfind(flag + "=", 0) == 0;
        });
    });
}

std::string config_file_argument(const std::vector<std::string>& args)
{
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    return {};
}

/// Appends `--key=value` for every config entry whose option is absent from `args`.
void merge_config_file(const CLI::App& sub, const std::string& path, std::vector<std::string>& args)
{
    std::ifstream in(path);
    if (!in) {
        throw CLI::FileError::Missing(path);
    }
    const std::vector<std::string> given = args;
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw CLI::ConversionError(path + ":" + std::to_string(number) +
                                       ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        const CLI::Option* option = sub.get_option_no_throw("--" + key);
        if (option == nullptr || key == "config") {
            throw CLI::ConversionError(path + ":" + std::to_string(number) + ": unknown key '" +
                                       key + "'");
        }
        if (!given_on_command_line(*option, given)) {
            args.push_back("--" + key + "=" + value);
        }
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multioutcome adaptive LAD-lasso regression"};
    app.require_subcommand(1);
    std::string config_path;

    FitConfig fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit Y on X and write coefficients");
    add_config_option(*fit_cmd, config_path);
    fit_cmd->add_option("--y", fit.y_path, "Response CSV (n x p)")->required();
    fit_cmd->add_option("--x", fit.x_path, "Design CSV (n x q)")->required();
    fit_cmd->add_flag("--header", fit.header, "Skip the first line of both CSV files");
    fit_cmd->add_option("--lambda", fit.lambda, "Fixed lambda instead of cross-validation");
    fit_cmd->add_flag("--adaptive,!--no-adaptive", fit.adaptive,
                      "Run the adaptive reweighting (default on)");
    fit_cmd->add_flag("--add-intercept", fit.add_intercept,
                      "Prepend a column of ones if column 1 is not all ones");
    fit_cmd->add_flag("--strict", fit.strict, "Exit 3 if the solver does not converge");
    fit_cmd->add_option("--seed", fit.fit.rng_seed, "Fold assignment seed")->capture_default_str();
    fit_cmd->add_option("--out", fit.out_dir, "Output directory")->capture_default_str();
    add_fit_options(*fit_cmd, fit.fit);
    add_solver_options(*fit_cmd, fit.solver);

    SimulateConfig simulate;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a simulation study");
    add_config_option(*sim_cmd, config_path);
    sim_cmd->add_option("--scenario", simulate.scenario, "genotype or zeros")->required();
    sim_cmd->add_option("--replicates", simulate.replicates,
                        "Replicates per scenario (default 20 genotype, 100 zeros)");
    sim_cmd->add_flag("--contaminate", simulate.contaminate,
                      "Genotype study: also refit with rows 10 and 292 of Y scaled by 100");
    sim_cmd->add_option("--seed", simulate.seed, "Base seed")->capture_default_str();
    sim_cmd->add_option("--out", simulate.out_dir, "Output directory")->capture_default_str();
    sim_cmd->add_option("--genotypes", simulate.genotypes_path,
                        "Headerless CSV of -1/0/1 genotype codes to use instead of simulated ones");
    sim_cmd->add_flag("--intercept-in-nonzero-rows", simulate.intercept_in_nonzero_rows,
                      "Zeros study: the three nonzero rows include the intercept");
    add_fit_options(*sim_cmd, simulate.fit);
    add_solver_options(*sim_cmd, simulate.solver);

    ReproduceConfig reproduce;
    bool desk = false;
    CLI::App* rep_cmd = app.add_subcommand("reproduce", "Run the acceptance criteria");
    add_config_option(*rep_cmd, config_path);
    rep_cmd->add_option("--only", reproduce.only, "Criterion name, group, or number");
    rep_cmd->add_option("--seed", reproduce.seed, "Base seed")->capture_default_str();
    rep_cmd->add_option("--genotype-replicates", reproduce.genotype_replicates,
                        "Genotype replicates for the bias criterion")
        ->capture_default_str();
    rep_cmd->add_option("--zeros-replicates", reproduce.zeros_replicates,
                        "Replicates per excess-of-zeros scenario")
        ->capture_default_str();
    rep_cmd->add_flag("--desk", desk, "Desk scale: 25 replicates per excess-of-zeros scenario");
    rep_cmd->add_option("--scratch", reproduce.scratch_dir, "Directory for temporary files");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        const std::string file = config_file_argument(args);
        if (!file.empty() && !args.empty()) {
            if (const CLI::App* sub = app.get_subcommand_no_throw(args.front())) {
                merge_config_file(*sub, file, args);
            }
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (*fit_cmd) {
            return cmd_fit(fit, err);
        }
        if (*sim_cmd) {
            return cmd_simulate(simulate, err);
        }
        if (desk && rep_cmd->count("--zeros-replicates") == 0) {
            reproduce.zeros_replicates = 25;
        }
        return cmd_reproduce(reproduce, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
}

}  // namespace mladlasso::cli
