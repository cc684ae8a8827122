#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>

#include <json.hpp>

#include "acceptance.hpp"
#include "mladlasso/core.hpp"
#include "mladlasso/csv.hpp"
#include "mladlasso/sim.hpp"

namespace mladlasso::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

Json step_json(const SelectionStep& step)
{
    Json out;
    out["lambda"] = step.fit.lambda;
    out["iterations"] = step.fit.iterations;
    out["converged"] = step.fit.converged;
    out["objective"] = step.fit.objective;
    out["support_size"] = step.fit.support.size() - 1;
    if (!step.cv.lambda_grid.empty()) {
        out["cv_selected_index"] = step.cv.selected_index;
        out["cv_mean_scores"] = Json(step.cv.mean_scores);
    }
    return out;
}

void write_fit_outputs(const fs::path& dir, const AdaptiveFit& fit, const DesignMatrix& design,
                       const FitConfig& config)
{
    const Matrix& b = fit.result.coefficients.values();
    std::vector<std::string> header;
    for (Index k = 0; k < b.cols(); ++k) {
        header.push_back("y" + std::to_string(k + 1));
    }
    {
        std::ofstream out = open_output(dir / "coefficients.csv");
        io::write_matrix_csv(out, b, header);
    }
    {
        std::ofstream out = open_output(dir / "support.csv");
        out << "column,norm\n";
        for (const Index j : fit.result.support) {
            out << j + 1 << ',' << io::format_double(fit.result.group_norms(j)) << '\n';
        }
    }

    Json diag;
    diag["observations"] = design.observations();
    diag["covariates"] = design.covariates();
    diag["outcomes"] = b.cols();
    diag["intercept_added"] = design.intercept_added();
    diag["adaptive"] = config.adaptive;
    diag["lambda"] = fit.result.lambda;
    diag["iterations"] = fit.result.iterations;
    diag["converged"] = fit.result.converged;
    diag["objective"] = fit.result.objective;
    diag["outer_iterations"] = fit.outer_iterations;
    diag["outer_converged"] = fit.converged;
    diag["outer_changes"] = Json(fit.outer_changes);
    diag["initial_lambda_grid"] = Json(fit.initial_grid);
    if (config.adaptive) {
        diag["adaptive_lambda_grid"] = Json(fit.adaptive_grid);
    }
    Json steps = Json::array();
    for (const SelectionStep& step : fit.steps) {
        steps.push_back(step_json(step));
    }
    diag["steps"] = std::move(steps);
    std::ofstream out = open_output(dir / "diagnostics.json");
    out << diag.dump(2) << '\n';
}

void write_metrics(const fs::path& path, const std::vector<sim::MetricRow>& rows)
{
    std::ofstream out = open_output(path);
    out << "scenario_id,method,replicate,metric_name,value\n";
    for (const auto& r : rows) {
        out << io::csv_line({r.scenario_id, r.method, std::to_string(r.replicate), r.metric_name,
                             io::format_double(r.value)})
            << '\n';
    }
}

void write_aggregates(const fs::path& path, const std::vector<sim::AggregateRow>& rows)
{
    std::ofstream out = open_output(path);
    out << "scenario_id,method,metric_name,count,mean,q1,median,q3\n";
    for (const auto& r : rows) {
        out << io::csv_line({r.scenario_id, r.method, r.metric_name, std::to_string(r.count),
                             io::format_double(r.mean), io::format_double(r.q1),
                             io::format_double(r.median), io::format_double(r.q3)})
            << '\n';
    }
}

void write_profiles(const fs::path& path, const std::vector<sim::MarkerProfileRow>& rows)
{
    std::ofstream out = open_output(path);
    out << "scenario_id,method,replicate,marker,norm\n";
    for (const auto& r : rows) {
        out << io::csv_line({r.scenario_id, r.method, std::to_string(r.replicate),
                             std::to_string(r.marker), io::format_double(r.norm)})
            << '\n';
    }
}

void write_bias(const fs::path& path, const std::vector<sim::MetricRow>& rows)
{
    std::ofstream out = open_output(path);
    out << "scenario_id,method,replicate,marker,outcome,bias\n";
    for (const auto& r : rows) {
        long marker = 0;
        long outcome = 0;
        if (std::sscanf(r.metric_name.c_str(), "bias_m%ld_y%ld", &marker, &outcome) != 2) {
            continue;
        }
        out << io::csv_line({r.scenario_id, r.method, std::to_string(r.replicate),
                             std::to_string(marker), std::to_string(outcome),
                             io::format_double(r.value)})
            << '\n';
    }
}

}  // namespace

int cmd_fit(const FitConfig& config, std::ostream& err)
{
    try {
        const ResponseMatrix y(io::read_matrix_csv(config.y_path, config.header));
        const Matrix raw_x = io::read_matrix_csv(config.x_path, config.header);
        if (raw_x.rows() != y.observations()) {
            err << "error: " << config.y_path << " has " << y.observations() << " rows but "
                << config.x_path << " has " << raw_x.rows() << '\n';
            return kExitBadInput;
        }
        const DesignMatrix x(raw_x, config.add_intercept ? InterceptPolicy::kPrependIfAbsent
                                                         : InterceptPolicy::kRequire);

        AdaptiveFitOptions options = config.fit;
        if (config.lambda) {
            options.lambda_grid = {*config.lambda};
        }
        if (!config.adaptive) {
            options.max_outer_iterations = 0;
        }
        const AdaptiveFit fit = fit_adaptive(y, x, options, config.solver);

        const fs::path dir(config.out_dir);
        fs::create_directories(dir);
        write_fit_outputs(dir, fit, x, config);

        const bool converged = fit.result.converged && (!config.adaptive || fit.converged);
        if (!converged) {
            err << "warning: " << (fit.result.converged ? "adaptive reweighting" : "IRLS solver")
                << " did not converge\n";
            if (config.strict) {
                return kExitNotConverged;
            }
        }
        return kExitOk;
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const SingularSystemError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNotConverged;
    }
}

int cmd_simulate(const SimulateConfig& config, std::ostream& err)
{
    sim::Study study;
    if (config.scenario == "genotype") {
        study = sim::Study::kGenotype;
    } else if (config.scenario == "zeros") {
        study = sim::Study::kZeros;
    } else {
        err << "error: unknown scenario '" << config.scenario << "' (expected genotype or zeros)\n";
        return kExitBadInput;
    }
    try {
        sim::StudyOptions options;
        options.seed = config.seed;
        options.replicates = config.replicates > 0 ? config.replicates
                             : study == sim::Study::kGenotype ? 20
                                                              : 100;
        options.contaminate = config.contaminate;
        options.fit = config.fit;
        options.solver = config.solver;
        if (!config.genotypes_path.empty()) {
            options.genotype.genotypes = sim::load_genotypes_csv(config.genotypes_path);
            options.genotype.n = options.genotype.genotypes->rows();
            options.genotype.markers = options.genotype.genotypes->cols();
        }
        for (auto& scenario : options.zeros) {
            scenario.intercept_in_nonzero_rows = config.intercept_in_nonzero_rows;
        }

        const sim::StudyResult result = sim::run_study(study, options);

        const fs::path dir(config.out_dir);
        fs::create_directories(dir);
        write_metrics(dir / "metrics.csv", result.metrics);
        write_aggregates(dir / "aggregate.csv", result.aggregates);
        if (study == sim::Study::kGenotype) {
            write_profiles(dir / "profiles.csv", result.profiles);
            write_bias(dir / "bias.csv", result.metrics);
        }
        return kExitOk;
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const SingularSystemError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNotConverged;
    }
}

int cmd_reproduce(const ReproduceConfig& config, std::ostream& out, std::ostream& err)
{
    if (!config.only.empty() && !acceptance::is_known_selector(config.only)) {
        err << "error: unknown criterion or group '" << config.only << "'\n";
        return kExitBadInput;
    }
    acceptance::Options options;
    options.seed = config.seed;
    options.genotype_replicates = config.genotype_replicates;
    options.zeros_replicates = config.zeros_replicates;
    options.only = config.only;
    options.scratch_dir = config.scratch_dir;
    options.progress = &err;
    const auto outcomes = acceptance::run(options);
    acceptance::print_report(out, outcomes);
    for (const auto& o : outcomes) {
        if (!o.passed) {
            return kExitCriterionFailed;
        }
    }
    return kExitOk;
}

}  // namespace mladlasso::cli
