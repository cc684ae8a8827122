#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "mladlasso/lad_solver.hpp"
#include "mladlasso/lasso.hpp"

namespace mladlasso::cli {

enum ExitCode : int
{
    kExitOk = 0,
    kExitCriterionFailed = 1,
    kExitBadInput = 2,
    kExitNotConverged = 3,
};

struct FitConfig
{
    std::string y_path;
    std::string x_path;
    bool header = false;
    std::optional<double> lambda;  // fixed lambda; otherwise cross-validated
    bool adaptive = true;
    bool add_intercept = false;
    bool strict = false;
    std::string out_dir = ".";
    AdaptiveFitOptions fit;
    SolverOptions solver;
};

struct SimulateConfig
{
    std::string scenario;  // "genotype" or "zeros"
    int replicates = 0;    // 0: study default (20 genotype, 100 zeros)
    bool contaminate = false;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string genotypes_path;  // optional external genotype codes
    bool intercept_in_nonzero_rows = false;
    AdaptiveFitOptions fit;
    SolverOptions solver;
};

struct ReproduceConfig
{
    std::string only;
    std::uint64_t seed = 20211;
    int genotype_replicates = 20;
    int zeros_replicates = 100;
    std::string scratch_dir;  // empty: a fresh directory under the system temp dir
};

/// Writes coefficients.csv, support.csv and diagnostics.json into out_dir.
int cmd_fit(const FitConfig& config, std::ostream& err);

/// Writes metrics.csv and aggregate.csv (plus profiles.csv and bias.csv for
/// the genotype study) into out_dir.
int cmd_simulate(const SimulateConfig& config, std::ostream& err);

/// Runs the acceptance criteria and prints one line per criterion to `out`.
int cmd_reproduce(const ReproduceConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mladlasso::cli
