#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mladlasso/core.hpp"
#include "mladlasso/lad_solver.hpp"
#include "mladlasso/lasso.hpp"

namespace mladlasso::sim {

struct SimulatedData
{
    ResponseMatrix responses;
    DesignMatrix design;
    CoefficientMatrix truth;
};

/// Marker effects keyed by 1-based marker number; marker m is design column m
/// (column 0 is the intercept).
using EffectMap = std::map<Index, Vector>;

EffectMap default_qtl_effects();
Matrix default_trait_covariance();

/// Trivariate traits on {-1, 0, 1}-coded markers.
struct GenotypeScenario
{
    Index n = 300;
    Index markers = 200;
    EffectMap true_effects = default_qtl_effects();
    /// Must be SPD, or exactly zero for noiseless responses.
    Matrix error_covariance = default_trait_covariance();
    std::uint64_t rng_seed = 0;
    /// n x markers genotype codes to use instead of simulated ones.
    std::optional<Matrix> genotypes;
};

enum class ErrorKind
{
    kUniform,
    kAsymmetricLaplace,
};

/// Zero-inflated covariates: x ~ N(3, 1) unless masked to zero with
/// probability p_zeros. Two outcomes, three nonzero coefficient rows.
struct ZerosScenario
{
    Index n = 100;
    Index q = 10;  // generated covariates; the design gets an extra intercept column
    double p_zeros = 0.1;
    ErrorKind error_kind = ErrorKind::kUniform;
    std::uint64_t rng_seed = 0;
    /// false: nonzero rows are the first three generated covariates.
    /// true: nonzero rows are the intercept plus the first two covariates.
    bool intercept_in_nonzero_rows = false;

    std::string id() const;
};

/// The 16 reproduction scenarios: (n, q) in {(100, 10), (25, 50)} x
/// p_zeros in {0.1, ..., 0.4} x both error kinds.
std::vector<ZerosScenario> default_zeros_scenarios();

SimulatedData gen_genotype_study(const GenotypeScenario& scenario);
SimulatedData gen_zeros_study(const ZerosScenario& scenario);

/// Rows mu * W + sqrt(W) * Z with W ~ Exp(1), Z ~ N(0, Sigma).
Matrix sample_asymmetric_laplace(const Vector& mu, const Matrix& sigma, Index count,
                                 std::uint64_t seed);
Matrix sample_asymmetric_laplace(const Vector& mu, const Matrix& sigma, Index count,
                                 std::mt19937_64& rng);

/// Multiplies the listed (0-based) rows by `factor`.
ResponseMatrix contaminate(const ResponseMatrix& responses, const std::vector<Index>& rows,
                           double factor);

/// Row k holds B_hat(rows[k], :) - B_true(rows[k], :).
Matrix bias_matrix(const CoefficientMatrix& estimate, const CoefficientMatrix& truth,
                   const std::vector<Index>& rows);

struct ZeroRecovery
{
    double percent = 100.0;
    bool vacuous = false;  // no penalized row of the truth is zero
};

/// Share of truly-zero penalized rows whose estimated norm is at most tau.
ZeroRecovery pct_correct_zeros(const CoefficientMatrix& estimate, const CoefficientMatrix& truth,
                               double tau);

/// Reads an n x markers CSV of genotype codes in {-1, 0, 1}.
Matrix load_genotypes_csv(const std::string& path, bool header = false);

enum class Study
{
    kGenotype,
    kZeros,
};

struct StudyOptions
{
    int replicates = 1;
    /// Index of the first replicate; lets a caller run replicate r on its own.
    int first_replicate = 0;
    std::uint64_t seed = 0;
    AdaptiveFitOptions fit;
    SolverOptions solver;
    /// Genotype study: also fit the adaptive estimator on responses with
    /// `contaminated_rows` multiplied by `contamination_factor`.
    bool contaminate = false;
    std::vector<Index> contaminated_rows{9, 291};
    double contamination_factor = 100.0;
    GenotypeScenario genotype;
    std::vector<ZerosScenario> zeros = default_zeros_scenarios();
};

/// Long-format metric record: one value per (scenario, method, replicate, metric).
struct MetricRow
{
    std::string scenario_id;
    std::string method;
    int replicate = 0;
    std::string metric_name;
    double value = 0.0;
};

struct AggregateRow
{
    std::string scenario_id;
    std::string method;
    std::string metric_name;
    std::size_t count = 0;
    double mean = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

/// ||beta_j|| for every marker of one fit (genotype study).
struct MarkerProfileRow
{
    std::string scenario_id;
    std::string method;
    int replicate = 0;
    Index marker = 0;
    double norm = 0.0;
};

struct StudyResult
{
    std::vector<MetricRow> metrics;
    std::vector<AggregateRow> aggregates;
    std::vector<MarkerProfileRow> profiles;
};

inline constexpr const char* kNonAdaptive = "non_adaptive";
inline constexpr const char* kAdaptive = "adaptive";
inline constexpr const char* kAdaptiveContaminated = "adaptive_contaminated";

/// Metric name of bias entry (marker, outcome), both 1-based, e.g. "bias_m50_y1".
std::string bias_metric_name(Index marker, Index outcome);

/// Runs every scenario `replicates` times with both estimators. Replicate r of
/// scenario s draws its data from stream_seed(seed, s * 2^20 + r), so results
/// do not depend on execution order.
StudyResult run_study(Study study, const StudyOptions& options);

/// Mean and type-7 quartiles per (scenario, method, metric), in first-seen order.
std::vector<AggregateRow> aggregate(const std::vector<MetricRow>& metrics);

}  // namespace mladlasso::sim
