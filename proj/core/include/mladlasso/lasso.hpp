#pragma once

#include <cstdint>
#include <vector>

#include "mladlasso/core.hpp"
#include "mladlasso/lad_solver.hpp"
#include "mladlasso/model_select.hpp"

namespace mladlasso {

inline constexpr double kDefaultSupportThreshold = 1e-6;

/// Pseudo-observation form of a penalized problem: the original n rows
/// followed by q - 1 rows (0, n * lambda * w_j * e_j), j = 1..q-1.
struct AugmentedData
{
    Matrix responses;  // (n + q - 1) x p
    Matrix design;     // (n + q - 1) x q
};

struct AdaptiveFitOptions
{
    /// Ascending, non-negative. Empty selects the automatic log-spaced grid,
    /// built once for the non-adaptive step and once for the adaptive steps.
    std::vector<double> lambda_grid;
    std::size_t grid_size = 30;
    double grid_min_ratio = 1e-4;
    Index folds = 5;
    int max_outer_iterations = 20;
    double outer_tolerance = 1e-6;
    double support_threshold = kDefaultSupportThreshold;
    std::uint64_t rng_seed = 0;

    void validate(Index observations) const;
};

/// One pass of cross-validated selection plus the refit on all rows.
struct SelectionStep
{
    CvResult cv;  // empty when the grid had a single value
    FitResult fit;
};

struct AdaptiveFit
{
    FitResult result;           // final adaptive estimate (or the initial one if no outer steps)
    FitResult initial;          // non-adaptive LAD-lasso estimate with CV-selected lambda
    PenaltyWeights weights;     // weights used for `result`
    std::vector<SelectionStep> steps;  // steps[0] is the initial fit, then one per outer pass
    std::vector<double> outer_changes;
    int outer_iterations = 0;
    bool converged = false;
    std::vector<double> initial_grid;
    std::vector<double> adaptive_grid;
};

AugmentedData augment(const ResponseMatrix& responses, const DesignMatrix& design, double lambda,
                      const PenaltyWeights& weights);

/// Minimizes the (weighted) LAD-lasso objective by solving the augmented
/// LAD problem. `objective` in the result is the unsmoothed penalized objective.
FitResult fit_lad_lasso(const ResponseMatrix& responses, const DesignMatrix& design,
                        double lambda, const PenaltyWeights& weights,
                        const SolverOptions& solver = {},
                        double support_threshold = kDefaultSupportThreshold);

/// w_j = 1 / (||beta_j|| + 1/n) for rows j >= 1.
PenaltyWeights adaptive_weights(const CoefficientMatrix& coefficients, Index observations);

/// Row 0 plus every penalized row whose norm exceeds tau.
std::vector<Index> support(const CoefficientMatrix& coefficients, double tau);

/// Smallest lambda (found by doubling from the KKT bound) at which every
/// penalized row norm of the fit is at most `tau`.
double lambda_max(const ResponseMatrix& responses, const DesignMatrix& design,
                  const PenaltyWeights& weights, const SolverOptions& solver = {},
                  double tau = kDefaultSupportThreshold);

/// `count` log-spaced values on [lambda_max * min_ratio, lambda_max], ascending.
std::vector<double> default_lambda_grid(const ResponseMatrix& responses,
                                        const DesignMatrix& design,
                                        const PenaltyWeights& weights,
                                        const SolverOptions& solver = {},
                                        std::size_t count = 30, double min_ratio = 1e-4,
                                        double tau = kDefaultSupportThreshold);

/// Iterative adaptive LAD-lasso: non-adaptive CV fit, weights from it, then
/// alternate CV refits and weight updates until the relative Frobenius change
/// of B drops below `outer_tolerance` or `max_outer_iterations` passes run.
AdaptiveFit fit_adaptive(const ResponseMatrix& responses, const DesignMatrix& design,
                         const AdaptiveFitOptions& options, const SolverOptions& solver = {});

}  // namespace mladlasso
