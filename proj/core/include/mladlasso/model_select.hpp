#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mladlasso/core.hpp"
#include "mladlasso/lad_solver.hpp"

namespace mladlasso {

/// Partition of observation indices (0-based); each fold is sorted ascending.
using Folds = std::vector<std::vector<Index>>;

struct CvResult
{
    std::vector<double> lambda_grid;
    std::vector<double> mean_scores;
    Matrix fold_scores;  // folds x grid
    double selected_lambda = 0.0;
    std::size_t selected_index = 0;
};

/// Observer invoked once per fold with the training and held-out row indices
/// actually used.
using FoldObserver = std::function<void(std::size_t fold, std::span<const Index> training,
                                        std::span<const Index> held_out)>;

/// Independent 64-bit seed for sub-stream `stream` of a base seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Random partition of 0..n-1 into k folds with sizes differing by at most one.
/// Deterministic in (n, k, seed).
Folds make_folds(Index n, Index k, std::uint64_t seed);

/// Complement of fold `fold` within 0..n-1, ascending.
std::vector<Index> training_rows(Index n, const Folds& folds, std::size_t fold);

/// Mean over folds of the held-out multivariate LAD loss of a LAD-lasso fit on
/// the remaining rows.
double cv_score(const ResponseMatrix& responses, const DesignMatrix& design, double lambda,
                const PenaltyWeights& weights, const Folds& folds,
                const SolverOptions& solver = {}, const FoldObserver& observer = {});

/// Scores every grid value on the same folds and picks the minimizer of the
/// mean score; ties go to the smallest index. Every fit starts from the
/// least-squares solution of its training rows.
CvResult select_lambda(const ResponseMatrix& responses, const DesignMatrix& design,
                       const std::vector<double>& lambda_grid, const PenaltyWeights& weights,
                       const Folds& folds, const SolverOptions& solver = {});

/// Throws unless the grid is nonempty, ascending and non-negative.
void validate_lambda_grid(const std::vector<double>& lambda_grid);

}  // namespace mladlasso
