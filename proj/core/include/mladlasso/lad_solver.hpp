#pragma once

#include <optional>
#include <vector>

#include "mladlasso/core.hpp"

namespace mladlasso {

struct SolverOptions
{
    double smoothing_epsilon = 1e-8;
    int max_iterations = 500;
    /// Stop when ||B_new - B||_F / ||B||_F falls below this.
    double tolerance = 1e-8;
    std::optional<Matrix> initial_coefficients;
    /// Squared extrapolation between IRLS steps, accepted only on descent.
    bool accelerate = true;

    void validate() const;
};

struct SolverDiagnostics
{
    int iterations = 0;
    bool converged = false;
    /// Smoothed objective at the starting point followed by one entry per iteration.
    std::vector<double> objective_trace;
};

struct LadSolution
{
    CoefficientMatrix coefficients;
    SolverDiagnostics diagnostics;
};

/// Smoothed multioutcome LAD objective (1/m) sum_i sqrt(||y_i - B' x_i||^2 + eps^2).
double smoothed_lad_objective(const Matrix& responses, const Matrix& design,
                              const Matrix& coefficients, double epsilon);

/// Minimizes (1/m) sum_i ||y_i - B' x_i|| over B for arbitrary stacked data
/// (rows of `design` need not carry an intercept).
///
/// Iteratively reweighted least squares on the smoothed objective: each step
/// solves the weighted normal equations with observation weights
/// 1 / sqrt(||r_i||^2 + eps^2). Rows with a single nonzero design entry (the
/// pseudo-observations produced by augmentation) are folded into the Gram
/// diagonal directly; all-zero rows contribute only a constant.
///
/// Running out of iterations is reported through `converged == false`.
/// Throws SingularSystemError if the weighted normal equations lose rank.
LadSolution solve_lad(const Matrix& responses, const Matrix& design,
                      const SolverOptions& options = {});

}  // namespace mladlasso
