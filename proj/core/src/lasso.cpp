#include "mladlasso/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mladlasso {

namespace {

// Start the lambda_max search slightly above the KKT bound: right at the
// bound the smoothed IRLS shrinks the last active row only very slowly.
constexpr double kLambdaMaxMargin = 1.05;
constexpr int kMaxDoublings = 60;

void check_penalty_inputs(const ResponseMatrix& responses, const DesignMatrix& design,
                          double lambda, const PenaltyWeights& weights)
{
    if (design.observations() != responses.observations()) {
        throw DimensionError("observations", "design has " +
                                                 std::to_string(design.observations()) +
                                                 " rows but responses have " +
                                                 std::to_string(responses.observations()));
    }
    if (weights.size() != design.covariates() - 1) {
        throw DimensionError("weights", "expected " + std::to_string(design.covariates() - 1) +
                                            " penalty weights, got " +
                                            std::to_string(weights.size()));
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be finite and non-negative");
    }
}

SolverOptions cold_start(const SolverOptions& solver)
{
    SolverOptions copy = solver;
    copy.initial_coefficients.reset();
    return copy;
}

double max_penalized_norm(const Vector& norms)
{
    return norms.size() > 1 ? norms.tail(norms.size() - 1).maxCoeff() : 0.0;
}

double relative_frobenius_change(const Matrix& next, const Matrix& previous)
{
    const double base = previous.norm();
    const double delta = (next - previous).norm();
    return base > 0.0 ? delta / base : delta;
}

// KKT bound: the largest weighted norm of the loss subgradient at B = 0 with
// the intercept at the spatial median.
double kkt_lambda_bound(const ResponseMatrix& responses, const DesignMatrix& design,
                        const PenaltyWeights& weights, const SolverOptions& solver)
{
    const Matrix& y = responses.values();
    const Matrix& x = design.values();
    const Index n = y.rows();
    const Matrix ones = Matrix::Ones(n, 1);
    const LadSolution centre = solve_lad(y, ones, cold_start(solver));

    Matrix directions = y.rowwise() - centre.coefficients.values().row(0);
    for (Index i = 0; i < n; ++i) {
        const double norm = directions.row(i).norm();
        if (norm > 0.0) {
            directions.row(i) /= norm;
        }
    }
    const Matrix gradient = x.transpose() * directions / static_cast<double>(n);
    double bound = 0.0;
    for (Index j = 1; j < x.cols(); ++j) {
        bound = std::max(bound, gradient.row(j).norm() / weights.for_row(j));
    }
    return bound;
}

SelectionStep select_and_fit(const ResponseMatrix& responses, const DesignMatrix& design,
                             const std::vector<double>& grid, const PenaltyWeights& weights,
                             const AdaptiveFitOptions& options, const SolverOptions& solver,
                             std::uint64_t stream)
{
    SelectionStep step;
    double lambda = grid.front();
    if (grid.size() > 1) {
        const Folds folds = make_folds(responses.observations(), options.folds,
                                       stream_seed(options.rng_seed, stream));
        step.cv = select_lambda(responses, design, grid, weights, folds, solver);
        lambda = step.cv.selected_lambda;
    }
    step.fit = fit_lad_lasso(responses, design, lambda, weights, solver,
                             options.support_threshold);
    return step;
}

}  // namespace

void AdaptiveFitOptions::validate(Index observations) const
{
    if (!lambda_grid.empty()) {
        validate_lambda_grid(lambda_grid);
    } else if (grid_size < 1 || !(grid_min_ratio > 0.0 && grid_min_ratio <= 1.0)) {
        throw InvalidArgument("automatic grid needs grid_size >= 1 and grid_min_ratio in (0, 1]");
    }
    const bool cross_validates = lambda_grid.empty() ? grid_size > 1 : lambda_grid.size() > 1;
    if (cross_validates && (folds < 2 || folds > observations)) {
        throw InvalidArgument("folds must lie in [2, n]; got " + std::to_string(folds) +
                              " with n = " + std::to_string(observations));
    }
    if (max_outer_iterations < 0) {
        throw InvalidArgument("max_outer_iterations must be non-negative");
    }
    if (!(outer_tolerance > 0.0)) {
        throw InvalidArgument("outer_tolerance must be positive");
    }
    if (!(support_threshold > 0.0)) {
        throw InvalidArgument("support_threshold must be positive");
    }
}

AugmentedData augment(const ResponseMatrix& responses, const DesignMatrix& design, double lambda,
                      const PenaltyWeights& weights)
{
    check_penalty_inputs(responses, design, lambda, weights);
    const Index n = responses.observations();
    const Index q = design.covariates();
    const Index p = responses.outcomes();

    AugmentedData out;
    out.responses = Matrix::Zero(n + q - 1, p);
    out.design = Matrix::Zero(n + q - 1, q);
    out.responses.topRows(n) = responses.values();
    out.design.topRows(n) = design.values();
    const double scale = static_cast<double>(n) * lambda;
    for (Index j = 1; j < q; ++j) {
        out.design(n + j - 1, j) = scale * weights.for_row(j);
    }
    return out;
}

FitResult fit_lad_lasso(const ResponseMatrix& responses, const DesignMatrix& design,
                        double lambda, const PenaltyWeights& weights, const SolverOptions& solver,
                        double support_threshold)
{
    const AugmentedData data = augment(responses, design, lambda, weights);
    LadSolution solution = solve_lad(data.responses, data.design, solver);

    FitResult fit;
    fit.coefficients = std::move(solution.coefficients);
    fit.lambda = lambda;
    fit.group_norms = row_group_norms(fit.coefficients);
    fit.support = support(fit.coefficients, support_threshold);
    fit.iterations = solution.diagnostics.iterations;
    fit.converged = solution.diagnostics.converged;
    fit.objective = penalized_objective(responses, design, fit.coefficients, lambda, weights);
    return fit;
}

PenaltyWeights adaptive_weights(const CoefficientMatrix& coefficients, Index observations)
{
    if (observations < 1) {
        throw InvalidArgument("adaptive_weights: n must be at least 1");
    }
    const Vector norms = row_group_norms(coefficients);
    const double ridge = 1.0 / static_cast<double>(observations);
    Vector weights(std::max<Index>(norms.size() - 1, 0));
    for (Index j = 1; j < norms.size(); ++j) {
        weights(j - 1) = 1.0 / (norms(j) + ridge);
    }
    return PenaltyWeights(std::move(weights));
}

std::vector<Index> support(const CoefficientMatrix& coefficients, double tau)
{
    if (!(tau > 0.0)) {
        throw InvalidArgument("support threshold must be positive");
    }
    const Vector norms = row_group_norms(coefficients);
    std::vector<Index> rows{0};
    for (Index j = 1; j < norms.size(); ++j) {
        if (norms(j) > tau) {
            rows.push_back(j);
        }
    }
    return rows;
}

double lambda_max(const ResponseMatrix& responses, const DesignMatrix& design,
                  const PenaltyWeights& weights, const SolverOptions& solver, double tau)
{
    check_penalty_inputs(responses, design, 0.0, weights);
    if (design.covariates() < 2) {
        return 0.0;
    }
    const SolverOptions cold = cold_start(solver);
    const double bound = kkt_lambda_bound(responses, design, weights, cold);
    double lambda = bound > 0.0 ? kLambdaMaxMargin * bound : 0.0;
    for (int attempt = 0; attempt <= kMaxDoublings; ++attempt) {
        const FitResult fit = fit_lad_lasso(responses, design, lambda, weights, cold, tau);
        if (max_penalized_norm(fit.group_norms) <= tau) {
            return lambda;
        }
        lambda = lambda > 0.0 ? 2.0 * lambda : std::numeric_limits<double>::min();
    }
    throw InvalidArgument("lambda_max: penalized rows did not vanish after doubling search");
}

std::vector<double> default_lambda_grid(const ResponseMatrix& responses,
                                        const DesignMatrix& design,
                                        const PenaltyWeights& weights,
                                        const SolverOptions& solver, std::size_t count,
                                        double min_ratio, double tau)
{
    if (count < 1 || !(min_ratio > 0.0 && min_ratio <= 1.0)) {
        throw InvalidArgument("lambda grid needs count >= 1 and min_ratio in (0, 1]");
    }
    const double top = lambda_max(responses, design, weights, solver, tau);
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = top;
        return grid;
    }
    const double log_step = std::log(min_ratio) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        // k = 0 is the smallest value
        grid[k] = top * std::exp(log_step * static_cast<double>(count - 1 - k));
    }
    grid.back() = top;
    return grid;
}

AdaptiveFit fit_adaptive(const ResponseMatrix& responses, const DesignMatrix& design,
                         const AdaptiveFitOptions& options, const SolverOptions& solver_options)
{
    const Index n = responses.observations();
    options.validate(n);
    if (design.observations() != n) {
        throw DimensionError("observations", "design and responses differ in row count");
    }
    const SolverOptions solver = cold_start(solver_options);

    AdaptiveFit out;
    const PenaltyWeights unit = PenaltyWeights::ones(design.covariates() - 1);
    out.initial_grid = options.lambda_grid.empty()
                           ? default_lambda_grid(responses, design, unit, solver,
                                                 options.grid_size, options.grid_min_ratio,
                                                 options.support_threshold)
                           : options.lambda_grid;

    out.steps.push_back(
        select_and_fit(responses, design, out.initial_grid, unit, options, solver, 0));
    out.initial = out.steps.back().fit;
    out.result = out.initial;
    out.weights = unit;
    if (options.max_outer_iterations == 0) {
        return out;
    }

    PenaltyWeights weights = adaptive_weights(out.initial.coefficients, n);
    out.adaptive_grid = options.lambda_grid.empty()
                            ? default_lambda_grid(responses, design, weights, solver,
                                                  options.grid_size, options.grid_min_ratio,
                                                  options.support_threshold)
                            : options.lambda_grid;

    for (int pass = 1; pass <= options.max_outer_iterations; ++pass) {
        SelectionStep step = select_and_fit(responses, design, out.adaptive_grid, weights,
                                            options, solver, static_cast<std::uint64_t>(pass));
        const double change = relative_frobenius_change(step.fit.coefficients.values(),
                                                        out.result.coefficients.values());
        out.outer_changes.push_back(change);
        out.outer_iterations = pass;
        out.result = step.fit;
        out.weights = weights;
        out.steps.push_back(std::move(step));
        weights = adaptive_weights(out.result.coefficients, n);
        if (change < options.outer_tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace mladlasso
