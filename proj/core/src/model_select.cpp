#include "mladlasso/model_select.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mladlasso/lasso.hpp"

namespace mladlasso {

namespace {

Matrix gather_rows(const Matrix& source, std::span<const Index> rows)
{
    Matrix out(static_cast<Index>(rows.size()), source.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out.row(static_cast<Index>(k)) = source.row(rows[k]);
    }
    return out;
}

void validate_folds(const Folds& folds, Index n)
{
    if (folds.size() < 2) {
        throw InvalidArgument("cross-validation needs at least two folds");
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (std::size_t f = 0; f < folds.size(); ++f) {
        if (folds[f].empty()) {
            throw InvalidArgument("fold " + std::to_string(f) + " is empty");
        }
        for (const Index i : folds[f]) {
            if (i < 0 || i >= n) {
                throw InvalidArgument("fold " + std::to_string(f) + " holds out-of-range row " +
                                      std::to_string(i));
            }
            if (seen[static_cast<std::size_t>(i)]++) {
                throw InvalidArgument("row " + std::to_string(i) + " appears in more than one fold");
            }
        }
    }
}

struct FoldData
{
    std::vector<Index> training;
    ResponseMatrix train_y;
    DesignMatrix train_x;
    Matrix test_y;
    Matrix test_x;
};

FoldData split(const ResponseMatrix& responses, const DesignMatrix& design, const Folds& folds,
               std::size_t fold)
{
    const Index n = responses.observations();
    std::vector<Index> training = training_rows(n, folds, fold);
    if (training.size() < 2) {
        throw InvalidArgument("fold " + std::to_string(fold) +
                              " leaves fewer than two training rows");
    }
    ResponseMatrix train_y(gather_rows(responses.values(), training));
    DesignMatrix train_x(gather_rows(design.values(), training));
    Matrix test_y = gather_rows(responses.values(), folds[fold]);
    Matrix test_x = gather_rows(design.values(), folds[fold]);
    return {std::move(training), std::move(train_y), std::move(train_x), std::move(test_y),
            std::move(test_x)};
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

Folds make_folds(Index n, Index k, std::uint64_t seed)
{
    if (k < 2 || k > n) {
        throw InvalidArgument("number of folds must lie in [2, n]; got k = " + std::to_string(k) +
                              ", n = " + std::to_string(n));
    }
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    Folds folds(static_cast<std::size_t>(k));
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        folds[pos % folds.size()].push_back(order[pos]);
    }
    for (auto& fold : folds) {
        std::sort(fold.begin(), fold.end());
    }
    return folds;
}

std::vector<Index> training_rows(Index n, const Folds& folds, std::size_t fold)
{
    std::vector<char> held(static_cast<std::size_t>(n), 0);
    for (const Index i : folds.at(fold)) {
        held[static_cast<std::size_t>(i)] = 1;
    }
    std::vector<Index> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        if (!held[static_cast<std::size_t>(i)]) {
            rows.push_back(i);
        }
    }
    return rows;
}

void validate_lambda_grid(const std::vector<double>& lambda_grid)
{
    if (lambda_grid.empty()) {
        throw InvalidArgument("lambda grid is empty");
    }
    for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
        if (!(lambda_grid[k] >= 0.0) || !std::isfinite(lambda_grid[k])) {
            throw InvalidArgument("lambda grid values must be finite and non-negative");
        }
        if (k > 0 && lambda_grid[k] < lambda_grid[k - 1]) {
            throw InvalidArgument("lambda grid must be sorted ascending");
        }
    }
}

double cv_score(const ResponseMatrix& responses, const DesignMatrix& design, double lambda,
                const PenaltyWeights& weights, const Folds& folds, const SolverOptions& solver,
                const FoldObserver& observer)
{
    validate_folds(folds, responses.observations());
    SolverOptions cold = solver;
    cold.initial_coefficients.reset();

    double total = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const FoldData data = split(responses, design, folds, f);
        if (observer) {
            observer(f, data.training, folds[f]);
        }
        const FitResult fit = fit_lad_lasso(data.train_y, data.train_x, lambda, weights, cold);
        total += lad_loss(data.test_y, data.test_x, fit.coefficients.values());
    }
    return total / static_cast<double>(folds.size());
}

CvResult select_lambda(const ResponseMatrix& responses, const DesignMatrix& design,
                       const std::vector<double>& lambda_grid, const PenaltyWeights& weights,
                       const Folds& folds, const SolverOptions& solver)
{
    validate_lambda_grid(lambda_grid);
    validate_folds(folds, responses.observations());

    const auto grid_size = static_cast<Index>(lambda_grid.size());
    CvResult result;
    result.lambda_grid = lambda_grid;
    result.fold_scores = Matrix::Zero(static_cast<Index>(folds.size()), grid_size);

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const FoldData data = split(responses, design, folds, f);
        SolverOptions cold = solver;
        cold.initial_coefficients.reset();
        for (Index g = 0; g < grid_size; ++g) {
            const FitResult fit = fit_lad_lasso(data.train_y, data.train_x,
                                                lambda_grid[static_cast<std::size_t>(g)], weights,
                                                cold);
            result.fold_scores(static_cast<Index>(f), g) =
                lad_loss(data.test_y, data.test_x, fit.coefficients.values());
        }
    }

    result.mean_scores.resize(lambda_grid.size());
    for (Index g = 0; g < grid_size; ++g) {
        double sum = 0.0;
        for (Index f = 0; f < result.fold_scores.rows(); ++f) {
            sum += result.fold_scores(f, g);
        }
        result.mean_scores[static_cast<std::size_t>(g)] =
            sum / static_cast<double>(result.fold_scores.rows());
    }
    for (std::size_t g = 1; g < result.mean_scores.size(); ++g) {
        if (result.mean_scores[g] < result.mean_scores[result.selected_index]) {
            result.selected_index = g;
        }
    }
    result.selected_lambda = lambda_grid[result.selected_index];
    return result;
}

}  // namespace mladlasso
