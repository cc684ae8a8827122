#include <benchmark/benchmark.h>

#include <random>

#include "mladlasso/lad_solver.hpp"
#include "mladlasso/lasso.hpp"
#include "mladlasso/model_select.hpp"

using namespace mladlasso;

namespace {

Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols)
{
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = normal(rng);
        }
    }
    return m;
}

struct Problem
{
    Matrix y;
    Matrix x;
};

Problem make_problem(Index n, Index q, Index p)
{
    std::mt19937_64 rng(static_cast<std::uint64_t>(n * 1000 + q * 10 + p));
    Problem prob{Matrix(), gaussian(rng, n, q)};
    prob.x.col(0).setOnes();
    Matrix b = Matrix::Zero(q, p);
    b.topRows(std::min<Index>(q, 4)).setConstant(1.0);
    prob.y = prob.x * b + gaussian(rng, n, p);
    return prob;
}

void BM_SolveLad(benchmark::State& state)
{
    const Problem prob = make_problem(state.range(0), state.range(1), state.range(2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_lad(prob.y, prob.x));
    }
}
BENCHMARK(BM_SolveLad)
    ->Args({100, 10, 2})
    ->Args({300, 50, 3})
    ->Args({300, 201, 3})
    ->Unit(benchmark::kMillisecond);

void BM_Augment(benchmark::State& state)
{
    const Problem prob = make_problem(state.range(0), state.range(1), 3);
    const ResponseMatrix y(prob.y);
    const DesignMatrix x(prob.x);
    const PenaltyWeights w = PenaltyWeights::ones(state.range(1) - 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(augment(y, x, 0.1, w));
    }
}
BENCHMARK(BM_Augment)->Args({300, 201})->Unit(benchmark::kMicrosecond);

void BM_FitLadLasso(benchmark::State& state)
{
    const Problem prob = make_problem(state.range(0), state.range(1), 3);
    const ResponseMatrix y(prob.y);
    const DesignMatrix x(prob.x);
    const PenaltyWeights w = PenaltyWeights::ones(state.range(1) - 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_lad_lasso(y, x, 0.05, w));
    }
}
BENCHMARK(BM_FitLadLasso)->Args({100, 10})->Args({300, 201})->Unit(benchmark::kMillisecond);

void BM_SelectLambda(benchmark::State& state)
{
    const Problem prob = make_problem(100, 10, 2);
    const ResponseMatrix y(prob.y);
    const DesignMatrix x(prob.x);
    const PenaltyWeights w = PenaltyWeights::ones(9);
    const std::vector<double> grid = default_lambda_grid(y, x, w, {}, 10);
    const Folds folds = make_folds(100, 5, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_lambda(y, x, grid, w, folds));
    }
}
BENCHMARK(BM_SelectLambda)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
