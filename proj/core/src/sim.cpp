#include "mladlasso/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>

#include "mladlasso/csv.hpp"
#include "mladlasso/model_select.hpp"

namespace mladlasso::sim {

namespace {

// Sub-streams of one scenario seed.
enum Stream : std::uint64_t
{
    kGenotypeStream = 1,
    kErrorStream = 2,
    kMaskStream = 3,
    kValueStream = 4,
    kCoefficientStream = 5,
    kFitStream = 6,
};

constexpr std::uint64_t kReplicateStride = std::uint64_t{1} << 20;

// Lower Cholesky factor of an SPD matrix; empty optional if not SPD.
std::optional<Matrix> cholesky_factor(const Matrix& sigma)
{
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1 || !sigma.allFinite()) {
        return std::nullopt;
    }
    if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
        return std::nullopt;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        return std::nullopt;
    }
    return Matrix(llt.matrixL());
}

Matrix correlated_normals(const Matrix& lower, Index count, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(count, lower.rows());
    for (Index i = 0; i < z.rows(); ++i) {
        for (Index k = 0; k < z.cols(); ++k) {
            z(i, k) = normal(rng);
        }
    }
    return z * lower.transpose();
}

// R type-7 quantile of a sorted sample.
double quantile(const std::vector<double>& sorted, double prob)
{
    if (sorted.size() == 1) {
        return sorted.front();
    }
    const double h = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void add_metric(StudyResult& out, const std::string& scenario, const char* method, int replicate,
                std::string name, double value)
{
    out.metrics.push_back({scenario, method, replicate, std::move(name), value});
}

void add_fit_metrics(StudyResult& out, const std::string& scenario, const char* method,
                     int replicate, const FitResult& fit)
{
    add_metric(out, scenario, method, replicate, "selected_lambda", fit.lambda);
    add_metric(out, scenario, method, replicate, "support_size",
               static_cast<double>(fit.support.size() - 1));
}

void add_genotype_fit(StudyResult& out, const std::string& scenario, const char* method,
                      int replicate, const FitResult& fit, const SimulatedData& data,
                      const std::vector<Index>& qtl_rows)
{
    add_fit_metrics(out, scenario, method, replicate, fit);
    const Matrix bias = bias_matrix(fit.coefficients, data.truth, qtl_rows);
    for (Index r = 0; r < bias.rows(); ++r) {
        for (Index c = 0; c < bias.cols(); ++c) {
            add_metric(out, scenario, method, replicate,
                       bias_metric_name(qtl_rows[static_cast<std::size_t>(r)], c + 1), bias(r, c));
        }
    }
    for (Index j = 1; j < fit.group_norms.size(); ++j) {
        out.profiles.push_back({scenario, method, replicate, j, fit.group_norms(j)});
    }
}

void run_genotype(const StudyOptions& options, StudyResult& out)
{
    const std::string scenario = "genotype_n" + std::to_string(options.genotype.n) + "_m" +
                                 std::to_string(options.genotype.markers);
    std::vector<Index> qtl_rows;
    for (const auto& [marker, effect] : options.genotype.true_effects) {
        qtl_rows.push_back(marker);
    }

    const int last = options.first_replicate + options.replicates;
    for (int rep = options.first_replicate; rep < last; ++rep) {
        const std::uint64_t rep_seed = stream_seed(options.seed, static_cast<std::uint64_t>(rep));
        GenotypeScenario scenario_cfg = options.genotype;
        scenario_cfg.rng_seed = rep_seed;
        const SimulatedData data = gen_genotype_study(scenario_cfg);

        AdaptiveFitOptions fit_options = options.fit;
        fit_options.rng_seed = stream_seed(rep_seed, kFitStream);
        const AdaptiveFit fit = fit_adaptive(data.responses, data.design, fit_options,
                                             options.solver);
        add_genotype_fit(out, scenario, kNonAdaptive, rep, fit.initial, data, qtl_rows);
        add_genotype_fit(out, scenario, kAdaptive, rep, fit.result, data, qtl_rows);
        add_metric(out, scenario, kAdaptive, rep, "outer_iterations",
                   static_cast<double>(fit.outer_iterations));

        if (options.contaminate) {
            const ResponseMatrix dirty = contaminate(data.responses, options.contaminated_rows,
                                                     options.contamination_factor);
            const AdaptiveFit dirty_fit = fit_adaptive(dirty, data.design, fit_options,
                                                       options.solver);
            add_genotype_fit(out, scenario, kAdaptiveContaminated, rep, dirty_fit.result, data,
                             qtl_rows);
            add_metric(out, scenario, kAdaptiveContaminated, rep, "outer_iterations",
                       static_cast<double>(dirty_fit.outer_iterations));
        }
    }
}

void run_zeros(const StudyOptions& options, StudyResult& out)
{
    for (std::size_t s = 0; s < options.zeros.size(); ++s) {
        const std::string scenario = options.zeros[s].id();
        const int last = options.first_replicate + options.replicates;
        for (int rep = options.first_replicate; rep < last; ++rep) {
            const std::uint64_t rep_seed =
                stream_seed(options.seed, s * kReplicateStride + static_cast<std::uint64_t>(rep));
            ZerosScenario scenario_cfg = options.zeros[s];
            scenario_cfg.rng_seed = rep_seed;
            const SimulatedData data = gen_zeros_study(scenario_cfg);

            AdaptiveFitOptions fit_options = options.fit;
            fit_options.rng_seed = stream_seed(rep_seed, kFitStream);
            const AdaptiveFit fit = fit_adaptive(data.responses, data.design, fit_options,
                                                 options.solver);
            const double tau = fit_options.support_threshold;
            const std::pair<const char*, const FitResult*> methods[] = {
                {kNonAdaptive, &fit.initial}, {kAdaptive, &fit.result}};
            for (const auto& [method, result] : methods) {
                const ZeroRecovery zeros = pct_correct_zeros(result->coefficients, data.truth, tau);
                add_metric(out, scenario, method, rep, "pct_correct_zeros", zeros.percent);
                add_fit_metrics(out, scenario, method, rep, *result);
            }
            add_metric(out, scenario, kAdaptive, rep, "outer_iterations",
                       static_cast<double>(fit.outer_iterations));
        }
    }
}

}  // namespace

EffectMap default_qtl_effects()
{
    EffectMap effects;
    effects[50] = Vector{{100.0, 100.0, 100.0}};
    effects[75] = Vector{{0.0, 50.0, 100.0}};
    effects[100] = Vector{{5.0, 10.0, 15.0}};
    effects[150] = Vector{{3.0, 3.0, 3.0}};
    return effects;
}

Matrix default_trait_covariance()
{
    Matrix sigma(3, 3);
    sigma << 1.0, 0.5, 0.3,
             0.5, 1.0, 0.2,
             0.3, 0.2, 1.0;
    return sigma;
}

std::string ZerosScenario::id() const
{
    return "n" + std::to_string(n) + "_q" + std::to_string(q) + "_pz" + io::format_double(p_zeros) +
           (error_kind == ErrorKind::kUniform ? "_uniform" : "_alaplace");
}

std::vector<ZerosScenario> default_zeros_scenarios()
{
    std::vector<ZerosScenario> scenarios;
    for (const auto& [n, q] : {std::pair<Index, Index>{100, 10}, {25, 50}}) {
        for (const ErrorKind kind : {ErrorKind::kUniform, ErrorKind::kAsymmetricLaplace}) {
            for (const double p : {0.1, 0.2, 0.3, 0.4}) {
                ZerosScenario s;
                s.n = n;
                s.q = q;
                s.p_zeros = p;
                s.error_kind = kind;
                scenarios.push_back(s);
            }
        }
    }
    return scenarios;
}

SimulatedData gen_genotype_study(const GenotypeScenario& scenario)
{
    if (scenario.n < 1 || scenario.markers < 1) {
        throw InvalidArgument("genotype scenario needs n >= 1 and at least one marker");
    }
    const Index n = scenario.n;
    const Index markers = scenario.markers;
    Index outcomes = 0;
    for (const auto& [marker, effect] : scenario.true_effects) {
        if (marker < 1 || marker > markers) {
            throw InvalidArgument("true effect on marker " + std::to_string(marker) +
                                  " outside 1.." + std::to_string(markers));
        }
        if (outcomes == 0) {
            outcomes = effect.size();
        } else if (effect.size() != outcomes) {
            throw DimensionError("outcomes", "true effect vectors differ in length");
        }
    }
    if (outcomes == 0) {
        outcomes = scenario.error_covariance.rows();
    }
    if (scenario.error_covariance.rows() != outcomes) {
        throw DimensionError("outcomes", "error covariance must be " + std::to_string(outcomes) +
                                             " x " + std::to_string(outcomes));
    }
    const bool noiseless = scenario.error_covariance.squaredNorm() == 0.0 &&
                           scenario.error_covariance.cols() == outcomes;
    std::optional<Matrix> lower;
    if (!noiseless) {
        lower = cholesky_factor(scenario.error_covariance);
        if (!lower) {
            throw InvalidArgument("error covariance is not symmetric positive definite");
        }
    }

    Matrix design(n, markers + 1);
    design.col(0).setOnes();
    if (scenario.genotypes) {
        const Matrix& codes = *scenario.genotypes;
        if (codes.rows() != n || codes.cols() != markers) {
            throw DimensionError("genotypes", "supplied genotypes must be " + std::to_string(n) +
                                                  " x " + std::to_string(markers));
        }
        if (!(codes.array() == -1.0 || codes.array() == 0.0 || codes.array() == 1.0).all()) {
            throw InvalidArgument("genotype codes must be -1, 0 or 1");
        }
        design.rightCols(markers) = codes;
    } else {
        // Hardy-Weinberg with allele frequency 1/2: (11, 12, 22) with prob (1/4, 1/2, 1/4).
        std::mt19937_64 rng(stream_seed(scenario.rng_seed, kGenotypeStream));
        std::uniform_int_distribution<int> allele(0, 1);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 1; j <= markers; ++j) {
                design(i, j) = static_cast<double>(allele(rng) + allele(rng) - 1);
            }
        }
    }

    Matrix truth = Matrix::Zero(markers + 1, outcomes);
    for (const auto& [marker, effect] : scenario.true_effects) {
        truth.row(marker) = effect.transpose();
    }

    Matrix responses = design * truth;
    if (!noiseless) {
        std::mt19937_64 rng(stream_seed(scenario.rng_seed, kErrorStream));
        responses += correlated_normals(*lower, n, rng);
    }
    return {ResponseMatrix(std::move(responses)), DesignMatrix(std::move(design)),
            CoefficientMatrix(std::move(truth))};
}

SimulatedData gen_zeros_study(const ZerosScenario& scenario)
{
    if (!(scenario.p_zeros >= 0.0 && scenario.p_zeros <= 1.0)) {
        throw InvalidArgument("p_zeros must lie in [0, 1]");
    }
    if (scenario.n < 1 || scenario.q < 1) {
        throw InvalidArgument("zeros scenario needs n >= 1 and q >= 1");
    }
    const Index n = scenario.n;
    const Index q = scenario.q;
    constexpr Index outcomes = 2;

    // Mask and values come from separate streams: p_zeros only decides which
    // of the (always drawn) values survive.
    std::mt19937_64 mask_rng(stream_seed(scenario.rng_seed, kMaskStream));
    std::mt19937_64 value_rng(stream_seed(scenario.rng_seed, kValueStream));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> covariate(3.0, 1.0);

    Matrix design(n, q + 1);
    design.col(0).setOnes();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 1; j <= q; ++j) {
            const double u = unif(mask_rng);
            const double x = covariate(value_rng);
            design(i, j) = u > scenario.p_zeros ? x : 0.0;
        }
    }

    std::mt19937_64 coef_rng(stream_seed(scenario.rng_seed, kCoefficientStream));
    std::normal_distribution<double> standard(0.0, 1.0);
    Matrix truth = Matrix::Zero(q + 1, outcomes);
    const Index first = scenario.intercept_in_nonzero_rows ? 0 : 1;
    for (Index j = first; j < std::min<Index>(first + 3, q + 1); ++j) {
        for (Index k = 0; k < outcomes; ++k) {
            truth(j, k) = standard(coef_rng);
        }
    }

    std::mt19937_64 error_rng(stream_seed(scenario.rng_seed, kErrorStream));
    Matrix errors(n, outcomes);
    if (scenario.error_kind == ErrorKind::kUniform) {
        for (Index i = 0; i < n; ++i) {
            for (Index k = 0; k < outcomes; ++k) {
                errors(i, k) = unif(error_rng);
            }
        }
    } else {
        const Vector mu{{3.0, 6.0}};
        const Matrix sigma = 0.5 * Matrix::Identity(outcomes, outcomes);
        errors = sample_asymmetric_laplace(mu, sigma, n, error_rng);
    }

    Matrix responses = design * truth + errors;
    return {ResponseMatrix(std::move(responses)), DesignMatrix(std::move(design)),
            CoefficientMatrix(std::move(truth))};
}

Matrix sample_asymmetric_laplace(const Vector& mu, const Matrix& sigma, Index count,
                                 std::mt19937_64& rng)
{
    if (sigma.rows() != mu.size()) {
        throw DimensionError("outcomes", "location vector and scale matrix differ in dimension");
    }
    const std::optional<Matrix> lower = cholesky_factor(sigma);
    if (!lower) {
        throw InvalidArgument("asymmetric Laplace scale matrix is not symmetric positive definite");
    }
    std::exponential_distribution<double> exponential(1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Index p = mu.size();
    Matrix out(count, p);
    Vector z(p);
    for (Index i = 0; i < count; ++i) {
        const double w = exponential(rng);
        for (Index k = 0; k < p; ++k) {
            z(k) = normal(rng);
        }
        out.row(i) = (mu * w + std::sqrt(w) * (*lower) * z).transpose();
    }
    return out;
}

Matrix sample_asymmetric_laplace(const Vector& mu, const Matrix& sigma, Index count,
                                 std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return sample_asymmetric_laplace(mu, sigma, count, rng);
}

ResponseMatrix contaminate(const ResponseMatrix& responses, const std::vector<Index>& rows,
                           double factor)
{
    Matrix values = responses.values();
    for (const Index i : rows) {
        if (i < 0 || i >= values.rows()) {
            throw InvalidArgument("contaminate: row " + std::to_string(i) + " outside 0.." +
                                  std::to_string(values.rows() - 1));
        }
    }
    for (const Index i : rows) {
        values.row(i) *= factor;
    }
    return ResponseMatrix(std::move(values));
}

Matrix bias_matrix(const CoefficientMatrix& estimate, const CoefficientMatrix& truth,
                   const std::vector<Index>& rows)
{
    if (estimate.covariates() != truth.covariates() || estimate.outcomes() != truth.outcomes()) {
        throw DimensionError("coefficients", "estimate and truth differ in shape");
    }
    Matrix out(static_cast<Index>(rows.size()), truth.outcomes());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Index j = rows[k];
        if (j < 0 || j >= truth.covariates()) {
            throw DimensionError("rows", "bias row " + std::to_string(j) + " out of range");
        }
        out.row(static_cast<Index>(k)) = estimate.values().row(j) - truth.values().row(j);
    }
    return out;
}

ZeroRecovery pct_correct_zeros(const CoefficientMatrix& estimate, const CoefficientMatrix& truth,
                               double tau)
{
    if (!(tau > 0.0)) {
        throw InvalidArgument("pct_correct_zeros: tau must be positive");
    }
    if (estimate.covariates() != truth.covariates() || estimate.outcomes() != truth.outcomes()) {
        throw DimensionError("coefficients", "estimate and truth differ in shape");
    }
    const Vector true_norms = row_group_norms(truth);
    const Vector est_norms = row_group_norms(estimate);
    std::size_t zeros = 0;
    std::size_t found = 0;
    for (Index j = 1; j < true_norms.size(); ++j) {
        if (true_norms(j) == 0.0) {
            ++zeros;
            found += est_norms(j) <= tau ? 1 : 0;
        }
    }
    if (zeros == 0) {
        return {100.0, true};
    }
    return {100.0 * static_cast<double>(found) / static_cast<double>(zeros), false};
}

Matrix load_genotypes_csv(const std::string& path, bool header)
{
    Matrix codes = io::read_matrix_csv(path, header);
    if (!(codes.array() == -1.0 || codes.array() == 0.0 || codes.array() == 1.0).all()) {
        throw InvalidArgument(path + ": genotype codes must be -1, 0 or 1");
    }
    return codes;
}

std::string bias_metric_name(Index marker, Index outcome)
{
    return "bias_m" + std::to_string(marker) + "_y" + std::to_string(outcome);
}

std::vector<AggregateRow> aggregate(const std::vector<MetricRow>& metrics)
{
    using Key = std::tuple<std::string, std::string, std::string>;
    std::map<Key, std::size_t> slot;
    std::vector<Key> order;
    std::vector<std::vector<double>> samples;
    for (const MetricRow& row : metrics) {
        Key key{row.scenario_id, row.method, row.metric_name};
        auto [it, inserted] = slot.try_emplace(key, order.size());
        if (inserted) {
            order.push_back(key);
            samples.emplace_back();
        }
        samples[it->second].push_back(row.value);
    }

    std::vector<AggregateRow> out;
    out.reserve(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::vector<double>& values = samples[k];
        double sum = 0.0;
        for (const double v : values) {
            sum += v;
        }
        std::sort(values.begin(), values.end());
        AggregateRow row;
        std::tie(row.scenario_id, row.method, row.metric_name) = order[k];
        row.count = values.size();
        row.mean = sum / static_cast<double>(values.size());
        row.q1 = quantile(values, 0.25);
        row.median = quantile(values, 0.5);
        row.q3 = quantile(values, 0.75);
        out.push_back(std::move(row));
    }
    return out;
}

StudyResult run_study(Study study, const StudyOptions& options)
{
    if (options.replicates < 1 || options.first_replicate < 0) {
        throw InvalidArgument("run_study: need replicates >= 1 and first_replicate >= 0");
    }
    StudyResult out;
    if (study == Study::kGenotype) {
        run_genotype(options, out);
    } else {
        run_zeros(options, out);
    }
    out.aggregates = aggregate(out.metrics);
    return out;
}

}  // namespace mladlasso::sim
