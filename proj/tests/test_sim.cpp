#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "mladlasso/sim.hpp"
#include "test_helpers.hpp"

using namespace mladlasso;
using namespace mladlasso::sim;

namespace {

// A genotype design small enough for unit tests.
GenotypeScenario small_genotype(std::uint64_t seed)
{
    GenotypeScenario s;
    s.n = 60;
    s.markers = 12;
    s.true_effects = {{3, Vector{{5.0, 5.0, 5.0}}}, {8, Vector{{0.0, 2.0, 4.0}}}};
    s.rng_seed = seed;
    return s;
}

}  // namespace

TEST_SUITE("sim")
{
    TEST_CASE("genotype codes follow Hardy-Weinberg frequencies")
    {
        GenotypeScenario s;
        s.n = 2000;
        s.markers = 50;
        s.true_effects = {};
        s.rng_seed = 3;
        const SimulatedData data = gen_genotype_study(s);
        const auto codes = data.design.values().rightCols(50).array();
        CHECK((codes == -1.0 || codes == 0.0 || codes == 1.0).all());
        const double total = 2000.0 * 50.0;
        CHECK(std::abs((codes == -1.0).cast<double>().sum() / total - 0.25) <= 0.02);
        CHECK(std::abs((codes == 0.0).cast<double>().sum() / total - 0.5) <= 0.02);
        CHECK(std::abs((codes == 1.0).cast<double>().sum() / total - 0.25) <= 0.02);
    }

    TEST_CASE("default genotype truth has the four QTL rows")
    {
        GenotypeScenario s;
        s.rng_seed = 1;
        const SimulatedData data = gen_genotype_study(s);
        CHECK(data.design.covariates() == 201);
        CHECK(data.responses.outcomes() == 3);
        const Matrix& b = data.truth.values();
        CHECK(b.row(50) == Matrix{{100.0, 100.0, 100.0}});
        CHECK(b.row(75) == Matrix{{0.0, 50.0, 100.0}});
        CHECK(b.row(100) == Matrix{{5.0, 10.0, 15.0}});
        CHECK(b.row(150) == Matrix{{3.0, 3.0, 3.0}});
        const Vector norms = row_group_norms(data.truth);
        CHECK((norms.array() > 0.0).count() == 4);
    }

    TEST_CASE("noiseless genotype responses equal X B exactly")
    {
        GenotypeScenario s = small_genotype(5);
        s.error_covariance = Matrix::Zero(3, 3);
        const SimulatedData data = gen_genotype_study(s);
        CHECK(data.responses.values() == data.design.values() * data.truth.values());
    }

    TEST_CASE("genotype scenario validation")
    {
        GenotypeScenario s = small_genotype(1);
        s.error_covariance = Matrix{{1.0, 2.0, 0.0}, {2.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
        CHECK_THROWS_AS(gen_genotype_study(s), InvalidArgument);
        s = small_genotype(1);
        s.true_effects[13] = Vector{{1.0, 1.0, 1.0}};
        CHECK_THROWS_AS(gen_genotype_study(s), InvalidArgument);
        s = small_genotype(1);
        s.genotypes = Matrix::Constant(60, 12, 2.0);
        CHECK_THROWS_AS(gen_genotype_study(s), InvalidArgument);
    }

    TEST_CASE("external genotypes are used verbatim")
    {
        GenotypeScenario s = small_genotype(1);
        Matrix codes = Matrix::Zero(60, 12);
        codes(4, 2) = 1.0;
        codes(7, 5) = -1.0;
        s.genotypes = codes;
        const SimulatedData data = gen_genotype_study(s);
        CHECK(data.design.values().rightCols(12) == codes);
    }

    TEST_CASE("zeros study without masking has covariate mean three")
    {
        ZerosScenario s;
        s.n = 200;
        s.q = 10;
        s.p_zeros = 0.0;
        s.rng_seed = 4;
        const SimulatedData data = gen_zeros_study(s);
        CHECK(std::abs(data.design.values().rightCols(10).mean() - 3.0) <= 0.1);
        CHECK((data.design.values().rightCols(10).array() != 0.0).all());
    }

    TEST_CASE("zeros study zero fraction")
    {
        ZerosScenario s;
        s.p_zeros = 0.4;
        s.rng_seed = 8;
        const SimulatedData data = gen_zeros_study(s);
        const double frac =
            (data.design.values().rightCols(10).array() == 0.0).cast<double>().mean();
        CHECK(std::abs(frac - 0.4) <= 0.05);
    }

    TEST_CASE("zeros study truth and uniform errors")
    {
        ZerosScenario s;
        s.rng_seed = 9;
        const SimulatedData data = gen_zeros_study(s);
        const Vector norms = row_group_norms(data.truth);
        CHECK(norms(0) == 0.0);
        CHECK((norms.segment(1, 3).array() > 0.0).all());
        CHECK(norms.tail(7).isZero(0.0));
        const Matrix residual = data.responses.values() - data.design.values() * data.truth.values();
        CHECK(residual.minCoeff() >= 0.0);
        CHECK(residual.maxCoeff() < 1.0);

        s.intercept_in_nonzero_rows = true;
        const Vector alt = row_group_norms(gen_zeros_study(s).truth);
        CHECK((alt.head(3).array() > 0.0).all());
        CHECK(alt.tail(8).isZero(0.0));
    }

    TEST_CASE("changing p_zeros keeps the surviving covariate values")
    {
        ZerosScenario a;
        a.p_zeros = 0.1;
        a.rng_seed = 12;
        ZerosScenario b = a;
        b.p_zeros = 0.3;
        const Matrix xa = gen_zeros_study(a).design.values();
        const Matrix xb = gen_zeros_study(b).design.values();
        int shared = 0;
        for (Index i = 0; i < xa.rows(); ++i) {
            for (Index j = 1; j < xa.cols(); ++j) {
                if (xa(i, j) != 0.0 && xb(i, j) != 0.0) {
                    CHECK(xa(i, j) == xb(i, j));
                    ++shared;
                }
                if (xb(i, j) != 0.0) {
                    CHECK(xa(i, j) != 0.0);
                }
            }
        }
        CHECK(shared > 500);
    }

    TEST_CASE("zeros scenario validation and ids")
    {
        ZerosScenario s;
        s.p_zeros = 1.5;
        CHECK_THROWS_AS(gen_zeros_study(s), InvalidArgument);

        const std::vector<ZerosScenario> all = default_zeros_scenarios();
        CHECK(all.size() == 16);
        std::set<std::string> ids;
        for (const auto& z : all) {
            ids.insert(z.id());
            CHECK(((z.n == 100 && z.q == 10) || (z.n == 25 && z.q == 50)));
        }
        CHECK(ids.size() == 16);
        CHECK(all.front().id() == "n100_q10_pz0.1_uniform");
    }

    TEST_CASE("generators are pure functions of the seed")
    {
        ZerosScenario z;
        z.error_kind = ErrorKind::kAsymmetricLaplace;
        z.rng_seed = 77;
        CHECK(gen_zeros_study(z).responses.values() == gen_zeros_study(z).responses.values());
        const GenotypeScenario g = small_genotype(77);
        CHECK(gen_genotype_study(g).responses.values() == gen_genotype_study(g).responses.values());
    }

    TEST_CASE("asymmetric Laplace moments")
    {
        const Matrix sigma = 0.5 * Matrix::Identity(2, 2);
        const Matrix centred = sample_asymmetric_laplace(Vector::Zero(2), sigma, 20000, 1);
        // Var = E[W] * 0.5 = 0.5 per coordinate.
        const double bound = 3.0 * std::sqrt(0.5 / 20000.0);
        CHECK(std::abs(centred.col(0).mean()) <= bound);
        CHECK(std::abs(centred.col(1).mean()) <= bound);

        const Matrix shifted = sample_asymmetric_laplace(Vector{{3.0, 6.0}}, sigma, 100000, 2);
        CHECK(std::abs(shifted.col(0).mean() - 3.0) <= 0.05);
        CHECK(std::abs(shifted.col(1).mean() - 6.0) <= 0.05);

        CHECK(sample_asymmetric_laplace(Vector{{3.0, 6.0}}, sigma, 10, 5) ==
              sample_asymmetric_laplace(Vector{{3.0, 6.0}}, sigma, 10, 5));
        CHECK_THROWS_AS(sample_asymmetric_laplace(Vector{{3.0, 6.0}}, -sigma, 10, 5),
                        InvalidArgument);
    }

    TEST_CASE("contaminate")
    {
        const ResponseMatrix y(Matrix{{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}});
        CHECK(contaminate(y, {0, 2}, 1.0).values() == y.values());
        CHECK(contaminate(y, {}, 100.0).values() == y.values());
        const Matrix dirty = contaminate(y, {0, 2}, 100.0).values();
        CHECK(dirty.row(0) == Matrix{{100.0, 200.0}});
        CHECK(dirty.row(1) == y.values().row(1));
        CHECK(dirty.row(2) == Matrix{{500.0, 600.0}});
        CHECK_THROWS_AS(contaminate(y, {3}, 2.0), InvalidArgument);
    }

    TEST_CASE("bias matrix")
    {
        std::mt19937_64 rng(5);
        const CoefficientMatrix b(testing::gaussian(rng, 5, 3));
        CHECK(bias_matrix(b, b, {0, 2, 4}).isZero(0.0));
        const Matrix single = bias_matrix(CoefficientMatrix(Matrix{{1.0, 1.0}}),
                                          CoefficientMatrix(Matrix{{2.0, 1.0}}), {0});
        CHECK(single == Matrix{{-1.0, 0.0}});
        CHECK_THROWS_AS(bias_matrix(b, b, {5}), DimensionError);
    }

    TEST_CASE("correct zero percentage")
    {
        Matrix truth = Matrix::Zero(11, 2);
        truth.row(1) << 1.0, 1.0;
        truth.row(2) << 1.0, 0.0;
        truth.row(3) << 0.0, 1.0;
        const CoefficientMatrix t(truth);
        CHECK(pct_correct_zeros(CoefficientMatrix::zeros(11, 2), t, 1e-6).percent == 100.0);
        CHECK(pct_correct_zeros(CoefficientMatrix(Matrix(truth + Matrix::Constant(11, 2, 5.0))), t,
                                1e-6)
                  .percent == 0.0);

        Matrix estimate = truth;
        estimate.row(4) << 0.3, 0.0;
        const ZeroRecovery six = pct_correct_zeros(CoefficientMatrix(estimate), t, 1e-6);
        CHECK(six.percent == doctest::Approx(600.0 / 7.0));
        CHECK_FALSE(six.vacuous);
        CHECK(pct_correct_zeros(CoefficientMatrix(estimate), t, 1.0).percent == 100.0);

        const ZeroRecovery none = pct_correct_zeros(t, CoefficientMatrix(Matrix::Ones(11, 2)), 1e-6);
        CHECK(none.vacuous);
        CHECK(none.percent == 100.0);
    }

    TEST_CASE("correct zero percentage never drops as tau grows")
    {
        std::mt19937_64 rng(19);
        Matrix truth = Matrix::Zero(20, 2);
        truth.topRows(4) = testing::gaussian(rng, 4, 2);
        const Matrix estimate = testing::gaussian(rng, 20, 2, 0.1);
        double previous = -1.0;
        for (const double tau : {1e-6, 1e-3, 0.01, 0.05, 0.1, 0.2, 1.0}) {
            const double pct =
                pct_correct_zeros(CoefficientMatrix(estimate), CoefficientMatrix(truth), tau).percent;
            CHECK(pct >= previous);
            previous = pct;
        }
    }

    TEST_CASE("genotype loader rejects non-genotype codes")
    {
        testing::TempDir dir("genotypes");
        const auto good = dir.path() / "good.csv";
        const auto bad = dir.path() / "bad.csv";
        std::ofstream(good) << "-1,0,1\n1,1,0\n";
        std::ofstream(bad) << "-1,0,2\n";
        CHECK(load_genotypes_csv(good.string()) == Matrix{{-1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}});
        CHECK_THROWS_AS(load_genotypes_csv(bad.string()), InvalidArgument);
    }

    TEST_CASE("single-replicate zeros study")
    {
        StudyOptions options;
        options.seed = 3;
        options.fit.grid_size = 6;
        ZerosScenario s;
        s.n = 40;
        s.q = 5;
        options.zeros = {s};
        const StudyResult result = run_study(Study::kZeros, options);
        std::set<std::string> methods;
        for (const auto& row : result.metrics) {
            CHECK(row.scenario_id == s.id());
            CHECK(row.replicate == 0);
            methods.insert(row.method);
        }
        CHECK(methods == std::set<std::string>{kNonAdaptive, kAdaptive});
        for (const auto& agg : result.aggregates) {
            CHECK(agg.count == 1);
            CHECK(agg.mean == agg.median);
        }
        const StudyResult again = run_study(Study::kZeros, options);
        REQUIRE(again.metrics.size() == result.metrics.size());
        for (std::size_t k = 0; k < result.metrics.size(); ++k) {
            CHECK(again.metrics[k].value == result.metrics[k].value);
        }
    }

    TEST_CASE("replicates do not depend on how the study is split")
    {
        StudyOptions options;
        options.seed = 4;
        options.fit.grid_size = 5;
        options.fit.max_outer_iterations = 2;
        ZerosScenario s;
        s.n = 30;
        s.q = 4;
        options.zeros = {s};
        options.replicates = 2;
        const StudyResult both = run_study(Study::kZeros, options);
        options.replicates = 1;
        options.first_replicate = 1;
        const StudyResult second = run_study(Study::kZeros, options);
        std::vector<double> tail;
        for (const auto& row : both.metrics) {
            if (row.replicate == 1) {
                tail.push_back(row.value);
            }
        }
        REQUIRE(tail.size() == second.metrics.size());
        for (std::size_t k = 0; k < tail.size(); ++k) {
            CHECK(tail[k] == second.metrics[k].value);
        }
    }

    TEST_CASE("genotype study emits bias entries and marker profiles")
    {
        StudyOptions options;
        options.seed = 2;
        options.fit.grid_size = 6;
        options.fit.max_outer_iterations = 3;
        options.genotype = small_genotype(0);
        options.contaminate = true;
        options.contaminated_rows = {9, 40};
        const StudyResult result = run_study(Study::kGenotype, options);

        std::set<std::string> bias_names;
        for (const auto& row : result.metrics) {
            if (row.metric_name.rfind("bias_", 0) == 0 && row.method == kAdaptive) {
                bias_names.insert(row.metric_name);
            }
        }
        CHECK(bias_names.size() == 6);
        CHECK(bias_names.count(bias_metric_name(3, 1)) == 1);
        CHECK(bias_names.count(bias_metric_name(8, 3)) == 1);
        CHECK(bias_metric_name(50, 1) == "bias_m50_y1");

        std::size_t per_method[3] = {0, 0, 0};
        for (const auto& p : result.profiles) {
            CHECK(p.marker >= 1);
            CHECK(p.marker <= 12);
            per_method[p.method == std::string(kNonAdaptive)  ? 0
                       : p.method == std::string(kAdaptive) ? 1
                                                            : 2]++;
        }
        CHECK(per_method[0] == 12);
        CHECK(per_method[1] == 12);
        CHECK(per_method[2] == 12);
    }
}
