#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/QR>

#include "mladlasso/core.hpp"
#include "test_helpers.hpp"

using namespace mladlasso;

TEST_SUITE("core")
{
    TEST_CASE("row_group_norms examples")
    {
        Matrix b(3, 3);
        b << 0, 0, 0,
             100, 100, 100,
             3, 4, 0;
        const Vector norms = row_group_norms(CoefficientMatrix(b));
        CHECK(norms(0) == 0.0);
        CHECK(norms(1) == doctest::Approx(173.2050808).epsilon(1e-9));
        CHECK(norms(2) == doctest::Approx(5.0));

        const Vector single = row_group_norms(CoefficientMatrix(Matrix{{3.0, 4.0}}));
        REQUIRE(single.size() == 1);
        CHECK(single(0) == 5.0);
    }

    TEST_CASE("row_group_norms is invariant to orthogonal rotation of outcomes")
    {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 20; ++t) {
            const Matrix b = testing::gaussian(rng, 6, 4, 3.0);
            const Eigen::HouseholderQR<Eigen::MatrixXd> qr(testing::gaussian(rng, 4, 4));
            const Eigen::MatrixXd q = qr.householderQ();
            const Vector before = row_group_norms(CoefficientMatrix(b));
            const Vector after = row_group_norms(CoefficientMatrix(Matrix(b * q)));
            CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }

    TEST_CASE("lad_loss examples")
    {
        const DesignMatrix one(Matrix{{1.0}});
        CHECK(lad_loss(ResponseMatrix(Matrix{{1.0, 0.0}}), one, CoefficientMatrix::zeros(1, 2)) ==
              1.0);

        const DesignMatrix two(Matrix{{1.0}, {1.0}});
        CHECK(lad_loss(ResponseMatrix(Matrix{{3.0, 4.0}, {0.0, 0.0}}), two,
                       CoefficientMatrix::zeros(1, 2)) == 2.5);

        std::mt19937_64 rng(3);
        const Matrix x = testing::design_with_intercept(rng, 8, 3);
        const Matrix b = testing::gaussian(rng, 3, 2);
        CHECK(lad_loss(ResponseMatrix(Matrix(x * b)), DesignMatrix(x), CoefficientMatrix(b)) <=
              1e-14);
    }

    TEST_CASE("lad_loss reports the mismatched axis")
    {
        const ResponseMatrix y(Matrix::Zero(3, 2));
        const DesignMatrix x(Matrix::Ones(4, 1));
        try {
            lad_loss(y, x, CoefficientMatrix::zeros(1, 2));
            FAIL("expected DimensionError");
        } catch (const DimensionError& e) {
            CHECK(e.axis() == "observations");
        }
        const DesignMatrix x3(Matrix::Ones(3, 1));
        try {
            lad_loss(y, x3, CoefficientMatrix::zeros(2, 2));
            FAIL("expected DimensionError");
        } catch (const DimensionError& e) {
            CHECK(e.axis() == "covariates");
        }
        try {
            lad_loss(y, x3, CoefficientMatrix::zeros(1, 3));
            FAIL("expected DimensionError");
        } catch (const DimensionError& e) {
            CHECK(e.axis() == "outcomes");
        }
    }

    TEST_CASE("lad_loss satisfies the per-observation triangle inequality")
    {
        std::mt19937_64 rng(5);
        const Matrix x = testing::design_with_intercept(rng, 10, 3);
        const Matrix y = testing::gaussian(rng, 10, 2);
        const Matrix b1 = testing::gaussian(rng, 3, 2);
        const Matrix b2 = testing::gaussian(rng, 3, 2);
        for (Index i = 0; i < 10; ++i) {
            const double direct = (y.row(i) - x.row(i) * (b1 + b2)).norm();
            const double split =
                (y.row(i) - x.row(i) * b1).norm() + (x.row(i) * b2).norm();
            CHECK(direct <= split + 1e-12);
        }
    }

    TEST_CASE("penalized_objective examples")
    {
        const ResponseMatrix y(Matrix{{0.0}});
        const DesignMatrix x(Matrix{{1.0, 1.0}});
        const CoefficientMatrix b(Matrix{{0.0}, {2.0}});
        CHECK(penalized_objective(y, x, b, 0.5, PenaltyWeights(Vector{{3.0}})) ==
              doctest::Approx(5.0).epsilon(1e-15));

        std::mt19937_64 rng(17);
        const Matrix xr = testing::design_with_intercept(rng, 12, 4);
        const ResponseMatrix yr(testing::gaussian(rng, 12, 3));
        const CoefficientMatrix br(testing::gaussian(rng, 4, 3));
        const PenaltyWeights w(Vector{{0.5, 2.0, 7.0}});
        CHECK(penalized_objective(yr, DesignMatrix(xr), br, 0.0, w) ==
              lad_loss(yr, DesignMatrix(xr), br));

        double mean_norm = 0.0;
        for (Index i = 0; i < 12; ++i) {
            mean_norm += yr.values().row(i).norm();
        }
        mean_norm /= 12.0;
        CHECK(penalized_objective(yr, DesignMatrix(xr), CoefficientMatrix::zeros(4, 3), 3.0, w) ==
              doctest::Approx(mean_norm).epsilon(1e-14));
    }

    TEST_CASE("penalized_objective rejects bad lambda and weights")
    {
        const ResponseMatrix y(Matrix{{0.0}});
        const DesignMatrix x(Matrix{{1.0, 1.0}});
        const CoefficientMatrix b(Matrix{{0.0}, {2.0}});
        CHECK_THROWS_AS(penalized_objective(y, x, b, -0.1, PenaltyWeights::ones(1)),
                        InvalidArgument);
        CHECK_THROWS_AS(penalized_objective(y, x, b, 0.1, PenaltyWeights::ones(2)),
                        DimensionError);
    }

    TEST_CASE("penalized_objective is convex in B")
    {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            const Matrix x = testing::design_with_intercept(rng, 15, 5);
            const ResponseMatrix y(testing::gaussian(rng, 15, 2));
            const DesignMatrix design(x);
            const Matrix b1 = testing::gaussian(rng, 5, 2, 2.0);
            const Matrix b2 = testing::gaussian(rng, 5, 2, 2.0);
            Vector w(4);
            for (Index j = 0; j < 4; ++j) {
                w(j) = 0.1 + unit(rng);
            }
            const PenaltyWeights weights(w);
            const double lambda = unit(rng);
            const double t = unit(rng);
            const double mixed = penalized_objective(
                y, design, CoefficientMatrix(Matrix(t * b1 + (1 - t) * b2)), lambda, weights);
            const double chord =
                t * penalized_objective(y, design, CoefficientMatrix(b1), lambda, weights) +
                (1 - t) * penalized_objective(y, design, CoefficientMatrix(b2), lambda, weights);
            CHECK(mixed <= chord + 1e-12);
        }
    }

    TEST_CASE("domain types validate their invariants")
    {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(ResponseMatrix(Matrix(0, 2)), InvalidArgument);
        CHECK_THROWS_AS(ResponseMatrix(Matrix{{1.0, nan}}), InvalidArgument);
        CHECK_THROWS_AS(DesignMatrix(Matrix{{2.0, 1.0}}), InvalidArgument);
        CHECK_THROWS_AS(DesignMatrix(Matrix{{1.0, std::numeric_limits<double>::infinity()}}),
                        InvalidArgument);
        CHECK_THROWS_AS(PenaltyWeights(Vector{{1.0, 0.0}}), InvalidArgument);
        CHECK_THROWS_AS(PenaltyWeights(Vector{{1.0, -2.0}}), InvalidArgument);
        CHECK_THROWS_AS(CoefficientMatrix(Matrix{{nan}}), InvalidArgument);
    }

    TEST_CASE("design intercept policy")
    {
        const Matrix raw{{2.0, 5.0}, {3.0, 6.0}};
        const DesignMatrix added(raw, InterceptPolicy::kPrependIfAbsent);
        CHECK(added.intercept_added());
        REQUIRE(added.covariates() == 3);
        CHECK(added.values().col(0).isOnes());
        CHECK(added.values().rightCols(2) == raw);

        const Matrix with{{1.0, 5.0}, {1.0, 6.0}};
        const DesignMatrix kept(with, InterceptPolicy::kPrependIfAbsent);
        CHECK_FALSE(kept.intercept_added());
        CHECK(kept.values() == with);
    }
}
