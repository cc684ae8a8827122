#include "mladlasso/core.hpp"

#include <cmath>
#include <string>

namespace mladlasso {

namespace {

void require_finite(const Matrix& values, const char* what)
{
    if (!values.allFinite()) {
        throw InvalidArgument(std::string(what) + " contains non-finite entries");
    }
}

std::string mismatch(const char* axis, Index expected, Index got)
{
    return std::string(axis) + " mismatch: expected " + std::to_string(expected) + ", got " +
           std::to_string(got);
}

}  // namespace

ResponseMatrix::ResponseMatrix(Matrix values) : values_(std::move(values))
{
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw InvalidArgument("response matrix must have at least one row and one column");
    }
    require_finite(values_, "response matrix");
}

DesignMatrix::DesignMatrix(Matrix values, InterceptPolicy policy) : values_(std::move(values))
{
    if (values_.rows() < 1) {
        throw InvalidArgument("design matrix must have at least one row");
    }
    require_finite(values_, "design matrix");

    const bool has_intercept = values_.cols() >= 1 && (values_.col(0).array() == 1.0).all();
    if (has_intercept) {
        return;
    }
    if (policy == InterceptPolicy::kRequire) {
        throw InvalidArgument("design matrix column 1 must be the all-ones intercept column");
    }
    Matrix with_ones(values_.rows(), values_.cols() + 1);
    with_ones.col(0).setOnes();
    with_ones.rightCols(values_.cols()) = values_;
    values_ = std::move(with_ones);
    intercept_added_ = true;
}

CoefficientMatrix::CoefficientMatrix(Matrix values) : values_(std::move(values))
{
    require_finite(values_, "coefficient matrix");
}

CoefficientMatrix CoefficientMatrix::zeros(Index covariates, Index outcomes)
{
    return CoefficientMatrix(Matrix::Zero(covariates, outcomes));
}

PenaltyWeights::PenaltyWeights(Vector weights) : weights_(std::move(weights))
{
    for (Index k = 0; k < weights_.size(); ++k) {
        if (!std::isfinite(weights_(k)) || weights_(k) <= 0.0) {
            throw InvalidArgument("penalty weight for row " + std::to_string(k + 1) +
                                  " must be finite and strictly positive");
        }
    }
}

PenaltyWeights PenaltyWeights::ones(Index penalized_rows)
{
    return PenaltyWeights(Vector::Ones(penalized_rows));
}

void check_conformable(const Matrix& responses, const Matrix& design, const Matrix& coefficients)
{
    if (design.rows() != responses.rows()) {
        throw DimensionError("observations", mismatch("observations (rows of X vs rows of Y)",
                                                      responses.rows(), design.rows()));
    }
    if (coefficients.rows() != design.cols()) {
        throw DimensionError("covariates", mismatch("covariates (rows of B vs columns of X)",
                                                    design.cols(), coefficients.rows()));
    }
    if (coefficients.cols() != responses.cols()) {
        throw DimensionError("outcomes", mismatch("outcomes (columns of B vs columns of Y)",
                                                  responses.cols(), coefficients.cols()));
    }
}

Vector row_group_norms(const CoefficientMatrix& coefficients)
{
    return coefficients.values().rowwise().norm();
}

double lad_loss(const Matrix& responses, const Matrix& design, const Matrix& coefficients)
{
    check_conformable(responses, design, coefficients);
    if (responses.rows() == 0) {
        return 0.0;
    }
    const Matrix residuals = responses - design * coefficients;
    return residuals.rowwise().norm().sum() / static_cast<double>(responses.rows());
}

double lad_loss(const ResponseMatrix& responses, const DesignMatrix& design,
                const CoefficientMatrix& coefficients)
{
    return lad_loss(responses.values(), design.values(), coefficients.values());
}

double penalized_objective(const ResponseMatrix& responses, const DesignMatrix& design,
                           const CoefficientMatrix& coefficients, double lambda,
                           const PenaltyWeights& weights)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be finite and non-negative");
    }
    if (weights.size() != design.covariates() - 1) {
        throw DimensionError("weights", mismatch("penalty weights (q - 1)",
                                                 design.covariates() - 1, weights.size()));
    }
    const double loss = lad_loss(responses, design, coefficients);
    if (lambda == 0.0) {
        return loss;
    }
    const Vector norms = row_group_norms(coefficients);
    double penalty = 0.0;
    for (Index j = 1; j < norms.size(); ++j) {
        penalty += weights.for_row(j) * norms(j);
    }
    return loss + lambda * penalty;
}

}  // namespace mladlasso
