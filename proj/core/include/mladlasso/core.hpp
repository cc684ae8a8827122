#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mladlasso {

// Observation-major dense storage: row i is observation i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised when operands are not conformable. `axis()` names the offending axis.
class DimensionError : public std::invalid_argument
{
public:
    DimensionError(std::string axis, const std::string& what)
        : std::invalid_argument(what), axis_(std::move(axis)) {}

    const std::string& axis() const noexcept { return axis_; }

private:
    std::string axis_;
};

class InvalidArgument : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Normal equations of an IRLS step lost rank. `iteration()` is 0 for the
/// least-squares initialization step.
class SingularSystemError : public std::runtime_error
{
public:
    SingularSystemError(int iteration, const std::string& what)
        : std::runtime_error(what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// n x p matrix of observed outcomes.
class ResponseMatrix
{
public:
    explicit ResponseMatrix(Matrix values);

    const Matrix& values() const noexcept { return values_; }
    Index observations() const noexcept { return values_.rows(); }
    Index outcomes() const noexcept { return values_.cols(); }

private:
    Matrix values_;
};

enum class InterceptPolicy
{
    kRequire,          // column 0 must already be all ones
    kPrependIfAbsent,  // prepend a ones column unless column 0 already is one
};

/// n x q design matrix whose column 0 is the unpenalized intercept.
class DesignMatrix
{
public:
    explicit DesignMatrix(Matrix values, InterceptPolicy policy = InterceptPolicy::kRequire);

    const Matrix& values() const noexcept { return values_; }
    Index observations() const noexcept { return values_.rows(); }
    Index covariates() const noexcept { return values_.cols(); }
    bool intercept_added() const noexcept { return intercept_added_; }

private:
    Matrix values_;
    bool intercept_added_ = false;
};

/// q x p coefficient matrix; row j is the coefficient group of covariate j.
class CoefficientMatrix
{
public:
    CoefficientMatrix() = default;
    explicit CoefficientMatrix(Matrix values);

    static CoefficientMatrix zeros(Index covariates, Index outcomes);

    const Matrix& values() const noexcept { return values_; }
    Index covariates() const noexcept { return values_.rows(); }
    Index outcomes() const noexcept { return values_.cols(); }

private:
    Matrix values_;
};

/// Positive weights for the penalized rows 1..q-1 (0-based); element k
/// belongs to coefficient row k + 1.
class PenaltyWeights
{
public:
    PenaltyWeights() = default;
    explicit PenaltyWeights(Vector weights);

    static PenaltyWeights ones(Index penalized_rows);

    const Vector& values() const noexcept { return weights_; }
    Index size() const noexcept { return weights_.size(); }
    double for_row(Index row) const { return weights_(row - 1); }

private:
    Vector weights_;
};

struct FitResult
{
    CoefficientMatrix coefficients;
    double lambda = 0.0;
    Vector group_norms;
    std::vector<Index> support;  // 0-based rows, intercept (0) always present
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
};

/// Euclidean norm of each coefficient row.
Vector row_group_norms(const CoefficientMatrix& coefficients);

/// (1/n) sum_i ||y_i - B' x_i||.
double lad_loss(const ResponseMatrix& responses, const DesignMatrix& design,
                const CoefficientMatrix& coefficients);

/// Same loss on raw stacked data, e.g. an augmented problem whose design has
/// no intercept column in the pseudo-observation rows.
double lad_loss(const Matrix& responses, const Matrix& design, const Matrix& coefficients);

/// lad_loss + lambda * sum_{j >= 1} w_j ||beta_j||.
double penalized_objective(const ResponseMatrix& responses, const DesignMatrix& design,
                           const CoefficientMatrix& coefficients, double lambda,
                           const PenaltyWeights& weights);

/// Shared conformability check; throws DimensionError naming the axis.
void check_conformable(const Matrix& responses, const Matrix& design, const Matrix& coefficients);

}  // namespace mladlasso
