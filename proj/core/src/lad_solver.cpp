#include "mladlasso/lad_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mladlasso {

namespace {

using ColMatrix = Eigen::MatrixXd;

// Pivot ratio below which the Jacobi-scaled Gram matrix is treated as singular.
double singular_ratio(Index covariates)
{
    return 8.0 * static_cast<double>(std::max<Index>(covariates, 1)) *
           std::numeric_limits<double>::epsilon();
}

struct AxisRow
{
    Index row;
    Index column;
    double value;
};

// Rows of the stacked problem split by sparsity pattern.
struct RowPartition
{
    std::vector<Index> dense;
    std::vector<AxisRow> axis;
    Index empty = 0;
};

RowPartition partition_rows(const Matrix& design)
{
    RowPartition parts;
    for (Index i = 0; i < design.rows(); ++i) {
        Index nonzeros = 0;
        Index last = 0;
        for (Index j = 0; j < design.cols(); ++j) {
            if (design(i, j) != 0.0) {
                ++nonzeros;
                last = j;
            }
        }
        if (nonzeros == 0) {
            ++parts.empty;
        } else if (nonzeros == 1) {
            parts.axis.push_back({i, last, design(i, last)});
        } else {
            parts.dense.push_back(i);
        }
    }
    return parts;
}

// Solves G B = rhs for symmetric positive semidefinite G by Cholesky after
// Jacobi scaling. Returns false when a pivot is negligible or the
// factorization breaks down.
bool solve_normal_equations(const ColMatrix& gram, const ColMatrix& rhs, ColMatrix& out)
{
    const Index q = gram.rows();
    Vector scale(q);
    for (Index j = 0; j < q; ++j) {
        const double d = gram(j, j);
        if (!(d > 0.0) || !std::isfinite(d)) {
            return false;
        }
        scale(j) = 1.0 / std::sqrt(d);
    }
    const ColMatrix scaled = scale.asDiagonal() * gram * scale.asDiagonal();
    Eigen::LLT<ColMatrix> llt(scaled);
    if (llt.info() != Eigen::Success) {
        return false;
    }
    const Vector pivots = llt.matrixLLT().diagonal().cwiseAbs2();
    if (!(pivots.minCoeff() > pivots.maxCoeff() * singular_ratio(q))) {
        return false;
    }
    out = scale.asDiagonal() * llt.solve(scale.asDiagonal() * rhs);
    return out.allFinite();
}

class IrlsProblem
{
public:
    IrlsProblem(const Matrix& responses, const Matrix& design, double epsilon)
        : parts_(partition_rows(design)), epsilon_(epsilon), rows_(design.rows()),
          covariates_(design.cols()), outcomes_(responses.cols())
    {
        const auto dense_count = static_cast<Index>(parts_.dense.size());
        dense_design_.resize(dense_count, covariates_);
        dense_responses_.resize(dense_count, outcomes_);
        for (Index k = 0; k < dense_count; ++k) {
            dense_design_.row(k) = design.row(parts_.dense[static_cast<std::size_t>(k)]);
            dense_responses_.row(k) = responses.row(parts_.dense[static_cast<std::size_t>(k)]);
        }
        axis_responses_.resize(static_cast<Index>(parts_.axis.size()), outcomes_);
        for (std::size_t k = 0; k < parts_.axis.size(); ++k) {
            axis_responses_.row(static_cast<Index>(k)) = responses.row(parts_.axis[k].row);
        }
    }

    Index covariates() const { return covariates_; }
    Index outcomes() const { return outcomes_; }

    double objective(const ColMatrix& coefficients) const
    {
        const double eps2 = epsilon_ * epsilon_;
        double total = 0.0;
        if (dense_design_.rows() > 0) {
            const ColMatrix residuals = dense_responses_ - dense_design_ * coefficients;
            for (Index i = 0; i < residuals.rows(); ++i) {
                total += std::sqrt(residuals.row(i).squaredNorm() + eps2);
            }
        }
        for (std::size_t k = 0; k < parts_.axis.size(); ++k) {
            const AxisRow& a = parts_.axis[k];
            total += std::sqrt(
                (axis_responses_.row(static_cast<Index>(k)) - a.value * coefficients.row(a.column))
                    .squaredNorm() +
                eps2);
        }
        total += static_cast<double>(parts_.empty) * epsilon_;
        return total / static_cast<double>(rows_);
    }

    // Unweighted least squares; false if X'X is singular.
    bool least_squares(ColMatrix& out) const
    {
        Vector unit_dense = Vector::Ones(dense_design_.rows());
        Vector unit_axis = Vector::Ones(static_cast<Index>(parts_.axis.size()));
        return weighted_solve(unit_dense, unit_axis, out);
    }

    // One IRLS step from `current`; false if the weighted system is singular.
    bool step(const ColMatrix& current, ColMatrix& out) const
    {
        const double eps2 = epsilon_ * epsilon_;
        Vector dense_weights(dense_design_.rows());
        if (dense_design_.rows() > 0) {
            const ColMatrix residuals = dense_responses_ - dense_design_ * current;
            for (Index i = 0; i < residuals.rows(); ++i) {
                dense_weights(i) = 1.0 / std::sqrt(residuals.row(i).squaredNorm() + eps2);
            }
        }
        Vector axis_weights(static_cast<Index>(parts_.axis.size()));
        for (std::size_t k = 0; k < parts_.axis.size(); ++k) {
            const AxisRow& a = parts_.axis[k];
            axis_weights(static_cast<Index>(k)) =
                1.0 / std::sqrt((axis_responses_.row(static_cast<Index>(k)) -
                                 a.value * current.row(a.column))
                                    .squaredNorm() +
                                eps2);
        }
        return weighted_solve(dense_weights, axis_weights, out);
    }

private:
    bool weighted_solve(const Vector& dense_weights, const Vector& axis_weights,
                        ColMatrix& out) const
    {
        ColMatrix gram = ColMatrix::Zero(covariates_, covariates_);
        ColMatrix rhs = ColMatrix::Zero(covariates_, outcomes_);
        if (dense_design_.rows() > 0) {
            const ColMatrix root_weighted =
                dense_weights.cwiseSqrt().asDiagonal() * dense_design_;
            gram.selfadjointView<Eigen::Lower>().rankUpdate(root_weighted.transpose());
            gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
            rhs.noalias() = dense_design_.transpose() * (dense_weights.asDiagonal() * dense_responses_);
        }
        for (std::size_t k = 0; k < parts_.axis.size(); ++k) {
            const AxisRow& a = parts_.axis[k];
            const double w = axis_weights(static_cast<Index>(k));
            gram(a.column, a.column) += w * a.value * a.value;
            rhs.row(a.column) += (w * a.value) * axis_responses_.row(static_cast<Index>(k));
        }
        if (solve_normal_equations(gram, rhs, out)) {
            return true;
        }
        return solve_by_qr(dense_weights, axis_weights, gram.diagonal(), out);
    }

    // Least squares on the root-weighted rows themselves. Slower than the
    // normal equations but loses only half the digits on ill-conditioned steps.
    bool solve_by_qr(const Vector& dense_weights, const Vector& axis_weights,
                     const Vector& gram_diagonal, ColMatrix& out) const
    {
        Vector scale(covariates_);
        for (Index j = 0; j < covariates_; ++j) {
            const double d = gram_diagonal(j);
            if (!(d > 0.0) || !std::isfinite(d)) {
                return false;
            }
            scale(j) = 1.0 / std::sqrt(d);
        }
        const Index dense_count = dense_design_.rows();
        const auto axis_count = static_cast<Index>(parts_.axis.size());
        ColMatrix a = ColMatrix::Zero(dense_count + axis_count, covariates_);
        ColMatrix b(dense_count + axis_count, outcomes_);
        if (dense_count > 0) {
            const Vector root = dense_weights.cwiseSqrt();
            a.topRows(dense_count) = root.asDiagonal() * dense_design_ * scale.asDiagonal();
            b.topRows(dense_count) = root.asDiagonal() * dense_responses_;
        }
        for (Index k = 0; k < axis_count; ++k) {
            const AxisRow& r = parts_.axis[static_cast<std::size_t>(k)];
            const double root = std::sqrt(axis_weights(k));
            a(dense_count + k, r.column) = root * r.value * scale(r.column);
            b.row(dense_count + k) = root * axis_responses_.row(k);
        }
        Eigen::ColPivHouseholderQR<ColMatrix> qr(a);
        qr.setThreshold(singular_ratio(covariates_));
        if (qr.rank() < covariates_) {
            return false;
        }
        out = scale.asDiagonal() * qr.solve(b);
        return out.allFinite();
    }

    RowPartition parts_;
    double epsilon_;
    Index rows_;
    Index covariates_;
    Index outcomes_;
    ColMatrix dense_design_;
    ColMatrix dense_responses_;
    ColMatrix axis_responses_;
};

double relative_change(const ColMatrix& next, const ColMatrix& current)
{
    const double base = current.norm();
    const double delta = (next - current).norm();
    return base > 0.0 ? delta / base : delta;
}

}  // namespace

void SolverOptions::validate() const
{
    if (!(smoothing_epsilon > 0.0) || !std::isfinite(smoothing_epsilon)) {
        throw InvalidArgument("smoothing_epsilon must be positive");
    }
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
        throw InvalidArgument("tolerance must be positive");
    }
    if (max_iterations < 1) {
        throw InvalidArgument("max_iterations must be at least 1");
    }
}

double smoothed_lad_objective(const Matrix& responses, const Matrix& design,
                              const Matrix& coefficients, double epsilon)
{
    check_conformable(responses, design, coefficients);
    const Matrix residuals = responses - design * coefficients;
    double total = 0.0;
    for (Index i = 0; i < residuals.rows(); ++i) {
        total += std::sqrt(residuals.row(i).squaredNorm() + epsilon * epsilon);
    }
    return total / static_cast<double>(residuals.rows());
}

LadSolution solve_lad(const Matrix& responses, const Matrix& design, const SolverOptions& options)
{
    options.validate();
    if (design.rows() != responses.rows()) {
        throw DimensionError("observations", "solve_lad: design has " +
                                                 std::to_string(design.rows()) +
                                                 " rows but responses have " +
                                                 std::to_string(responses.rows()));
    }
    if (responses.rows() < 1 || responses.cols() < 1 || design.cols() < 1) {
        throw InvalidArgument("solve_lad: empty problem");
    }
    if (!responses.allFinite() || !design.allFinite()) {
        throw InvalidArgument("solve_lad: non-finite input");
    }

    const IrlsProblem problem(responses, design, options.smoothing_epsilon);

    ColMatrix current;
    if (options.initial_coefficients) {
        const Matrix& init = *options.initial_coefficients;
        if (init.rows() != design.cols() || init.cols() != responses.cols()) {
            throw DimensionError("initial_coefficients",
                                 "solve_lad: initial coefficients must be " +
                                     std::to_string(design.cols()) + " x " +
                                     std::to_string(responses.cols()));
        }
        current = init;
    } else if (!problem.least_squares(current)) {
        current = ColMatrix::Zero(design.cols(), responses.cols());
    }

    LadSolution solution;
    SolverDiagnostics& diag = solution.diagnostics;
    diag.objective_trace.reserve(static_cast<std::size_t>(options.max_iterations) + 1);
    diag.objective_trace.push_back(problem.objective(current));

    int steps = 0;
    // One IRLS step; true when the relative change met the tolerance.
    auto irls_step = [&](const ColMatrix& from, ColMatrix& out) {
        ++steps;
        if (!problem.step(from, out)) {
            throw SingularSystemError(steps, "solve_lad: weighted normal equations are singular "
                                             "at iteration " + std::to_string(steps));
        }
        return relative_change(out, from) < options.tolerance;
    };
    auto accept = [&](ColMatrix& point, double objective) {
        current.swap(point);
        diag.objective_trace.push_back(objective);
    };

    ColMatrix first;
    ColMatrix second;
    while (steps < options.max_iterations) {
        if (irls_step(current, first)) {
            accept(first, problem.objective(first));
            diag.converged = true;
            break;
        }
        if (!options.accelerate || steps >= options.max_iterations) {
            accept(first, problem.objective(first));
            continue;
        }
        const ColMatrix anchor = current;
        accept(first, problem.objective(first));
        if (irls_step(current, second)) {
            accept(second, problem.objective(second));
            diag.converged = true;
            break;
        }
        // Squared extrapolation along the last two IRLS displacements, kept
        // only when it lowers the objective below the plain double step.
        const ColMatrix r = current - anchor;
        const ColMatrix v = second - 2.0 * current + anchor;
        const double second_objective = problem.objective(second);
        const double v_norm = v.norm();
        if (v_norm > 0.0) {
            const double alpha = std::min(-r.norm() / v_norm, -1.0);
            ColMatrix jump = anchor - 2.0 * alpha * r + alpha * alpha * v;
            const double jump_objective = problem.objective(jump);
            if (jump.allFinite() && jump_objective < second_objective) {
                accept(second, second_objective);
                accept(jump, jump_objective);
                continue;
            }
        }
        accept(second, second_objective);
    }
    diag.iterations = steps;

    solution.coefficients = CoefficientMatrix(Matrix(current));
    return solution;
}

}  // namespace mladlasso
