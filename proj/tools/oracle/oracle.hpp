#pragma once

// Independent reference minimizers used to check the IRLS path. Nothing here
// calls into the solver library.

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace mladlasso::oracle {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct DirectResult
{
    Eigen::VectorXd argmin;
    double value = 0.0;
    int evaluations = 0;
};

struct DirectOptions
{
    double initial_step = 1.0;
    double function_tolerance = 1e-13;
    int max_evaluations = 200000;
    int max_restarts = 60;
};

/// Nelder-Mead simplex search, restarted from the incumbent with a fresh
/// simplex (shrinking step) until a restart no longer improves the value.
DirectResult minimize_direct(const Objective& f, const Eigen::VectorXd& start,
                             const DirectOptions& options = {});

/// Exact univariate LAD by enumerating every q-subset of rows that the fit
/// can interpolate. Feasible only for tiny n.
struct BreakpointResult
{
    Eigen::VectorXd coefficients;
    double loss = 0.0;  // (1/n) sum |y - X b|
};
BreakpointResult lad_breakpoint_search(const Eigen::VectorXd& y, const Eigen::MatrixXd& x);

/// min over (a, b) of (1/n) sum |y_i - a - b x_i| + penalty * |b|, with the
/// intercept profiled out as the median and b scanned on a uniform grid.
struct SlopeGridResult
{
    double intercept = 0.0;
    double slope = 0.0;
    double objective = 0.0;
};
SlopeGridResult profiled_slope_grid(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                    double penalty, double centre, double half_width,
                                    double step);

double median(std::vector<double> values);

}  // namespace mladlasso::oracle
