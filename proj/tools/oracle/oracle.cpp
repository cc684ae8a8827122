#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mladlasso::oracle {

namespace {

struct Simplex
{
    std::vector<Eigen::VectorXd> points;
    std::vector<double> values;
};

DirectResult nelder_mead(const Objective& f, const Eigen::VectorXd& start, double step,
                         double ftol, int budget)
{
    const Eigen::Index d = start.size();
    Simplex s;
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };
    s.points.push_back(start);
    s.values.push_back(eval(start));
    for (Eigen::Index k = 0; k < d; ++k) {
        Eigen::VectorXd x = start;
        x(k) += (x(k) != 0.0 ? step * std::max(1.0, std::abs(x(k))) * 0.1 : step);
        s.points.push_back(x);
        s.values.push_back(eval(x));
    }

    std::vector<std::size_t> order(s.points.size());
    while (evals < budget) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];
        if (std::abs(s.values[worst] - s.values[best]) <=
            ftol * (std::abs(s.values[best]) + 1e-300)) {
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            centroid += s.points[order[k]];
        }
        centroid /= static_cast<double>(d);

        const Eigen::VectorXd reflected = centroid + (centroid - s.points[worst]);
        const double fr = eval(reflected);
        if (fr < s.values[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - s.points[worst]);
            const double fe = eval(expanded);
            if (fe < fr) {
                s.points[worst] = expanded;
                s.values[worst] = fe;
            } else {
                s.points[worst] = reflected;
                s.values[worst] = fr;
            }
            continue;
        }
        if (fr < s.values[second]) {
            s.points[worst] = reflected;
            s.values[worst] = fr;
            continue;
        }
        const bool outside = fr < s.values[worst];
        const Eigen::VectorXd contracted =
            outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                    : Eigen::VectorXd(centroid + 0.5 * (s.points[worst] - centroid));
        const double fc = eval(contracted);
        if (fc < std::min(fr, s.values[worst])) {
            s.points[worst] = contracted;
            s.values[worst] = fc;
            continue;
        }
        for (std::size_t k = 1; k < order.size(); ++k) {
            const std::size_t i = order[k];
            s.points[i] = s.points[best] + 0.5 * (s.points[i] - s.points[best]);
            s.values[i] = eval(s.points[i]);
        }
    }
    const auto best = static_cast<std::size_t>(
        std::min_element(s.values.begin(), s.values.end()) - s.values.begin());
    return {s.points[best], s.values[best], evals};
}

}  // namespace

DirectResult minimize_direct(const Objective& f, const Eigen::VectorXd& start,
                             const DirectOptions& options)
{
    DirectResult incumbent{start, f(start), 1};
    double step = options.initial_step;
    for (int restart = 0; restart < options.max_restarts; ++restart) {
        const int budget = options.max_evaluations - incumbent.evaluations;
        if (budget <= 0) {
            break;
        }
        DirectResult trial = nelder_mead(f, incumbent.argmin, step, options.function_tolerance,
                                         budget);
        const int used = incumbent.evaluations + trial.evaluations;
        const double gain = incumbent.value - trial.value;
        if (trial.value < incumbent.value) {
            incumbent = std::move(trial);
        }
        incumbent.evaluations = used;
        if (gain <= options.function_tolerance * std::abs(incumbent.value)) {
            // A fresh simplex found nothing; try a smaller one before giving up.
            step *= 0.1;
            if (step < 1e-9) {
                break;
            }
        }
    }
    return incumbent;
}

BreakpointResult lad_breakpoint_search(const Eigen::VectorXd& y, const Eigen::MatrixXd& x)
{
    const Eigen::Index n = x.rows();
    const Eigen::Index q = x.cols();
    BreakpointResult best;
    best.loss = std::numeric_limits<double>::infinity();

    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + q, true);
    do {
        Eigen::MatrixXd a(q, q);
        Eigen::VectorXd b(q);
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (pick[static_cast<std::size_t>(i)]) {
                a.row(r) = x.row(i);
                b(r) = y(i);
                ++r;
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible()) {
            continue;
        }
        const Eigen::VectorXd coef = lu.solve(b);
        const double loss = (y - x * coef).cwiseAbs().sum() / static_cast<double>(n);
        if (loss < best.loss) {
            best.loss = loss;
            best.coefficients = coef;
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

double median(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

SlopeGridResult profiled_slope_grid(const Eigen::VectorXd& y, const Eigen::VectorXd& x,
                                    double penalty, double centre, double half_width,
                                    double step)
{
    const auto n = static_cast<std::size_t>(y.size());
    SlopeGridResult best;
    best.objective = std::numeric_limits<double>::infinity();
    std::vector<double> shifted(n);
    const auto count = static_cast<long>(std::ceil(2.0 * half_width / step));
    for (long k = 0; k <= count; ++k) {
        const double b = centre - half_width + static_cast<double>(k) * step;
        for (std::size_t i = 0; i < n; ++i) {
            shifted[i] = y(static_cast<Eigen::Index>(i)) - b * x(static_cast<Eigen::Index>(i));
        }
        const double a = median(shifted);
        double loss = 0.0;
        for (const double r : shifted) {
            loss += std::abs(r - a);
        }
        const double value = loss / static_cast<double>(n) + penalty * std::abs(b);
        if (value < best.objective) {
            best = {a, b, value};
        }
    }
    return best;
}

}  // namespace mladlasso::oracle
