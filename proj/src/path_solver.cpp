#include "lassodet/path_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lassodet/csv.hpp"
#include "lassodet/errors.hpp"

namespace lassodet::path {
namespace {

double soft(double g, double lambda) {
    if (g > lambda) return g - lambda;
    if (g < -lambda) return g + lambda;
    return 0.0;
}

std::vector<double> make_grid(double lmax, const FitConfig& config, std::size_t n, std::size_t p) {
    if (!config.grid.values.empty()) return config.grid.values;
    if (lmax <= 0.0) return {0.0};
    const std::size_t k = config.grid.count;
    std::vector<double> grid(k);
    const double log_ratio = std::log(effective_ratio(config.grid, n, p));
    for (std::size_t i = 0; i < k; ++i) {
        grid[i] = lmax * std::exp(log_ratio * static_cast<double>(i) / static_cast<double>(k - 1));
    }
    grid[0] = lmax;
    return grid;
}

double max_abs_correlation(const StandardizedProblem& prob) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < prob.x.cols(); ++j) {
        if (prob.col_sq_norm(j) == 0.0) continue;
        best = std::max(best, std::abs(prob.x.col(j).dot(prob.y)));
    }
    return best;
}

}  // namespace

void validate(const FitConfig& config) {
    if (config.grid.values.empty()) {
        if (config.grid.count < 2) throw DomainError("lambda grid needs at least 2 points");
        if (!(config.grid.ratio == 0.0 || (config.grid.ratio > 0.0 && config.grid.ratio < 1.0))) {
            throw DomainError("lambda ratio must lie in (0, 1), or be 0 for the default");
        }
    } else {
        const auto& v = config.grid.values;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(v[i] >= 0.0) || !std::isfinite(v[i])) {
                throw DomainError("explicit lambdas must be finite and non-negative");
            }
            if (i > 0 && !(v[i] < v[i - 1])) {
                throw DomainError("explicit lambdas must be strictly decreasing");
            }
        }
    }
    if (!(config.tol > 0.0)) throw DomainError("tol must be positive");
    if (config.max_sweeps < 1) throw DomainError("max_sweeps must be positive");
}

double effective_ratio(const LambdaGrid& grid, std::size_t n, std::size_t p) {
    if (grid.ratio > 0.0) return grid.ratio;
    // Near lambda = 0 a p >= n problem approaches interpolation, where coordinate
    // descent crawls and the fits are useless anyway.
    return n > p ? 1e-4 : 1e-2;
}

StandardizedProblem standardize_problem(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        const FitConfig& config) {
    if (x.rows() != y.size()) throw DimensionError("design rows and response length differ");
    if (x.rows() < 1 || x.cols() < 1) throw DimensionError("empty design");

    StandardizedProblem prob;
    prob.x = x;
    prob.y = y;
    prob.x_mean = Eigen::VectorXd::Zero(x.cols());
    prob.x_scale = Eigen::VectorXd::Ones(x.cols());
    if (config.intercept) {
        prob.x_mean = x.colwise().mean().transpose();
        prob.y_mean = y.mean();
        prob.x.rowwise() -= prob.x_mean.transpose();
        prob.y.array() -= prob.y_mean;
    }
    if (config.standardize) {
        for (Eigen::Index j = 0; j < prob.x.cols(); ++j) {
            const double norm = prob.x.col(j).norm();
            // Relative to the raw column so centering round-off does not pass.
            const double raw = x.col(j).norm();
            if (norm == 0.0 || norm <= 1e-12 * raw) {
                throw ZeroVarianceColumn(static_cast<std::size_t>(j));
            }
            prob.x_scale(j) = norm;
            prob.x.col(j) /= norm;
        }
    }
    prob.col_sq_norm = prob.x.colwise().squaredNorm().transpose();
    return prob;
}

CoordinateDescent::CoordinateDescent(const StandardizedProblem& problem)
    : problem_(problem),
      beta_(Eigen::VectorXd::Zero(problem.x.cols())),
      residual_(problem.y) {}

void CoordinateDescent::reset() {
    beta_.setZero();
    residual_ = problem_.y;
}

void CoordinateDescent::set_lambda(double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
    lambda_ = lambda;
}

double CoordinateDescent::sweep(bool active_only) {
    double max_change = 0.0;
    const Eigen::Index p = problem_.x.cols();
    for (Eigen::Index j = 0; j < p; ++j) {
        const double d = problem_.col_sq_norm(j);
        if (d == 0.0) continue;
        const double old = beta_(j);
        if (active_only && old == 0.0) continue;
        const auto col = problem_.x.col(j);
        const double g = col.dot(residual_) + d * old;
        const double updated = soft(g, lambda_) / d;
        const double delta = updated - old;
        if (delta != 0.0) {
            residual_.noalias() -= delta * col;
            beta_(j) = updated;
            max_change = std::max(max_change, d * delta * delta);
        }
    }
    return max_change;
}

long CoordinateDescent::solve(double tol, long max_sweeps) {
    const double threshold = tol * problem_.y.squaredNorm();
    long sweeps = 0;
    double change = 0.0;
    while (sweeps < max_sweeps) {
        change = sweep(false);
        ++sweeps;
        if (change <= threshold) return sweeps;
        // Converge on the active set before paying for another full pass.
        while (sweeps < max_sweeps) {
            change = sweep(true);
            ++sweeps;
            if (change <= threshold) break;
        }
    }
    throw ConvergenceError(lambda_, sweeps, change);
}

double CoordinateDescent::objective() const {
    return 0.5 * residual_.squaredNorm() + lambda_ * beta_.lpNorm<1>();
}

Eigen::VectorXd RegularizationPath::coef_at(double lambda) const {
    if (lambdas.empty()) throw DimensionError("empty path");
    if (lambda >= lambdas.front()) {
        return lambda >= lambda_max ? Eigen::VectorXd::Zero(coefs.front().size())
                                    : coefs.front();
    }
    for (std::size_t k = 1; k < lambdas.size(); ++k) {
        if (lambda >= lambdas[k]) {
            const double w = (lambdas[k - 1] - lambda) / (lambdas[k - 1] - lambdas[k]);
            return (1.0 - w) * coefs[k - 1] + w * coefs[k];
        }
    }
    return coefs.back();
}

double RegularizationPath::intercept_at(double lambda) const {
    if (lambdas.empty()) throw DimensionError("empty path");
    if (lambda >= lambdas.front()) return intercepts.front();
    for (std::size_t k = 1; k < lambdas.size(); ++k) {
        if (lambda >= lambdas[k]) {
            const double w = (lambdas[k - 1] - lambda) / (lambdas[k - 1] - lambdas[k]);
            return (1.0 - w) * intercepts[k - 1] + w * intercepts[k];
        }
    }
    return intercepts.back();
}

double lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const FitConfig& config) {
    return max_abs_correlation(standardize_problem(x, y, config));
}

RegularizationPath fit_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const FitConfig& config) {
    validate(config);
    if (x.rows() < 2) throw DimensionError("fit_path requires n >= 2");
    const StandardizedProblem prob = standardize_problem(x, y, config);

    RegularizationPath path;
    path.lambda_max = max_abs_correlation(prob);
    path.has_intercept = config.intercept;
    path.lambdas = make_grid(path.lambda_max, config, static_cast<std::size_t>(x.rows()),
                             static_cast<std::size_t>(x.cols()));

    CoordinateDescent cd(prob);
    for (double lambda : path.lambdas) {
        cd.set_lambda(lambda);
        path.sweeps.push_back(cd.solve(config.tol, config.max_sweeps));

        Eigen::VectorXd coef = cd.beta().cwiseQuotient(prob.x_scale);
        std::vector<std::size_t> active;
        for (Eigen::Index j = 0; j < coef.size(); ++j) {
            if (coef(j) != 0.0) active.push_back(static_cast<std::size_t>(j));
        }
        path.intercepts.push_back(config.intercept ? prob.y_mean - prob.x_mean.dot(coef) : 0.0);
        path.coefs.push_back(std::move(coef));
        path.active_sets.push_back(std::move(active));
    }
    return path;
}

double kkt_violation(const RegularizationPath& path, std::size_t index,
                     const StandardizedProblem& prob) {
    if (index >= path.size()) throw DimensionError("kkt_violation: index out of range");
    const Eigen::VectorXd beta = path.coefs[index].cwiseProduct(prob.x_scale);
    const Eigen::VectorXd r = prob.y - prob.x * beta;
    const double lambda = path.lambdas[index];
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (prob.col_sq_norm(j) == 0.0) continue;
        const double g = prob.x.col(j).dot(r);
        const double v = beta(j) == 0.0 ? std::abs(g) - lambda
                                        : std::abs(g - lambda * (beta(j) > 0 ? 1.0 : -1.0));
        worst = std::max(worst, v);
    }
    return worst;
}

RefitResult refit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const std::vector<std::size_t>& support, bool intercept) {
    if (x.rows() != y.size()) throw DimensionError("design rows and response length differ");
    const auto n = static_cast<std::size_t>(x.rows());
    if (support.size() + (intercept ? 1 : 0) > n) {
        throw DimensionError("refit support of size " + std::to_string(support.size()) +
                             " exceeds the available degrees of freedom");
    }
    RefitResult out;
    out.coefs = Eigen::VectorXd::Zero(x.cols());
    const double y_mean = intercept ? y.mean() : 0.0;
    if (support.empty()) {
        out.intercept = y_mean;
        return out;
    }

    Eigen::MatrixXd xs(x.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (support[k] >= static_cast<std::size_t>(x.cols())) {
            throw DimensionError("refit support index out of range");
        }
        xs.col(static_cast<Eigen::Index>(k)) = x.col(static_cast<Eigen::Index>(support[k]));
    }
    Eigen::VectorXd means = Eigen::VectorXd::Zero(xs.cols());
    Eigen::VectorXd yc = y;
    if (intercept) {
        means = xs.colwise().mean().transpose();
        xs.rowwise() -= means.transpose();
        yc.array() -= y_mean;
    }
    // Centering leaves round-off in exactly collinear columns; treat pivots
    // below 1e-10 of the largest as zero.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xs.rows(), xs.cols());
    cod.setThreshold(1e-10);
    cod.compute(xs);
    const Eigen::VectorXd b = cod.solve(yc);
    out.rank = static_cast<std::size_t>(cod.rank());
    out.rank_deficient = out.rank < support.size();
    for (std::size_t k = 0; k < support.size(); ++k) {
        out.coefs(static_cast<Eigen::Index>(support[k])) = b(static_cast<Eigen::Index>(k));
    }
    out.intercept = intercept ? y_mean - means.dot(b) : 0.0;
    return out;
}

PathEvaluation evaluate_path(const RegularizationPath& path, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y, const EvalTarget& target,
                             const EvalOptions& options) {
    if (path.size() == 0) throw DimensionError("evaluate_path: empty path");
    if (target.criterion == Criterion::L2LossVsMu) {
        if (target.mu == nullptr || target.mu->size() != x.rows()) {
            throw DimensionError("evaluate_path: mean vector does not match the design");
        }
    } else {
        if (target.test_x == nullptr || target.test_y == nullptr ||
            target.test_x->cols() != x.cols() || target.test_x->rows() != target.test_y->size()) {
            throw DimensionError("evaluate_path: test set does not match the design");
        }
    }

    const bool intercept_fitted = path.has_intercept;
    const auto n = static_cast<std::size_t>(x.rows());

    PathEvaluation ev;
    ev.criterion = target.criterion;
    ev.values.resize(path.size());
    const std::vector<std::size_t>* cached_support = nullptr;
    RefitResult cached;

    for (std::size_t k = 0; k < path.size(); ++k) {
        Eigen::VectorXd coef = path.coefs[k];
        double b0 = path.intercepts[k];
        if (options.refit) {
            const auto& support = path.active_sets[k];
            if (support.size() + (intercept_fitted ? 1 : 0) > n) {
                ev.values[k] = std::numeric_limits<double>::infinity();
                continue;
            }
            if (cached_support == nullptr || *cached_support != support) {
                cached = refit_ols(x, y, support, intercept_fitted);
                cached_support = &support;
            }
            coef = cached.coefs;
            b0 = cached.intercept;
        }
        if (target.criterion == Criterion::L2LossVsMu) {
            Eigen::VectorXd resid = *target.mu - x * coef;
            if (options.score_intercept) resid.array() -= b0;
            ev.values[k] = resid.squaredNorm() / static_cast<double>(n);
        } else {
            Eigen::VectorXd resid = *target.test_y - *target.test_x * coef;
            resid.array() -= b0;
            ev.values[k] = resid.squaredNorm() / static_cast<double>(resid.size());
        }
    }

    // Path lambdas decrease, so scanning forward with <= keeps the smallest tie.
    ev.index = 0;
    for (std::size_t k = 1; k < ev.values.size(); ++k) {
        if (ev.values[k] <= ev.values[ev.index]) ev.index = k;
    }
    ev.min_value = ev.values[ev.index];
    ev.lambda_star = path.lambdas[ev.index];
    ev.at_lambda_max = path.active_sets[ev.index].empty();
    return ev;
}

void write_path_csv(std::ostream& out, const RegularizationPath& path) {
    csv::write_row(out, {"lambda", "index", "value"});
    for (std::size_t k = 0; k < path.size(); ++k) {
        const std::string lam = csv::format_double(path.lambdas[k]);
        csv::write_row(out, {lam, "-1", csv::format_double(path.intercepts[k])});
        for (Eigen::Index j = 0; j < path.coefs[k].size(); ++j) {
            csv::write_row(out, {lam, std::to_string(j), csv::format_double(path.coefs[k](j))});
        }
    }
}

}  // namespace lassodet::path
