#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace lassodet::path {

struct LambdaGrid {
    std::size_t count = 100;
    /// lambda_min / lambda_max; 0 picks 1e-4 when n > p and 1e-2 otherwise.
    double ratio = 0.0;
    /// When nonempty, used verbatim (strictly decreasing, non-negative).
    std::vector<double> values;
};

struct FitConfig {
    bool intercept = true;
    bool standardize = true;
    LambdaGrid grid;
    /// A sweep has converged when max_j ||x_j||^2 (delta b_j)^2 <= tol * ||y_c||^2,
    /// the largest drop in residual sum of squares any one update could buy,
    /// relative to the null sum of squares.
    double tol = 1e-7;
    long max_sweeps = 100000;
};

void validate(const FitConfig& config);

/// The lambda_min / lambda_max ratio used for an n x p problem.
double effective_ratio(const LambdaGrid& grid, std::size_t n, std::size_t p);

/// The problem actually handed to coordinate descent: columns centered when an
/// intercept is fitted and scaled to unit norm when standardizing.
struct StandardizedProblem {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd x_mean;  // zeros without intercept
    double y_mean = 0.0;
    Eigen::VectorXd x_scale;  // ones without standardization
    Eigen::VectorXd col_sq_norm;
};

/// Throws ZeroVarianceColumn when standardizing a constant column.
StandardizedProblem standardize_problem(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        const FitConfig& config);

/// Cyclic coordinate descent for 1/2 ||y - X b||^2 + lambda ||b||_1 on a
/// standardized problem. Coefficients and the residual persist across
/// set_lambda() calls, which is what gives warm starts along a path.
class CoordinateDescent {
public:
    explicit CoordinateDescent(const StandardizedProblem& problem);

    void set_lambda(double lambda);
    double lambda() const noexcept { return lambda_; }

    /// One pass over all (or only the currently nonzero) coordinates.
    /// Returns max_j ||x_j||^2 (delta b_j)^2 over the updates made.
    double sweep(bool active_only = false);

    /// Sweeps until a full pass satisfies the FitConfig::tol criterion.
    /// Returns the number of sweeps; throws ConvergenceError past max_sweeps.
    long solve(double tol, long max_sweeps);

    double objective() const;
    const Eigen::VectorXd& beta() const noexcept { return beta_; }
    const Eigen::VectorXd& residual() const noexcept { return residual_; }
    void reset();

private:
    const StandardizedProblem& problem_;
    Eigen::VectorXd beta_;
    Eigen::VectorXd residual_;
    double lambda_ = 0.0;
};

struct RegularizationPath {
    std::vector<double> lambdas;  // strictly decreasing, on the standardized scale
    std::vector<Eigen::VectorXd> coefs;  // original predictor scale
    std::vector<double> intercepts;
    std::vector<std::vector<std::size_t>> active_sets;
    std::vector<long> sweeps;
    double lambda_max = 0.0;
    bool has_intercept = false;

    std::size_t size() const noexcept { return lambdas.size(); }
    /// Linear interpolation in lambda between stored solutions; zeros above
    /// lambda_max, the last solution below the smallest stored lambda.
    Eigen::VectorXd coef_at(double lambda) const;
    double intercept_at(double lambda) const;
};

/// Smallest lambda at which every penalized coefficient is zero.
double lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const FitConfig& config);

RegularizationPath fit_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const FitConfig& config);

/// Largest violation of the subgradient conditions at path point `index`:
/// |x_j'r| - lambda for zero coefficients, |x_j'r - lambda sgn(b_j)| otherwise,
/// measured on the standardized problem.
double kkt_violation(const RegularizationPath& path, std::size_t index,
                     const StandardizedProblem& problem);

struct RefitResult {
    Eigen::VectorXd coefs;
    double intercept = 0.0;
    std::size_t rank = 0;
    bool rank_deficient = false;
};

/// Least squares on the support columns (minimum-norm when rank deficient);
/// coefficients off the support are zero. Requires |support| <= n - intercept.
RefitResult refit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const std::vector<std::size_t>& support, bool intercept);

enum class Criterion { L2LossVsMu, TestMSE };

struct EvalTarget {
    Criterion criterion = Criterion::L2LossVsMu;
    const Eigen::VectorXd* mu = nullptr;
    const Eigen::MatrixXd* test_x = nullptr;
    const Eigen::VectorXd* test_y = nullptr;

    static EvalTarget loss_vs_mean(const Eigen::VectorXd& mu) {
        return {Criterion::L2LossVsMu, &mu, nullptr, nullptr};
    }
    static EvalTarget test_mse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
        return {Criterion::TestMSE, nullptr, &x, &y};
    }
};

struct EvalOptions {
    bool refit = false;  // Lasso+OLS: refit least squares on each active set
    /// Count the fitted intercept in ||mu - mu_hat||^2 / n. When false the loss is
    /// ||mu - X b||^2 / n, the form used when the true model is among the candidates.
    bool score_intercept = true;
};

struct PathEvaluation {
    double lambda_star = 0.0;
    std::size_t index = 0;
    double min_value = 0.0;
    Criterion criterion = Criterion::L2LossVsMu;
    std::vector<double> values;  // per path point; +inf where a refit was infeasible
    bool at_lambda_max = false;  // optimum has every coefficient zero
};

/// Evaluates the criterion at every path lambda and returns the minimizer,
/// preferring the smallest lambda on ties. x and y are the training data (used
/// for refits).
PathEvaluation evaluate_path(const RegularizationPath& path, const Eigen::MatrixXd& x,
                             const Eigen::VectorXd& y, const EvalTarget& target,
                             const EvalOptions& options = {});

/// One row per (lambda, coefficient index, value), plus intercept rows with index -1.
void write_path_csv(std::ostream& out, const RegularizationPath& path);

}  // namespace lassodet::path
