#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lassodet::ortho {

/// sgn(z) * max(|z| - lambda, 0). Throws DomainError for negative lambda.
double soft_threshold(double z, double lambda);

/// Orthonormal design with a single nonzero true coefficient on the first
/// predictor; z = X'y are the least-squares coefficients of all p predictors.
struct OrthoInstance {
    double beta1 = 0.0;
    std::vector<double> z;
    std::size_t n = 0;
    double sigma2 = 1.0;
};

void validate(const OrthoInstance& inst);

enum class CaseTag { SignMismatch, NoDeterioration, Deterioration };

const char* to_string(CaseTag tag);

/// Minimizer of the loss curve. n_loss is n * L_p(lambda_star); divide by n for L.
struct OrthoOptimum {
    double lambda_star = 0.0;
    double n_loss = 0.0;
    bool deteriorated = false;
    CaseTag case_tag = CaseTag::NoDeterioration;
};

/// n * L_p(lambda) = (beta1 - st(z1))^2 + sum_{j>=2} st(z_j)^2.
double loss_curve(const OrthoInstance& inst, double lambda);

/// Exact optimum when only the true predictor is offered.
OrthoOptimum optimal_single(double beta1, double z1);

/// Exact global minimizer over lambda >= 0 for p predictors (smallest lambda on
/// ties). `deteriorated` and `case_tag` come from classify(), not from comparing
/// two floating-point losses.
OrthoOptimum optimal_multi(const OrthoInstance& inst);

/// Whether offering z[1..] on top of z[0] strictly worsens the optimal loss.
///
/// SignMismatch when sgn(z1) != sgn(beta1): both optima equal beta1^2.
/// Otherwise deterioration occurs unless |beta1| <= |z1| - max_{j>=2} |z_j|.
CaseTag classify(double beta1, std::span<const double> z);

struct GridMinimum {
    double lambda = 0.0;
    double n_loss = 0.0;
};

/// Brute-force minimum of loss_curve over a uniform grid on [0, max |z_j|].
GridMinimum oracle_grid_min(const OrthoInstance& inst, std::size_t grid_points);

// General orthonormal case: `target` holds the true coefficients expressed in
// the orthonormal basis (b = X' mu), `z` the least-squares coefficients.

/// sum_j (b_j - st(z_j, lambda))^2
double shrinkage_loss(std::span<const double> target, std::span<const double> z, double lambda);

struct ShrinkageMinimum {
    double lambda = 0.0;
    double loss = 0.0;
    bool full_shrinkage = false;  // lambda >= max |z_j|: every coefficient zero
};

/// Exact minimizer of shrinkage_loss over lambda >= 0.
///
/// The loss is a continuous piecewise quadratic with knots at the |z_j|. The
/// candidate set is every knot, zero, and each segment's stationary point clipped
/// to its segment; the smallest lambda attaining the minimum wins.
ShrinkageMinimum minimize_shrinkage_loss(std::span<const double> target,
                                         std::span<const double> z);

struct RefitMinimum {
    double lambda = 0.0;  // smallest lambda whose support is the optimal one
    double loss = 0.0;
    std::size_t support_size = 0;
};

/// Lasso+OLS on an orthonormal design: at lambda the support is {|z_j| > lambda}
/// and the refit coefficients on it equal z_j. Minimizes over all supports the
/// path visits.
RefitMinimum minimize_refit_loss(std::span<const double> target, std::span<const double> z);

}  // namespace lassodet::ortho
