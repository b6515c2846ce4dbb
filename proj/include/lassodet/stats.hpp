#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lassodet::stats {

/// Standard normal CDF, accurate to ~1e-15 absolute.
double normal_cdf(double x);
double normal_pdf(double x);
/// Inverse standard normal CDF for p in (0, 1).
double normal_quantile(double p);

/// Median with the midpoint convention. +inf sorts above every finite value,
/// so a minority of infinite ratios does not poison the result.
double median(std::span<const double> values);
double mean(std::span<const double> values);

/// sqrt(f(1-f)/n) for an observed frequency f over n trials.
double binomial_se(double frequency, std::size_t trials);

struct WilcoxonResult {
    double statistic = 0.0;  // W+, sum of ranks of positive differences
    std::size_t n_effective = 0;
    double p_greater = 1.0;    // one-sided, alternative x > y
    double p_less = 1.0;       // one-sided, alternative x < y
    double p_two_sided = 1.0;
    bool exact = false;
    bool significant = false;  // two-sided p < alpha
    double alpha = 0.05;
};

/// Wilcoxon signed-rank test on paired samples (differences x - y).
///
/// Zero differences are dropped and tied magnitudes get average ranks. The null
/// distribution is exact for up to exact_limit nonzero pairs and uses the
/// tie-corrected normal approximation with continuity correction above that.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    double alpha = 0.05, std::size_t exact_limit = 20);

/// Normal-approximation variant regardless of sample size (used to cross-check
/// the exact distribution).
WilcoxonResult wilcoxon_signed_rank_approx(std::span<const double> x,
                                           std::span<const double> y, double alpha = 0.05);

}  // namespace lassodet::stats
