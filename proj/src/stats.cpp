#include "lassodet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lassodet/errors.hpp"

namespace lassodet::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");

    // Acklam's rational approximation, then one Halley step against erfc.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Refine in whichever tail keeps the residual well conditioned.
    double e;
    if (x < 0.0) {
        e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    } else {
        e = (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
    }
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double median(std::span<const double> values) {
    if (values.empty()) throw DimensionError("median of an empty list");
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted) {
        if (std::isnan(v)) throw DomainError("median: NaN value");
    }
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size() / 2;
    if (sorted.size() % 2 == 1) return sorted[m];
    const double lo = sorted[m - 1];
    const double hi = sorted[m];
    if (std::isinf(lo) || std::isinf(hi)) return lo == hi ? lo : (std::isinf(hi) ? hi : lo);
    return lo + 0.5 * (hi - lo);
}

double mean(std::span<const double> values) {
    if (values.empty()) throw DimensionError("mean of an empty list");
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

double binomial_se(double frequency, std::size_t trials) {
    if (trials == 0) throw DimensionError("binomial_se: zero trials");
    return std::sqrt(frequency * (1.0 - frequency) / static_cast<double>(trials));
}

namespace {

struct SignedRanks {
    std::vector<double> ranks;     // average ranks of |d|, nonzero d only
    std::vector<bool> positive;
    double tie_correction = 0.0;   // sum over tie groups of t^3 - t
};

SignedRanks rank_differences(std::span<const double> x, std::span<const double> y,
                             double alpha) {
    if (x.size() != y.size()) throw DimensionError("wilcoxon: paired samples differ in length");
    if (x.empty()) throw DimensionError("wilcoxon: no pairs");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("wilcoxon: alpha must lie in (0, 1)");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.empty()) throw DomainError("wilcoxon: all paired differences are zero");

    std::vector<std::size_t> order(diffs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });

    SignedRanks out;
    out.ranks.resize(diffs.size());
    out.positive.resize(diffs.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() &&
               std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = avg;
        const double t = static_cast<double>(j - i + 1);
        out.tie_correction += t * t * t - t;
        i = j + 1;
    }
    for (std::size_t k = 0; k < diffs.size(); ++k) out.positive[k] = diffs[k] > 0.0;
    return out;
}

double positive_rank_sum(const SignedRanks& sr) {
    double w = 0.0;
    for (std::size_t k = 0; k < sr.ranks.size(); ++k) {
        if (sr.positive[k]) w += sr.ranks[k];
    }
    return w;
}

void finish(WilcoxonResult& r, double alpha) {
    r.p_two_sided = std::min(1.0, 2.0 * std::min(r.p_greater, r.p_less));
    r.alpha = alpha;
    r.significant = r.p_two_sided < alpha;
}

WilcoxonResult approx_from_ranks(const SignedRanks& sr, double alpha) {
    WilcoxonResult r;
    const double n = static_cast<double>(sr.ranks.size());
    r.n_effective = sr.ranks.size();
    r.statistic = positive_rank_sum(sr);
    const double mu = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - sr.tie_correction / 48.0;
    if (var <= 0.0) {
        r.p_greater = r.p_less = 1.0;
    } else {
        const double sd = std::sqrt(var);
        r.p_greater = 1.0 - normal_cdf((r.statistic - mu - 0.5) / sd);
        r.p_less = normal_cdf((r.statistic - mu + 0.5) / sd);
    }
    r.exact = false;
    finish(r, alpha);
    return r;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    double alpha, std::size_t exact_limit) {
    const SignedRanks sr = rank_differences(x, y, alpha);
    if (sr.ranks.size() > exact_limit) return approx_from_ranks(sr, alpha);

    // Doubled average ranks are integers, so the null distribution of 2*W+ is
    // a subset-sum count over all 2^n sign patterns.
    std::vector<long> doubled(sr.ranks.size());
    long total = 0;
    for (std::size_t k = 0; k < sr.ranks.size(); ++k) {
        doubled[k] = std::lround(2.0 * sr.ranks[k]);
        total += doubled[k];
    }
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    long reach = 0;
    for (long r : doubled) {
        for (long s = reach; s >= 0; --s) count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
        reach += r;
    }
    const double patterns = std::ldexp(1.0, static_cast<int>(sr.ranks.size()));

    WilcoxonResult res;
    res.n_effective = sr.ranks.size();
    res.statistic = positive_rank_sum(sr);
    const long observed = std::lround(2.0 * res.statistic);
    double upper = 0.0;
    double lower = 0.0;
    for (long s = 0; s <= total; ++s) {
        const double c = count[static_cast<std::size_t>(s)];
        if (s >= observed) upper += c;
        if (s <= observed) lower += c;
    }
    res.p_greater = upper / patterns;
    res.p_less = lower / patterns;
    res.exact = true;
    finish(res, alpha);
    return res;
}

WilcoxonResult wilcoxon_signed_rank_approx(std::span<const double> x,
                                           std::span<const double> y, double alpha) {
    return approx_from_ranks(rank_differences(x, y, alpha), alpha);
}

}  // namespace lassodet::stats
