#include "lassodet/ortho_lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lassodet/errors.hpp"

namespace lassodet::ortho {
namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

void check_lambda(double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
}

void check_shapes(std::span<const double> target, std::span<const double> z) {
    if (z.empty()) throw DimensionError("empty coefficient vector");
    if (target.size() != z.size()) {
        throw DimensionError("target and z differ in length");
    }
}

std::vector<double> single_target(const OrthoInstance& inst) {
    std::vector<double> target(inst.z.size(), 0.0);
    target[0] = inst.beta1;
    return target;
}

}  // namespace

double soft_threshold(double z, double lambda) {
    check_lambda(lambda);
    const double shrunk = std::abs(z) - lambda;
    return shrunk > 0.0 ? std::copysign(shrunk, z) : 0.0;
}

const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::SignMismatch: return "sign_mismatch";
        case CaseTag::NoDeterioration: return "no_deterioration";
        case CaseTag::Deterioration: return "deterioration";
    }
    return "unknown";
}

void validate(const OrthoInstance& inst) {
    if (inst.z.empty()) throw DimensionError("orthonormal instance needs at least one z");
    if (inst.beta1 == 0.0 || !std::isfinite(inst.beta1)) {
        throw DomainError("beta1 must be finite and nonzero");
    }
    for (double v : inst.z) {
        if (!std::isfinite(v)) throw DomainError("z must be finite");
    }
}

double shrinkage_loss(std::span<const double> target, std::span<const double> z,
                      double lambda) {
    check_shapes(target, z);
    check_lambda(lambda);
    double total = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        const double diff = target[j] - soft_threshold(z[j], lambda);
        total += diff * diff;
    }
    return total;
}

double loss_curve(const OrthoInstance& inst, double lambda) {
    validate(inst);
    return shrinkage_loss(single_target(inst), inst.z, lambda);
}

ShrinkageMinimum minimize_shrinkage_loss(std::span<const double> target,
                                         std::span<const double> z) {
    check_shapes(target, z);
    const std::size_t p = z.size();

    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(z[a]) > std::abs(z[b]); });
    const double top = std::abs(z[order[0]]);

    std::vector<double> candidates{0.0, top};
    // With the k largest |z| active the segment is [|z|_(k+1), |z|_(k)] and the
    // loss sum_{active} (b_j - s_j(|z_j| - lambda))^2 is stationary at
    // sum_{active} (|z_j| - s_j b_j) / k.
    double numerator = 0.0;
    for (std::size_t k = 1; k <= p; ++k) {
        const std::size_t j = order[k - 1];
        const double hi = std::abs(z[j]);
        if (hi == 0.0) break;
        const double lo = k < p ? std::abs(z[order[k]]) : 0.0;
        numerator += hi - sgn(z[j]) * target[j];
        candidates.push_back(hi);
        candidates.push_back(std::clamp(numerator / static_cast<double>(k), lo, hi));
    }
    std::sort(candidates.begin(), candidates.end());

    ShrinkageMinimum best;
    best.lambda = candidates.front();
    best.loss = shrinkage_loss(target, z, best.lambda);
    for (double lambda : candidates) {
        const double loss = shrinkage_loss(target, z, lambda);
        if (loss < best.loss) {
            best.loss = loss;
            best.lambda = lambda;
        }
    }
    best.full_shrinkage = best.lambda >= top;
    return best;
}

RefitMinimum minimize_refit_loss(std::span<const double> target, std::span<const double> z) {
    check_shapes(target, z);
    const std::size_t p = z.size();
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(z[a]) > std::abs(z[b]); });

    double loss = 0.0;
    for (double b : target) loss += b * b;

    RefitMinimum best;
    best.loss = loss;
    best.lambda = std::abs(z[order[0]]);
    best.support_size = 0;

    // Predictors with equal |z| enter the support together.
    std::size_t k = 0;
    while (k < p && z[order[k]] != 0.0) {
        const double level = std::abs(z[order[k]]);
        while (k < p && std::abs(z[order[k]]) == level) {
            const std::size_t j = order[k];
            loss += (target[j] - z[j]) * (target[j] - z[j]) - target[j] * target[j];
            ++k;
        }
        const double next = k < p ? std::abs(z[order[k]]) : 0.0;
        if (loss <= best.loss) {
            best.loss = loss;
            best.lambda = next;
            best.support_size = k;
        }
    }
    return best;
}

CaseTag classify(double beta1, std::span<const double> z) {
    if (z.empty()) throw DimensionError("classify: empty z");
    if (beta1 == 0.0) throw DomainError("classify: beta1 must be nonzero");
    if (sgn(z[0]) != sgn(beta1)) return CaseTag::SignMismatch;
    if (z.size() == 1) return CaseTag::NoDeterioration;
    double max_rest = 0.0;
    for (std::size_t j = 1; j < z.size(); ++j) max_rest = std::max(max_rest, std::abs(z[j]));
    // At equality lambda = max_rest zeroes every superfluous coefficient while
    // shrinking z1 exactly onto beta1, so the boundary belongs to no-deterioration.
    return std::abs(beta1) <= std::abs(z[0]) - max_rest ? CaseTag::NoDeterioration
                                                       : CaseTag::Deterioration;
}

OrthoOptimum optimal_single(double beta1, double z1) {
    if (beta1 == 0.0 || !std::isfinite(beta1)) throw DomainError("beta1 must be nonzero");
    OrthoOptimum out;
    if (sgn(z1) != sgn(beta1)) {
        out.lambda_star = std::abs(z1);
        out.n_loss = beta1 * beta1;
        out.case_tag = CaseTag::SignMismatch;
    } else if (std::abs(beta1) <= std::abs(z1)) {
        out.lambda_star = std::abs(z1) - std::abs(beta1);
        out.n_loss = 0.0;
        out.case_tag = CaseTag::NoDeterioration;
    } else {
        out.lambda_star = 0.0;
        out.n_loss = (beta1 - z1) * (beta1 - z1);
        out.case_tag = CaseTag::NoDeterioration;
    }
    return out;
}

OrthoOptimum optimal_multi(const OrthoInstance& inst) {
    validate(inst);
    const auto target = single_target(inst);
    const ShrinkageMinimum m = minimize_shrinkage_loss(target, inst.z);
    OrthoOptimum out;
    out.lambda_star = m.lambda;
    out.n_loss = m.loss;
    out.case_tag = classify(inst.beta1, inst.z);
    out.deteriorated = out.case_tag == CaseTag::Deterioration;
    return out;
}

GridMinimum oracle_grid_min(const OrthoInstance& inst, std::size_t grid_points) {
    validate(inst);
    if (grid_points < 2) throw DomainError("oracle grid needs at least two points");

    double top = 0.0;
    for (double v : inst.z) top = std::max(top, std::abs(v));
    const double step = top / static_cast<double>(grid_points - 1);
    const double b1 = inst.beta1;
    const double z1 = inst.z[0];

    GridMinimum best{0.0, std::numeric_limits<double>::infinity()};
    // Blocked so the per-point accumulation stays in cache and vectorizes.
    constexpr std::size_t kBlock = 2048;
    double lambdas[kBlock];
    double losses[kBlock];
    for (std::size_t start = 0; start < grid_points; start += kBlock) {
        const std::size_t len = std::min(kBlock, grid_points - start);
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t g = start + i;
            lambdas[i] = g + 1 == grid_points ? top : static_cast<double>(g) * step;
            const double fit = std::max(std::abs(z1) - lambdas[i], 0.0);
            const double d = b1 - std::copysign(fit, z1);
            losses[i] = d * d;
        }
        for (std::size_t j = 1; j < inst.z.size(); ++j) {
            const double a = std::abs(inst.z[j]);
            for (std::size_t i = 0; i < len; ++i) {
                const double fit = std::max(a - lambdas[i], 0.0);
                losses[i] += fit * fit;
            }
        }
        for (std::size_t i = 0; i < len; ++i) {
            if (losses[i] < best.n_loss) {
                best.n_loss = losses[i];
                best.lambda = lambdas[i];
            }
        }
    }
    return best;
}

}  // namespace lassodet::ortho
