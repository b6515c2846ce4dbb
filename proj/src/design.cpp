#include "lassodet/design.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "lassodet/csv.hpp"
#include "lassodet/errors.hpp"

namespace lassodet {

const char* to_string(DesignKind kind) {
    switch (kind) {
        case DesignKind::Trig: return "trig";
        case DesignKind::IidGaussian: return "iid_gaussian";
        case DesignKind::File: return "file";
        case DesignKind::InteractionExpanded: return "interaction_expanded";
    }
    return "unknown";
}

Design Design::leading_columns(std::size_t count) const {
    if (count == 0 || count > p()) {
        throw DimensionError("leading_columns: requested " + std::to_string(count) +
                             " of " + std::to_string(p()) + " columns");
    }
    Design out;
    out.values = values.leftCols(static_cast<Eigen::Index>(count));
    out.kind = kind;
    out.normalized = normalized;
    out.column_labels.assign(column_labels.begin(),
                             column_labels.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
}

void validate(const Design& design) {
    if (design.n() < 1 || design.p() < 1) throw DimensionError("design must be at least 1x1");
    if (!design.values.allFinite()) throw DomainError("design contains non-finite entries");
    if (design.column_labels.size() != design.p()) {
        throw DimensionError("design has " + std::to_string(design.p()) + " columns but " +
                             std::to_string(design.column_labels.size()) + " labels");
    }
    if (design.kind == DesignKind::Trig) {
        if (design.p() % 2 != 0 || design.p() > design.n()) {
            throw DimensionError("trig design requires even p <= n");
        }
        const Eigen::MatrixXd gram = design.values.transpose() * design.values;
        const double limit = 1e-9 * static_cast<double>(design.n());
        for (Eigen::Index i = 0; i < gram.rows(); ++i) {
            for (Eigen::Index j = 0; j < i; ++j) {
                if (std::abs(gram(i, j)) > limit) {
                    throw DomainError("trig design columns are not orthogonal");
                }
            }
        }
    }
}

Design gen_trig_design(std::size_t n, std::size_t p, bool normalize) {
    if (n < 2) throw DimensionError("trig design requires n >= 2");
    if (p < 2 || p % 2 != 0) throw DimensionError("trig design requires an even p >= 2");
    if (p > n) throw DimensionError("trig design requires p <= n");

    Design d;
    d.kind = DesignKind::Trig;
    d.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t j = 1; j <= p / 2; ++j) {
        const auto sin_col = static_cast<Eigen::Index>(2 * j - 2);
        for (std::size_t i = 0; i < n; ++i) {
            // Reduce the phase exactly in integers before calling sin/cos.
            const std::size_t k = (j * i) % n;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(n);
            double s = std::sin(angle);
            double c = std::cos(angle);
            if (2 * k == n) s = 0.0;  // sin(pi)
            const auto row = static_cast<Eigen::Index>(i);
            d.values(row, sin_col) = s;
            d.values(row, sin_col + 1) = c;
        }
        d.column_labels.push_back("sin" + std::to_string(j));
        d.column_labels.push_back("cos" + std::to_string(j));
    }
    if (normalize) return normalize_columns(d);
    return d;
}

Design gen_gaussian_design(std::size_t n, std::size_t p, RngStream rng) {
    if (n < 1 || p < 1) throw DimensionError("gaussian design requires n, p >= 1");
    Design d;
    d.kind = DesignKind::IidGaussian;
    d.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < d.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < d.values.cols(); ++j) d.values(i, j) = rng.normal();
    }
    for (std::size_t j = 0; j < p; ++j) d.column_labels.push_back("x" + std::to_string(j + 1));
    return d;
}

Design normalize_columns(const Design& design) {
    Design out = design;
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        const double norm = out.values.col(j).norm();
        if (norm > 0.0) out.values.col(j) /= norm;
    }
    out.normalized = true;
    return out;
}

std::uint64_t interaction_count(std::size_t p, std::size_t k) {
    if (k < 1 || k > p) throw DomainError("interaction order must satisfy 1 <= k <= p");
    std::uint64_t total = 0;
    std::uint64_t binom = 1;  // C(p, 0)
    for (std::size_t i = 1; i <= k; ++i) {
        binom = binom * (p - i + 1) / i;
        total += binom;
    }
    return total;
}

Design expand_interactions(const Design& base, std::size_t max_order) {
    const std::size_t p = base.p();
    if (max_order < 1 || max_order > p) {
        throw DomainError("expand_interactions: order " + std::to_string(max_order) +
                          " outside [1, " + std::to_string(p) + "]");
    }
    const std::uint64_t total = interaction_count(p, max_order);
    Design out;
    out.kind = DesignKind::InteractionExpanded;
    out.values.resize(base.values.rows(), static_cast<Eigen::Index>(total));

    Eigen::Index next = 0;
    std::vector<std::size_t> combo;
    for (std::size_t order = 1; order <= max_order; ++order) {
        combo.resize(order);
        for (std::size_t i = 0; i < order; ++i) combo[i] = i;
        while (true) {
            Eigen::VectorXd col = base.values.col(static_cast<Eigen::Index>(combo[0]));
            std::string label = base.column_labels[combo[0]];
            for (std::size_t i = 1; i < order; ++i) {
                col.array() *= base.values.col(static_cast<Eigen::Index>(combo[i])).array();
                label += ":" + base.column_labels[combo[i]];
            }
            out.values.col(next++) = col;
            out.column_labels.push_back(std::move(label));

            // Advance to the next combination in lexicographic order.
            std::size_t i = order;
            while (i > 0 && combo[i - 1] == p - order + i - 1) --i;
            if (i == 0) break;
            ++combo[i - 1];
            for (std::size_t k = i; k < order; ++k) combo[k] = combo[k - 1] + 1;
        }
    }
    out = normalize_columns(out);
    out.kind = DesignKind::InteractionExpanded;
    return out;
}

GeneratingModel::GeneratingModel(std::map<std::size_t, double> beta0, double sigma2)
    : beta0_(std::move(beta0)), sigma2_(sigma2) {
    if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_)) {
        throw DomainError("noise variance must be finite and non-negative");
    }
    for (const auto& [index, value] : beta0_) {
        if (value == 0.0 || !std::isfinite(value)) {
            throw DomainError("true coefficient on column " + std::to_string(index) +
                              " must be finite and nonzero");
        }
    }
}

GeneratingModel GeneratingModel::leading(const std::vector<double>& coefficients,
                                         double sigma2) {
    std::map<std::size_t, double> beta0;
    for (std::size_t j = 0; j < coefficients.size(); ++j) beta0.emplace(j, coefficients[j]);
    return GeneratingModel(std::move(beta0), sigma2);
}

std::size_t GeneratingModel::min_columns() const noexcept {
    return beta0_.empty() ? 0 : beta0_.rbegin()->first + 1;
}

Eigen::VectorXd GeneratingModel::mean(const Design& design) const {
    if (min_columns() > design.p()) {
        throw DimensionError("true coefficient index " + std::to_string(min_columns() - 1) +
                             " out of range for a design with " +
                             std::to_string(design.p()) + " columns");
    }
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(design.values.rows());
    for (const auto& [index, value] : beta0_) {
        mu += value * design.values.col(static_cast<Eigen::Index>(index));
    }
    return mu;
}

Realization gen_response(const Design& design, const GeneratingModel& model,
                         std::uint64_t master_seed, std::uint64_t replicate) {
    Realization r;
    r.mu = model.mean(design);
    r.seed = master_seed;
    r.replicate_index = replicate;
    r.y = r.mu;
    const double sd = std::sqrt(model.sigma2());
    if (sd > 0.0) {
        RngStream rng(master_seed, replicate);
        for (Eigen::Index i = 0; i < r.y.size(); ++i) r.y(i) += sd * rng.normal();
    }
    return r;
}

void write_design_csv(std::ostream& out, const Design& design) {
    csv::write_row(out, design.column_labels);
    std::vector<std::string> cells(design.p());
    for (Eigen::Index i = 0; i < design.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < design.values.cols(); ++j) {
            cells[static_cast<std::size_t>(j)] = csv::format_double(design.values(i, j));
        }
        csv::write_row(out, cells);
    }
}

void write_realization_csv(std::ostream& out, const Realization& realization) {
    csv::write_row(out, {"observation", "y", "mu"});
    for (Eigen::Index i = 0; i < realization.y.size(); ++i) {
        csv::write_row(out, {std::to_string(i + 1), csv::format_double(realization.y(i)),
                             csv::format_double(realization.mu(i))});
    }
}

}  // namespace lassodet
