#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lassodet/rng.hpp"

namespace lassodet {

enum class DesignKind { Trig, IidGaussian, File, InteractionExpanded };

const char* to_string(DesignKind kind);

/// An n x p deterministic predictor matrix with provenance.
struct Design {
    Eigen::MatrixXd values;
    DesignKind kind = DesignKind::File;
    std::vector<std::string> column_labels;
    bool normalized = false;  // every nonzero column rescaled to unit Euclidean norm

    std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t p() const { return static_cast<std::size_t>(values.cols()); }

    /// First `count` columns, same provenance.
    Design leading_columns(std::size_t count) const;
};

/// Throws DimensionError/DomainError if the invariants of `design` do not hold.
void validate(const Design& design);

/// Sine/cosine pairs x_{i,2j-1} = sin(2 pi j (i-1)/n), x_{i,2j} = cos(...), j = 1..p/2.
///
/// With normalize the nonzero columns are scaled to unit norm. When p = n and n is
/// even the sine column at j = n/2 vanishes identically and stays zero.
Design gen_trig_design(std::size_t n, std::size_t p, bool normalize);

/// n x p matrix of iid N(0,1) draws from `rng` (consumed row-major).
Design gen_gaussian_design(std::size_t n, std::size_t p, RngStream rng);

/// All products of i distinct base columns for i = 1..max_order, each scaled to
/// unit Euclidean norm. Labels join the base labels with ':'.
Design expand_interactions(const Design& base, std::size_t max_order);

/// Copy of `design` with every nonzero column scaled to unit norm.
Design normalize_columns(const Design& design);

/// Sparse true coefficient vector plus noise variance.
class GeneratingModel {
public:
    /// Drops nothing silently: zero coefficients are rejected.
    GeneratingModel(std::map<std::size_t, double> beta0, double sigma2);

    /// Coefficients (b_1, ..., b_k) on columns 0..k-1.
    static GeneratingModel leading(const std::vector<double>& coefficients, double sigma2);

    const std::map<std::size_t, double>& beta0() const noexcept { return beta0_; }
    double sigma2() const noexcept { return sigma2_; }
    std::size_t p0() const noexcept { return beta0_.size(); }
    /// Largest column index referenced plus one.
    std::size_t min_columns() const noexcept;

    Eigen::VectorXd mean(const Design& design) const;

private:
    std::map<std::size_t, double> beta0_;
    double sigma2_;
};

struct Realization {
    Eigen::VectorXd y;
    Eigen::VectorXd mu;
    std::uint64_t seed = 0;
    std::uint64_t replicate_index = 0;
};

/// y = X beta0 + eps with eps_i iid N(0, sigma2) from stream (seed, replicate).
Realization gen_response(const Design& design, const GeneratingModel& model,
                         std::uint64_t master_seed, std::uint64_t replicate);

/// Headered CSV, one row per observation.
void write_design_csv(std::ostream& out, const Design& design);
void write_realization_csv(std::ostream& out, const Realization& realization);

/// Binomial coefficient sum_{i=1}^{k} C(p, i), exact.
std::uint64_t interaction_count(std::size_t p, std::size_t k);

}  // namespace lassodet
