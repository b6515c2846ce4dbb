#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lassodet/design.hpp"
#include "lassodet/ortho_lasso.hpp"

namespace lassodet::theory {

/// Orthonormal single-signal setting: z1 ~ N(beta1, sigma^2), z_j ~ N(0, sigma^2).
struct DeteriorationQuery {
    double beta1 = 0.0;
    double sigma = 1.0;  // noise standard deviation
    std::size_t p = 2;
};

/// Throws DomainError unless beta1 != 0, sigma > 0 and p >= 2.
void validate(const DeteriorationQuery& q);

/// P(L_p(lambda*_p) > L_1(lambda*_1)) = Phi(|beta1|/sigma) - 1/(2p)
double prob_deterioration(const DeteriorationQuery& q);

/// Same probability conditioned on sgn(z1) = sgn(beta1): 1 - 1/(2p Phi(|beta1|/sigma))
double prob_deterioration_given_sign(const DeteriorationQuery& q);

/// Predictors in an effects-coded ANOVA with all interactions up to `order`.
std::uint64_t anova_predictor_count(std::size_t p_main, std::size_t order);

struct Table1 {
    double beta1 = 3.0;
    double sigma = 1.0;
    std::vector<std::size_t> p_main;      // column headers
    std::vector<std::string> row_labels;  // main effects, two-way, ...
    // cells[order-1][column]; empty where the order exceeds p_main
    std::vector<std::vector<std::optional<double>>> cells;
};

/// Deterioration probability for ANOVA models with interactions of order 1..4
/// and p_main in {2, 4, 6, 8, 10}.
Table1 table1(double beta1 = 3.0, double sigma = 1.0);

/// CSV mirroring the table layout; absent cells are written as "-".
void write_table1_csv(std::ostream& out, const Table1& table);
void write_table1_text(std::ostream& out, const Table1& table);

struct McEstimate {
    std::size_t replicates = 0;
    std::size_t sign_matches = 0;
    std::size_t deteriorations = 0;
    double frequency = 0.0;
    double standard_error = 0.0;
    double conditional_frequency = 0.0;  // given sgn(z1) = sgn(beta1)
    double conditional_standard_error = 0.0;
};

/// One Monte Carlo replicate: the optimum with all p predictors and with only
/// the true one, from stream (master_seed, replicate). See mc_prob_deterioration
/// for how z is produced.
struct McDraw {
    ortho::OrthoOptimum multi;
    ortho::OrthoOptimum single;
};

McDraw mc_draw(const DeteriorationQuery& q, std::uint64_t master_seed, std::uint64_t replicate,
               const Design* design = nullptr);

/// Monte Carlo estimate of the deterioration probability.
///
/// Replicate r draws from stream (master_seed, r). Without a design, z is drawn
/// directly from its distribution; with one (an orthonormal n x p design whose
/// first column carries beta1) a response is generated and z = X'y. Each draw is
/// scored by the case tag of ortho::optimal_multi.
McEstimate mc_prob_deterioration(const DeteriorationQuery& q, std::size_t replicates,
                                 std::uint64_t master_seed, const Design* design = nullptr,
                                 unsigned threads = 1);

}  // namespace lassodet::theory
