#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lassodet/path_solver.hpp"
#include "lassodet/theory.hpp"

namespace lassodet::experiments {

enum class ExperimentKind {
    OrthoRatioVsP,      // trig design, optimal loss ratio against the p0 true predictors
    BoundConservatism,  // same runs, summarized against the oracle bounds
    GrowingN,           // p2 = n against p1 = round(2 ln n) as n grows
    GaussianRatioVsP,   // iid Gaussian design simulated once, p may exceed n
    LassoPlusOls,       // trig design, Lasso and least-squares refit losses
    MseRatio,           // Gaussian design, minimum test-set MSE ratio
    McTheoremCheck,     // deterioration frequency against the closed forms
    Table1,             // ANOVA deterioration table
};

const char* to_string(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view text);

enum class SolverChoice { Auto, Exact, Path };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::OrthoRatioVsP;
    std::size_t n = 100;
    std::vector<std::size_t> p_grid;
    std::vector<std::size_t> n_grid;  // GrowingN only
    std::vector<double> beta0{6, 5, 4, 3, 2, 1};
    std::vector<double> sigma2{4};
    std::size_t replicates = 100;
    std::uint64_t seed = 1;
    path::FitConfig solver;
    std::optional<bool> standardize;  // unset: on for Gaussian designs, off for trig
    SolverChoice solver_choice = SolverChoice::Auto;
    std::size_t test_set_size = 0;  // MseRatio; 0 means n
    double coverage = 0.95;
    std::optional<bool> bounds;  // bound overlay in the summary; default per kind
    double beta1 = 3.0;          // McTheoremCheck / Table1
    double sigma = 1.0;

    std::size_t p0() const noexcept { return beta0.size(); }
};

/// Flat `key = value` text, one pair per line, '#' starts a comment. Lists are
/// comma separated and may contain `start:stop:step` ranges.
/// Throws ParseError carrying the offending line number.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config(std::string_view text);

/// Canonical text form of a config (round-trips through parse_config).
std::string to_text(const ExperimentConfig& config);

/// Built-in presets: fig1, fig2, fig3, fig4, lasso-ols, appendixB, table1, mc-check.
std::string preset_text(std::string_view name);
std::vector<std::string> preset_names();

struct Setting {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t p_baseline = 0;
    double sigma2 = 0.0;
};

struct Row {
    std::size_t setting = 0;
    std::size_t replicate = 0;
    double loss = 0.0;           // optimal criterion with p predictors
    double baseline_loss = 0.0;  // optimal criterion with the baseline predictors
    double ratio = 0.0;          // loss / baseline_loss; 0/0 recorded as 1
    double lambda_star = 0.0;
    bool at_lambda_max = false;  // optimum shrinks every coefficient to zero
    double refit_loss = 0.0;     // LassoPlusOls only
    bool sign_match = false;     // McTheoremCheck only
    bool deteriorated = false;   // McTheoremCheck only
};

struct ExperimentResult {
    ExperimentConfig config;  // as run, after rounding and defaults
    std::vector<Setting> settings;
    std::vector<Row> rows;  // ordered by setting, then replicate
    std::optional<theory::Table1> table;
    std::vector<std::pair<std::string, std::string>> metadata;
};

/// Validates and applies defaults; trig p values that are odd are rounded up to
/// even and noted. Throws DomainError/DimensionError before any computation.
ExperimentConfig prepare(ExperimentConfig config, std::vector<std::string>* notes = nullptr);

/// Runs every replicate on up to `threads` workers. Output is independent of the
/// thread count: replicate r always draws from stream (seed, r).
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 1);

double loss_ratio(double loss, double baseline);

struct BoundOverlay {
    double coverage = 0.95;
    double psi0 = 1.0;
    double kappa = 1.0;
};

struct SummaryTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;  // throws if absent
    double at(std::size_t row, std::string_view name) const { return rows[row][column(name)]; }
};

/// Per-setting medians (and means), plus bound columns when an overlay is given.
SummaryTable summarize(const ExperimentResult& result,
                       const std::optional<BoundOverlay>& overlay = std::nullopt);

/// Overlay implied by the config (coverage, default on for BoundConservatism).
std::optional<BoundOverlay> default_overlay(const ExperimentConfig& config);

void write_rows_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_csv(std::ostream& out, const SummaryTable& summary);
void write_metadata_json(std::ostream& out, const ExperimentResult& result);

}  // namespace lassodet::experiments
