#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lassodet/csv.hpp"
#include "lassodet/stats.hpp"

namespace lassodet::analyze {

/// Random train/test partition of n observations.
struct DatasetSplit {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
    std::uint64_t split_seed = 0;
    std::size_t split_index = 0;
    double fraction = 0.5;
};

/// Shuffles 0..n-1 with stream (seed, index) and puts the first round(fraction n)
/// into the training set. Throws unless both parts end up nonempty.
DatasetSplit make_split(std::size_t n, double fraction, std::uint64_t seed, std::size_t index);

struct Options {
    std::string response;
    std::size_t splits = 20;
    double fraction = 0.5;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    bool standardize = false;  // center and scale main effects before forming products
    std::size_t lambda_count = 100;
    double lambda_ratio = 0.0;  // 0: path default for the problem shape
    unsigned threads = 1;
};

struct SplitOutcome {
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    double mel_mse = 0.0;
    double apl_mse = 0.0;
    double ratio = 0.0;  // apl / mel
    double mel_lambda = 0.0;
    double apl_lambda = 0.0;
    std::vector<std::string> mel_dropped;  // constant on the training rows
    std::vector<std::string> apl_dropped;
    std::vector<std::string> apl_interactions;  // interaction terms active at the optimum
};

struct Report {
    Options options;
    std::size_t observations = 0;
    std::vector<std::string> main_effects;
    std::size_t interaction_columns = 0;
    std::vector<SplitOutcome> splits;
    double median_ratio = 0.0;
    std::optional<stats::WilcoxonResult> wilcoxon;
    std::string wilcoxon_note;  // why the test was skipped
    std::vector<std::string> stable_interactions;  // active in every split
};

/// MEL (main effects only) against APL (main effects plus all pairwise
/// products): each split fits both Lasso paths on the training rows and records
/// the minimum test-set MSE over the path.
Report run(const csv::NumericTable& data, const Options& options);

void write_report(std::ostream& out, const Report& report);

}  // namespace lassodet::analyze
