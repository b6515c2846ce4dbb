#include "lassodet/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "lassodet/design.hpp"
#include "lassodet/errors.hpp"
#include "lassodet/parallel.hpp"
#include "lassodet/path_solver.hpp"
#include "lassodet/rng.hpp"

namespace lassodet::analyze {

DatasetSplit make_split(std::size_t n, double fraction, std::uint64_t seed, std::size_t index) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("fraction must lie in (0, 1)");
    const auto n_train = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
    if (n_train < 2 || n_train >= n) {
        throw DimensionError("split of " + std::to_string(n) + " rows at fraction " +
                             std::to_string(fraction) + " leaves a part too small");
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    RngStream rng(seed, index);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
        std::swap(perm[i], perm[std::min(j, i)]);
    }
    DatasetSplit s;
    s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    s.split_seed = seed;
    s.split_index = index;
    s.fraction = fraction;
    return s;
}

namespace {

struct Fitted {
    double mse = 0.0;
    double lambda = 0.0;
    std::vector<std::string> dropped;
    std::vector<std::string> active;
};

// Rows [0, n_train) of `all` are training rows, the rest test rows.
Fitted fit_min_mse(const Design& all, std::size_t n_train, const Eigen::VectorXd& y_train,
                   const Eigen::VectorXd& y_test, const Options& opt) {
    const auto nt = static_cast<Eigen::Index>(n_train);
    std::vector<Eigen::Index> keep;
    Fitted f;
    for (Eigen::Index j = 0; j < all.values.cols(); ++j) {
        const auto col = all.values.col(j).head(nt);
        if (col.maxCoeff() - col.minCoeff() > 0.0) {
            keep.push_back(j);
        } else {
            f.dropped.push_back(all.column_labels[static_cast<std::size_t>(j)]);
        }
    }
    const auto k = static_cast<Eigen::Index>(keep.size());
    const Eigen::Index n_test = all.values.rows() - nt;
    Eigen::MatrixXd xtr(nt, k), xte(n_test, k);
    for (Eigen::Index c = 0; c < k; ++c) {
        xtr.col(c) = all.values.col(keep[c]).head(nt);
        xte.col(c) = all.values.col(keep[c]).tail(n_test);
    }

    path::FitConfig cfg;
    cfg.intercept = true;
    cfg.standardize = true;
    cfg.grid.count = opt.lambda_count;
    cfg.grid.ratio = opt.lambda_ratio;
    const auto p = path::fit_path(xtr, y_train, cfg);
    const auto ev = path::evaluate_path(p, xtr, y_train, path::EvalTarget::test_mse(xte, y_test));
    f.mse = ev.min_value;
    f.lambda = ev.lambda_star;
    for (std::size_t a : p.active_sets[ev.index]) {
        f.active.push_back(all.column_labels[static_cast<std::size_t>(keep[a])]);
    }
    return f;
}

}  // namespace

Report run(const csv::NumericTable& data, const Options& opt) {
    if (opt.splits < 1) throw DomainError("need at least one split");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const std::size_t resp = data.column_index(opt.response);
    const std::size_t n = data.rows.size();
    if (data.header.size() < 2) throw DimensionError("no predictor columns besides the response");

    Report rep;
    rep.options = opt;
    rep.observations = n;
    std::vector<std::size_t> pred_cols;
    for (std::size_t j = 0; j < data.header.size(); ++j) {
        if (j == resp) continue;
        pred_cols.push_back(j);
        rep.main_effects.push_back(data.header[j]);
    }
    const std::size_t p = pred_cols.size();
    rep.interaction_columns = static_cast<std::size_t>(interaction_count(p, 2)) - p;
    rep.splits.resize(opt.splits);

    parallel_for(opt.splits, opt.threads, [&](std::size_t s) {
        const DatasetSplit split = make_split(n, opt.fraction, opt.seed, s);
        std::vector<std::size_t> order = split.train;
        order.insert(order.end(), split.test.begin(), split.test.end());
        const auto rows = static_cast<Eigen::Index>(n);
        const auto nt = static_cast<Eigen::Index>(split.train.size());

        Design base;
        base.kind = DesignKind::File;
        base.column_labels = rep.main_effects;
        base.values.resize(rows, static_cast<Eigen::Index>(p));
        Eigen::VectorXd y(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const auto& src = data.rows[order[static_cast<std::size_t>(i)]];
            y(i) = src[resp];
            for (std::size_t j = 0; j < p; ++j) base.values(i, static_cast<Eigen::Index>(j)) = src[pred_cols[j]];
        }
        if (opt.standardize) {
            for (Eigen::Index j = 0; j < base.values.cols(); ++j) {
                const auto train = base.values.col(j).head(nt);
                const double mean = train.mean();
                const double sd = std::sqrt((train.array() - mean).square().sum() /
                                            static_cast<double>(nt - 1));
                base.values.col(j).array() -= mean;
                if (sd > 0.0) base.values.col(j) /= sd;
            }
        }
        const Design apl = expand_interactions(base, 2);
        const Eigen::VectorXd y_train = y.head(nt), y_test = y.tail(rows - nt);

        const Fitted mel = fit_min_mse(base, split.train.size(), y_train, y_test, opt);
        const Fitted full = fit_min_mse(apl, split.train.size(), y_train, y_test, opt);

        SplitOutcome& out = rep.splits[s];
        out.train_size = split.train.size();
        out.test_size = split.test.size();
        out.mel_mse = mel.mse;
        out.apl_mse = full.mse;
        out.ratio = full.mse / mel.mse;
        out.mel_lambda = mel.lambda;
        out.apl_lambda = full.lambda;
        out.mel_dropped = mel.dropped;
        out.apl_dropped = full.dropped;
        for (const auto& label : full.active) {
            if (label.find(':') != std::string::npos) out.apl_interactions.push_back(label);
        }
    });

    std::vector<double> ratios, apl, mel;
    for (const auto& s : rep.splits) {
        ratios.push_back(s.ratio);
        apl.push_back(s.apl_mse);
        mel.push_back(s.mel_mse);
    }
    rep.median_ratio = stats::median(ratios);

    if (opt.splits < 2) {
        rep.wilcoxon_note = "Wilcoxon test needs at least 2 splits; not performed";
    } else {
        try {
            rep.wilcoxon = stats::wilcoxon_signed_rank(apl, mel, opt.alpha);
        } catch (const DomainError& e) {
            rep.wilcoxon_note = std::string("Wilcoxon test not performed: ") + e.what();
        }
    }

    std::set<std::string> stable(rep.splits[0].apl_interactions.begin(),
                                 rep.splits[0].apl_interactions.end());
    for (const auto& s : rep.splits) {
        const std::set<std::string> here(s.apl_interactions.begin(), s.apl_interactions.end());
        std::set<std::string> both;
        std::set_intersection(stable.begin(), stable.end(), here.begin(), here.end(),
                              std::inserter(both, both.end()));
        stable = std::move(both);
    }
    // Keep expansion order rather than alphabetical.
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            const std::string label = rep.main_effects[a] + ":" + rep.main_effects[b];
            if (stable.count(label)) rep.stable_interactions.push_back(label);
        }
    }
    return rep;
}

void write_report(std::ostream& out, const Report& rep) {
    const auto& o = rep.options;
    out << "# response: " << o.response << "\n";
    out << "# observations: " << rep.observations << ", main effects: " << rep.main_effects.size()
        << ", pairwise interactions: " << rep.interaction_columns << "\n";
    out << "# splits: " << o.splits << ", train fraction: " << csv::format_double(o.fraction)
        << ", seed: " << o.seed << "\n";
    out << "# standardize before expansion: " << (o.standardize ? "yes" : "no") << "\n";
    out << "# criterion: minimum test-set MSE over the Lasso path (" << o.lambda_count
        << " lambdas, ratio "
        << (o.lambda_ratio == 0.0 ? std::string("auto") : csv::format_double(o.lambda_ratio)) << ")\n";
    csv::write_row(out, {"split", "train", "test", "mel_mse", "apl_mse", "ratio", "mel_lambda",
                         "apl_lambda", "apl_interactions"});
    for (std::size_t s = 0; s < rep.splits.size(); ++s) {
        const auto& r = rep.splits[s];
        csv::write_row(out, {std::to_string(s), std::to_string(r.train_size),
                             std::to_string(r.test_size), csv::format_double(r.mel_mse),
                             csv::format_double(r.apl_mse), csv::format_double(r.ratio),
                             csv::format_double(r.mel_lambda), csv::format_double(r.apl_lambda),
                             std::to_string(r.apl_interactions.size())});
    }
    out << "# median APL/MEL ratio: " << csv::format_double(rep.median_ratio) << "\n";
    if (rep.wilcoxon) {
        const auto& w = *rep.wilcoxon;
        out << "# wilcoxon signed-rank (APL vs MEL): V=" << csv::format_double(w.statistic)
            << ", pairs=" << w.n_effective << ", " << (w.exact ? "exact" : "normal approximation")
            << ", p(two-sided)=" << csv::format_double(w.p_two_sided)
            << ", p(APL worse)=" << csv::format_double(w.p_greater)
            << ", p(APL better)=" << csv::format_double(w.p_less) << "\n";
        const char* verdict = !w.significant          ? "no significant difference"
                              : w.p_greater < w.p_less ? "APL significantly worse"
                                                       : "APL significantly better";
        out << "# decision at alpha=" << csv::format_double(w.alpha) << ": " << verdict << "\n";
    } else {
        out << "# " << rep.wilcoxon_note << "\n";
    }
    out << "# interactions selected in all splits:";
    if (rep.stable_interactions.empty()) out << " none";
    for (const auto& s : rep.stable_interactions) out << ' ' << s;
    out << "\n";
}

}  // namespace lassodet::analyze
