#include "lassodet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <ostream>

#include "lassodet/csv.hpp"
#include "lassodet/design.hpp"
#include "lassodet/errors.hpp"
#include "lassodet/oracle_bounds.hpp"
#include "lassodet/ortho_lasso.hpp"
#include "lassodet/parallel.hpp"
#include "lassodet/stats.hpp"

namespace lassodet::experiments {
namespace {

bool is_trig_kind(ExperimentKind k) {
    return k == ExperimentKind::OrthoRatioVsP || k == ExperimentKind::BoundConservatism ||
           k == ExperimentKind::GrowingN || k == ExperimentKind::LassoPlusOls;
}

bool is_gaussian_kind(ExperimentKind k) {
    return k == ExperimentKind::GaussianRatioVsP || k == ExperimentKind::MseRatio;
}

// Loss kinds can carry a bound overlay; MSE and the theory checks cannot.
bool has_loss(ExperimentKind k) { return is_trig_kind(k) || k == ExperimentKind::GaussianRatioVsP; }

std::size_t round_up_even(std::size_t p) { return p + (p % 2); }

std::size_t growing_p1(std::size_t n) {
    const auto p1 = static_cast<std::size_t>(std::lround(2.0 * std::log(static_cast<double>(n))));
    return round_up_even(std::max<std::size_t>(p1, 2));
}

std::size_t growing_p2(std::size_t n) { return n - (n % 2); }

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void note(std::vector<std::string>* notes, std::string text) {
    if (notes != nullptr) notes->push_back(std::move(text));
}

std::string list_text(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

}  // namespace

double loss_ratio(double loss, double baseline) {
    if (baseline == 0.0) return loss == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return loss / baseline;
}

ExperimentConfig prepare(ExperimentConfig c, std::vector<std::string>* notes) {
    if (c.replicates < 1) throw DomainError("replicates must be at least 1");
    if (!(c.coverage > 0.0 && c.coverage < 1.0)) throw DomainError("coverage must lie in (0, 1)");

    if (c.kind == ExperimentKind::Table1) {
        if (c.beta1 == 0.0) throw DomainError("beta1 must be nonzero");
        if (!(c.sigma > 0.0)) throw DomainError("sigma must be positive");
        return c;
    }

    if (c.kind == ExperimentKind::McTheoremCheck) {
        if (c.beta1 == 0.0) throw DomainError("beta1 must be nonzero");
        if (!(c.sigma > 0.0)) throw DomainError("sigma must be positive");
        if (c.p_grid.empty()) throw DomainError("p_grid is empty");
        for (auto& p : c.p_grid) {
            if (p < 2) throw DomainError("deterioration checks need p >= 2");
            if (p % 2 != 0) {
                note(notes, "p=" + std::to_string(p) + " rounded up to " +
                                std::to_string(p + 1) + " (trig columns come in pairs)");
                p = round_up_even(p);
            }
            if (p > c.n) {
                throw DimensionError("p=" + std::to_string(p) + " exceeds n=" + std::to_string(c.n));
            }
        }
        if (c.bounds.value_or(false)) throw DomainError("bounds apply only to loss experiments");
        return c;
    }

    if (c.beta0.empty()) throw DomainError("beta0 is empty");
    for (double b : c.beta0) {
        if (b == 0.0 || !std::isfinite(b)) throw DomainError("beta0 entries must be nonzero and finite");
    }
    if (c.sigma2.empty()) throw DomainError("sigma2 is empty");
    for (double s : c.sigma2) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("sigma2 entries must be non-negative");
    }
    if (c.bounds.value_or(false) && !has_loss(c.kind)) {
        throw DomainError(std::string("bounds do not apply to ") + to_string(c.kind));
    }

    const bool gaussian = is_gaussian_kind(c.kind);
    if (gaussian && c.solver_choice == SolverChoice::Exact) {
        throw DomainError("the exact solver needs an orthonormal design");
    }
    c.solver.standardize = c.standardize.value_or(gaussian);
    path::validate(c.solver);

    if (c.kind == ExperimentKind::GrowingN) {
        if (c.n_grid.empty()) throw DomainError("n_grid is empty");
        for (std::size_t n : c.n_grid) {
            if (n < 2) throw DimensionError("every n must be at least 2");
            const std::size_t p1 = growing_p1(n);
            if (p1 < c.p0()) {
                throw DimensionError("at n=" + std::to_string(n) + " p1=" + std::to_string(p1) +
                                     " is smaller than p0=" + std::to_string(c.p0()));
            }
            if (p1 > growing_p2(n)) {
                throw DimensionError("at n=" + std::to_string(n) + " p1 exceeds p2");
            }
        }
        return c;
    }

    if (c.p_grid.empty()) throw DomainError("p_grid is empty");
    if (c.n < 2) throw DimensionError("n must be at least 2");
    for (auto& p : c.p_grid) {
        if (!gaussian && p % 2 != 0) {
            note(notes, "p=" + std::to_string(p) + " rounded up to " + std::to_string(p + 1) +
                            " (trig columns come in pairs)");
            p = round_up_even(p);
        }
        if (p < c.p0()) {
            throw DimensionError("p=" + std::to_string(p) + " is smaller than p0=" +
                                 std::to_string(c.p0()));
        }
        if (!gaussian && p > c.n) {
            throw DimensionError("trig design needs p <= n, got p=" + std::to_string(p));
        }
    }
    if (!gaussian && c.p0() > c.n) throw DimensionError("p0 exceeds n");
    std::vector<std::size_t> sorted = c.p_grid;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted != c.p_grid) {
        note(notes, "p_grid sorted and deduplicated to " + list_text(sorted));
        c.p_grid = std::move(sorted);
    }
    if (c.kind == ExperimentKind::MseRatio && c.test_set_size == 0) c.test_set_size = c.n;
    return c;
}

namespace {

struct Runner {
    const ExperimentConfig& c;
    ExperimentResult& res;
    unsigned threads;

    void store(std::size_t setting, std::size_t r, Row row) {
        row.setting = setting;
        row.replicate = r;
        row.ratio = loss_ratio(row.loss, row.baseline_loss);
        res.rows[setting * c.replicates + r] = row;
    }

    bool exact() const {
        return c.solver_choice != SolverChoice::Path && !is_gaussian_kind(c.kind);
    }

    // Optimal loss on the first p normalized trig columns, plus the refit loss.
    struct Fit {
        double loss = 0.0;
        double lambda = 0.0;
        bool at_max = false;
        double refit = 0.0;
    };

    Fit fit_exact(const std::vector<double>& b, const std::vector<double>& z, std::size_t p,
                  std::size_t n, bool refit) const {
        const std::span<const double> bs(b.data(), p), zs(z.data(), p);
        const auto m = ortho::minimize_shrinkage_loss(bs, zs);
        Fit f{m.loss / static_cast<double>(n), m.lambda, m.full_shrinkage, 0.0};
        if (refit) f.refit = ortho::minimize_refit_loss(bs, zs).loss / static_cast<double>(n);
        return f;
    }

    Fit fit_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                 bool refit) const {
        const auto path = path::fit_path(x, y, c.solver);
        path::EvalOptions opt;
        opt.score_intercept = false;
        const auto target = path::EvalTarget::loss_vs_mean(mu);
        const auto ev = path::evaluate_path(path, x, y, target, opt);
        Fit f{ev.min_value, ev.lambda_star, ev.at_lambda_max, 0.0};
        if (refit) {
            opt.refit = true;
            f.refit = path::evaluate_path(path, x, y, target, opt).min_value;
        }
        return f;
    }

    void trig_ratio() {
        const bool refit = c.kind == ExperimentKind::LassoPlusOls;
        const std::size_t pmax = c.p_grid.back();
        const Design raw = gen_trig_design(c.n, pmax, false);
        const Design xn = normalize_columns(raw);
        const Eigen::VectorXd mu = GeneratingModel::leading(c.beta0, 0.0).mean(raw);
        const std::vector<double> b = to_std(xn.values.transpose() * mu);

        for (double s2 : c.sigma2) {
            for (std::size_t p : c.p_grid) res.settings.push_back({c.n, p, c.p0(), s2});
        }
        res.rows.resize(res.settings.size() * c.replicates);

        parallel_for(c.replicates, threads, [&](std::size_t r) {
            RngStream rng(c.seed, r);
            Eigen::VectorXd eps(static_cast<Eigen::Index>(c.n));
            for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = rng.normal();
            std::size_t s = 0;
            for (double s2 : c.sigma2) {
                const Eigen::VectorXd y = mu + std::sqrt(s2) * eps;
                if (exact()) {
                    const std::vector<double> z = to_std(xn.values.transpose() * y);
                    const Fit base = fit_exact(b, z, c.p0(), c.n, false);
                    for (std::size_t p : c.p_grid) {
                        const Fit f = fit_exact(b, z, p, c.n, refit);
                        store(s++, r, {0, 0, f.loss, base.loss, 0, f.lambda, f.at_max, f.refit});
                    }
                } else {
                    const Fit base = fit_path(xn.values.leftCols(c.p0()), y, mu, false);
                    for (std::size_t p : c.p_grid) {
                        const Fit f = fit_path(xn.values.leftCols(p), y, mu, refit);
                        store(s++, r, {0, 0, f.loss, base.loss, 0, f.lambda, f.at_max, f.refit});
                    }
                }
            }
        });
    }

    void growing_n() {
        struct Case {
            Design raw, xn;
            Eigen::VectorXd mu;
            std::vector<double> b;
            std::size_t p1, p2;
        };
        std::vector<Case> cases;
        for (std::size_t n : c.n_grid) {
            Case k;
            k.p1 = growing_p1(n);
            k.p2 = growing_p2(n);
            k.raw = gen_trig_design(n, k.p2, false);
            k.xn = normalize_columns(k.raw);
            k.mu = GeneratingModel::leading(c.beta0, 0.0).mean(k.raw);
            k.b = to_std(k.xn.values.transpose() * k.mu);
            cases.push_back(std::move(k));
        }
        for (double s2 : c.sigma2) {
            for (const auto& k : cases) res.settings.push_back({k.raw.n(), k.p2, k.p1, s2});
        }
        res.rows.resize(res.settings.size() * c.replicates);

        parallel_for(c.replicates, threads, [&](std::size_t r) {
            std::size_t s = 0;
            for (double s2 : c.sigma2) {
                for (const auto& k : cases) {
                    // Each n has its own noise length; the stream restarts per setting.
                    RngStream rng(c.seed, r);
                    Eigen::VectorXd y = k.mu;
                    const double sd = std::sqrt(s2);
                    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += sd * rng.normal();
                    const std::size_t n = k.raw.n();
                    Fit base, f;
                    if (exact()) {
                        const std::vector<double> z = to_std(k.xn.values.transpose() * y);
                        base = fit_exact(k.b, z, k.p1, n, false);
                        f = fit_exact(k.b, z, k.p2, n, false);
                    } else {
                        base = fit_path(k.xn.values.leftCols(k.p1), y, k.mu, false);
                        f = fit_path(k.xn.values, y, k.mu, false);
                    }
                    store(s++, r, {0, 0, f.loss, base.loss, 0, f.lambda, f.at_max, 0});
                }
            }
        });
    }

    void gaussian() {
        const bool mse = c.kind == ExperimentKind::MseRatio;
        const std::size_t pmax = c.p_grid.back();
        const Design design = gen_gaussian_design(c.n, pmax, RngStream(c.seed, kDesignStream));
        const auto model = GeneratingModel::leading(c.beta0, 0.0);
        const Eigen::VectorXd mu = model.mean(design);

        for (double s2 : c.sigma2) {
            for (std::size_t p : c.p_grid) res.settings.push_back({c.n, p, c.p0(), s2});
        }
        res.rows.resize(res.settings.size() * c.replicates);

        parallel_for(c.replicates, threads, [&](std::size_t r) {
            RngStream rng(c.seed, r);
            Eigen::VectorXd eps(static_cast<Eigen::Index>(c.n));
            for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = rng.normal();

            Design test;
            Eigen::VectorXd test_mu, test_eps;
            if (mse) {
                RngStream trng = rng.substream(1);
                test = gen_gaussian_design(c.test_set_size, pmax, trng.substream(1));
                test_mu = model.mean(test);
                test_eps.resize(static_cast<Eigen::Index>(c.test_set_size));
                RngStream nrng = trng.substream(2);
                for (Eigen::Index i = 0; i < test_eps.size(); ++i) test_eps(i) = nrng.normal();
            }

            std::size_t s = 0;
            for (double s2 : c.sigma2) {
                const double sd = std::sqrt(s2);
                const Eigen::VectorXd y = mu + sd * eps;
                const Eigen::VectorXd test_y = mse ? Eigen::VectorXd(test_mu + sd * test_eps)
                                                   : Eigen::VectorXd();
                auto run = [&](std::size_t p) {
                    const Eigen::MatrixXd x = design.values.leftCols(p);
                    if (!mse) return fit_path(x, y, mu, false);
                    const auto path = path::fit_path(x, y, c.solver);
                    const Eigen::MatrixXd tx = test.values.leftCols(p);
                    const auto ev =
                        path::evaluate_path(path, x, y, path::EvalTarget::test_mse(tx, test_y));
                    return Fit{ev.min_value, ev.lambda_star, ev.at_lambda_max, 0.0};
                };
                const Fit base = run(c.p0());
                for (std::size_t p : c.p_grid) {
                    const Fit f = p == c.p0() ? base : run(p);
                    store(s++, r, {0, 0, f.loss, base.loss, 0, f.lambda, f.at_max, 0});
                }
            }
        });
    }

    void mc_check() {
        std::vector<Design> designs;
        for (std::size_t p : c.p_grid) {
            designs.push_back(gen_trig_design(c.n, p, true));
            res.settings.push_back({c.n, p, 1, c.sigma * c.sigma});
        }
        res.rows.resize(res.settings.size() * c.replicates);
        parallel_for(c.replicates, threads, [&](std::size_t r) {
            for (std::size_t s = 0; s < designs.size(); ++s) {
                const theory::DeteriorationQuery q{c.beta1, c.sigma, c.p_grid[s]};
                const auto d = theory::mc_draw(q, c.seed, r, &designs[s]);
                const double n = static_cast<double>(c.n);
                Row row{0, 0, d.multi.n_loss / n, d.single.n_loss / n, 0, d.multi.lambda_star,
                        false, 0};
                row.sign_match = d.multi.case_tag != ortho::CaseTag::SignMismatch;
                row.deteriorated = d.multi.case_tag == ortho::CaseTag::Deterioration;
                store(s, r, row);
            }
        });
    }
};

const char* solver_text(const ExperimentConfig& c) {
    if (c.kind == ExperimentKind::Table1 || c.kind == ExperimentKind::McTheoremCheck) {
        return "closed_form";
    }
    if (c.solver_choice == SolverChoice::Path || is_gaussian_kind(c.kind)) {
        return "coordinate_descent";
    }
    return "exact_orthonormal";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
    std::vector<std::string> notes;
    ExperimentResult res;
    res.config = prepare(config, &notes);
    const ExperimentConfig& c = res.config;

    Runner runner{c, res, threads};
    switch (c.kind) {
        case ExperimentKind::Table1: res.table = theory::table1(c.beta1, c.sigma); break;
        case ExperimentKind::McTheoremCheck: runner.mc_check(); break;
        case ExperimentKind::GrowingN: runner.growing_n(); break;
        case ExperimentKind::GaussianRatioVsP:
        case ExperimentKind::MseRatio: runner.gaussian(); break;
        default: runner.trig_ratio(); break;
    }

    auto& m = res.metadata;
    m.emplace_back("kind", to_string(c.kind));
    m.emplace_back("seed", std::to_string(c.seed));
    m.emplace_back("replicates", std::to_string(c.replicates));
    m.emplace_back("solver", solver_text(c));
    if (is_gaussian_kind(c.kind) || c.solver_choice == SolverChoice::Path) {
        m.emplace_back("intercept", c.solver.intercept ? "true" : "false");
        m.emplace_back("standardize", c.solver.standardize ? "true" : "false");
        m.emplace_back("lambda_count", std::to_string(c.solver.grid.count));
        m.emplace_back("lambda_ratio", c.solver.grid.ratio == 0.0
                                           ? "auto (1e-4 when n > p, else 1e-2)"
                                           : csv::format_double(c.solver.grid.ratio));
        m.emplace_back("tol", csv::format_double(c.solver.tol));
        m.emplace_back("max_sweeps", std::to_string(c.solver.max_sweeps));
    }
    if (has_loss(c.kind)) m.emplace_back("loss", "||X(beta0 - beta_hat)||^2 / n, intercept not scored");
    if (c.kind == ExperimentKind::MseRatio) {
        m.emplace_back("criterion", "minimum test-set MSE over the path");
        m.emplace_back("test_set_size", std::to_string(c.test_set_size));
    }
    if (c.kind == ExperimentKind::GrowingN) {
        m.emplace_back("p1_rule", "round(2 ln n), rounded up to even");
        m.emplace_back("p2_rule", "n, rounded down to even");
    }
    for (const auto& text : notes) m.emplace_back("note", text);
    return res;
}

std::size_t SummaryTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw DomainError("summary has no column '" + std::string(name) + "'");
}

std::optional<BoundOverlay> default_overlay(const ExperimentConfig& config) {
    const bool on = config.bounds.value_or(config.kind == ExperimentKind::BoundConservatism);
    if (!on || !has_loss(config.kind)) return std::nullopt;
    return BoundOverlay{config.coverage, 1.0, 1.0};
}

SummaryTable summarize(const ExperimentResult& result, const std::optional<BoundOverlay>& overlay) {
    const ExperimentConfig& c = result.config;
    SummaryTable t;

    if (result.table) {
        t.columns = {"order", "p_main", "predictors", "probability"};
        const auto& tab = *result.table;
        for (std::size_t o = 0; o < tab.cells.size(); ++o) {
            for (std::size_t j = 0; j < tab.p_main.size(); ++j) {
                if (!tab.cells[o][j]) continue;
                t.rows.push_back({static_cast<double>(o + 1), static_cast<double>(tab.p_main[j]),
                                  static_cast<double>(theory::anova_predictor_count(tab.p_main[j], o + 1)),
                                  *tab.cells[o][j]});
            }
        }
        return t;
    }
    if (result.rows.empty()) throw DomainError("nothing to summarize");

    const std::size_t reps = c.replicates;
    auto slice = [&](std::size_t s) {
        return std::span<const Row>(result.rows.data() + s * reps, reps);
    };

    if (c.kind == ExperimentKind::McTheoremCheck) {
        t.columns = {"setting", "n", "p", "sigma2", "replicates", "det_freq", "det_se",
                     "det_analytic", "sign_matches", "cond_freq", "cond_se", "cond_analytic"};
        for (std::size_t s = 0; s < result.settings.size(); ++s) {
            std::size_t matches = 0, det = 0;
            for (const Row& r : slice(s)) {
                matches += r.sign_match;
                det += r.deteriorated;
            }
            const Setting& st = result.settings[s];
            const theory::DeteriorationQuery q{c.beta1, c.sigma, st.p};
            const double freq = static_cast<double>(det) / static_cast<double>(reps);
            const double cond = matches ? static_cast<double>(det) / static_cast<double>(matches) : 0.0;
            t.rows.push_back({static_cast<double>(s), static_cast<double>(st.n),
                              static_cast<double>(st.p), st.sigma2, static_cast<double>(reps), freq,
                              stats::binomial_se(freq, reps), theory::prob_deterioration(q),
                              static_cast<double>(matches), cond,
                              matches ? stats::binomial_se(cond, matches) : 0.0,
                              theory::prob_deterioration_given_sign(q)});
        }
        return t;
    }

    const bool refit = c.kind == ExperimentKind::LassoPlusOls;
    const bool bounded = overlay.has_value() && has_loss(c.kind);
    t.columns = {"setting", "n", "p", "p_baseline", "sigma2", "replicates", "median_ratio",
                 "mean_ratio", "median_loss", "median_baseline_loss", "frac_at_lambda_max"};
    if (refit) {
        t.columns.insert(t.columns.end(), {"median_refit_loss", "frac_refit_below_lasso"});
    }
    if (bounded) {
        t.columns.insert(t.columns.end(),
                         {"bound_compat", "bound_re", "conservatism_compat", "conservatism_re",
                          "bound_ratio_compat", "bound_ratio_re", "frac_within_compat",
                          "frac_within_re"});
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t s = 0; s < result.settings.size(); ++s) {
        const Setting& st = result.settings[s];
        std::vector<double> ratio, loss, base, refit_loss;
        std::size_t at_max = 0, refit_below = 0;
        for (const Row& r : slice(s)) {
            ratio.push_back(r.ratio);
            loss.push_back(r.loss);
            base.push_back(r.baseline_loss);
            refit_loss.push_back(r.refit_loss);
            at_max += r.at_lambda_max;
            refit_below += r.refit_loss < r.loss;
        }
        const double median_loss = stats::median(loss);
        std::vector<double> row{static_cast<double>(s), static_cast<double>(st.n),
                                static_cast<double>(st.p), static_cast<double>(st.p_baseline),
                                st.sigma2, static_cast<double>(reps), stats::median(ratio),
                                stats::mean(ratio), median_loss, stats::median(base),
                                static_cast<double>(at_max) / static_cast<double>(reps)};
        if (refit) {
            row.push_back(stats::median(refit_loss));
            row.push_back(static_cast<double>(refit_below) / static_cast<double>(reps));
        }
        if (bounded) {
            const std::size_t p0 = c.p0();
            auto bound = [&](bounds::BoundKind kind, std::size_t p) {
                if (p < 2) return nan;
                return bounds::bound_at(kind, st.n, p, p0, st.sigma2, overlay->coverage,
                                        overlay->psi0, overlay->kappa);
            };
            const auto compat = bounds::BoundKind::Compatibility;
            const auto re = bounds::BoundKind::RestrictedEigenvalue;
            const double bc = bound(compat, st.p), br = bound(re, st.p);
            auto within = [&](double b) {
                std::size_t k = 0;
                for (double l : loss) k += l <= b;
                return static_cast<double>(k) / static_cast<double>(reps);
            };
            row.insert(row.end(), {bc, br, bc / median_loss, br / median_loss,
                                   bc / bound(compat, st.p_baseline), br / bound(re, st.p_baseline),
                                   within(bc), within(br)});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_rows_csv(std::ostream& out, const ExperimentResult& result) {
    const auto& c = result.config;
    if (result.table) {
        csv::write_row(out, {"order", "model", "p_main", "predictors", "probability"});
        const auto& tab = *result.table;
        for (std::size_t o = 0; o < tab.cells.size(); ++o) {
            for (std::size_t j = 0; j < tab.p_main.size(); ++j) {
                if (!tab.cells[o][j]) continue;
                csv::write_row(out, {std::to_string(o + 1), tab.row_labels[o],
                                     std::to_string(tab.p_main[j]),
                                     std::to_string(theory::anova_predictor_count(tab.p_main[j], o + 1)),
                                     csv::format_double(*tab.cells[o][j])});
            }
        }
        return;
    }
    const bool refit = c.kind == ExperimentKind::LassoPlusOls;
    const bool mc = c.kind == ExperimentKind::McTheoremCheck;
    std::vector<std::string> header{"setting", "n", "p", "p_baseline", "sigma2", "replicate",
                                    "loss", "baseline_loss", "ratio", "lambda_star",
                                    "at_lambda_max"};
    if (refit) header.push_back("refit_loss");
    if (mc) header.insert(header.end(), {"sign_match", "deteriorated"});
    csv::write_row(out, header);
    for (const Row& r : result.rows) {
        const Setting& st = result.settings[r.setting];
        std::vector<std::string> cells{std::to_string(r.setting), std::to_string(st.n),
                                       std::to_string(st.p), std::to_string(st.p_baseline),
                                       csv::format_double(st.sigma2), std::to_string(r.replicate),
                                       csv::format_double(r.loss),
                                       csv::format_double(r.baseline_loss),
                                       csv::format_double(r.ratio),
                                       csv::format_double(r.lambda_star),
                                       r.at_lambda_max ? "1" : "0"};
        if (refit) cells.push_back(csv::format_double(r.refit_loss));
        if (mc) {
            cells.push_back(r.sign_match ? "1" : "0");
            cells.push_back(r.deteriorated ? "1" : "0");
        }
        csv::write_row(out, cells);
    }
}

void write_summary_csv(std::ostream& out, const SummaryTable& summary) {
    csv::write_row(out, summary.columns);
    for (const auto& row : summary.rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) cells.push_back(csv::format_double(v));
        csv::write_row(out, cells);
    }
}

void write_metadata_json(std::ostream& out, const ExperimentResult& result) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json notes = nlohmann::json::array();
    for (const auto& [key, value] : result.metadata) {
        if (key == "note") notes.push_back(value);
        else j[key] = value;
    }
    j["notes"] = notes;
    j["config"] = to_text(result.config);
    out << j.dump(2) << '\n';
}

}  // namespace lassodet::experiments
