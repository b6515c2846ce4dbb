#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "lassodet/design.hpp"
#include "lassodet/errors.hpp"
#include "lassodet/experiments.hpp"
#include "lassodet/ortho_lasso.hpp"

using namespace lassodet;
using namespace lassodet::experiments;

namespace {

ExperimentConfig small_trig(ExperimentKind kind = ExperimentKind::OrthoRatioVsP) {
    ExperimentConfig c;
    c.kind = kind;
    c.n = 40;
    c.p_grid = {6, 10, 20, 40};
    c.sigma2 = {4, 400};
    c.replicates = 60;
    c.seed = 21;
    return c;
}

std::string rows_text(const ExperimentResult& r) {
    std::ostringstream os;
    write_rows_csv(os, r);
    return os.str();
}

std::string summary_text(const ExperimentResult& r) {
    std::ostringstream os;
    write_summary_csv(os, summarize(r, default_overlay(r.config)));
    return os.str();
}

}  // namespace

TEST_CASE("config text round trips for every preset") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const ExperimentConfig c = parse_config(preset_text(name));
        const std::string text = to_text(c);
        CHECK(to_text(parse_config(text)) == text);
        CHECK_NOTHROW(prepare(c));
    }
    CHECK_THROWS_AS(preset_text("fig9"), DomainError);
}

TEST_CASE("config parsing") {
    const auto c = parse_config(
        "# comment\n"
        "kind = growing_n  # trailing comment\n"
        "\n"
        "n_grid = 20, 40:60:20\n"
        "sigma2 = 4,400\n"
        "seed = 0x10\n"
        "standardize = auto\n"
        "solver = path\n");
    CHECK(c.kind == ExperimentKind::GrowingN);
    CHECK(c.n_grid == std::vector<std::size_t>{20, 40, 60});
    CHECK(c.sigma2 == std::vector<double>{4, 400});
    CHECK(c.seed == 16);
    CHECK_FALSE(c.standardize.has_value());
    CHECK(c.solver_choice == SolverChoice::Path);
}

TEST_CASE("config errors carry line numbers") {
    auto line_of = [](const char* text) {
        try {
            parse_config(std::string_view(text));
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("n = 10\nkind = ortho_ratio_vs_p\nbogus = 1\n") == 3);
    CHECK(line_of("n = ten\n") == 1);
    CHECK(line_of("n = 10\nn = 20\n") == 2);
    CHECK(line_of("\n\nkind = nope\n") == 3);
    CHECK(line_of("p_grid = 10:5:1\n") == 1);
    CHECK(line_of("sigma2\n") == 1);
    CHECK(line_of("seed = -3\n") == 1);
    CHECK(line_of("intercept = maybe\n") == 1);
}

TEST_CASE("prepare validates before computing") {
    std::vector<std::string> notes;
    auto c = small_trig();
    c.p_grid = {7, 6};
    const auto p = prepare(c, &notes);
    CHECK(p.p_grid == std::vector<std::size_t>{6, 8});
    CHECK(notes.size() == 2);

    c = small_trig();
    c.p_grid = {4};
    CHECK_THROWS_AS(prepare(c), DimensionError);
    c.p_grid = {42};
    CHECK_THROWS_AS(prepare(c), DimensionError);
    c = small_trig();
    c.replicates = 0;
    CHECK_THROWS_AS(prepare(c), DomainError);
    c = small_trig(ExperimentKind::GaussianRatioVsP);
    c.solver_choice = SolverChoice::Exact;
    CHECK_THROWS_AS(prepare(c), DomainError);
    c = small_trig();
    c.beta0 = {1, 0};
    CHECK_THROWS_AS(prepare(c), DomainError);
    c = small_trig(ExperimentKind::GrowingN);
    c.n_grid = {10};  // p1 = 6 > p2 would be fine, but p1 < p0 is not
    c.beta0 = {1, 2, 3, 4, 5, 6, 7};
    CHECK_THROWS_AS(prepare(c), DimensionError);
    c = small_trig(ExperimentKind::MseRatio);
    c.bounds = true;
    CHECK_THROWS_AS(prepare(c), DomainError);
}

TEST_CASE("loss_ratio conventions") {
    CHECK(loss_ratio(0.0, 0.0) == 1.0);
    CHECK(std::isinf(loss_ratio(1.0, 0.0)));
    CHECK(loss_ratio(3.0, 2.0) == 1.5);
}

TEST_CASE("trig ratios: p = p0 gives exactly 1 and losses nest") {
    const auto r = run_experiment(small_trig());
    REQUIRE(r.settings.size() == 8);
    REQUIRE(r.rows.size() == 8 * 60);
    for (const Row& row : r.rows) {
        CHECK(row.ratio == loss_ratio(row.loss, row.baseline_loss));
        if (r.settings[row.setting].p == 6) CHECK(row.ratio == 1.0);
    }
    // within a replicate, adding columns never lowers the optimal loss
    for (std::size_t s = 1; s < r.settings.size(); ++s) {
        if (r.settings[s].sigma2 != r.settings[s - 1].sigma2) continue;
        for (std::size_t rep = 0; rep < 60; ++rep) {
            CHECK(r.rows[s * 60 + rep].loss >= r.rows[(s - 1) * 60 + rep].loss * (1 - 1e-12));
        }
    }
}

TEST_CASE("trig rows match a direct computation from the public pieces") {
    auto c = small_trig();
    c.sigma2 = {9};
    const auto r = run_experiment(c);
    const Design raw = gen_trig_design(40, 40, false);
    const Design xn = normalize_columns(raw);
    const auto model = GeneratingModel::leading(c.beta0, 9.0);
    const Realization real = gen_response(raw, model, c.seed, 5);
    const Eigen::VectorXd b = xn.values.transpose() * real.mu;
    const Eigen::VectorXd z = xn.values.transpose() * real.y;
    for (std::size_t s = 0; s < r.settings.size(); ++s) {
        const std::size_t p = r.settings[s].p;
        const auto m = ortho::minimize_shrinkage_loss(std::span(b.data(), p), std::span(z.data(), p));
        CHECK(r.rows[s * 60 + 5].loss == doctest::Approx(m.loss / 40).epsilon(1e-10));
    }
}

TEST_CASE("exact and path solvers agree on the trig design") {
    auto c = small_trig();
    c.replicates = 8;
    c.sigma2 = {4};
    const auto exact = run_experiment(c);
    c.solver_choice = SolverChoice::Path;
    c.solver.grid.count = 400;
    c.solver.grid.ratio = 1e-3;
    const auto path = run_experiment(c);
    REQUIRE(exact.rows.size() == path.rows.size());
    for (std::size_t i = 0; i < exact.rows.size(); ++i) {
        CHECK(path.rows[i].loss >= exact.rows[i].loss - 1e-9);
        // lambda* is only resolved to the grid spacing
        CHECK(path.rows[i].loss <= exact.rows[i].loss * 1.05 + 1e-4);
    }
}

TEST_CASE("low SNR saturates at lambda max more often") {
    auto c = small_trig();
    c.n = 100;
    c.p_grid = {6, 20, 50, 100};
    c.replicates = 300;
    const auto r = run_experiment(c);
    const auto t = summarize(r);
    for (std::size_t s = 0; s < 4; ++s) {
        const double high = t.at(s, "frac_at_lambda_max");
        const double low = t.at(s + 4, "frac_at_lambda_max");
        CHECK(low >= high);
        if (r.settings[s].p > 6) CHECK(low > high);
    }
}

TEST_CASE("summary with and without the bound overlay") {
    auto c = small_trig(ExperimentKind::BoundConservatism);
    c.n = 100;
    c.p_grid = {6, 20, 100};
    c.replicates = 200;
    const auto r = run_experiment(c);
    const auto plain = summarize(r);
    CHECK_THROWS_AS(plain.column("bound_compat"), DomainError);
    const auto over = summarize(r, default_overlay(r.config));
    REQUIRE(default_overlay(r.config).has_value());
    for (std::size_t s = 0; s < over.rows.size(); ++s) {
        CHECK(over.at(s, "conservatism_compat") > 1.0);
        CHECK(over.at(s, "conservatism_re") > 1.0);
        CHECK(over.at(s, "frac_within_compat") >= 0.95);
    }
    CHECK(over.at(0, "bound_ratio_compat") == 1.0);
    CHECK(over.at(2, "bound_ratio_compat") == doctest::Approx(1.5133).epsilon(1e-4));
    // at p = 100 the bound is further from the loss when the signal is weak
    CHECK(over.at(5, "conservatism_compat") > over.at(2, "conservatism_compat"));
    CHECK(over.column("median_ratio") == 6);
}

TEST_CASE("lasso plus OLS records refit losses") {
    auto c = small_trig(ExperimentKind::LassoPlusOls);
    c.p_grid = {6, 40};
    const auto r = run_experiment(c);
    const auto t = summarize(r);
    CHECK(t.column("median_refit_loss") > 0);
    CHECK(rows_text(r).find(",refit_loss\n") != std::string::npos);
    for (const Row& row : r.rows) CHECK(row.refit_loss >= 0.0);
}

TEST_CASE("growing n pairs p2 = n with p1 = 2 log n") {
    auto c = small_trig(ExperimentKind::GrowingN);
    c.n_grid = {20, 51, 100};
    c.sigma2 = {4};
    const auto r = run_experiment(c);
    REQUIRE(r.settings.size() == 3);
    CHECK(r.settings[0].p == 20);
    CHECK(r.settings[0].p_baseline == 6);
    CHECK(r.settings[1].p == 50);
    CHECK(r.settings[1].p_baseline == 8);
    CHECK(r.settings[2].p_baseline == 10);
    for (const Row& row : r.rows) CHECK(row.ratio >= 1.0 - 1e-12);
}

TEST_CASE("gaussian design and test-set MSE kinds run") {
    auto c = small_trig(ExperimentKind::GaussianRatioVsP);
    c.n = 30;
    c.p_grid = {6, 60};
    c.sigma2 = {4};
    c.replicates = 6;
    c.solver.grid.count = 30;
    const auto g = run_experiment(c);
    for (const Row& row : g.rows) {
        if (g.settings[row.setting].p == 6) CHECK(row.ratio == 1.0);
        CHECK(row.loss > 0.0);
    }
    c.kind = ExperimentKind::MseRatio;
    const auto m = run_experiment(c);
    CHECK(m.config.test_set_size == 30);
    for (const Row& row : m.rows) CHECK(row.loss > 0.0);
}

TEST_CASE("theory kinds") {
    ExperimentConfig c;
    c.kind = ExperimentKind::McTheoremCheck;
    c.n = 20;
    c.p_grid = {2, 10};
    c.replicates = 500;
    const auto r = run_experiment(c);
    const auto t = summarize(r);
    REQUIRE(t.rows.size() == 2);
    for (std::size_t s = 0; s < 2; ++s) {
        CHECK(std::abs(t.at(s, "det_freq") - t.at(s, "det_analytic")) < 4 * t.at(s, "det_se") + 0.01);
    }
    c.kind = ExperimentKind::Table1;
    const auto tab = run_experiment(c);
    CHECK(summarize(tab).rows.size() == 18);
    CHECK(rows_text(tab).rfind("order,model,p_main,predictors,probability\n1,Main Effects,2,2,", 0) == 0);
}

TEST_CASE("output is byte-identical across thread counts") {
    std::vector<ExperimentConfig> configs;
    configs.push_back(small_trig());
    configs.push_back(small_trig(ExperimentKind::LassoPlusOls));
    auto g = small_trig(ExperimentKind::MseRatio);
    g.n = 20;
    g.p_grid = {6, 30};
    g.replicates = 5;
    g.solver.grid.count = 20;
    configs.push_back(g);
    ExperimentConfig mc;
    mc.kind = ExperimentKind::McTheoremCheck;
    mc.n = 20;
    mc.p_grid = {2, 4};
    configs.push_back(mc);
    for (const auto& c : configs) {
        const auto a = run_experiment(c, 1);
        const auto b = run_experiment(c, 3);
        CHECK(rows_text(a) == rows_text(b));
        CHECK(summary_text(a) == summary_text(b));
        std::ostringstream ma, mb;
        write_metadata_json(ma, a);
        write_metadata_json(mb, b);
        CHECK(ma.str() == mb.str());
    }
}

TEST_CASE("metadata sidecar") {
    auto c = small_trig();
    c.p_grid = {7};
    const auto r = run_experiment(c);
    std::ostringstream os;
    write_metadata_json(os, r);
    const auto j = nlohmann::json::parse(os.str());
    CHECK(j["kind"] == "ortho_ratio_vs_p");
    CHECK(j["seed"] == "21");
    CHECK(j["notes"].size() == 1);
    CHECK_FALSE(j.contains("threads"));
    CHECK(parse_config(j["config"].get<std::string>()).p_grid == std::vector<std::size_t>{8});
}

TEST_CASE("path-solver median ratios are insensitive to doubling the grid") {
    auto c = parse_config(preset_text("fig1"));
    c.p_grid = {6, 20, 100};
    c.sigma2 = {4};
    c.replicates = 100;
    c.bounds = false;
    c.solver_choice = SolverChoice::Path;
    c.solver.grid.count = 100;
    const auto coarse = summarize(run_experiment(c, 2));
    c.solver.grid.count = 200;
    const auto fine = summarize(run_experiment(c, 2));
    c.solver_choice = SolverChoice::Exact;
    const auto exact = summarize(run_experiment(c, 2));
    for (std::size_t i = 0; i < coarse.rows.size(); ++i) {
        const double a = coarse.at(i, "median_ratio"), b = fine.at(i, "median_ratio");
        CHECK(std::abs(a - b) <= 0.05 * b);
        CHECK(std::abs(b - exact.at(i, "median_ratio")) <= 0.05 * exact.at(i, "median_ratio"));
    }
    CHECK(fine.at(2, "median_ratio") >= 4.0);
}
