#include "lassodet/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "lassodet/analyze.hpp"
#include "lassodet/csv.hpp"
#include "lassodet/errors.hpp"
#include "lassodet/experiments.hpp"
#include "lassodet/oracle_bounds.hpp"
#include "lassodet/rng.hpp"
#include "lassodet/theory.hpp"

namespace lassodet::cli {
namespace fs = std::filesystem;
namespace {

struct TheoryArgs {
    double beta1 = 3.0;
    double sigma = 1.0;
    std::size_t p = 2;
    bool given_sign = false;
    bool csv = false;
};

struct SimulateArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    unsigned threads = 1;
    bool force = false;
};

struct BoundsArgs {
    std::string kind = "compat";
    std::size_t n = 100;
    std::size_t p_min = 6;
    std::size_t p_max = 100;
    std::size_t p_step = 1;
    std::size_t p0 = 6;
    double sigma2 = 4.0;
    double coverage = 0.95;
    double psi0 = 1.0;
    double kappa = 1.0;
    bool fixed_a = false;
};

struct AnalyzeArgs {
    std::string data_path;
    std::string seed = "1";
    analyze::Options opt;
};

std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

int cmd_theory_prob(const TheoryArgs& a, std::ostream& out) {
    const theory::DeteriorationQuery q{a.beta1, a.sigma, a.p};
    const double prob = a.given_sign ? theory::prob_deterioration_given_sign(q)
                                     : theory::prob_deterioration(q);
    if (a.csv) {
        csv::write_row(out, {"beta1", "sigma", "p", "conditional", "probability"});
        csv::write_row(out, {csv::format_double(a.beta1), csv::format_double(a.sigma),
                             std::to_string(a.p), a.given_sign ? "1" : "0",
                             csv::format_double(prob)});
    } else {
        out << fixed4(prob) << "\n";
    }
    return kOk;
}

int cmd_theory_table1(const TheoryArgs& a, std::ostream& out) {
    const auto t = theory::table1(a.beta1, a.sigma);
    if (a.csv) theory::write_table1_csv(out, t);
    else theory::write_table1_text(out, t);
    return kOk;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.config_path.empty() == a.preset.empty()) {
        err << "simulate: give exactly one of a config file or --preset\n";
        return kUsage;
    }
    experiments::ExperimentConfig config;
    try {
        config = experiments::parse_config(a.preset.empty() ? slurp(a.config_path)
                                                            : experiments::preset_text(a.preset));
    } catch (const ParseError& e) {
        err << (a.preset.empty() ? a.config_path : "preset " + a.preset) << ": " << e.what()
            << "\n";
        return kUsage;
    }

    const fs::path dir(a.out_dir);
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) {
            err << "simulate: '" << a.out_dir << "' exists and is not a directory\n";
            return kUsage;
        }
        if (!fs::is_empty(dir) && !a.force) {
            err << "simulate: output directory '" << a.out_dir
                << "' is not empty; pass --force to overwrite\n";
            return kUsage;
        }
    }

    // Everything is computed and rendered before the first file is touched.
    const auto result = experiments::run_experiment(config, a.threads);
    std::ostringstream rows, summary, meta;
    experiments::write_rows_csv(rows, result);
    experiments::write_summary_csv(summary,
                                   experiments::summarize(result, experiments::default_overlay(result.config)));
    experiments::write_metadata_json(meta, result);

    const std::vector<std::pair<std::string, std::string>> files{
        {"rows.csv", rows.str()}, {"summary.csv", summary.str()}, {"metadata.json", meta.str()}};
    std::vector<fs::path> written;
    try {
        fs::create_directories(dir);
        for (const auto& [name, text] : files) {
            const fs::path target = dir / name;
            std::ofstream f(target, std::ios::binary | std::ios::trunc);
            written.push_back(target);
            f << text;
            f.close();
            if (!f) throw std::ios_base::failure("failed writing '" + target.string() + "'");
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& path : written) fs::remove(path, ec);
        throw;
    }
    out << "wrote " << result.rows.size() << " rows, " << result.settings.size()
        << " settings to " << a.out_dir << "\n";
    return kOk;
}

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
    if (a.p_min < 2) throw DomainError("bounds need p >= 2");
    if (a.p_max < a.p_min) throw DomainError("--p-max is smaller than --p-min");
    if (a.p_step == 0) throw DomainError("--p-step must be positive");
    bounds::CurveRequest req;
    req.kind = bounds::parse_bound_kind(a.kind.c_str());
    req.n = a.n;
    req.p0 = a.p0;
    req.sigma2 = a.sigma2;
    req.coverage = a.coverage;
    req.psi0 = a.psi0;
    req.kappa = a.kappa;
    req.fixed_A = a.fixed_a;
    for (std::size_t p = a.p_min; p <= a.p_max; p += a.p_step) req.p_list.push_back(p);
    bounds::write_curve_csv(out, bounds::bound_ratio_curve(req));
    return kOk;
}

int cmd_analyze(AnalyzeArgs a, std::ostream& out) {
    std::ifstream in(a.data_path);
    if (!in) throw std::ios_base::failure("cannot read '" + a.data_path + "'");
    const auto table = csv::read_numeric(in);
    a.opt.seed = parse_seed(a.seed);
    analyze::write_report(out, analyze::run(table, a.opt));
    return kOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lasso deterioration toolkit: theory, simulations, bounds and dataset analysis",
                 "lassodet"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI/TOML file with option defaults; sections name subcommands");

    TheoryArgs ta;
    auto* theory_cmd = app.add_subcommand("theory", "Closed-form deterioration probabilities");
    theory_cmd->require_subcommand(1);
    auto* prob = theory_cmd->add_subcommand("prob", "Probability that extra predictors hurt");
    prob->add_option("--beta1", ta.beta1, "True coefficient")->capture_default_str();
    prob->add_option("--sigma", ta.sigma, "Noise standard deviation")->capture_default_str();
    prob->add_option("--p", ta.p, "Number of offered predictors")->required();
    prob->add_flag("--given-sign", ta.given_sign, "Condition on a correct sign of z1");
    prob->add_flag("--csv", ta.csv, "Machine-readable output");
    auto* tab = theory_cmd->add_subcommand("table1", "ANOVA deterioration table");
    tab->add_option("--beta1", ta.beta1, "True coefficient")->capture_default_str();
    tab->add_option("--sigma", ta.sigma, "Noise standard deviation")->capture_default_str();
    tab->add_flag("--csv", ta.csv, "Machine-readable output");

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
    sim->add_option("config", sa.config_path, "Experiment config file (key = value)");
    sim->add_option("--preset", sa.preset, "Built-in config instead of a file");
    sim->add_option("--out", sa.out_dir, "Output directory")->required();
    sim->add_option("--threads", sa.threads, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
    sim->add_flag("--force", sa.force, "Overwrite a nonempty output directory");

    auto* preset = app.add_subcommand("preset", "Print a built-in experiment config");
    std::string preset_name;
    preset->add_option("name", preset_name, "Preset name; omit to list them");

    BoundsArgs ba;
    auto* bnd = app.add_subcommand("bounds", "Oracle-inequality bound curve as CSV");
    bnd->add_option("--kind", ba.kind, "compat or re")->capture_default_str();
    bnd->add_option("--n", ba.n, "Sample size")->capture_default_str();
    bnd->add_option("--p-min", ba.p_min, "Smallest p")->capture_default_str();
    bnd->add_option("--p-max", ba.p_max, "Largest p")->capture_default_str();
    bnd->add_option("--p-step", ba.p_step, "Step in p")->capture_default_str();
    bnd->add_option("--p0", ba.p0, "True model size")->capture_default_str();
    bnd->add_option("--sigma2", ba.sigma2, "Noise variance")->capture_default_str();
    bnd->add_option("--coverage", ba.coverage, "Probability the bound holds")->capture_default_str();
    bnd->add_option("--psi0", ba.psi0, "Compatibility constant")->capture_default_str();
    bnd->add_option("--kappa", ba.kappa, "Restricted-eigenvalue constant")->capture_default_str();
    bnd->add_flag("--fixed-a", ba.fixed_a, "Solve A once at p0 instead of at every p");

    AnalyzeArgs aa;
    auto* ana = app.add_subcommand("analyze", "Main effects against pairwise interactions on a CSV");
    ana->add_option("data", aa.data_path, "Numeric CSV with a header row")->required();
    ana->add_option("--response", aa.opt.response, "Response column name")->required();
    ana->add_option("--splits", aa.opt.splits, "Random train/test splits")->capture_default_str();
    ana->add_option("--fraction", aa.opt.fraction, "Training fraction")->capture_default_str();
    ana->add_option("--seed", aa.seed, "Split seed (decimal or 0x hex)")->capture_default_str();
    ana->add_option("--alpha", aa.opt.alpha, "Wilcoxon significance level")->capture_default_str();
    ana->add_flag("--standardize", aa.opt.standardize,
                  "Center and scale main effects before forming interactions");
    ana->add_option("--lambda-count", aa.opt.lambda_count, "Path length")->capture_default_str();
    ana->add_option("--lambda-ratio", aa.opt.lambda_ratio,
                    "lambda_min / lambda_max; 0 uses 1e-4 when n > p, else 1e-2")
        ->capture_default_str();
    ana->add_option("--threads", aa.opt.threads, "Worker threads")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        std::string help;
        for (auto* sub : app.get_subcommands()) help = sub->help();
        err << (help.empty() ? app.help() : help);
        return kUsage;
    }

    if (prob->parsed()) return cmd_theory_prob(ta, out);
    if (tab->parsed()) return cmd_theory_table1(ta, out);
    if (sim->parsed()) return cmd_simulate(sa, out, err);
    if (bnd->parsed()) return cmd_bounds(ba, out);
    if (ana->parsed()) return cmd_analyze(aa, out);
    if (preset->parsed()) {
        if (preset_name.empty()) {
            for (const auto& name : experiments::preset_names()) out << name << "\n";
        } else {
            out << experiments::preset_text(preset_name);
        }
        return kOk;
    }
    return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kDataError;
    } catch (const ZeroVarianceColumn& e) {
        err << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const DimensionError& e) {
        err << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kUsage;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << "\n";
        return kDataError;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

}  // namespace lassodet::cli
