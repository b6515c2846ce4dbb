#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "lassodet/csv.hpp"
#include "lassodet/errors.hpp"
#include "lassodet/experiments.hpp"

namespace lassodet::experiments {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::size_t to_size(std::string_view s, std::size_t line) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'", line);
    }
    return v;
}

double to_double(std::string_view s, std::size_t line) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError("expected a number, got '" + std::string(s) + "'", line);
    }
    return v;
}

bool to_bool(std::string_view s, std::size_t line) {
    if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "off" || s == "no" || s == "0") return false;
    throw ParseError("expected a boolean, got '" + std::string(s) + "'", line);
}

std::vector<std::size_t> to_size_list(std::string_view s, std::size_t line) {
    std::vector<std::size_t> out;
    for (auto item : split(s, ',')) {
        if (item.find(':') == std::string_view::npos) {
            out.push_back(to_size(item, line));
            continue;
        }
        const auto parts = split(item, ':');
        if (parts.size() != 3) throw ParseError("ranges are written start:stop:step", line);
        const std::size_t start = to_size(parts[0], line);
        const std::size_t stop = to_size(parts[1], line);
        const std::size_t step = to_size(parts[2], line);
        if (step == 0 || stop < start) throw ParseError("empty or non-advancing range", line);
        for (std::size_t v = start; v <= stop; v += step) out.push_back(v);
    }
    return out;
}

std::vector<double> to_double_list(std::string_view s, std::size_t line) {
    std::vector<double> out;
    for (auto item : split(s, ',')) out.push_back(to_double(item, line));
    return out;
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_floating_point_v<T>) {
            out += csv::format_double(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

const char* solver_name(SolverChoice c) {
    switch (c) {
        case SolverChoice::Auto: return "auto";
        case SolverChoice::Exact: return "exact";
        case SolverChoice::Path: return "path";
    }
    return "auto";
}

}  // namespace

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::OrthoRatioVsP: return "ortho_ratio_vs_p";
        case ExperimentKind::BoundConservatism: return "bound_conservatism";
        case ExperimentKind::GrowingN: return "growing_n";
        case ExperimentKind::GaussianRatioVsP: return "gaussian_ratio_vs_p";
        case ExperimentKind::LassoPlusOls: return "lasso_plus_ols";
        case ExperimentKind::MseRatio: return "mse_ratio";
        case ExperimentKind::McTheoremCheck: return "mc_theorem_check";
        case ExperimentKind::Table1: return "table1";
    }
    return "unknown";
}

ExperimentKind parse_kind(std::string_view text) {
    for (auto k : {ExperimentKind::OrthoRatioVsP, ExperimentKind::BoundConservatism,
                   ExperimentKind::GrowingN, ExperimentKind::GaussianRatioVsP,
                   ExperimentKind::LassoPlusOls, ExperimentKind::MseRatio,
                   ExperimentKind::McTheoremCheck, ExperimentKind::Table1}) {
        if (text == to_string(k)) return k;
    }
    throw DomainError("unknown experiment kind '" + std::string(text) + "'");
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    std::map<std::string, std::size_t> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = value", line);
        const std::string key(trim(text.substr(0, eq)));
        const std::string_view value = trim(text.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key before '='", line);
        if (value.empty()) throw ParseError("missing value for '" + key + "'", line);
        if (auto [it, fresh] = seen.emplace(key, line); !fresh) {
            throw ParseError("duplicate key '" + key + "' (first on line " +
                                 std::to_string(it->second) + ")",
                             line);
        }

        try {
            if (key == "kind") c.kind = parse_kind(value);
            else if (key == "n") c.n = to_size(value, line);
            else if (key == "p_grid") c.p_grid = to_size_list(value, line);
            else if (key == "n_grid") c.n_grid = to_size_list(value, line);
            else if (key == "beta0") c.beta0 = to_double_list(value, line);
            else if (key == "sigma2") c.sigma2 = to_double_list(value, line);
            else if (key == "replicates") c.replicates = to_size(value, line);
            else if (key == "seed") c.seed = parse_seed(value);
            else if (key == "intercept") c.solver.intercept = to_bool(value, line);
            else if (key == "standardize") {
                if (value == "auto") c.standardize.reset();
                else c.standardize = to_bool(value, line);
            }
            else if (key == "lambda_count") c.solver.grid.count = to_size(value, line);
            else if (key == "lambda_ratio") {
                c.solver.grid.ratio = value == "auto" ? 0.0 : to_double(value, line);
            }
            else if (key == "tol") c.solver.tol = to_double(value, line);
            else if (key == "max_sweeps") c.solver.max_sweeps = static_cast<long>(to_size(value, line));
            else if (key == "solver") {
                if (value == "auto") c.solver_choice = SolverChoice::Auto;
                else if (value == "exact") c.solver_choice = SolverChoice::Exact;
                else if (value == "path") c.solver_choice = SolverChoice::Path;
                else throw ParseError("solver must be auto, exact or path", line);
            }
            else if (key == "test_set_size") c.test_set_size = to_size(value, line);
            else if (key == "coverage") c.coverage = to_double(value, line);
            else if (key == "bounds") c.bounds = to_bool(value, line);
            else if (key == "beta1") c.beta1 = to_double(value, line);
            else if (key == "sigma") c.sigma = to_double(value, line);
            else throw ParseError("unknown key '" + key + "'", line);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(e.what(), line);
        }
    }
    return c;
}

ExperimentConfig parse_config(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

std::string to_text(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "kind = " << to_string(c.kind) << '\n';
    os << "n = " << c.n << '\n';
    if (!c.p_grid.empty()) os << "p_grid = " << join(c.p_grid) << '\n';
    if (!c.n_grid.empty()) os << "n_grid = " << join(c.n_grid) << '\n';
    os << "beta0 = " << join(c.beta0) << '\n';
    os << "sigma2 = " << join(c.sigma2) << '\n';
    os << "replicates = " << c.replicates << '\n';
    os << "seed = " << c.seed << '\n';
    os << "intercept = " << (c.solver.intercept ? "true" : "false") << '\n';
    os << "standardize = " << (c.standardize ? (*c.standardize ? "true" : "false") : "auto") << '\n';
    os << "lambda_count = " << c.solver.grid.count << '\n';
    os << "lambda_ratio = "
       << (c.solver.grid.ratio == 0.0 ? std::string("auto") : csv::format_double(c.solver.grid.ratio))
       << '\n';
    os << "tol = " << csv::format_double(c.solver.tol) << '\n';
    os << "max_sweeps = " << c.solver.max_sweeps << '\n';
    os << "solver = " << solver_name(c.solver_choice) << '\n';
    os << "test_set_size = " << c.test_set_size << '\n';
    os << "coverage = " << csv::format_double(c.coverage) << '\n';
    if (c.bounds) os << "bounds = " << (*c.bounds ? "true" : "false") << '\n';
    os << "beta1 = " << csv::format_double(c.beta1) << '\n';
    os << "sigma = " << csv::format_double(c.sigma) << '\n';
    return os.str();
}

namespace {

constexpr std::string_view kTrigGrid = "6,8,10,12,16,20,26,32,40,50,64,80,100";

struct Preset {
    std::string_view name;
    std::string_view description;
    std::string body;
};

std::vector<Preset> presets() {
    const std::string trig_common =
        "n = 100\np_grid = " + std::string(kTrigGrid) +
        "\nbeta0 = 6,5,4,3,2,1\nsigma2 = 4,400\nreplicates = 1000\nintercept = true\n";
    return {
        {"fig1", "median optimal loss ratio vs p, orthogonal trig design",
         "kind = ortho_ratio_vs_p\n" + trig_common + "seed = 0x5EED0001\nbounds = true\n"},
        {"fig2", "oracle bounds against the median optimal loss, trig design",
         "kind = bound_conservatism\n" + trig_common + "seed = 0x5EED0001\ncoverage = 0.95\n"},
        {"fig3", "p2 = n against p1 = 2 log n as n grows, trig design",
         "kind = growing_n\nn_grid = 20,50,100,200,500,1000\nbeta0 = 6,5,4,3,2,1\n"
         "sigma2 = 4,400\nreplicates = 1000\nintercept = true\nseed = 0x5EED0003\n"
         "bounds = true\n"},
        {"fig4", "median optimal loss ratio vs p, iid Gaussian design (p up to 1000)",
         "kind = gaussian_ratio_vs_p\nn = 100\np_grid = 6,10,20,50,100,200,500,1000\n"
         "beta0 = 6,5,4,3,2,1\nsigma2 = 9,625\nreplicates = 1000\nintercept = true\n"
         "standardize = true\nseed = 0x5EED0004\nbounds = true\n"},
        {"lasso-ols", "median optimal loss of the Lasso and Lasso+OLS, trig design",
         "kind = lasso_plus_ols\n" + trig_common + "seed = 0x5EED0006\n"},
        {"appendixB", "optimal test-set MSE ratio, iid Gaussian design",
         "kind = mse_ratio\nn = 100\np_grid = 6,100,500,1000\nbeta0 = 6,5,4,3,2,1\n"
         "sigma2 = 9,625\nreplicates = 1000\nintercept = true\nstandardize = true\n"
         "test_set_size = 100\nseed = 0x5EED000B\n"},
        {"table1", "deterioration probabilities for effects-coded ANOVA models",
         "kind = table1\nbeta1 = 3\nsigma = 1\n"},
        {"mc-check", "Monte Carlo check of the deterioration probabilities",
         "kind = mc_theorem_check\nn = 100\np_grid = 2,10,50\nbeta1 = 3\nsigma = 1\n"
         "replicates = 10000\nseed = 0x5EED00C0\n"},
    };
}

}  // namespace

std::string preset_text(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) return "# " + std::string(p.description) + "\n" + p.body;
    }
    throw DomainError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : presets()) out.emplace_back(p.name);
    return out;
}

}  // namespace lassodet::experiments
