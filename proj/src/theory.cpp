#include "lassodet/theory.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lassodet/csv.hpp"
#include "lassodet/errors.hpp"
#include "lassodet/ortho_lasso.hpp"
#include "lassodet/parallel.hpp"
#include "lassodet/stats.hpp"

namespace lassodet::theory {

void validate(const DeteriorationQuery& q) {
    if (q.p < 2) throw DomainError("deterioration probabilities require p >= 2");
    if (!(q.sigma > 0.0) || !std::isfinite(q.sigma)) throw DomainError("sigma must be positive");
    if (q.beta1 == 0.0 || !std::isfinite(q.beta1)) throw DomainError("beta1 must be nonzero");
}

double prob_deterioration(const DeteriorationQuery& q) {
    validate(q);
    return stats::normal_cdf(std::abs(q.beta1) / q.sigma) - 1.0 / (2.0 * static_cast<double>(q.p));
}

double prob_deterioration_given_sign(const DeteriorationQuery& q) {
    validate(q);
    const double phi = stats::normal_cdf(std::abs(q.beta1) / q.sigma);
    return 1.0 - 1.0 / (2.0 * static_cast<double>(q.p) * phi);
}

std::uint64_t anova_predictor_count(std::size_t p_main, std::size_t order) {
    return interaction_count(p_main, order);
}

Table1 table1(double beta1, double sigma) {
    Table1 t;
    t.beta1 = beta1;
    t.sigma = sigma;
    t.p_main = {2, 4, 6, 8, 10};
    t.row_labels = {"Main Effects", "Two-Way Interactions", "Three-Way Interactions",
                    "Four-Way Interactions"};
    for (std::size_t order = 1; order <= 4; ++order) {
        std::vector<std::optional<double>> row;
        for (std::size_t p_main : t.p_main) {
            if (order > p_main) {
                row.emplace_back();
                continue;
            }
            const auto p = static_cast<std::size_t>(anova_predictor_count(p_main, order));
            row.emplace_back(prob_deterioration({beta1, sigma, p}));
        }
        t.cells.push_back(std::move(row));
    }
    return t;
}

namespace {

std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

std::string rtrim(std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

}  // namespace

void write_table1_csv(std::ostream& out, const Table1& table) {
    std::vector<std::string> header{"model"};
    for (std::size_t p : table.p_main) header.push_back("p=" + std::to_string(p));
    csv::write_row(out, header);
    for (std::size_t r = 0; r < table.cells.size(); ++r) {
        std::vector<std::string> row{table.row_labels[r]};
        for (const auto& cell : table.cells[r]) row.push_back(cell ? fixed4(*cell) : "-");
        csv::write_row(out, row);
    }
}

void write_table1_text(std::ostream& out, const Table1& table) {
    out << "Probability of deterioration (beta1=" << table.beta1 << ", sigma=" << table.sigma
        << ")\n";
    std::ostringstream head;
    head << std::left << std::setw(24) << "Model";
    for (std::size_t p : table.p_main) head << std::setw(9) << ("p=" + std::to_string(p));
    out << rtrim(head.str()) << '\n';
    for (std::size_t r = 0; r < table.cells.size(); ++r) {
        std::ostringstream line;
        line << std::left << std::setw(24) << table.row_labels[r];
        for (const auto& cell : table.cells[r]) line << std::setw(9) << (cell ? fixed4(*cell) : "-");
        out << rtrim(line.str()) << '\n';
    }
}

McDraw mc_draw(const DeteriorationQuery& q, std::uint64_t master_seed, std::uint64_t replicate,
               const Design* design) {
    validate(q);
    std::vector<double> z(q.p);
    if (design != nullptr) {
        if (design->p() != q.p) {
            throw DimensionError("design has " + std::to_string(design->p()) +
                                 " columns, query asks for p=" + std::to_string(q.p));
        }
        const GeneratingModel model({{0, q.beta1}}, q.sigma * q.sigma);
        const Realization real = gen_response(*design, model, master_seed, replicate);
        const Eigen::VectorXd zv = design->values.transpose() * real.y;
        for (std::size_t j = 0; j < q.p; ++j) z[j] = zv(static_cast<Eigen::Index>(j));
    } else {
        RngStream rng(master_seed, replicate);
        for (std::size_t j = 0; j < q.p; ++j) z[j] = q.sigma * rng.normal();
        z[0] += q.beta1;
    }
    McDraw draw;
    draw.single = ortho::optimal_single(q.beta1, z[0]);
    const ortho::OrthoInstance inst{q.beta1, std::move(z), design != nullptr ? design->n() : 0,
                                    q.sigma * q.sigma};
    draw.multi = ortho::optimal_multi(inst);
    return draw;
}

McEstimate mc_prob_deterioration(const DeteriorationQuery& q, std::size_t replicates,
                                 std::uint64_t master_seed, const Design* design,
                                 unsigned threads) {
    validate(q);
    if (replicates < 1) throw DomainError("need at least one replicate");
    if (design != nullptr && design->p() != q.p) {
        throw DimensionError("design has " + std::to_string(design->p()) +
                             " columns, query asks for p=" + std::to_string(q.p));
    }

    std::vector<ortho::CaseTag> outcome(replicates);
    parallel_for(replicates, threads, [&](std::size_t r) {
        outcome[r] = mc_draw(q, master_seed, r, design).multi.case_tag;
    });

    McEstimate est;
    est.replicates = replicates;
    for (ortho::CaseTag tag : outcome) {
        if (tag != ortho::CaseTag::SignMismatch) ++est.sign_matches;
        if (tag == ortho::CaseTag::Deterioration) ++est.deteriorations;
    }
    est.frequency = static_cast<double>(est.deteriorations) / static_cast<double>(replicates);
    est.standard_error = stats::binomial_se(est.frequency, replicates);
    if (est.sign_matches > 0) {
        est.conditional_frequency =
            static_cast<double>(est.deteriorations) / static_cast<double>(est.sign_matches);
        est.conditional_standard_error =
            stats::binomial_se(est.conditional_frequency, est.sign_matches);
    }
    return est;
}

}  // namespace lassodet::theory
