#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lassodet/errors.hpp"
#include "lassodet/stats.hpp"
#include "lassodet/theory.hpp"

using namespace lassodet;
using namespace lassodet::theory;

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("closed forms at the reference point") {
    // Phi(3) = 0.998650101968370
    CHECK(prob_deterioration({3, 1, 2}) == doctest::Approx(0.748650101968370).epsilon(1e-14));
    CHECK(prob_deterioration_given_sign({3, 1, 10}) == doctest::Approx(0.9499324138640266).epsilon(1e-13));
    CHECK(prob_deterioration({-3, 1, 2}) == prob_deterioration({3, 1, 2}));
    CHECK(prob_deterioration({6, 2, 4}) == prob_deterioration({3, 1, 4}));
}

TEST_CASE("probabilities increase with p toward their limits") {
    double last = 0, last_c = 0;
    for (std::size_t p = 2; p < 5000; p *= 2) {
        const double a = prob_deterioration({3, 1, p});
        const double c = prob_deterioration_given_sign({3, 1, p});
        CHECK(a > last);
        CHECK(c > last_c);
        CHECK(a < stats::normal_cdf(3.0));
        CHECK(c < 1.0);
        CHECK(c >= a);
        last = a;
        last_c = c;
    }
}

TEST_CASE("conditional and unconditional forms are consistent") {
    // P(det) = P(sign ok) P(det | sign ok)
    for (std::size_t p : {2, 7, 40}) {
        for (double b : {0.5, 1.0, 3.0}) {
            const double phi = stats::normal_cdf(b);
            CHECK(prob_deterioration({b, 1, p}) ==
                  doctest::Approx(phi * prob_deterioration_given_sign({b, 1, p})).epsilon(1e-14));
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(prob_deterioration({3, 1, 1}), DomainError);
    CHECK_THROWS_AS(prob_deterioration({3, 0, 5}), DomainError);
    CHECK_THROWS_AS(prob_deterioration({0, 1, 5}), DomainError);
    CHECK_THROWS_AS(prob_deterioration_given_sign({3, -1, 5}), DomainError);
}

TEST_CASE("ANOVA predictor counts are binomial sums") {
    for (std::size_t p = 1; p <= 10; ++p) {
        std::uint64_t total = 0;
        for (std::size_t k = 1; k <= p; ++k) {
            total += choose(p, k);
            CHECK(anova_predictor_count(p, k) == total);
        }
        CHECK(total == (std::uint64_t{1} << p) - 1);
    }
}

TEST_CASE("table1 layout and published cells") {
    const Table1 t = table1();
    REQUIRE(t.cells.size() == 4);
    CHECK(t.p_main == std::vector<std::size_t>{2, 4, 6, 8, 10});
    CHECK_FALSE(t.cells[2][0].has_value());
    CHECK_FALSE(t.cells[3][0].has_value());
    CHECK(t.cells[2][1].has_value());
    CHECK(*t.cells[0][0] == doctest::Approx(0.7487).epsilon(5e-5 / 0.7487));
    CHECK(*t.cells[1][1] == doctest::Approx(0.9487).epsilon(5e-5 / 0.9487));
    CHECK(*t.cells[3][4] == doctest::Approx(0.9974).epsilon(5e-5 / 0.9974));
    for (std::size_t o = 0; o < 4; ++o) {
        for (std::size_t j = 0; j < 5; ++j) {
            if (!t.cells[o][j]) continue;
            const std::size_t p = anova_predictor_count(t.p_main[j], o + 1);
            CHECK(*t.cells[o][j] == prob_deterioration({3, 1, p}));
        }
    }
}

TEST_CASE("table1 writers") {
    std::ostringstream csv, text;
    write_table1_csv(csv, table1());
    write_table1_text(text, table1());
    CHECK(csv.str().rfind("model,p=2,p=4,p=6,p=8,p=10\nMain Effects,0.7487,", 0) == 0);
    CHECK(csv.str().find("Three-Way Interactions,-,") != std::string::npos);
    CHECK(text.str().find("0.9974") != std::string::npos);
}

TEST_CASE("monte carlo agrees with the closed forms") {
    for (std::size_t p : {2, 10}) {
        const DeteriorationQuery q{3, 1, p};
        const auto est = mc_prob_deterioration(q, 4000, 99);
        CHECK(std::abs(est.frequency - prob_deterioration(q)) < 4 * est.standard_error + 1e-3);
        CHECK(std::abs(est.conditional_frequency - prob_deterioration_given_sign(q)) <
              4 * est.conditional_standard_error + 1e-3);
        CHECK(est.replicates == 4000);
        CHECK(est.deteriorations <= est.sign_matches);
    }
}

TEST_CASE("monte carlo through a normalized trig design") {
    const Design d = gen_trig_design(40, 10, true);
    const DeteriorationQuery q{1.0, 1.0, 10};
    const auto est = mc_prob_deterioration(q, 4000, 5, &d);
    CHECK(std::abs(est.frequency - prob_deterioration(q)) < 4 * est.standard_error);
    CHECK_THROWS_AS(mc_prob_deterioration({1.0, 1.0, 8}, 10, 5, &d), DimensionError);
}

TEST_CASE("monte carlo output does not depend on the thread count") {
    const DeteriorationQuery q{2, 1, 6};
    const auto a = mc_prob_deterioration(q, 999, 3, nullptr, 1);
    const auto b = mc_prob_deterioration(q, 999, 3, nullptr, 4);
    CHECK(a.deteriorations == b.deteriorations);
    CHECK(a.sign_matches == b.sign_matches);
}

TEST_CASE("mc_draw scores single and multi optima") {
    const DeteriorationQuery q{3, 1, 5};
    for (std::uint64_t r = 0; r < 50; ++r) {
        const auto d = mc_draw(q, 8, r);
        CHECK(d.multi.n_loss >= d.single.n_loss - 1e-12);
        CHECK(d.multi.deteriorated == (d.multi.case_tag == ortho::CaseTag::Deterioration));
    }
}
