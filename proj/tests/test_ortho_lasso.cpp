#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lassodet/errors.hpp"
#include "lassodet/ortho_lasso.hpp"
#include "lassodet/rng.hpp"

using namespace lassodet;
using namespace lassodet::ortho;

namespace {

OrthoInstance random_instance(RngStream& rng, std::size_t max_p, double scale) {
    OrthoInstance inst;
    const std::size_t p = 1 + static_cast<std::size_t>(rng.uniform() * max_p);
    inst.beta1 = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.1 + rng.uniform() * scale);
    inst.z.resize(p);
    for (auto& v : inst.z) v = (2 * rng.uniform() - 1) * scale;
    inst.n = 100;
    return inst;
}

// Refit loss for every threshold the path passes, by direct summation.
double refit_brute(const std::vector<double>& b, const std::vector<double>& z) {
    std::vector<double> levels{0.0};
    for (double v : z) levels.push_back(std::abs(v));
    double best = 1e300;
    for (double t : levels) {
        double loss = 0;
        for (std::size_t j = 0; j < z.size(); ++j) {
            const double fit = std::abs(z[j]) > t ? z[j] : 0.0;
            loss += (b[j] - fit) * (b[j] - fit);
        }
        best = std::min(best, loss);
    }
    return best;
}

}  // namespace

TEST_CASE("soft_threshold") {
    CHECK(soft_threshold(3.0, 1.0) == 2.0);
    CHECK(soft_threshold(-3.0, 1.0) == -2.0);
    CHECK(soft_threshold(0.5, 1.0) == 0.0);
    CHECK(soft_threshold(-1.0, 1.0) == 0.0);
    CHECK(soft_threshold(2.0, 0.0) == 2.0);
    CHECK_THROWS_AS(soft_threshold(1.0, -0.1), DomainError);
}

TEST_CASE("optimal_single covers its three cases") {
    auto a = optimal_single(3.0, 5.0);
    CHECK(a.lambda_star == 2.0);
    CHECK(a.n_loss == 0.0);
    auto b = optimal_single(3.0, 2.0);
    CHECK(b.lambda_star == 0.0);
    CHECK(b.n_loss == 1.0);
    auto c = optimal_single(3.0, -1.0);
    CHECK(c.case_tag == CaseTag::SignMismatch);
    CHECK(c.n_loss == 9.0);
    CHECK(c.lambda_star == 1.0);
    auto d = optimal_single(-2.0, -2.5);
    CHECK(d.lambda_star == 0.5);
    CHECK(d.n_loss == 0.0);
}

TEST_CASE("worked two-predictor instance") {
    // beta1 = 3, z = (5, 2.5): the superfluous z2 forces a compromise
    const OrthoInstance inst{3.0, {5.0, 2.5}, 100, 1.0};
    const auto m = optimal_multi(inst);
    CHECK(m.case_tag == CaseTag::Deterioration);
    CHECK(m.deteriorated);
    // on [0, 2.5] the loss is (lambda - 2)^2 + (2.5 - lambda)^2, minimized at 2.25
    CHECK(m.lambda_star == doctest::Approx(2.25));
    CHECK(m.n_loss == doctest::Approx(0.125));
    CHECK(loss_curve(inst, 2.25) == doctest::Approx(0.125));
}

TEST_CASE("classify boundary and p = 1") {
    const std::vector<double> edge{5.0, 2.0};
    CHECK(classify(3.0, edge) == CaseTag::NoDeterioration);
    const std::vector<double> inside{5.0, 2.0000001};
    CHECK(classify(3.0, inside) == CaseTag::Deterioration);
    const std::vector<double> one{0.5};
    CHECK(classify(3.0, one) == CaseTag::NoDeterioration);
    const std::vector<double> wrong{-4.0, 0.1};
    CHECK(classify(3.0, wrong) == CaseTag::SignMismatch);
    const std::vector<double> zero{0.0, 0.1};
    CHECK(classify(3.0, zero) == CaseTag::SignMismatch);
}

TEST_CASE("optimal_multi with p = 1 equals optimal_single") {
    RngStream rng(5, 0);
    for (int i = 0; i < 200; ++i) {
        const double b = 0.5 + rng.uniform() * 4, z = rng.normal(b, 2.0);
        const auto m = optimal_multi({b, {z}, 10, 1.0});
        const auto s = optimal_single(b, z);
        CHECK(m.n_loss == doctest::Approx(s.n_loss).epsilon(1e-12));
        CHECK(m.lambda_star == doctest::Approx(s.lambda_star).epsilon(1e-12));
    }
}

TEST_CASE("exact optimum is never beaten by a dense grid") {
    RngStream rng(11, 0);
    for (int i = 0; i < 500; ++i) {
        const OrthoInstance inst = random_instance(rng, 12, 6.0);
        const auto exact = optimal_multi(inst);
        const auto grid = oracle_grid_min(inst, 20001);
        CHECK(exact.n_loss <= grid.n_loss + 1e-12);
        CHECK(grid.n_loss - exact.n_loss < 1e-4);
        CHECK(loss_curve(inst, exact.lambda_star) == doctest::Approx(exact.n_loss).epsilon(1e-12));
    }
}

TEST_CASE("case tags agree with the direct loss comparison") {
    RngStream rng(12, 0);
    for (int i = 0; i < 2000; ++i) {
        const OrthoInstance inst = random_instance(rng, 10, 5.0);
        const auto m = optimal_multi(inst);
        const auto s = optimal_single(inst.beta1, inst.z[0]);
        const bool worse = m.n_loss > s.n_loss + 1e-12 * (1 + inst.beta1 * inst.beta1);
        CHECK(worse == m.deteriorated);
        CHECK(m.n_loss >= s.n_loss - 1e-12);
        if (m.case_tag == CaseTag::SignMismatch) {
            CHECK(m.n_loss == inst.beta1 * inst.beta1);
        }
    }
}

TEST_CASE("general shrinkage minimizer against a grid") {
    RngStream rng(13, 0);
    for (int i = 0; i < 300; ++i) {
        const std::size_t p = 1 + i % 15;
        std::vector<double> b(p), z(p);
        for (std::size_t j = 0; j < p; ++j) {
            b[j] = j < 3 ? rng.normal(0, 5) : 0.0;
            z[j] = b[j] + rng.normal(0, 2);
        }
        const auto m = minimize_shrinkage_loss(b, z);
        double top = 0;
        for (double v : z) top = std::max(top, std::abs(v));
        double grid = 1e300;
        for (int g = 0; g <= 20000; ++g) grid = std::min(grid, shrinkage_loss(b, z, top * g / 20000.0));
        CHECK(m.loss <= grid + 1e-12);
        CHECK(grid - m.loss < 1e-3);
        CHECK(m.full_shrinkage == (m.lambda >= top));
    }
}

TEST_CASE("full shrinkage when the signal is invisible") {
    const std::vector<double> b{0.1, 0.0}, z{-2.0, 1.0};
    const auto m = minimize_shrinkage_loss(b, z);
    CHECK(m.full_shrinkage);
    CHECK(m.loss == doctest::Approx(0.01));
}

TEST_CASE("refit minimizer against direct enumeration") {
    RngStream rng(14, 0);
    for (int i = 0; i < 300; ++i) {
        const std::size_t p = 1 + i % 12;
        std::vector<double> b(p), z(p);
        for (std::size_t j = 0; j < p; ++j) {
            b[j] = j < 2 ? rng.normal(0, 3) : 0.0;
            z[j] = b[j] + rng.normal(0, 1.5);
        }
        if (i % 7 == 0 && p > 2) z[2] = -z[1];  // tied magnitudes enter together
        const auto r = minimize_refit_loss(b, z);
        CHECK(r.loss == doctest::Approx(refit_brute(b, z)).epsilon(1e-12));
        std::size_t support = 0;
        for (double v : z) support += std::abs(v) > r.lambda;
        CHECK(support == r.support_size);
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(optimal_multi({0.0, {1.0}, 1, 1.0}), DomainError);
    CHECK_THROWS_AS(optimal_multi({1.0, {}, 1, 1.0}), DimensionError);
    const std::vector<double> a{1.0}, b{1.0, 2.0};
    CHECK_THROWS_AS(minimize_shrinkage_loss(a, b), DimensionError);
    CHECK_THROWS_AS(oracle_grid_min({1.0, {1.0}, 1, 1.0}, 1), DomainError);
}
