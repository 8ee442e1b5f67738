#include <doctest.h>

#include <cmath>
#include <random>

#include "carpets/measure.hpp"
#include "test_support.hpp"

using namespace carpets;
using namespace carpets::testing;

TEST_CASE("explicit weights: validation and projection") {
    const Carpet c = left_example();

    const BernoulliMeasure uniform =
        BernoulliMeasure::from_weights(c, std::vector<double>(3, 1.0 / 3.0));
    CHECK(uniform.column_weight(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(uniform.column_weight(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(BernoulliMeasure::from_weights(c, {0.5, 0.5, 0.0}), Error);
    CHECK_THROWS_AS(BernoulliMeasure::from_weights(c, {0.5, 0.2, 0.2}), Error);
    CHECK_THROWS_AS(BernoulliMeasure::from_weights(c, {0.5, 0.5}), Error);

    // keyed table must cover exactly the digit set
    CHECK_THROWS_AS(BernoulliMeasure::from_weights(
                        c, std::vector<std::pair<Digit, double>>{
                               {{0, 0}, 0.5}, {{0, 2}, 0.25}, {{1, 2}, 0.25}}),
                    Error);
    const BernoulliMeasure keyed = BernoulliMeasure::from_weights(
        c, std::vector<std::pair<Digit, double>>{{{1, 1}, 0.5}, {{0, 2}, 0.25}, {{0, 0}, 0.25}});
    CHECK(keyed.digit_weight({1, 1}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("canonical measures") {
    const Carpet c = left_example();

    const BernoulliMeasure me = BernoulliMeasure::max_entropy(c);
    for (double w : me.digit_weights())
        CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const BernoulliMeasure me4 = BernoulliMeasure::max_entropy(right_example());
    CHECK(me4.column_weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(me4.column_weights()[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(me4.column_weights()[2] == doctest::Approx(0.25).epsilon(1e-15));

    const BernoulliMeasure cu = BernoulliMeasure::column_uniform(c);
    CHECK(cu.digit_weight({0, 0}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cu.digit_weight({0, 2}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cu.digit_weight({1, 1}) == doctest::Approx(0.5).epsilon(1e-15));
    for (int i : c.occupied_columns())
        CHECK(cu.column_weight(i) == doctest::Approx(0.5).epsilon(1e-15));

    const BernoulliMeasure cu34 = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));
    for (int i = 0; i < 3; ++i)
        CHECK(cu34.column_weight(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("mcmullen measure") {
    // uniform fibres: coincides with maximal entropy
    const Carpet u = carpet34({2, 2, 2});
    const BernoulliMeasure mm = BernoulliMeasure::mcmullen(u);
    for (double w : mm.digit_weights())
        CHECK(w == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    // direct formula evaluation plus normalization residual
    const Carpet a = carpet34({3, 2, 2});
    const BernoulliMeasure ma = BernoulliMeasure::mcmullen(a);
    const double s = a.hausdorff_dim();
    const double ratio = std::log(3.0) / std::log(4.0);
    double residual = 0;
    for (const Digit& d : a.digits())
        residual += std::pow(static_cast<double>(a.column_counts()[d.i]), ratio - 1.0) /
                    std::pow(3.0, s);
    CHECK(std::fabs(residual - 1.0) < 1e-9);
    CHECK(ma.digit_weight({0, 0}) ==
          doctest::Approx(std::pow(3.0, ratio - 1.0) / std::pow(3.0, s)).epsilon(1e-9));
    double sum = 0;
    for (double w : ma.digit_weights())
        sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

    const BernoulliMeasure full = BernoulliMeasure::mcmullen(full_grid(3, 4));
    for (double w : full.digit_weights())
        CHECK(w == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("mean dimension and fibre moments") {
    const Carpet a = carpet34({3, 2, 2});
    const BernoulliMeasure cu = BernoulliMeasure::column_uniform(a);

    const double c_expected = std::log(12.0) / 3.0; // (log3 + log2 + log2)/3
    CHECK(cu.fibre_moments().mean == doctest::Approx(c_expected).epsilon(1e-12));
    CHECK(cu.fibre_moments().mean == doctest::Approx(0.82830).epsilon(1e-5));

    double var = 0;
    for (int count : {3, 2, 2})
        var += (std::log(count) - c_expected) * (std::log(count) - c_expected) / 3.0;
    CHECK(cu.fibre_moments().variance == doctest::Approx(var).epsilon(1e-12));
    CHECK(cu.fibre_moments().variance == doctest::Approx(0.03654).epsilon(1e-3));

    CHECK(cu.mean_dim() == doctest::Approx(1.0 + c_expected / std::log(4.0)).epsilon(1e-12));
    CHECK(cu.mean_dim() == doctest::Approx(1.5975).epsilon(1e-4));
    // cross-check against the moment route
    CHECK(cu.mean_dim() ==
          doctest::Approx(1.0 + cu.fibre_moments().mean / std::log(4.0)).epsilon(1e-15));

    const BernoulliMeasure skew = BernoulliMeasure::column_uniform(carpet34({4, 1, 1}));
    CHECK(skew.mean_dim() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    const double c411 = std::log(4.0) / 3.0;
    CHECK(skew.fibre_moments().mean == doctest::Approx(c411).epsilon(1e-12));
    CHECK(skew.fibre_moments().variance ==
          doctest::Approx((std::log(4.0) - c411) * (std::log(4.0) - c411) / 3.0 +
                          2.0 * c411 * c411 / 3.0)
              .epsilon(1e-12));

    const BernoulliMeasure uf = BernoulliMeasure::max_entropy(carpet34({2, 2, 2}));
    CHECK(uf.fibre_moments().variance == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(uf.mean_dim() == doctest::Approx(uf.carpet().box_dim()).epsilon(1e-12));
    CHECK(uf.mean_dim() == doctest::Approx(uf.carpet().assouad_dim()).epsilon(1e-12));
}

TEST_CASE("cumulant generating function") {
    const Carpet a = carpet34({3, 2, 2});
    const BernoulliMeasure cu = BernoulliMeasure::column_uniform(a);

    CHECK(cu.cumulant(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(cu.cumulant(1.0) == doctest::Approx(std::log(7.0 / 3.0)).epsilon(1e-12));

    // large-theta asymptote: Lambda(t)/t -> log C_max with a log(argmax mass)/t correction
    const double t = 50.0;
    CHECK(cu.cumulant(t) / t ==
          doctest::Approx(std::log(3.0) + std::log(cu.argmax_mass()) / t).epsilon(1e-6));
    CHECK(std::fabs(cu.cumulant(200.0) / 200.0 - std::log(3.0)) < 1e-2);
    CHECK(std::isfinite(cu.cumulant(500.0))); // max-shift keeps deep theta finite
    CHECK(std::isfinite(cu.cumulant(-500.0)));

    // Lambda'(0) = c by finite differences
    const double h = 1e-6;
    const double fd = (cu.cumulant(h) - cu.cumulant(-h)) / (2 * h);
    CHECK(fd == doctest::Approx(cu.fibre_moments().mean).epsilon(1e-5));
    CHECK(cu.cumulant_derivative(0.0) ==
          doctest::Approx(cu.fibre_moments().mean).epsilon(1e-12));

    // midpoint convexity on a theta grid
    for (double lo = -5.0; lo < 20.0; lo += 0.5) {
        const double hi = lo + 1.0;
        CHECK(cu.cumulant(0.5 * (lo + hi)) <= 0.5 * (cu.cumulant(lo) + cu.cumulant(hi)) + 1e-10);
    }
}

TEST_CASE("randomized measure invariants") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 40; ++rep) {
        const Carpet c = random_carpet(rng);
        const BernoulliMeasure mu = random_measure(rng, c);

        double sum = 0;
        for (double w : mu.digit_weights())
            sum += w;
        CHECK(std::fabs(sum - 1.0) < 1e-12);
        double colsum = 0;
        for (int i : c.occupied_columns())
            colsum += mu.column_weight(i);
        CHECK(std::fabs(colsum - 1.0) < 1e-12);

        CHECK(mu.cumulant(0.0) == doctest::Approx(0.0).epsilon(1e-12));
        if (!c.uniform_fibres()) {
            CHECK(mu.mean_dim() < c.assouad_dim());
            // column-uniform weights sit strictly below the box dimension
            CHECK(BernoulliMeasure::column_uniform(c).mean_dim() < c.box_dim() - 1e-12);
        }
    }
}
