#include <doctest.h>

#include <cmath>
#include <random>

#include "carpets/deviation.hpp"
#include "test_support.hpp"

using namespace carpets;
using namespace carpets::testing;

namespace {

// independent oracle: dense-grid maximization of theta*lp - Lambda(theta)
// with Lambda written out directly from the column weights
double rate_by_grid(const BernoulliMeasure& mu, double lp, double theta_max = 100.0,
                    double step = 1e-4) {
    const Carpet& c = mu.carpet();
    double best = 0;
    for (double theta = 0; theta <= theta_max; theta += step) {
        double z = 0;
        for (int i : c.occupied_columns())
            z += mu.column_weight(i) *
                 std::exp(theta * std::log(static_cast<double>(c.column_counts()[i])));
        best = std::max(best, theta * lp - std::log(z));
    }
    return best;
}

// shared strict-exceedance rule (ties do not exceed)
bool exceeds(double sum, long len, double lp) {
    const double bound = len * lp;
    return sum - bound > 1e-12 * std::max({1.0, std::fabs(sum), std::fabs(bound)});
}

// independent oracle: exhaust all column words of length window_hi
double exceedance_by_enumeration(const BernoulliMeasure& mu, long lo, long hi, double lp) {
    const Carpet& c = mu.carpet();
    const auto& cols = c.occupied_columns();
    std::vector<std::size_t> pick(static_cast<std::size_t>(hi), 0);
    double total = 0;
    for (;;) {
        double prob = 1, sum = 0;
        bool hit = false;
        for (long l = 0; l < hi; ++l) {
            const int i = cols[pick[l]];
            prob *= mu.column_weight(i);
            sum += std::log(static_cast<double>(c.column_counts()[i]));
            if (l + 1 >= lo && !hit && exceeds(sum, l + 1, lp))
                hit = true;
        }
        if (hit)
            total += prob;
        long l = hi - 1;
        while (l >= 0 && ++pick[l] == cols.size()) {
            pick[l] = 0;
            --l;
        }
        if (l < 0)
            break;
    }
    return total;
}

} // namespace

TEST_CASE("lambda prime transform") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));
    const Carpet& c = mu.carpet();

    CHECK(lambda_prime(mu, mu.mean_dim()) ==
          doctest::Approx(mu.fibre_moments().mean).epsilon(1e-12));
    CHECK(lambda_prime(mu, c.assouad_dim()) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(lambda_prime(mu, 1.75) == doctest::Approx(0.75 * std::log(4.0)).epsilon(1e-12));
    CHECK(lambda_prime(mu, 1.75) == doctest::Approx(1.03972).epsilon(1e-5));
    CHECK(lambda_from_prime(mu, lambda_prime(mu, 1.6180339)) ==
          doctest::Approx(1.6180339).epsilon(1e-12));
}

TEST_CASE("rate function endpoints") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));
    const RateFunction rf(mu);

    const RateValue at_mean = rf.evaluate(rf.mean_log_fibre());
    CHECK_FALSE(at_mean.infinite);
    CHECK(at_mean.value == 0.0);
    CHECK_FALSE(rf.evaluate(rf.mean_log_fibre() - 0.2).infinite);
    CHECK(rf.evaluate(rf.mean_log_fibre() - 0.2).value == 0.0);

    CHECK(rf.evaluate(rf.log_cmax()).infinite);
    CHECK(rf.evaluate(rf.log_cmax() + 0.5).infinite);

    // left limit of the right endpoint: -log of the argmax mass
    const RateValue near_top = rf.evaluate(rf.log_cmax() - 1e-6);
    CHECK_FALSE(near_top.infinite);
    CHECK(std::fabs(near_top.value - (-std::log(1.0 / 3.0))) < 1e-2);

    // two argmax columns halve the limit
    const RateFunction rf2(BernoulliMeasure::column_uniform(carpet34({3, 3, 1})));
    const RateValue near_top2 = rf2.evaluate(rf2.log_cmax() - 1e-6);
    CHECK(std::fabs(near_top2.value - (-std::log(2.0 / 3.0))) < 1e-2);
}

TEST_CASE("rate function against the dense-grid oracle") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));
    const RateFunction rf(mu);

    const double lp = 0.75 * std::log(4.0); // lambda = 1.75
    const RateValue I = rf.evaluate(lp);
    CHECK_FALSE(I.infinite);
    CHECK(I.value == doctest::Approx(rate_by_grid(mu, lp)).epsilon(1e-6));
    CHECK(I.value == doctest::Approx(0.5835661).epsilon(1e-5)); // frozen from the oracle

    for (double frac : {0.15, 0.4, 0.75, 0.95}) {
        const double probe =
            rf.mean_log_fibre() + frac * (rf.log_cmax() - rf.mean_log_fibre());
        CHECK(rf.evaluate(probe).value == doctest::Approx(rate_by_grid(mu, probe)).epsilon(1e-6));
    }
}

TEST_CASE("legendre duality and convexity over random measures") {
    std::mt19937_64 rng(83);
    for (int rep = 0; rep < 10; ++rep) {
        const Carpet c = random_carpet(rng, {.require_nonuniform = true});
        const BernoulliMeasure mu = random_measure(rng, c);
        const RateFunction rf(mu);

        for (double theta = 0.1; theta <= 20.0; theta += 0.7) {
            const double lp = mu.cumulant_derivative(theta);
            if (!(lp < rf.log_cmax()))
                continue; // saturated at double precision
            const double expected = theta * lp - mu.cumulant(theta);
            CHECK(rf.evaluate(lp).value == doctest::Approx(expected).epsilon(1e-7));
        }

        // midpoint convexity, monotonicity, non-negativity on the interior
        const double lo = rf.mean_log_fibre();
        const double hi = rf.log_cmax();
        std::vector<double> values;
        const int grid = 200;
        for (int g = 1; g < grid; ++g) {
            const double lp = lo + (hi - lo) * g / grid;
            const RateValue v = rf.evaluate(lp);
            REQUIRE_FALSE(v.infinite);
            CHECK(v.value >= 0.0);
            if (!values.empty())
                CHECK(v.value >= values.back() - 1e-10);
            values.push_back(v.value);
        }
        for (std::size_t i = 0; i + 2 < values.size(); ++i)
            CHECK(values[i + 1] <= 0.5 * (values[i] + values[i + 2]) + 1e-8);
    }
}

TEST_CASE("ldp rates") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));
    const RateFunction rf(mu);
    const Carpet& c = mu.carpet();
    const double eps = 0.2;

    const double sym = ldp_rate_symbolic(rf, 1.75, eps);
    CHECK(sym == doctest::Approx(eps * 0.5835661).epsilon(1e-5));
    CHECK(ldp_rate_geometric(rf, 1.75, eps) ==
          doctest::Approx(sym / std::log(4.0)).epsilon(1e-12));

    CHECK_THROWS_AS(ldp_rate_symbolic(rf, c.assouad_dim(), eps), Error);
    CHECK_THROWS_AS(ldp_rate_symbolic(rf, c.box_dim() - 0.05, eps), Error);
    CHECK_THROWS_AS(ldp_rate_symbolic(rf, 1.75, 0.5), Error); // eps >= gamma-1

    // discontinuity at the left endpoint when box > alpha
    const BernoulliMeasure skew = BernoulliMeasure::column_uniform(carpet34({3, 3, 1}));
    const RateFunction rf2(skew);
    CHECK(skew.mean_dim() < skew.carpet().box_dim());
    const double left = ldp_rate_symbolic(rf2, skew.carpet().box_dim(), eps);
    CHECK(left > eps * 0.01); // strictly positive at the domain edge
}

TEST_CASE("exact exceedance dynamic program") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));

    // two-letter window {2}: only the (3,3) column pair exceeds log 2.5
    CHECK(exceedance_exact_window(mu, 2, 2, std::log(2.5)) ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-12));

    // below the minimum the first window step always exceeds
    CHECK(exceedance_exact_window(mu, 3, 7, std::log(2.0) - 0.05) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // at or above log C_max nothing ever exceeds
    CHECK(exceedance_exact_window(mu, 3, 7, std::log(3.0)) == 0.0);
    CHECK(exceedance_exact_window(mu, 3, 7, std::log(3.0) + 1.0) == 0.0);

    CHECK_THROWS_AS(exceedance_exact_window(mu, 5, 4, 1.0), Error);
    try {
        exceedance_exact_window(mu, 5, 4, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == errc::window_empty);
    }
    CHECK_THROWS_AS(exceedance_exact_window(mu, 1, 2000, 1.0), Error);

    // five distinct column counts exceed the default state cap
    std::vector<Digit> digits;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j <= i; ++j)
            digits.push_back(Digit{i, j});
    const BernoulliMeasure wide =
        BernoulliMeasure::max_entropy(Carpet::create(5, 6, digits));
    CHECK_THROWS_AS(exceedance_exact_window(wide, 1, 5, 0.5), Error);
    try {
        exceedance_exact_window(wide, 1, 5, 0.5);
    } catch (const Error& e) {
        CHECK(e.code() == errc::state_space_too_large);
    }
}

TEST_CASE("dp equals full enumeration on small windows") {
    std::mt19937_64 rng(89);
    int done = 0;
    while (done < 25) {
        const Carpet c = random_carpet(rng, {.max_m = 4, .max_n = 6});
        std::vector<int> distinct;
        for (int i : c.occupied_columns()) {
            bool fresh = true;
            for (int s : distinct)
                fresh = fresh && s != c.column_counts()[i];
            if (fresh)
                distinct.push_back(c.column_counts()[i]);
        }
        if (distinct.size() > 3)
            continue;
        const BernoulliMeasure mu = random_measure(rng, c);
        const long hi = std::uniform_int_distribution<long>(2, 8)(rng);
        const long lo = std::uniform_int_distribution<long>(1, hi)(rng);
        const double u = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        const double lp = u * std::log(static_cast<double>(c.max_column_count()));
        CHECK(exceedance_exact_window(mu, lo, hi, lp) ==
              doctest::Approx(exceedance_by_enumeration(mu, lo, hi, lp)).epsilon(1e-12));
        ++done;
    }
}

TEST_CASE("exceedance monotonicity") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));
    const double top = std::log(3.0);

    double prev = 1.0;
    for (double lp = 0.70; lp <= 1.09; lp += 0.02) {
        const double p = exceedance_exact_window(mu, 4, 20, lp);
        CHECK(p <= prev + 1e-12); // non-increasing in lambda'
        prev = p;
    }

    const double lp = 0.85 * top;
    double prev_window = 0.0;
    for (long hi = 6; hi <= 30; hi += 4) {
        const double p = exceedance_exact_window(mu, 4, hi, lp);
        CHECK(p >= prev_window - 1e-12); // non-decreasing in window size
        prev_window = p;
    }

    // k/eps wrapper matches the window version
    CHECK(exceedance_exact(mu, 100, 0.2, lp) ==
          doctest::Approx(exceedance_exact_window(mu, 20, 27, lp)).epsilon(1e-15));
}

TEST_CASE("ldp decay slope approaches eps * I") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));
    const RateFunction rf(mu);
    const double eps = 0.2;
    const double lp = lambda_prime(mu, 1.75);
    const double target = eps * rf.evaluate(lp).value;

    std::vector<double> ks, ys;
    for (long k = 100; k <= 500; k += 100) {
        const double p = exceedance_exact(mu, k, eps, lp);
        ks.push_back(static_cast<double>(k));
        ys.push_back(-std::log(p));
    }
    double num = 0, den = 0;
    const double mx = (100 + 500) / 2.0;
    double my = 0;
    for (double y : ys)
        my += y / ys.size();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        num += (ks[i] - mx) * (ys[i] - my);
        den += (ks[i] - mx) * (ks[i] - mx);
    }
    const double slope = num / den;
    CHECK(std::fabs(slope - target) / target < 0.10);
}

TEST_CASE("sandwich bounds") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));
    const RateFunction rf(mu);
    const double lp = lambda_prime(mu, 1.75);
    const double I = rf.evaluate(lp).value;

    const SandwichBounds b50 = sandwich_bounds(rf, 50, 0.2, lp);
    const SandwichBounds b200 = sandwich_bounds(rf, 200, 0.2, lp);
    CHECK(b50.upper / b50.lower ==
          doctest::Approx(1.0 / (1.0 - std::exp(-I))).epsilon(1e-12));
    CHECK(b200.upper / b200.lower == doctest::Approx(b50.upper / b50.lower).epsilon(1e-12));
    CHECK(b200.upper < b50.upper); // deeper k shrinks both envelopes

    // fitted constants from single-L tails bracket the window probability
    double c1 = 1e300, c2 = 0;
    for (long L = 10; L <= 52; L += 6) {
        const double single = exceedance_exact_window(mu, L, L, lp);
        const double envelope = std::exp(-static_cast<double>(L) * I);
        c1 = std::min(c1, single / envelope);
        c2 = std::max(c2, single / envelope);
    }
    for (long k : {50, 100, 200, 400}) {
        const double p = exceedance_exact(mu, k, 0.2, lp);
        const SandwichBounds b = sandwich_bounds(rf, k, 0.2, lp);
        CHECK(p >= c1 * b.lower * 0.999999);
        CHECK(p <= c2 * b.upper * 1.000001);
    }

    CHECK_THROWS_AS(sandwich_bounds(rf, 50, 0.2, rf.mean_log_fibre()), Error);
    CHECK_THROWS_AS(sandwich_bounds(rf, 50, 0.2, rf.log_cmax()), Error);
}

TEST_CASE("clt normalizer and the normal cdf") {
    const BernoulliMeasure mu = BernoulliMeasure::column_uniform(carpet34({3, 2, 2}));

    CHECK(clt_normalizer(mu, 100, 1.2, 0.0) == 0.0);
    const double sigma = mu.fibre_moments().variance;
    const double expected = std::sqrt(sigma) / (std::log(4.0) * std::sqrt(21.0));
    CHECK(clt_normalizer(mu, 100, 1.2, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(clt_normalizer(mu, 100, 1.2, 1.0) == doctest::Approx(0.0301).epsilon(2e-3));
    CHECK(clt_normalizer(mu, 100, 1.2, -2.0) == doctest::Approx(-2 * expected).epsilon(1e-12));

    const BernoulliMeasure uf = BernoulliMeasure::max_entropy(carpet34({2, 2, 2}));
    CHECK_THROWS_AS(clt_normalizer(uf, 100, 1.2, 1.0), Error);
    try {
        clt_normalizer(uf, 100, 1.2, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == errc::degenerate_sigma);
    }

    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-9));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-9));
    CHECK(normal_cdf(-2.0) == doctest::Approx(0.022750131948179195).epsilon(1e-9));
    for (double x = -4; x <= 4; x += 0.25)
        CHECK(normal_cdf(-x) == doctest::Approx(1.0 - normal_cdf(x)).epsilon(1e-12));
}
