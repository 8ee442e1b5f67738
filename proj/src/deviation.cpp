#include "carpets/deviation.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "carpets/scale.hpp"

namespace carpets {

double lambda_prime(const BernoulliMeasure& mu, double lambda) {
    const Carpet& c = mu.carpet();
    const double logm = std::log(static_cast<double>(c.m()));
    const double logn = std::log(static_cast<double>(c.n()));
    return (lambda - std::log(static_cast<double>(c.occupied_count())) / logm) * logn;
}

double lambda_from_prime(const BernoulliMeasure& mu, double lambda_prime) {
    const Carpet& c = mu.carpet();
    const double logm = std::log(static_cast<double>(c.m()));
    const double logn = std::log(static_cast<double>(c.n()));
    return lambda_prime / logn + std::log(static_cast<double>(c.occupied_count())) / logm;
}

RateFunction::RateFunction(BernoulliMeasure mu) : mu_(std::move(mu)) {
    mean_ = mu_.fibre_moments().mean;
    log_cmax_ = std::log(static_cast<double>(mu_.carpet().max_column_count()));
    argmax_mass_ = mu_.argmax_mass();
}

double RateFunction::solve_theta(double lp) const {
    if (!(lp > mean_) || !(lp < log_cmax_))
        raise(errc::lambda_out_of_range,
              "lambda' must lie strictly between c and log C_max for the solver");

    // bracket: Lambda' is strictly increasing with Lambda'(0) = c and
    // limit log C_max, so doubling always finds an upper end
    double lo = 0.0;
    double hi = 1.0;
    while (mu_.cumulant_derivative(hi) <= lp) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9) // lp indistinguishable from log C_max at double precision
            return hi;
    }

    double theta = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double d1 = mu_.cumulant_derivative(theta);
        const double err = d1 - lp;
        if (std::fabs(err) < 1e-12)
            return theta;
        if (err > 0)
            hi = theta;
        else
            lo = theta;
        const double d2 = mu_.cumulant_second_derivative(theta);
        double next = theta - err / d2;
        if (!(next > lo) || !(next < hi))
            next = 0.5 * (lo + hi); // bisection fallback keeps the bracket
        theta = next;
    }
    return theta;
}

RateValue RateFunction::evaluate(double lp) const {
    if (lp <= mean_)
        return RateValue{0.0, false};
    if (lp >= log_cmax_)
        return RateValue{0.0, true};
    const double theta = solve_theta(lp);
    return RateValue{theta * lp - mu_.cumulant(theta), false};
}

namespace {

void require_theorem_range(const RateFunction& rf, double lambda) {
    const BernoulliMeasure& mu = rf.measure();
    const Carpet& c = mu.carpet();
    const double lo = std::max(mu.mean_dim(), c.box_dim());
    if (!(lambda >= lo) || !(lambda < c.assouad_dim()))
        raise(errc::lambda_out_of_range,
              "lambda must lie in [max(alpha, box dim), assouad dim) = [" + std::to_string(lo) +
                  ", " + std::to_string(c.assouad_dim()) + "), got " + std::to_string(lambda));
}

void require_eps_range(const Carpet& c, double eps) {
    if (!(eps > 0.0) || !(eps < c.gamma() - 1.0))
        raise(errc::bad_epsilon, "eps must lie in (0, gamma-1), got " + std::to_string(eps));
}

} // namespace

double ldp_rate_symbolic(const RateFunction& rf, double lambda, double eps) {
    require_theorem_range(rf, lambda);
    require_eps_range(rf.measure().carpet(), eps);
    const RateValue I = rf.evaluate(lambda_prime(rf.measure(), lambda));
    if (I.infinite)
        raise(errc::lambda_out_of_range, "rate is infinite at this lambda");
    return eps * I.value;
}

double ldp_rate_geometric(const RateFunction& rf, double lambda, double eps) {
    return ldp_rate_symbolic(rf, lambda, eps) /
           std::log(static_cast<double>(rf.measure().carpet().n()));
}

namespace {

// running average strictly exceeds the threshold, with a relative guard;
// ties count as not exceeding
bool exceeds(double sum, long length, double lambda_prime) {
    const double bound = static_cast<double>(length) * lambda_prime;
    const double guard = 1e-12 * std::max({1.0, std::fabs(sum), std::fabs(bound)});
    return sum - bound > guard;
}

std::uint64_t pack_counts(const int* counts, int t) {
    std::uint64_t key = 0;
    for (int j = 0; j + 1 < t; ++j) // last count implied by the step number
        key = (key << 16) | static_cast<std::uint64_t>(counts[j]);
    return key;
}

} // namespace

double exceedance_exact_window(const BernoulliMeasure& mu, long window_lo, long window_hi,
                               double lambda_prime, const DpLimits& limits) {
    if (window_lo < 1 || window_lo > window_hi)
        raise(errc::window_empty, "window [" + std::to_string(window_lo) + "," +
                                      std::to_string(window_hi) + "] is empty");
    const auto& support = mu.fibre_log_support();
    const int t = static_cast<int>(support.size());
    if (t > limits.max_distinct)
        raise(errc::state_space_too_large,
              std::to_string(t) + " distinct column counts exceed the DP cap of " +
                  std::to_string(limits.max_distinct));
    if (window_hi > limits.max_window_end)
        raise(errc::state_space_too_large, "window end " + std::to_string(window_hi) +
                                               " exceeds the DP cap of " +
                                               std::to_string(limits.max_window_end));

    // state: occurrence counts of the distinct log C values (last implied);
    // value: probability mass not yet absorbed
    std::unordered_map<std::uint64_t, double> states;
    states.reserve(64);
    states.emplace(0, 1.0);

    std::vector<double> values(t), masses(t);
    for (int j = 0; j < t; ++j) {
        values[j] = support[j].first;
        masses[j] = support[j].second;
    }

    double absorbed = 0.0;
    std::vector<int> counts(t, 0);
    for (long L = 1; L <= window_hi; ++L) {
        std::unordered_map<std::uint64_t, double> next;
        next.reserve(states.size() * 2);
        for (const auto& [key, prob] : states) {
            // unpack: counts of the first t-1 values; the last is implied
            std::uint64_t rest = key;
            int used = 0;
            for (int j = t - 2; j >= 0; --j) {
                counts[j] = static_cast<int>(rest & 0xffff);
                rest >>= 16;
                used += counts[j];
            }
            if (t > 0)
                counts[t - 1] = static_cast<int>(L - 1) - used;
            for (int j = 0; j < t; ++j) {
                const double child_prob = prob * masses[j];
                ++counts[j];
                if (L >= window_lo) {
                    double sum = 0;
                    for (int v = 0; v < t; ++v)
                        sum += counts[v] * values[v];
                    if (exceeds(sum, L, lambda_prime)) {
                        absorbed += child_prob;
                        --counts[j];
                        continue;
                    }
                }
                next[pack_counts(counts.data(), t)] += child_prob;
                --counts[j];
            }
        }
        states = std::move(next);
    }
    return absorbed;
}

double exceedance_exact(const BernoulliMeasure& mu, long k, double eps, double lambda_prime,
                        const DpLimits& limits) {
    if (k < 1)
        raise(errc::bad_range, "k must be >= 1");
    const long lo = eps_window_start(k, eps);
    const long hi = mu.carpet().gamma_ceil(k) - k;
    return exceedance_exact_window(mu, lo, hi, lambda_prime, limits);
}

SandwichBounds sandwich_bounds(const RateFunction& rf, long k, double eps, double lambda_prime) {
    if (!(lambda_prime > rf.mean_log_fibre()) || !(lambda_prime < rf.log_cmax()))
        raise(errc::lambda_out_of_range,
              "sandwich bounds need lambda' strictly between c and log C_max");
    const RateValue I = rf.evaluate(lambda_prime);
    const long L0 = eps_window_start(k, eps);
    SandwichBounds b;
    b.lower = std::exp(-static_cast<double>(L0) * I.value);
    b.upper = b.lower / (1.0 - std::exp(-I.value));
    return b;
}

double normal_cdf(double tau) { return 0.5 * std::erfc(-tau / std::sqrt(2.0)); }

double clt_normalizer(const BernoulliMeasure& mu, long k, double delta, double tau) {
    const Carpet& c = mu.carpet();
    if (!(delta > 1.0) || !(delta < c.gamma()))
        raise(errc::bad_delta, "delta must lie in (1, gamma), got " + std::to_string(delta));
    const double sigma = mu.fibre_moments().variance;
    if (!(sigma > 0.0))
        raise(errc::degenerate_sigma, "uniform fibres: the fibre-log variance is zero");
    const long W = delta_window_end(k, delta) - k + 1;
    const double logn = std::log(static_cast<double>(c.n()));
    return tau * std::sqrt(sigma) / (logn * std::sqrt(static_cast<double>(W)));
}

} // namespace carpets
