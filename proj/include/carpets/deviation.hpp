#pragma once

#include "carpets/measure.hpp"

namespace carpets {

/// Extended-real result of the rate function: +infinity is an explicit flag,
/// never a float infinity fed back into arithmetic.
struct RateValue {
    double value = 0;
    bool infinite = false;
};

/// Affine change of variables between dimension thresholds lambda and
/// running-average thresholds lambda' = (lambda - log|piD|/log m) log n.
double lambda_prime(const BernoulliMeasure& mu, double lambda);
double lambda_from_prime(const BernoulliMeasure& mu, double lambda_prime);

/// Legendre transform of the cumulant generating function of log C_i under
/// the projected column weights. Zero at and below the mean c, +infinity at
/// and above log C_max, and solved by a safeguarded Newton iteration on
/// Lambda'(theta) = lambda' in between.
class RateFunction {
public:
    explicit RateFunction(BernoulliMeasure mu);

    const BernoulliMeasure& measure() const noexcept { return mu_; }
    double mean_log_fibre() const noexcept { return mean_; }     // c
    double log_cmax() const noexcept { return log_cmax_; }
    double argmax_mass() const noexcept { return argmax_mass_; }

    RateValue evaluate(double lambda_prime) const;

    /// Root of Lambda'(theta) = lambda' for lambda' in (c, log C_max);
    /// exposed for duality checks.
    double solve_theta(double lambda_prime) const;

private:
    BernoulliMeasure mu_;
    double mean_ = 0;
    double log_cmax_ = 0;
    double argmax_mass_ = 0;
};

/// Per-k decay exponent eps * I(lambda') of the exceedance probability;
/// lambda must lie in [max(alpha, box dim), assouad dim).
double ldp_rate_symbolic(const RateFunction& rf, double lambda, double eps);
/// Per-log(1/R) exponent: the symbolic rate divided by log n.
double ldp_rate_geometric(const RateFunction& rf, double lambda, double eps);

struct DpLimits {
    int max_distinct = 4;       // distinct values of C_i
    long max_window_end = 1000; // cap on ceil((gamma-1) k)
};

/// Exact probability that the running average of log C over the first L
/// letters exceeds lambda' for some L in [window_lo, window_hi], by an
/// absorbing dynamic program over occurrence-count vectors of the distinct
/// log C values. Ties (within a 1e-12 relative guard) do not exceed.
double exceedance_exact_window(const BernoulliMeasure& mu, long window_lo, long window_hi,
                               double lambda_prime, const DpLimits& limits = {});

/// Window derived from (k, eps): L in [ceil(eps k), ceil(gamma k) - k].
double exceedance_exact(const BernoulliMeasure& mu, long k, double eps, double lambda_prime,
                        const DpLimits& limits = {});

/// Constant-free envelope shapes from the single-L large deviation bounds:
/// lower = exp(-ceil(eps k) I), upper = lower / (1 - exp(-I)).
struct SandwichBounds {
    double lower = 0;
    double upper = 0;
};

SandwichBounds sandwich_bounds(const RateFunction& rf, long k, double eps, double lambda_prime);

/// CLT normalizer alpha_k(tau) = tau sqrt(sigma) / (log n sqrt(W)) where W
/// is the window length ceil(delta k) - k + 1. Requires non-uniform fibres.
double clt_normalizer(const BernoulliMeasure& mu, long k, double delta, double tau);

/// Standard normal CDF, absolute error below 1e-15.
double normal_cdf(double tau);

} // namespace carpets
