#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carpets/deviation.hpp"
#include "carpets/observables.hpp"
#include "carpets/rng.hpp"
#include "carpets/symbolic.hpp"

namespace carpets {

/// Inverse-CDF digit sampler for a measure; digit order is the carpet's
/// digit order, so results are identical across runs and thread counts.
class DigitSampler {
public:
    explicit DigitSampler(const BernoulliMeasure& mu);
    Digit at(const CounterRng& rng, std::uint64_t index) const;

private:
    std::vector<Digit> digits_;
    std::vector<double> cdf_;
};

/// i.i.d. code of the given length; letter l consumes rng index l-1.
Code sample_code(const BernoulliMeasure& mu, std::size_t length, const CounterRng& rng);

/// Bundled parameters of a reproducible run; what the CLI passes down.
struct RunConfig {
    std::uint64_t seed = 0;
    long long trials = 1;
    std::vector<long> k_list;
    double eps = 0.2;
    double delta = 1.2;
    std::vector<double> lambda_list;
    std::string output_path;
    int threads = 1;
};

struct McEstimate {
    double p_hat = 0;
    double stderr_ = 0;
    long long hits = 0;
    long long trials = 0;
};

/// Monte Carlo frequency of {profile_sup > lambda} with binomial standard
/// error. Trials map to rng streams, so the estimate is independent of the
/// thread count.
McEstimate estimate_exceedance_mc(const BernoulliMeasure& mu, long k, double eps, double lambda,
                                  long long trials, std::uint64_t seed, int threads = 1);

struct TailRow {
    long k = 0;
    double probability = 0;
    double rate_estimate = 0; // -log(probability)/k
};

struct LdpFit {
    double slope = 0;
    double intercept = 0;
    double predicted = 0; // eps * I(lambda')
    std::vector<TailRow> table;
};

/// Least-squares fit of -log P_k against k using exact DP probabilities,
/// compared with the predicted decay eps * I(lambda').
LdpFit ldp_fit(const BernoulliMeasure& mu, double eps, double lambda,
               const std::vector<long>& k_list);

/// Simple least-squares line fit, exposed for Monte Carlo tail tables.
void fit_line(const std::vector<double>& xs, const std::vector<double>& ys, double& slope,
              double& intercept);

struct CltRow {
    double tau = 0;
    double empirical = 0;
    double phi = 0;
};

struct CltResult {
    double ks_stat = 0;
    std::vector<CltRow> table;
};

const std::vector<double>& default_tau_grid();

/// Samples the single-window observable, normalizes it to the CLT statistic
/// sqrt(W)(c - mean)/sqrt(sigma), and reports the two-sided KS distance to
/// the standard normal plus a tau-grid comparison of the exceedance
/// probabilities against Phi(tau).
CltResult clt_test(const BernoulliMeasure& mu, long k, double delta, long long trials,
                   std::uint64_t seed, int threads = 1,
                   const std::vector<double>& tau_grid = default_tau_grid());

/// CSV emitters; UTF-8, LF line endings, '.' decimal separator.
void emit_profile(const Code& d, const Carpet& c, const Scale& R,
                  const std::vector<Scale>& r_grid, const std::string& path);
void emit_rate_curve(const RateFunction& rf, const std::vector<double>& lambda_grid, double eps,
                     const std::string& path);
void emit_tail_table(const std::vector<TailRow>& rows, const std::string& path);
void emit_clt_table(const std::vector<CltRow>& rows, const std::string& path);
void emit_rects(const std::vector<Rect>& rects, const std::string& path);

/// Shortest round-trip decimal form of x; "inf" never appears here, callers
/// write sentinel columns explicitly.
std::string format_double(double x);

} // namespace carpets
