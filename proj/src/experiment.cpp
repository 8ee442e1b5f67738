#include "carpets/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace carpets {

DigitSampler::DigitSampler(const BernoulliMeasure& mu) : digits_(mu.carpet().digits()) {
    cdf_.reserve(digits_.size());
    double acc = 0;
    for (double w : mu.digit_weights()) {
        acc += w;
        cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;
}

Digit DigitSampler::at(const CounterRng& rng, std::uint64_t index) const {
    const double u = rng.uniform(index);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t k = std::min(static_cast<std::size_t>(it - cdf_.begin()),
                                   digits_.size() - 1);
    return digits_[k];
}

Code sample_code(const BernoulliMeasure& mu, std::size_t length, const CounterRng& rng) {
    const DigitSampler sampler(mu);
    std::vector<Digit> word;
    word.reserve(length);
    for (std::size_t l = 0; l < length; ++l)
        word.push_back(sampler.at(rng, l));
    return Code(std::move(word));
}

namespace {

// runs fn(t) for t in [0, trials) over `threads` workers on disjoint
// contiguous blocks; fn must only touch per-trial state
template <typename Fn>
void parallel_trials(long long trials, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || trials < 2 * threads) {
        for (long long t = 0; t < trials; ++t)
            fn(t);
        return;
    }
    std::vector<std::thread> pool;
    const long long chunk = (trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const long long lo = w * chunk;
        const long long hi = std::min(trials, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, &fn] {
            for (long long t = lo; t < hi; ++t)
                fn(t);
        });
    }
    for (std::thread& th : pool)
        th.join();
}

} // namespace

McEstimate estimate_exceedance_mc(const BernoulliMeasure& mu, long k, double eps, double lambda,
                                  long long trials, std::uint64_t seed, int threads) {
    if (trials < 100)
        raise(errc::bad_range, "need at least 100 trials");
    const Carpet& c = mu.carpet();
    const std::size_t length = static_cast<std::size_t>(c.gamma_ceil(k));
    {
        // surface parameter errors before spawning workers
        const Code probe = sample_code(mu, length, CounterRng(seed, 0));
        (void)profile_sup(probe, c, k, eps);
    }
    std::vector<unsigned char> hit(static_cast<std::size_t>(trials), 0);
    const DigitSampler sampler(mu);
    parallel_trials(trials, threads, [&](long long t) {
        const CounterRng rng(seed, static_cast<std::uint64_t>(t));
        std::vector<Digit> word;
        word.reserve(length);
        for (std::size_t l = 0; l < length; ++l)
            word.push_back(sampler.at(rng, l));
        const Code code(std::move(word));
        if (profile_sup(code, c, k, eps) > lambda)
            hit[static_cast<std::size_t>(t)] = 1;
    });
    long long hits = 0;
    for (unsigned char h : hit)
        hits += h;
    McEstimate est;
    est.hits = hits;
    est.trials = trials;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(trials);
    est.stderr_ = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
    return est;
}

void fit_line(const std::vector<double>& xs, const std::vector<double>& ys, double& slope,
              double& intercept) {
    if (xs.size() != ys.size() || xs.size() < 2)
        raise(errc::bad_range, "line fit needs at least two points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0)
        raise(errc::bad_range, "degenerate abscissae in line fit");
    slope = (n * sxy - sx * sy) / denom;
    intercept = (sy - slope * sx) / n;
}

LdpFit ldp_fit(const BernoulliMeasure& mu, double eps, double lambda,
               const std::vector<long>& k_list) {
    if (k_list.size() < 2)
        raise(errc::bad_range, "k_list needs at least two entries");
    if (!std::is_sorted(k_list.begin(), k_list.end()))
        raise(errc::bad_range, "k_list must be ascending");

    const RateFunction rf(mu);
    const double lp = lambda_prime(mu, lambda);
    const double predicted = ldp_rate_symbolic(rf, lambda, eps); // validates ranges

    LdpFit fit;
    fit.predicted = predicted;
    std::vector<double> xs, ys;
    for (long k : k_list) {
        const double p = exceedance_exact(mu, k, eps, lp);
        if (!(p > 0.0))
            raise(errc::bad_range, "exceedance probability underflows at k = " +
                                       std::to_string(k) + "; reduce k or lambda");
        fit.table.push_back(TailRow{k, p, -std::log(p) / static_cast<double>(k)});
        xs.push_back(static_cast<double>(k));
        ys.push_back(-std::log(p));
    }
    fit_line(xs, ys, fit.slope, fit.intercept);
    return fit;
}

const std::vector<double>& default_tau_grid() {
    static const std::vector<double> grid = {-3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0,
                                             0.5,  1.0,  1.5,  2.0,  2.5,  3.0};
    return grid;
}

CltResult clt_test(const BernoulliMeasure& mu, long k, double delta, long long trials,
                   std::uint64_t seed, int threads, const std::vector<double>& tau_grid) {
    if (trials < 100)
        raise(errc::bad_range, "need at least 100 trials");
    const Carpet& c = mu.carpet();
    const double sigma = mu.fibre_moments().variance;
    if (!(sigma > 0.0))
        raise(errc::degenerate_sigma, "uniform fibres: the CLT statistic is degenerate");
    if (!(delta > 1.0) || !(delta < c.gamma()))
        raise(errc::bad_delta, "delta must lie in (1, gamma)");

    const long T = delta_window_end(k, delta);
    const long W = T - k + 1;
    const double cmean = mu.fibre_moments().mean;
    const double scale = std::sqrt(static_cast<double>(W)) / std::sqrt(sigma);

    // letter l of a sampled code consumes rng index l-1; only the window
    // letters matter, so each trial draws exactly indices k-1 .. T-1
    const DigitSampler sampler(mu);
    const auto& counts = c.column_counts();
    std::vector<double> z(static_cast<std::size_t>(trials));
    parallel_trials(trials, threads, [&](long long t) {
        const CounterRng rng(seed, static_cast<std::uint64_t>(t));
        double sum = 0;
        for (long l = k; l <= T; ++l)
            sum += std::log(static_cast<double>(counts[sampler.at(rng, l - 1).i]));
        const double mean = sum / static_cast<double>(W);
        z[static_cast<std::size_t>(t)] = scale * (cmean - mean);
    });

    CltResult out;
    for (double tau : tau_grid) {
        long long below = 0;
        for (double v : z)
            if (v < tau)
                ++below; // strictly: the event {A_delta > alpha - alpha_k(tau)}
        out.table.push_back(CltRow{tau, static_cast<double>(below) / trials, normal_cdf(tau)});
    }

    std::sort(z.begin(), z.end());
    double ks = 0;
    const double n = static_cast<double>(trials);
    for (long long i = 0; i < trials; ++i) {
        const double phi = normal_cdf(z[static_cast<std::size_t>(i)]);
        ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / n - phi));
        ks = std::max(ks, std::fabs(phi - static_cast<double>(i) / n));
    }
    out.ks_stat = ks;
    return out;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings
    if (!out)
        raise(errc::io_error, "cannot open '" + path + "' for writing");
    return out;
}

void finish_csv(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out)
        raise(errc::io_error, "write failure on '" + path + "'");
}

} // namespace

void emit_profile(const Code& d, const Carpet& c, const Scale& R,
                  const std::vector<Scale>& r_grid, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "r,A,branch\n";
    for (const Scale& r : r_grid) {
        const ProfilePoint p = dimension_profile(d, c, R, r);
        out << format_double(r.value()) << "," << format_double(p.value) << "," << p.branch
            << "\n";
    }
    finish_csv(out, path);
}

void emit_rate_curve(const RateFunction& rf, const std::vector<double>& lambda_grid, double eps,
                     const std::string& path) {
    const double logn = std::log(static_cast<double>(rf.measure().carpet().n()));
    std::ofstream out = open_csv(path);
    out << "lambda,I,rate_symbolic,rate_geometric\n";
    for (double lambda : lambda_grid) {
        const RateValue I = rf.evaluate(lambda_prime(rf.measure(), lambda));
        out << format_double(lambda) << ",";
        if (I.infinite) {
            out << "inf,inf,inf\n";
        } else {
            out << format_double(I.value) << "," << format_double(eps * I.value) << ","
                << format_double(eps * I.value / logn) << "\n";
        }
    }
    finish_csv(out, path);
}

void emit_tail_table(const std::vector<TailRow>& rows, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "k,probability,rate_estimate\n";
    for (const TailRow& row : rows)
        out << row.k << "," << format_double(row.probability) << ","
            << format_double(row.rate_estimate) << "\n";
    finish_csv(out, path);
}

void emit_clt_table(const std::vector<CltRow>& rows, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "tau,empirical,phi\n";
    for (const CltRow& row : rows)
        out << format_double(row.tau) << "," << format_double(row.empirical) << ","
            << format_double(row.phi) << "\n";
    finish_csv(out, path);
}

void emit_rects(const std::vector<Rect>& rects, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "x,y,width,height\n";
    for (const Rect& r : rects)
        out << format_double(r.x) << "," << format_double(r.y) << "," << format_double(r.width)
            << "," << format_double(r.height) << "\n";
    finish_csv(out, path);
}

} // namespace carpets
