#include "carpets/observables.hpp"

#include <cmath>

namespace carpets {

namespace {

double log_base_dim(const Carpet& c) {
    return std::log(static_cast<double>(c.occupied_count())) /
           std::log(static_cast<double>(c.m()));
}

void require_scales(const Scale& r, const Scale& R) {
    if (!scale_less(r, R))
        raise(errc::bad_scales, "need r < R");
}

double window_log_mean(const Code& d, const Carpet& c, long s, long t) {
    if (s > t)
        return 0.0; // empty window, geometric mean 1
    if (d.length() < static_cast<std::size_t>(t))
        raise(errc::code_too_short, "profile needs code length >= " + std::to_string(t) +
                                        ", have " + std::to_string(d.length()));
    double sum = 0;
    for (long l = s; l <= t; ++l) {
        const Digit& g = d.word()[l - 1];
        if (!c.contains(g))
            raise(errc::bad_digits, "code letter " + std::to_string(l) + " = " + to_string(g) +
                                        " is not a digit of the carpet");
        sum += std::log(static_cast<double>(c.column_counts()[g.i]));
    }
    return sum / static_cast<double>(t - s + 1);
}

} // namespace

double profile_fine(const Code& d, const Carpet& c, const Scale& R, const Scale& r) {
    require_scales(r, R);
    const ScaleIndices iR = scale_indices(c, R);
    const double logm = std::log(static_cast<double>(c.m()));
    const double logn = std::log(static_cast<double>(c.n()));
    const double log_cR = window_log_mean(d, c, iR.l2 + 1, iR.l1);
    const double coarse_exponent =
        (std::log(static_cast<double>(c.digit_count())) - log_cR) / logm + log_cR / logn;
    const double logR = R.log_value();
    const double logr = r.log_value();
    return (coarse_exponent * logR - c.box_dim() * logr) / (logR - logr);
}

double profile_coarse(const Code& d, const Carpet& c, const Scale& R, const Scale& r) {
    require_scales(r, R);
    const ScaleIndices iR = scale_indices(c, R);
    const ScaleIndices ir = scale_indices(c, r);
    const double logn = std::log(static_cast<double>(c.n()));
    return log_base_dim(c) + window_log_mean(d, c, iR.l2 + 1, ir.l2) / logn;
}

ProfilePoint dimension_profile(const Code& d, const Carpet& c, const Scale& R, const Scale& r) {
    require_scales(r, R);
    const ScaleIndices iR = scale_indices(c, R);
    const ScaleIndices ir = scale_indices(c, r);
    if (ir.l2 >= iR.l1)
        return ProfilePoint{profile_fine(d, c, R, r), 1};
    return ProfilePoint{profile_coarse(d, c, R, r), 2};
}

namespace {

void require_eps(const Carpet& c, double eps) {
    if (!(eps > 0.0) || !(eps < c.gamma() - 1.0))
        raise(errc::bad_epsilon, "eps must lie in (0, gamma-1) = (0, " +
                                     std::to_string(c.gamma() - 1.0) + "), got " +
                                     std::to_string(eps));
}

} // namespace

double profile_sup(const Code& d, const Carpet& c, long k, double eps) {
    if (k < 1)
        raise(errc::bad_range, "k must be >= 1");
    require_eps(c, eps);
    const long L_lo = k + eps_window_start(k, eps);
    const long L_hi = c.gamma_ceil(k);
    if (d.length() < static_cast<std::size_t>(L_hi))
        raise(errc::code_too_short, "profile_sup needs code length >= " + std::to_string(L_hi) +
                                        ", have " + std::to_string(d.length()));
    const double logn = std::log(static_cast<double>(c.n()));
    double run = 0;
    for (long l = k + 1; l < L_lo; ++l) {
        const Digit& g = d.word()[l - 1];
        if (!c.contains(g))
            raise(errc::bad_digits, "code letter not in the carpet");
        run += std::log(static_cast<double>(c.column_counts()[g.i]));
    }
    double best = -1.0;
    for (long L = L_lo; L <= L_hi; ++L) {
        const Digit& g = d.word()[L - 1];
        if (!c.contains(g))
            raise(errc::bad_digits, "code letter not in the carpet");
        run += std::log(static_cast<double>(c.column_counts()[g.i]));
        best = std::max(best, run / static_cast<double>(L - k));
    }
    return std::max(c.box_dim(), log_base_dim(c) + best / logn);
}

double window_mean_dim(const Code& d, const Carpet& c, long k, double delta) {
    if (k < 1)
        raise(errc::bad_range, "k must be >= 1");
    if (!(delta > 1.0) || !(delta < c.gamma()))
        raise(errc::bad_delta, "delta must lie in (1, gamma) = (1, " +
                                   std::to_string(c.gamma()) + "), got " + std::to_string(delta));
    const long T = delta_window_end(k, delta);
    const double logn = std::log(static_cast<double>(c.n()));
    return log_base_dim(c) + window_log_mean(d, c, k, T) / logn;
}

double covering_profile_sup(const Code& d, const Carpet& c, long k, double eps, long j_cap) {
    if (k < 1)
        raise(errc::bad_range, "k must be >= 1");
    require_eps(c, eps);
    const long j_lo = k + eps_window_start(k, eps);
    if (j_cap < j_lo)
        raise(errc::bad_range, "j_cap " + std::to_string(j_cap) + " below the window start " +
                                   std::to_string(j_lo));
    const Scale R = Scale::power(c.n(), static_cast<int>(k));
    const double logn = std::log(static_cast<double>(c.n()));
    double best = -1.0;
    for (long j = j_lo; j <= j_cap; ++j) {
        const Scale r = Scale::power(c.n(), static_cast<int>(j));
        const double v = covering_count_log(d, c, R, r) / (static_cast<double>(j - k) * logn);
        best = std::max(best, v);
    }
    return best;
}

double point_covering_sup(const Carpet& c, double x, double y, long k, double eps, long j_cap) {
    const ScaleIndices deepest = scale_indices(c, Scale::power(c.n(), static_cast<int>(j_cap)));
    const std::vector<Code> codes =
        codes_of_point(c, x, y, static_cast<std::size_t>(deepest.l1));
    double best = -1.0;
    for (const Code& d : codes)
        best = std::max(best, covering_profile_sup(d, c, k, eps, j_cap));
    return best;
}

} // namespace carpets
