#pragma once

#include "carpets/carpet.hpp"
#include "carpets/errors.hpp"

namespace carpets {

/// ceil(x) with a relative snap guard: values within 1e-9 of an integer are
/// treated as that integer. This is how all index windows derived from real
/// parameters (eps*k, (delta-1)*k, gamma*k) are rounded.
long ceil_index(double x);

/// ceil(eps*k) clamped to >= 1: the first window length of the exceedance
/// event. Shared by the observables and the dynamic program so the two
/// windows agree exactly.
long eps_window_start(long k, double eps);

/// ceil(delta*k), computed as k + snap-ceil((delta-1)*k) so that the window
/// used by the single-scale observable and the CLT normalizer match.
long delta_window_end(long k, double delta);

/// When m = g^a and n = g^b for some integer g >= 2 (minimal such g),
/// reports the relation. Used for exact cross-base scale index arithmetic.
bool common_power_base(int m, int n, int& g, int& a, int& b);

/// A scale in (0,1), either a plain real or an exact power base^-exponent.
/// Exact powers keep their (base, exponent) form so that very deep scales
/// do not underflow and index computations near grid boundaries are exact.
class Scale {
public:
    static Scale real(double r);               // requires 0 < r < 1
    static Scale power(int base, int exponent); // base^-exponent, base >= 2, exponent >= 1

    /// Numeric value; may underflow to 0 for very deep exact powers.
    double value() const noexcept { return value_; }
    /// Natural log of the value, computed without underflow for powers.
    double log_value() const noexcept { return log_; }

    bool is_power() const noexcept { return base_ != 0; }
    int base() const noexcept { return base_; }
    int exponent() const noexcept { return exp_; }

private:
    double value_ = 0;
    double log_ = 0;
    int base_ = 0; // 0 = plain real
    int exp_ = 0;
};

/// Strict comparison of scale values; exact for powers of related bases.
bool scale_less(const Scale& a, const Scale& b);

/// Depths l1 (base m) and l2 (base n) with m^-l1 <= r < m^-l1+1 and
/// n^-l2 <= r < n^-l2+1. Since m < n, l1 >= l2 >= 1.
struct ScaleIndices {
    long l1 = 0;
    long l2 = 0;
};

ScaleIndices scale_indices(const Carpet& c, const Scale& r);
inline ScaleIndices scale_indices(const Carpet& c, double r) {
    return scale_indices(c, Scale::real(r));
}

} // namespace carpets
