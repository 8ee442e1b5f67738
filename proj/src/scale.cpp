#include "carpets/scale.hpp"

#include <cmath>

namespace carpets {

long ceil_index(double x) {
    const double r = std::nearbyint(x);
    if (std::fabs(x - r) <= 1e-9 * std::max(1.0, std::fabs(x)))
        return static_cast<long>(r);
    return static_cast<long>(std::ceil(x));
}

long eps_window_start(long k, double eps) {
    return std::max(1l, ceil_index(eps * static_cast<double>(k)));
}

long delta_window_end(long k, double delta) {
    return k + ceil_index((delta - 1.0) * static_cast<double>(k));
}

bool common_power_base(int m, int n, int& g, int& a, int& b) {
    auto power_of = [](int value, int base, int& exp) {
        exp = 0;
        long long v = value;
        while (v > 1) {
            if (v % base != 0)
                return false;
            v /= base;
            ++exp;
        }
        return true;
    };
    for (int cand = 2; cand <= m; ++cand) {
        int ea = 0, eb = 0;
        if (power_of(m, cand, ea) && power_of(n, cand, eb)) {
            g = cand;
            a = ea;
            b = eb;
            return true;
        }
    }
    g = a = b = 0;
    return false;
}

Scale Scale::real(double r) {
    if (!(r > 0.0) || !(r < 1.0) || !std::isfinite(r))
        raise(errc::bad_scale, "scale must lie in (0,1), got " + std::to_string(r));
    Scale s;
    s.value_ = r;
    s.log_ = std::log(r);
    return s;
}

Scale Scale::power(int base, int exponent) {
    if (base < 2)
        raise(errc::bad_scale, "power scale base must be >= 2");
    if (exponent < 1)
        raise(errc::bad_scale, "power scale exponent must be >= 1");
    Scale s;
    s.base_ = base;
    s.exp_ = exponent;
    s.log_ = -static_cast<double>(exponent) * std::log(static_cast<double>(base));
    s.value_ = std::exp(s.log_); // may underflow to 0; log_ stays valid
    return s;
}

bool scale_less(const Scale& a, const Scale& b) {
    if (a.is_power() && b.is_power()) {
        if (a.base() == b.base())
            return a.exponent() > b.exponent();
        int g = 0, pa = 0, pb = 0;
        const int lo = std::min(a.base(), b.base());
        const int hi = std::max(a.base(), b.base());
        if (common_power_base(lo, hi, g, pa, pb)) {
            const long ea = static_cast<long>(a.exponent()) * (a.base() == lo ? pa : pb);
            const long eb = static_cast<long>(b.exponent()) * (b.base() == lo ? pa : pb);
            return ea > eb;
        }
    }
    return a.log_value() < b.log_value();
}

namespace {

// smallest l with base^-l <= r, i.e. l = ceil(-log r / log base), where
// exact-power scales are resolved by integer arithmetic when possible
long depth_for_base(const Scale& r, int base) {
    if (r.is_power()) {
        if (r.base() == base)
            return r.exponent();
        int g = 0, pr = 0, pb = 0;
        const int lo = std::min(r.base(), base);
        const int hi = std::max(r.base(), base);
        if (common_power_base(lo, hi, g, pr, pb)) {
            const int er = (r.base() == lo) ? pr : pb;
            const int eb = (base == lo) ? pr : pb;
            // l * eb >= exponent * er, exact integer ceil
            const long num = static_cast<long>(r.exponent()) * er;
            return (num + eb - 1) / eb;
        }
        // multiplicatively independent bases: the ratio is never an integer
        const long double x = static_cast<long double>(r.exponent()) *
                              std::log(static_cast<long double>(r.base())) /
                              std::log(static_cast<long double>(base));
        return static_cast<long>(std::ceil(x));
    }
    const long double x = -std::log(static_cast<long double>(r.value())) /
                          std::log(static_cast<long double>(base));
    const long l = ceil_index(static_cast<double>(x));
    return std::max(1l, l);
}

} // namespace

ScaleIndices scale_indices(const Carpet& c, const Scale& r) {
    ScaleIndices idx;
    idx.l1 = depth_for_base(r, c.m());
    idx.l2 = depth_for_base(r, c.n());
    return idx;
}

} // namespace carpets
