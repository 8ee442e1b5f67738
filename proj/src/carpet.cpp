#include "carpets/carpet.hpp"

#include <algorithm>
#include <cmath>

#include "carpets/scale.hpp"

namespace carpets {

std::string to_string(const Digit& d) {
    return "(" + std::to_string(d.i) + "," + std::to_string(d.j) + ")";
}

Carpet Carpet::create(int m, int n, std::vector<Digit> digits) {
    if (m < 2)
        raise(errc::bad_grid, "m must be at least 2, got " + std::to_string(m));
    if (n <= m)
        raise(errc::bad_grid,
              "n must exceed m, got m=" + std::to_string(m) + " n=" + std::to_string(n));
    if (digits.size() < 2)
        raise(errc::bad_digits, "at least 2 digits required, got " + std::to_string(digits.size()));

    std::sort(digits.begin(), digits.end());
    for (std::size_t k = 0; k < digits.size(); ++k) {
        const Digit& d = digits[k];
        if (d.i < 0 || d.i >= m || d.j < 0 || d.j >= n)
            raise(errc::bad_digits, "digit " + to_string(d) + " outside the " + std::to_string(m) +
                                        "x" + std::to_string(n) + " grid");
        if (k > 0 && digits[k - 1] == d)
            raise(errc::bad_digits, "duplicate digit " + to_string(d));
    }

    Carpet c;
    c.m_ = m;
    c.n_ = n;
    c.digits_ = std::move(digits);
    c.counts_.assign(m, 0);
    for (const Digit& d : c.digits_)
        ++c.counts_[d.i];
    for (int i = 0; i < m; ++i)
        if (c.counts_[i] > 0)
            c.occupied_.push_back(i);
    c.cmax_ = *std::max_element(c.counts_.begin(), c.counts_.end());
    c.uniform_ = std::all_of(c.occupied_.begin(), c.occupied_.end(),
                             [&](int i) { return c.counts_[i] == c.cmax_; });

    const double logm = std::log(static_cast<double>(m));
    const double logn = std::log(static_cast<double>(n));
    const double logpi = std::log(static_cast<double>(c.occupied_.size()));
    c.gamma_ = logn / logm;
    c.assouad_ = logpi / logm + std::log(static_cast<double>(c.cmax_)) / logn;
    c.box_ = logpi / logm +
             std::log(static_cast<double>(c.digits_.size()) / c.occupied_.size()) / logn;

    // s = log_m( sum_i C_i^(log m / log n) ) over occupied columns
    double sum = 0;
    for (int i : c.occupied_)
        sum += std::pow(static_cast<double>(c.counts_[i]), logm / logn);
    c.hausdorff_ = std::log(sum) / logm;

    common_power_base(m, n, c.cb_g_, c.cb_a_, c.cb_b_);
    return c;
}

bool Carpet::contains(const Digit& d) const noexcept {
    return std::binary_search(digits_.begin(), digits_.end(), d);
}

int Carpet::digit_index(const Digit& d) const noexcept {
    auto it = std::lower_bound(digits_.begin(), digits_.end(), d);
    if (it == digits_.end() || !(*it == d))
        return -1;
    return static_cast<int>(it - digits_.begin());
}

int Carpet::column_count(int i) const {
    if (i < 0 || i >= m_)
        raise(errc::bad_range, "column " + std::to_string(i) + " outside [0," +
                                   std::to_string(m_) + ")");
    return counts_[i];
}

long Carpet::gamma_ceil(long k) const {
    if (k < 0)
        raise(errc::bad_range, "gamma_ceil requires k >= 0");
    if (cb_g_ != 0) {
        // gamma = b/a exactly
        const long num = static_cast<long>(cb_b_) * k;
        return (num + cb_a_ - 1) / cb_a_;
    }
    return ceil_index(gamma_ * static_cast<double>(k));
}

bool Carpet::common_base(int& g, int& a, int& b) const noexcept {
    if (cb_g_ == 0)
        return false;
    g = cb_g_;
    a = cb_a_;
    b = cb_b_;
    return true;
}

std::vector<Rect> Carpet::render_depth(int k, std::uint64_t cap) const {
    if (k < 0)
        raise(errc::bad_range, "depth must be non-negative");
    if (k == 0)
        return {Rect{0, 0, 1, 1}};

    std::uint64_t total = 1;
    for (int l = 0; l < k; ++l) {
        if (total > cap / digits_.size())
            raise(errc::too_deep, "render_depth: " + std::to_string(digits_.size()) + "^" +
                                      std::to_string(k) + " rectangles exceed cap " +
                                      std::to_string(cap));
        total *= digits_.size();
    }

    const double w = std::pow(static_cast<double>(m_), -k);
    const double h = std::pow(static_cast<double>(n_), -k);
    std::vector<Rect> out;
    out.reserve(total);
    std::vector<std::size_t> idx(k, 0);
    for (;;) {
        double x = 0, y = 0, sx = 1, sy = 1;
        for (int l = 0; l < k; ++l) {
            sx /= m_;
            sy /= n_;
            x += digits_[idx[l]].i * sx;
            y += digits_[idx[l]].j * sy;
        }
        out.push_back(Rect{x, y, w, h});
        int l = k - 1;
        while (l >= 0 && ++idx[l] == digits_.size()) {
            idx[l] = 0;
            --l;
        }
        if (l < 0)
            break;
    }
    return out;
}

} // namespace carpets
