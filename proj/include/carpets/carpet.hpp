#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "carpets/errors.hpp"

namespace carpets {

/// One cell of the m x n grid: column i in [0,m), row j in [0,n).
struct Digit {
    int i = 0;
    int j = 0;

    friend bool operator==(const Digit&, const Digit&) = default;
    friend auto operator<=>(const Digit&, const Digit&) = default;
};

std::string to_string(const Digit& d);

/// Axis-aligned rectangle in [0,1]^2.
struct Rect {
    double x = 0;
    double y = 0;
    double width = 0;
    double height = 0;
};

/// A grid-invariant carpet: an m x n grid (2 <= m < n) with a chosen set of
/// at least two cells. Immutable after construction; column statistics and
/// the closed-form dimensions are precomputed.
class Carpet {
public:
    static Carpet create(int m, int n, std::vector<Digit> digits);

    int m() const noexcept { return m_; }
    int n() const noexcept { return n_; }

    /// Chosen cells, sorted by (i, j).
    const std::vector<Digit>& digits() const noexcept { return digits_; }
    int digit_count() const noexcept { return static_cast<int>(digits_.size()); }
    bool contains(const Digit& d) const noexcept;
    /// Index of d in digits(), or -1.
    int digit_index(const Digit& d) const noexcept;

    /// Cells per column, for all i in [0,m); zero means the column is empty.
    const std::vector<int>& column_counts() const noexcept { return counts_; }
    int column_count(int i) const;
    /// Columns with at least one cell, ascending.
    const std::vector<int>& occupied_columns() const noexcept { return occupied_; }
    int occupied_count() const noexcept { return static_cast<int>(occupied_.size()); }
    int max_column_count() const noexcept { return cmax_; }
    bool uniform_fibres() const noexcept { return uniform_; }

    /// log n / log m, always > 1.
    double gamma() const noexcept { return gamma_; }
    double assouad_dim() const noexcept { return assouad_; }
    double box_dim() const noexcept { return box_; }
    double hausdorff_dim() const noexcept { return hausdorff_; }

    /// Smallest integer >= gamma * k, exact when m and n are powers of a
    /// common integer base, else computed with a guarded float ceil.
    long gamma_ceil(long k) const;

    /// When m = g^a and n = g^b for an integer g >= 2, reports (g, a, b).
    bool common_base(int& g, int& a, int& b) const noexcept;

    /// The |digits|^k rectangles of the depth-k grid approximation, each of
    /// size m^-k x n^-k. k = 0 yields the unit square.
    std::vector<Rect> render_depth(int k, std::uint64_t cap = 1000000) const;

private:
    Carpet() = default;

    int m_ = 0;
    int n_ = 0;
    std::vector<Digit> digits_;
    std::vector<int> counts_;
    std::vector<int> occupied_;
    int cmax_ = 0;
    bool uniform_ = false;
    double gamma_ = 0;
    double assouad_ = 0;
    double box_ = 0;
    double hausdorff_ = 0;
    int cb_g_ = 0, cb_a_ = 0, cb_b_ = 0; // common power base, 0 = none
};

} // namespace carpets
