#pragma once

#include <cstdint>
#include <vector>

#include "carpets/carpet.hpp"
#include "carpets/scale.hpp"

namespace carpets {

/// A finite symbolic word over the digit set, letters indexed from 1 as in
/// all window conventions. Codes do not own a carpet; operations that need
/// column counts take the carpet explicitly and validate letters against it.
class Code {
public:
    Code() = default;
    explicit Code(std::vector<Digit> word) : word_(std::move(word)) {}

    static Code constant(const Digit& d, std::size_t length);

    std::size_t length() const noexcept { return word_.size(); }
    bool empty() const noexcept { return word_.empty(); }

    /// 1-based letter access.
    const Digit& letter(std::size_t l) const;
    int column(std::size_t l) const { return letter(l).i; }
    int row(std::size_t l) const { return letter(l).j; }

    const std::vector<Digit>& word() const noexcept { return word_; }
    void append(const Digit& d) { word_.push_back(d); }

    friend bool operator==(const Code&, const Code&) = default;

private:
    std::vector<Digit> word_;
};

/// Throws unless every letter of d is a digit of c.
void require_code_of(const Code& d, const Carpet& c);

/// Fraction of positions l in [s,t] (1-based, inclusive) whose column is i.
double column_proportion(const Code& d, int column, std::size_t s, std::size_t t);

/// Geometric average of C_{i_l} over l in [s,t]; 1 when the range is empty.
/// Used internally by the observables; the public window operations below
/// fix the ranges from scales.
double fibre_geo_mean(const Code& d, const Carpet& c, std::size_t s, std::size_t t);

/// Geometric average of the column counts along d over the window
/// l2(R)+1 .. l1(R) determined by the reference scale alone.
double geo_mean_at(const Code& d, const Carpet& c, const Scale& R);

/// Same over l2(R)+1 .. l2(r); requires l2(r) >= l2(R)+1.
double geo_mean_between(const Code& d, const Carpet& c, const Scale& r, const Scale& R);

/// Exact number of distinct symbolic rectangles (pairs of a length-l1(r)
/// column word and a length-l2(r) row word) refining the approximate square
/// of d at scale R down to scale r. Overflow beyond 64 bits throws too_deep.
std::uint64_t covering_count(const Code& d, const Carpet& c, const Scale& R, const Scale& r);

/// log of the same count, usable at depths where the integer overflows.
double covering_count_log(const Code& d, const Carpet& c, const Scale& R, const Scale& r);

struct MeshLimits {
    long max_depth = 14;              // cap on l1(r)
    std::uint64_t max_rects = 4000000; // cap on enumerated rectangles
};

/// Geometric covering oracle: renders every depth-l1(r) rectangle inside the
/// approximate square of d at scale R and counts the r-mesh squares (grid of
/// side r anchored at the origin) overlapping their union in positive area.
/// Measure-zero edge touchings do not count; exact-power scales align the
/// cylinder edges with the mesh and would otherwise inflate every count.
std::uint64_t mesh_covering_count(const Code& d, const Carpet& c, const Scale& R,
                                  const Scale& r, const MeshLimits& limits = {});

/// Lexicographically minimal code of length `length` whose depth-l cylinder
/// rectangles all contain (x, y). Throws not_in_set when no cylinder does.
Code code_of_point(const Carpet& c, double x, double y, std::size_t length);

/// All codes of (x, y) up to `length`, lexicographically sorted; a point
/// lies on at most 4 cylinder boundaries so at most 4 codes are returned.
std::vector<Code> codes_of_point(const Carpet& c, double x, double y, std::size_t length);

} // namespace carpets
