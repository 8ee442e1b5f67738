#include "carpets/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace carpets {

Code Code::constant(const Digit& d, std::size_t length) {
    return Code(std::vector<Digit>(length, d));
}

const Digit& Code::letter(std::size_t l) const {
    if (l < 1 || l > word_.size())
        raise(errc::bad_range, "letter index " + std::to_string(l) + " outside 1.." +
                                   std::to_string(word_.size()));
    return word_[l - 1];
}

void require_code_of(const Code& d, const Carpet& c) {
    for (std::size_t l = 0; l < d.length(); ++l)
        if (!c.contains(d.word()[l]))
            raise(errc::bad_digits, "code letter " + std::to_string(l + 1) + " = " +
                                        to_string(d.word()[l]) + " is not a digit of the carpet");
}

namespace {

void require_length(const Code& d, std::size_t needed, const char* what) {
    if (d.length() < needed)
        raise(errc::code_too_short, std::string(what) + " needs code length >= " +
                                        std::to_string(needed) + ", have " +
                                        std::to_string(d.length()));
}

void require_window(std::size_t s, std::size_t t, std::size_t len) {
    if (s < 1 || s > t || t > len)
        raise(errc::bad_range, "window [" + std::to_string(s) + "," + std::to_string(t) +
                                   "] invalid for code of length " + std::to_string(len));
}

// sum of log C_{i_l} over l in [s,t] (1-based); 0 for an empty range (s > t)
double log_count_sum(const Code& d, const Carpet& c, std::size_t s, std::size_t t) {
    double sum = 0;
    for (std::size_t l = s; l <= t && t >= s; ++l)
        sum += std::log(static_cast<double>(c.column_counts()[d.word()[l - 1].i]));
    return sum;
}

void require_scale_pair(const Scale& r, const Scale& R) {
    if (!scale_less(r, R))
        raise(errc::bad_scales, "need r < R");
}

} // namespace

double column_proportion(const Code& d, int column, std::size_t s, std::size_t t) {
    require_window(s, t, d.length());
    std::size_t hits = 0;
    for (std::size_t l = s; l <= t; ++l)
        if (d.word()[l - 1].i == column)
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(t - s + 1);
}

double fibre_geo_mean(const Code& d, const Carpet& c, std::size_t s, std::size_t t) {
    if (s > t)
        return 1.0; // empty window
    require_window(s, t, d.length());
    require_code_of(d, c);
    return std::exp(log_count_sum(d, c, s, t) / static_cast<double>(t - s + 1));
}

double geo_mean_at(const Code& d, const Carpet& c, const Scale& R) {
    const ScaleIndices idx = scale_indices(c, R);
    if (idx.l2 + 1 > idx.l1)
        raise(errc::bad_range, "empty window: l2(R)+1 > l1(R) at this scale");
    require_length(d, static_cast<std::size_t>(idx.l1), "geo_mean_at");
    return fibre_geo_mean(d, c, idx.l2 + 1, idx.l1);
}

double geo_mean_between(const Code& d, const Carpet& c, const Scale& r, const Scale& R) {
    require_scale_pair(r, R);
    const ScaleIndices iR = scale_indices(c, R);
    const ScaleIndices ir = scale_indices(c, r);
    if (ir.l2 < iR.l2 + 1)
        raise(errc::bad_range, "empty window: l2(r) < l2(R)+1");
    require_length(d, static_cast<std::size_t>(ir.l2), "geo_mean_between");
    return fibre_geo_mean(d, c, iR.l2 + 1, ir.l2);
}

namespace {

struct CoverPlan {
    ScaleIndices iR;
    ScaleIndices ir;
    bool regime1 = false; // l2(r) >= l1(R)
};

CoverPlan covering_plan(const Code& d, const Carpet& c, const Scale& R, const Scale& r) {
    require_scale_pair(r, R);
    CoverPlan plan;
    plan.iR = scale_indices(c, R);
    plan.ir = scale_indices(c, r);
    plan.regime1 = plan.ir.l2 >= plan.iR.l1;
    require_length(d, static_cast<std::size_t>(plan.ir.l1), "covering count");
    require_code_of(d, c);
    return plan;
}

} // namespace

std::uint64_t covering_count(const Code& d, const Carpet& c, const Scale& R, const Scale& r) {
    const CoverPlan plan = covering_plan(d, c, R, r);
    const auto& counts = c.column_counts();
    unsigned __int128 total = 1;
    const unsigned __int128 cap = std::numeric_limits<std::uint64_t>::max();
    auto mul = [&](std::uint64_t f) {
        total *= f;
        if (total > cap)
            raise(errc::too_deep, "covering count exceeds 64-bit range");
    };
    if (plan.regime1) {
        for (long l = plan.iR.l2 + 1; l <= plan.iR.l1; ++l)
            mul(static_cast<std::uint64_t>(counts[d.word()[l - 1].i]));
        for (long e = 0; e < plan.ir.l2 - plan.iR.l1; ++e)
            mul(static_cast<std::uint64_t>(c.digit_count()));
        for (long e = 0; e < plan.ir.l1 - plan.ir.l2; ++e)
            mul(static_cast<std::uint64_t>(c.occupied_count()));
    } else {
        for (long l = plan.iR.l2 + 1; l <= plan.ir.l2; ++l)
            mul(static_cast<std::uint64_t>(counts[d.word()[l - 1].i]));
        for (long e = 0; e < plan.ir.l1 - plan.iR.l1; ++e)
            mul(static_cast<std::uint64_t>(c.occupied_count()));
    }
    return static_cast<std::uint64_t>(total);
}

double covering_count_log(const Code& d, const Carpet& c, const Scale& R, const Scale& r) {
    const CoverPlan plan = covering_plan(d, c, R, r);
    double sum = 0;
    if (plan.regime1) {
        sum += log_count_sum(d, c, plan.iR.l2 + 1, plan.iR.l1);
        sum += static_cast<double>(plan.ir.l2 - plan.iR.l1) * std::log(double(c.digit_count()));
        sum += static_cast<double>(plan.ir.l1 - plan.ir.l2) * std::log(double(c.occupied_count()));
    } else {
        sum += log_count_sum(d, c, plan.iR.l2 + 1, plan.ir.l2);
        sum += static_cast<double>(plan.ir.l1 - plan.iR.l1) * std::log(double(c.occupied_count()));
    }
    return sum;
}

std::uint64_t mesh_covering_count(const Code& d, const Carpet& c, const Scale& R, const Scale& r,
                                  const MeshLimits& limits) {
    const CoverPlan plan = covering_plan(d, c, R, r);
    if (plan.ir.l1 > limits.max_depth)
        raise(errc::too_deep, "mesh count: l1(r) = " + std::to_string(plan.ir.l1) +
                                  " exceeds depth cap " + std::to_string(limits.max_depth));

    // rectangles of depth l1(r) inside the approximate square of d at R:
    // letters 1..l2(R) fixed, columns fixed up to l1(R), free digits beyond
    const long depth = plan.ir.l1;
    unsigned __int128 rect_count = 1;
    for (long l = plan.iR.l2 + 1; l <= plan.iR.l1; ++l)
        rect_count *= static_cast<unsigned>(c.column_counts()[d.word()[l - 1].i]);
    for (long l = plan.iR.l1 + 1; l <= depth; ++l)
        rect_count *= static_cast<unsigned>(c.digit_count());
    if (rect_count > limits.max_rects)
        raise(errc::too_deep, "mesh count: rectangle enumeration exceeds cap " +
                                  std::to_string(limits.max_rects));

    // choice set per level
    std::vector<std::vector<Digit>> choices(static_cast<std::size_t>(depth));
    for (long l = 1; l <= depth; ++l) {
        if (l <= plan.iR.l2) {
            choices[l - 1] = {d.word()[l - 1]};
        } else if (l <= plan.iR.l1) {
            for (const Digit& g : c.digits())
                if (g.i == d.word()[l - 1].i)
                    choices[l - 1].push_back(g);
        } else {
            choices[l - 1] = c.digits();
        }
    }

    const long double rv =
        r.is_power()
            ? std::pow(static_cast<long double>(r.base()), -static_cast<long double>(r.exponent()))
            : static_cast<long double>(r.value());
    const long double rw = std::pow(static_cast<long double>(c.m()), -static_cast<long double>(depth));
    const long double rh = std::pow(static_cast<long double>(c.n()), -static_cast<long double>(depth));
    // cells must overlap a rectangle in positive area; with exact-power
    // scales the cylinder edges sit exactly on the mesh, and counting
    // measure-zero touchings would inflate the count by a factor per axis.
    // The guard is far above the float noise of the cell products and far
    // below the coordinate granularity m^-depth, n^-depth at the depth cap.
    const long double tol = 1e-9L * rv;

    std::vector<unsigned __int128> cells;
    cells.reserve(static_cast<std::size_t>(rect_count) * 4);

    std::vector<std::size_t> pick(static_cast<std::size_t>(depth), 0);
    for (;;) {
        long double x = 0, y = 0, sx = 1, sy = 1;
        for (long l = 0; l < depth; ++l) {
            const Digit& g = choices[l][pick[l]];
            sx /= c.m();
            sy /= c.n();
            x += g.i * sx;
            y += g.j * sy;
        }
        const long long a_lo = static_cast<long long>(std::floor(x / rv)) - 1;
        const long long a_hi = static_cast<long long>(std::floor((x + rw) / rv)) + 1;
        const long long b_lo = static_cast<long long>(std::floor(y / rv)) - 1;
        const long long b_hi = static_cast<long long>(std::floor((y + rh) / rv)) + 1;
        for (long long a = a_lo; a <= a_hi; ++a) {
            if (a < 0 || !(a * rv < x + rw - tol) || !((a + 1) * rv > x + tol))
                continue;
            for (long long b = b_lo; b <= b_hi; ++b) {
                if (b < 0 || !(b * rv < y + rh - tol) || !((b + 1) * rv > y + tol))
                    continue;
                cells.push_back((static_cast<unsigned __int128>(a) << 64) |
                                static_cast<std::uint64_t>(b));
            }
        }
        long l = depth - 1;
        while (l >= 0 && ++pick[l] == choices[l].size()) {
            pick[l] = 0;
            --l;
        }
        if (l < 0)
            break;
    }

    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells.size();
}

namespace {

struct PointTrace {
    Code code;
    long double x; // local coordinates in [0,1]^2
    long double y;
};

// candidate cell indices along one axis for a local coordinate, allowing
// both neighbours when the point sits on a shared boundary
void axis_candidates(long double t, int base, int out[2], int& count) {
    constexpr long double tol = 1e-12L;
    count = 0;
    const long long low = static_cast<long long>(std::floor(t + tol)) - 1;
    for (long long cand = low; cand <= low + 2; ++cand) {
        if (cand < 0 || cand >= base)
            continue;
        if (static_cast<long double>(cand) <= t + tol &&
            t - tol <= static_cast<long double>(cand + 1)) {
            if (count < 2)
                out[count] = static_cast<int>(cand);
            ++count;
        }
    }
    count = std::min(count, 2);
}

} // namespace

std::vector<Code> codes_of_point(const Carpet& c, double x, double y, std::size_t length) {
    if (x < 0 || x > 1 || y < 0 || y > 1)
        raise(errc::not_in_set, "point outside the unit square");
    std::vector<PointTrace> alive;
    alive.push_back(PointTrace{Code{}, static_cast<long double>(x), static_cast<long double>(y)});
    for (std::size_t depth = 0; depth < length; ++depth) {
        std::vector<PointTrace> next;
        for (const PointTrace& tr : alive) {
            int is[2], js[2];
            int ni = 0, nj = 0;
            axis_candidates(tr.x * c.m(), c.m(), is, ni);
            axis_candidates(tr.y * c.n(), c.n(), js, nj);
            // digit order (i, then j) keeps the expansion lexicographic
            for (int a = 0; a < ni; ++a) {
                for (int b = 0; b < nj; ++b) {
                    const Digit g{is[a], js[b]};
                    if (!c.contains(g))
                        continue;
                    PointTrace child             = tr;
                    child.x = std::clamp(tr.x * c.m() - g.i, 0.0L, 1.0L);
                    child.y = std::clamp(tr.y * c.n() - g.j, 0.0L, 1.0L);
                    child.code.append(g);
                    next.push_back(std::move(child));
                }
            }
        }
        if (next.empty())
            raise(errc::not_in_set, "point leaves the depth-" + std::to_string(depth + 1) +
                                        " approximation");
        if (next.size() > 4)
            raise(errc::internal, "more than 4 codes alive for one point");
        alive = std::move(next);
    }
    std::vector<Code> out;
    out.reserve(alive.size());
    for (PointTrace& tr : alive)
        out.push_back(std::move(tr.code));
    std::sort(out.begin(), out.end(),
              [](const Code& a, const Code& b) { return a.word() < b.word(); });
    return out;
}

Code code_of_point(const Carpet& c, double x, double y, std::size_t length) {
    return codes_of_point(c, x, y, length).front();
}

} // namespace carpets
