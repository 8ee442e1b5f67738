#pragma once

#include "carpets/symbolic.hpp"

namespace carpets {

/// Value of the local dimension profile at one (R, r) pair, together with
/// the active branch: 1 below the critical scale (l2(r) >= l1(R)), 2 above.
struct ProfilePoint {
    double value = 0;
    int branch = 0;
};

/// Fine-scale branch of the profile (valid for r below the critical scale
/// R^gamma): the R- and r-weighted combination that tends to the box
/// dimension as r -> 0.
double profile_fine(const Code& d, const Carpet& c, const Scale& R, const Scale& r);

/// Coarse-scale branch (critical scale <= r < R):
/// log|piD|/log m + log geoMean(r,R)/log n.
double profile_coarse(const Code& d, const Carpet& c, const Scale& R, const Scale& r);

/// Piecewise profile; branch selection by the integer comparison
/// l2(r) >= l1(R), so boundary cases never depend on float rounding.
ProfilePoint dimension_profile(const Code& d, const Carpet& c, const Scale& R, const Scale& r);

/// Sup of the profile over fine scales r <= n^-(1+eps)k at reference scale
/// R = n^-k, in closed form: the max of the box dimension and the best
/// window average of log C over windows k+1..L, L in [k+ceil(eps k), ceil(gamma k)].
/// Requires 0 < eps < gamma - 1 and code length >= ceil(gamma k).
double profile_sup(const Code& d, const Carpet& c, long k, double eps);

/// Single-window observable at delta = 1 + eps: log|piD|/log m plus the
/// average of log C over letters k .. ceil(delta k), divided by log n.
double window_mean_dim(const Code& d, const Carpet& c, long k, double delta);

/// Same sup as profile_sup but evaluated from actual covering counts on the
/// grid r = n^-j, j in [k + ceil(eps k), j_cap]. Requires code length >=
/// l1(n^-j_cap).
double covering_profile_sup(const Code& d, const Carpet& c, long k, double eps, long j_cap);

/// Point-based wrapper: max of covering_profile_sup over the (at most 4)
/// codes of (x, y).
double point_covering_sup(const Carpet& c, double x, double y, long k, double eps, long j_cap);

} // namespace carpets
