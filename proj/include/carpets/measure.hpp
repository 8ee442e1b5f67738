#pragma once

#include <utility>
#include <vector>

#include "carpets/carpet.hpp"

namespace carpets {

/// Mean and variance of log C_i under the projected column weights.
struct FibreMoments {
    double mean = 0;     // c = sum_i p_i log C_i
    double variance = 0; // sum_i p_i (log C_i - c)^2
};

/// A strictly positive Bernoulli measure on the digit set of a carpet,
/// together with its projected column weights. Immutable after construction.
class BernoulliMeasure {
public:
    /// weights aligned with carpet.digits(); validated and renormalized.
    static BernoulliMeasure from_weights(const Carpet& c, std::vector<double> weights);
    /// weights keyed by digit; the key set must be exactly carpet.digits().
    static BernoulliMeasure from_weights(const Carpet& c,
                                         const std::vector<std::pair<Digit, double>>& weights);
    static BernoulliMeasure max_entropy(const Carpet& c);
    static BernoulliMeasure mcmullen(const Carpet& c);
    static BernoulliMeasure column_uniform(const Carpet& c);

    const Carpet& carpet() const noexcept { return carpet_; }

    /// p_d, aligned with carpet().digits().
    const std::vector<double>& digit_weights() const noexcept { return weights_; }
    double digit_weight(const Digit& d) const;

    /// p_i for all i in [0,m); zero on empty columns.
    const std::vector<double>& column_weights() const noexcept { return column_; }
    double column_weight(int i) const;

    /// alpha = log|piD|/log m + (sum_i p_i log C_i)/log n.
    double mean_dim() const noexcept;
    FibreMoments fibre_moments() const noexcept { return moments_; }
    /// Total column weight on columns attaining C_max.
    double argmax_mass() const noexcept { return argmax_mass_; }

    /// Cumulant generating function Lambda(theta) = log sum_i p_i C_i^theta,
    /// computed with a max-shift so large theta cannot overflow.
    double cumulant(double theta) const;
    /// Lambda'(theta), closed form, strictly increasing from c to log C_max.
    double cumulant_derivative(double theta) const;
    double cumulant_second_derivative(double theta) const;

    /// Distinct log C_i values (ascending) with their total column weights.
    /// Columns sharing a count are merged; this is the support of the
    /// fibre-log distribution.
    const std::vector<std::pair<double, double>>& fibre_log_support() const noexcept {
        return support_;
    }

private:
    BernoulliMeasure(const Carpet& c, std::vector<double> weights);

    Carpet carpet_;
    std::vector<double> weights_;
    std::vector<double> column_;
    std::vector<std::pair<double, double>> support_; // (log C value, mass)
    FibreMoments moments_;
    double argmax_mass_ = 0;
};

} // namespace carpets
