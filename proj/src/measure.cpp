#include "carpets/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace carpets {

namespace {
constexpr double kSumTolerance = 1e-9;
}

BernoulliMeasure::BernoulliMeasure(const Carpet& c, std::vector<double> weights)
    : carpet_(c), weights_(std::move(weights)) {
    // weights_ validated and renormalized by the factories
    column_.assign(carpet_.m(), 0.0);
    for (std::size_t k = 0; k < weights_.size(); ++k)
        column_[carpet_.digits()[k].i] += weights_[k];

    std::map<int, double> by_count; // column count -> total mass
    for (int i : carpet_.occupied_columns())
        by_count[carpet_.column_counts()[i]] += column_[i];
    for (const auto& [count, mass] : by_count)
        support_.emplace_back(std::log(static_cast<double>(count)), mass);

    double mean = 0;
    for (const auto& [v, q] : support_)
        mean += q * v;
    double var = 0;
    for (const auto& [v, q] : support_)
        var += q * (v - mean) * (v - mean);
    moments_ = FibreMoments{mean, var};
    argmax_mass_ = 0;
    for (int i : carpet_.occupied_columns())
        if (carpet_.column_counts()[i] == carpet_.max_column_count())
            argmax_mass_ += column_[i];
}

BernoulliMeasure BernoulliMeasure::from_weights(const Carpet& c, std::vector<double> weights) {
    if (weights.size() != static_cast<std::size_t>(c.digit_count()))
        raise(errc::bad_weights, "expected " + std::to_string(c.digit_count()) +
                                     " weights, got " + std::to_string(weights.size()));
    double sum = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(weights[k] > 0.0) || !std::isfinite(weights[k]))
            raise(errc::bad_weights, "weight for digit " + to_string(c.digits()[k]) +
                                         " must be strictly positive");
        sum += weights[k];
    }
    if (std::fabs(sum - 1.0) > kSumTolerance)
        raise(errc::bad_weights, "weights sum to " + std::to_string(sum) + ", expected 1");
    for (double& w : weights)
        w /= sum; // renormalize exactly so downstream sums are consistent
    return BernoulliMeasure(c, std::move(weights));
}

BernoulliMeasure BernoulliMeasure::from_weights(
    const Carpet& c, const std::vector<std::pair<Digit, double>>& weights) {
    if (weights.size() != static_cast<std::size_t>(c.digit_count()))
        raise(errc::bad_weights, "weight table must have exactly one entry per digit");
    std::vector<double> aligned(c.digit_count(), -1.0);
    for (const auto& [d, w] : weights) {
        const int idx = c.digit_index(d);
        if (idx < 0)
            raise(errc::bad_weights, "weight given for digit " + to_string(d) +
                                         " which is not in the carpet");
        if (aligned[idx] >= 0)
            raise(errc::bad_weights, "duplicate weight for digit " + to_string(d));
        aligned[idx] = w;
    }
    return from_weights(c, std::move(aligned));
}

BernoulliMeasure BernoulliMeasure::max_entropy(const Carpet& c) {
    return BernoulliMeasure(c, std::vector<double>(c.digit_count(), 1.0 / c.digit_count()));
}

BernoulliMeasure BernoulliMeasure::mcmullen(const Carpet& c) {
    const double ratio = std::log(static_cast<double>(c.m())) / std::log(static_cast<double>(c.n()));
    const double ms = std::pow(static_cast<double>(c.m()), c.hausdorff_dim());
    std::vector<double> w(c.digit_count());
    for (int k = 0; k < c.digit_count(); ++k) {
        const int count = c.column_counts()[c.digits()[k].i];
        w[k] = std::pow(static_cast<double>(count), ratio - 1.0) / ms;
    }
    double sum = 0;
    for (double x : w)
        sum += x;
    for (double& x : w)
        x /= sum;
    return BernoulliMeasure(c, std::move(w));
}

BernoulliMeasure BernoulliMeasure::column_uniform(const Carpet& c) {
    const double per_column = 1.0 / c.occupied_count();
    std::vector<double> w(c.digit_count());
    for (int k = 0; k < c.digit_count(); ++k)
        w[k] = per_column / c.column_counts()[c.digits()[k].i];
    return BernoulliMeasure(c, std::move(w));
}

double BernoulliMeasure::digit_weight(const Digit& d) const {
    const int idx = carpet_.digit_index(d);
    if (idx < 0)
        raise(errc::bad_range, "digit " + to_string(d) + " not in the carpet");
    return weights_[idx];
}

double BernoulliMeasure::column_weight(int i) const {
    if (i < 0 || i >= carpet_.m())
        raise(errc::bad_range, "column " + std::to_string(i) + " out of range");
    return column_[i];
}

double BernoulliMeasure::mean_dim() const noexcept {
    const double logm = std::log(static_cast<double>(carpet_.m()));
    const double logn = std::log(static_cast<double>(carpet_.n()));
    return std::log(static_cast<double>(carpet_.occupied_count())) / logm +
           moments_.mean / logn;
}

double BernoulliMeasure::cumulant(double theta) const {
    // shift by the largest exponent so no term overflows
    double shift = theta * support_.front().first;
    for (const auto& [v, q] : support_)
        shift = std::max(shift, theta * v);
    double sum = 0;
    for (const auto& [v, q] : support_)
        sum += q * std::exp(theta * v - shift);
    return shift + std::log(sum);
}

double BernoulliMeasure::cumulant_derivative(double theta) const {
    double shift = theta * support_.front().first;
    for (const auto& [v, q] : support_)
        shift = std::max(shift, theta * v);
    double z = 0, zv = 0;
    for (const auto& [v, q] : support_) {
        const double w = q * std::exp(theta * v - shift);
        z += w;
        zv += w * v;
    }
    return zv / z;
}

double BernoulliMeasure::cumulant_second_derivative(double theta) const {
    double shift = theta * support_.front().first;
    for (const auto& [v, q] : support_)
        shift = std::max(shift, theta * v);
    double z = 0, zv = 0, zvv = 0;
    for (const auto& [v, q] : support_) {
        const double w = q * std::exp(theta * v - shift);
        z += w;
        zv += w * v;
        zvv += w * v * v;
    }
    const double d1 = zv / z;
    return zvv / z - d1 * d1;
}

} // namespace carpets
