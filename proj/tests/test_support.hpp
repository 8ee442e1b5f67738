#pragma once

#include <random>
#include <vector>

#include "carpets/carpet.hpp"
#include "carpets/measure.hpp"

namespace carpets::testing {

// the two carpets of the figure examples
inline Carpet left_example() {
    return Carpet::create(2, 3, {{0, 0}, {0, 2}, {1, 1}});
}

inline Carpet right_example() {
    return Carpet::create(3, 4, {{0, 0}, {0, 1}, {1, 0}, {2, 0}});
}

// m=3, n=4 carpet with the given column counts, cells placed bottom-up
inline Carpet carpet34(std::initializer_list<int> counts) {
    std::vector<Digit> digits;
    int i = 0;
    for (int c : counts) {
        for (int j = 0; j < c; ++j)
            digits.push_back(Digit{i, j});
        ++i;
    }
    return Carpet::create(3, 4, digits);
}

inline Carpet full_grid(int m, int n) {
    std::vector<Digit> digits;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            digits.push_back(Digit{i, j});
    return Carpet::create(m, n, digits);
}

struct RandomCarpetOptions {
    int max_m = 4;
    int max_n = 6;
    bool require_nonuniform = false;
    int min_distinct = 1; // distinct column counts
};

inline Carpet random_carpet(std::mt19937_64& rng, const RandomCarpetOptions& opt = {}) {
    for (;;) {
        std::uniform_int_distribution<int> pick_m(2, opt.max_m);
        const int m = pick_m(rng);
        std::uniform_int_distribution<int> pick_n(m + 1, opt.max_n);
        const int n = pick_n(rng);
        std::vector<Digit> digits;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.45)
                    digits.push_back(Digit{i, j});
        if (digits.size() < 2)
            continue;
        Carpet c = Carpet::create(m, n, digits);
        if (opt.require_nonuniform && c.uniform_fibres())
            continue;
        if (opt.min_distinct > 1) {
            std::vector<int> seen;
            for (int i : c.occupied_columns()) {
                const int count = c.column_counts()[i];
                bool fresh = true;
                for (int s : seen)
                    fresh = fresh && s != count;
                if (fresh)
                    seen.push_back(count);
            }
            if (static_cast<int>(seen.size()) < opt.min_distinct)
                continue;
        }
        return c;
    }
}

inline BernoulliMeasure random_measure(std::mt19937_64& rng, const Carpet& c) {
    std::vector<double> w(c.digit_count());
    double sum = 0;
    for (double& x : w) {
        x = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        sum += x;
    }
    for (double& x : w)
        x /= sum;
    return BernoulliMeasure::from_weights(c, w);
}

} // namespace carpets::testing
