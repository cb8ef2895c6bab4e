#ifndef HT_DIAGNOSTICS_HPP
#define HT_DIAGNOSTICS_HPP

// Moment-convergence and memory diagnostics on raw series: maximum-to-sum
// plots, kurtosis under aggregation, relative excess conditional expectation,
// record counts, and rolling drawdowns.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ht/common.hpp"
#include "ht/rng.hpp"
#include "ht/special.hpp"

namespace ht::diagnostics {

struct MsCurve {
    double p = 1.0;
    std::vector<std::pair<std::size_t, double>> ratios;  // (n, R_n), R in [0,1]
};

// R_n = max_{i<=n} |x_i|^p / sum_{i<=n} |x_i|^p; an all-zero prefix gives 0.
inline MsCurve ms_plot(const Sample& sample, double p) {
    if (sample.values.empty()) throw data_error("ms_plot requires a nonempty sample");
    if (!(p > 0.0)) throw domain_error("ms_plot requires p > 0");
    MsCurve curve;
    curve.p = p;
    curve.ratios.reserve(sample.size());
    double mx = 0.0;
    KahanSum total;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double v = std::pow(std::abs(sample.values[i]), p);
        mx = std::max(mx, v);
        total.add(v);
        double s = total.value();
        curve.ratios.emplace_back(i + 1, s > 0.0 ? mx / s : 0.0);
    }
    return curve;
}

inline double max_moment_contribution(const Sample& sample, double p) {
    auto curve = ms_plot(sample, p);
    return curve.ratios.back().second;
}

// raw (non-excess) kurtosis of non-overlapping lag-sums; remainder dropped
inline std::vector<std::pair<int, double>> kurtosis_under_aggregation(const Sample& sample,
                                                                      const std::vector<int>& lags) {
    std::vector<std::pair<int, double>> out;
    out.reserve(lags.size());
    for (int lag : lags) {
        if (lag < 1) throw domain_error("kurtosis_under_aggregation requires lags >= 1");
        std::size_t blocks = sample.size() / static_cast<std::size_t>(lag);
        if (blocks < 4)
            throw data_error("kurtosis_under_aggregation: fewer than 4 complete blocks at requested lag");
        std::vector<double> sums(blocks, 0.0);
        for (std::size_t b = 0; b < blocks; ++b) {
            KahanSum s;
            for (int j = 0; j < lag; ++j) s.add(sample.values[b * lag + j]);
            sums[b] = s.value();
        }
        out.emplace_back(lag, raw_kurtosis(sums));
    }
    return out;
}

struct ExcessEntry {
    double k = 0.0;
    double phi = 0.0;  // mean(x | beyond K) / K
    std::size_t n_exceed = 0;
    bool low_confidence = false;  // fewer than 20 exceedances
};

// phi_K = E[X | X > K]/K for the right tail, E[X | X < K]/K for the left
inline std::vector<ExcessEntry> excess_conditional_expectation(const Sample& sample,
                                                               const std::vector<double>& ks,
                                                               const std::string& side) {
    bool right;
    if (side == "right")
        right = true;
    else if (side == "left")
        right = false;
    else
        throw domain_error("excess_conditional_expectation: side must be right or left");
    std::vector<ExcessEntry> out;
    out.reserve(ks.size());
    for (double k : ks) {
        if (k == 0.0) throw domain_error("excess_conditional_expectation requires nonzero thresholds");
        ExcessEntry e;
        e.k = k;
        KahanSum s;
        for (double x : sample.values) {
            if (right ? (x > k) : (x < k)) {
                s.add(x);
                ++e.n_exceed;
            }
        }
        if (e.n_exceed == 0) throw data_error("excess_conditional_expectation: no exceedances at a threshold");
        e.phi = (s.value() / static_cast<double>(e.n_exceed)) / k;
        e.low_confidence = e.n_exceed < 20;
        out.push_back(e);
    }
    return out;
}

struct RecordsReport {
    std::size_t count = 0;  // running strict maxima; the first value counts
    double expected = 0.0;  // H_t
    double stderr_ = 0.0;   // sqrt(H_t - H_t^(2))
};

inline RecordsReport gumbel_records(const Sample& sample) {
    if (sample.values.empty()) throw data_error("gumbel_records requires a nonempty sample");
    RecordsReport r;
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : sample.values) {
        if (x > mx) {
            mx = x;
            ++r.count;
        }
    }
    auto t = static_cast<std::int64_t>(sample.size());
    r.expected = special::harmonic(t);
    r.stderr_ = std::sqrt(std::max(0.0, r.expected - special::harmonic2(t)));
    return r;
}

// For each start index i the most negative forward move within the window,
// capped at 0. A returns series is cumulated into a level path first.
inline std::vector<double> max_drawdown(const Sample& sample, int window) {
    if (window < 2) throw domain_error("max_drawdown requires window >= 2");
    if (sample.size() < 2) throw data_error("max_drawdown requires at least 2 values");
    std::vector<double> levels;
    if (sample.is_returns) {
        levels.resize(sample.size());
        KahanSum s;
        for (std::size_t i = 0; i < sample.size(); ++i) {
            s.add(sample.values[i]);
            levels[i] = s.value();
        }
    } else {
        levels = sample.values;
    }
    std::size_t n = levels.size();
    std::vector<double> out(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t jmax = std::min(n - 1, i + static_cast<std::size_t>(window) - 1);
        double fmin = levels[i + 1];
        for (std::size_t j = i + 2; j <= jmax; ++j) fmin = std::min(fmin, levels[j]);
        out[i] = std::min(0.0, fmin - levels[i]);
    }
    return out;
}

// plain lag-k sample autocorrelation (mean-removed, biased normalization)
inline double autocorrelation(const Sample& sample, int lag) {
    if (lag < 1) throw domain_error("autocorrelation requires lag >= 1");
    std::size_t n = sample.size();
    if (n <= static_cast<std::size_t>(lag) + 1) throw data_error("autocorrelation: sample shorter than lag");
    double mu = mean(sample.values);
    KahanSum num, den;
    for (std::size_t i = 0; i + lag < n; ++i)
        num.add((sample.values[i] - mu) * (sample.values[i + lag] - mu));
    for (std::size_t i = 0; i < n; ++i) {
        double d = sample.values[i] - mu;
        den.add(d * d);
    }
    if (den.value() == 0.0) throw data_error("autocorrelation: constant sample");
    return num.value() / den.value();
}

// seeded Fisher-Yates permutation; destroys serial memory, preserves marginals
inline Sample reshuffle(const Sample& sample, std::uint64_t seed) {
    Sample out = sample;
    rng::Counter g(seed);
    for (std::size_t i = out.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(g.next_u64() % i);
        std::swap(out.values[i - 1], out.values[j]);
    }
    return out;
}

}  // namespace ht::diagnostics

#endif  // HT_DIAGNOSTICS_HPP
