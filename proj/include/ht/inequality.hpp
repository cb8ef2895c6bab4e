#ifndef HT_INEQUALITY_HPP
#define HT_INEQUALITY_HPP

// Gini and quantile-contribution estimation under fat tails: the
// nonparametric estimator and its one-sided stable sampling limit, the MLE
// plug-in, the mode-shift small-sample correction, and top-share
// superadditivity checks.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "ht/common.hpp"
#include "ht/dists.hpp"

namespace ht::inequality {

struct GiniReport {
    double g_np = 0.0;
    double g_corrected = 0.0;
    std::optional<double> g_mle;  // present iff a Pareto fit was supplied
    double alpha_used = 0.0;
    double gamma_n = 0.0;     // stable scale of the sampling limit
    double mode_shift = 0.0;  // |mode| of the zero-centered stable density
};

struct QuantileContribution {
    double q = 0.0;
    double kappa_q_hat = 0.0;
    double h_q = 0.0;  // empirical exceedance threshold
    std::optional<double> kappa_q_theory;
};

namespace detail {
inline void require_positive(const Sample& sample, const char* who) {
    for (double x : sample.values)
        if (!(x > 0.0)) throw data_error(std::string(who) + " requires strictly positive values");
}
}  // namespace detail

// order-statistic form: sum (2i - n - 1) x_(i) / ((n-1) sum x)
inline double gini_nonparametric(const Sample& sample) {
    if (sample.size() < 2) throw data_error("gini_nonparametric requires n >= 2");
    detail::require_positive(sample, "gini_nonparametric");
    std::vector<double> x = sample.values;
    std::sort(x.begin(), x.end());
    auto n = static_cast<double>(x.size());
    KahanSum num, den;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num.add((2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i]);
        den.add(x[i]);
    }
    return num.value() / ((n - 1.0) * den.value());
}

// pairwise form, retained as an O(n^2) cross-check for small n
inline double gini_pairwise(const Sample& sample) {
    if (sample.size() < 2) throw data_error("gini_pairwise requires n >= 2");
    if (sample.size() > 2000) throw domain_error("gini_pairwise is a cross-check, limited to n <= 2000");
    detail::require_positive(sample, "gini_pairwise");
    auto n = static_cast<double>(sample.size());
    KahanSum num, den;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j)
            num.add(std::abs(sample.values[i] - sample.values[j]));
        den.add(sample.values[i]);
    }
    return num.value() / ((n - 1.0) * den.value());
}

inline double gini_mle_pareto(double alpha_hat) {
    if (!(alpha_hat > 0.5)) throw domain_error("gini_mle_pareto requires alpha_hat > 0.5");
    return 1.0 / (2.0 * alpha_hat - 1.0);
}

inline double gini_mle_stderr(double alpha_hat, std::size_t n) {
    if (!(alpha_hat > 0.5)) throw domain_error("gini_mle_stderr requires alpha_hat > 0.5");
    if (n < 1) throw domain_error("gini_mle_stderr requires n >= 1");
    double d = 2.0 * alpha_hat - 1.0;
    return 2.0 * alpha_hat / (std::sqrt(static_cast<double>(n)) * d * d);
}

// tail-integral constant of the one-sided alpha-stable CLT for Pareto sums
inline double stable_tail_constant(double alpha) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw domain_error("stable_tail_constant requires alpha in (1,2)");
    return std::tgamma(2.0 - alpha) * std::abs(std::cos(M_PI * alpha / 2.0)) / (alpha - 1.0);
}

// stable scale of the Gini sampling limit for a mean-mu Pareto summand
inline double gini_stable_scale(double alpha, std::size_t n, double mu) {
    if (!(mu > 0.0)) throw domain_error("gini_stable_scale requires mu > 0");
    double c = stable_tail_constant(alpha);
    return std::pow(c, -1.0 / alpha) / (mu * std::pow(static_cast<double>(n), (alpha - 1.0) / alpha));
}

// sampling law of G^NP - g for a unit-minimum Pareto: maximally skewed stable
inline dists::StableParams gini_stable_limit(double alpha, std::size_t n) {
    if (n < 1) throw domain_error("gini_stable_limit requires n >= 1");
    double mu = alpha / (alpha - 1.0);
    return dists::StableParams{alpha, 1.0, 0.0, gini_stable_scale(alpha, n, mu)};
}

namespace detail {
// mode of the standard maximally skewed S1 stable; the scale-gamma mode is
// gamma times this, so one search per alpha suffices
inline double standard_mode(double alpha) {
    static std::map<double, double> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(alpha);
    if (it != cache.end()) return it->second;
    double m = dists::stable_mode(dists::StableParams{alpha, 1.0, 0.0, 1.0});
    cache.emplace(alpha, m);
    return m;
}
}  // namespace detail

inline GiniReport gini_corrected(const Sample& sample, double alpha, double mu,
                                 std::optional<double> fitted_alpha = std::nullopt) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw domain_error("gini_corrected requires alpha in (1,2)");
    GiniReport rep;
    rep.g_np = gini_nonparametric(sample);
    rep.alpha_used = alpha;
    rep.gamma_n = gini_stable_scale(alpha, sample.size(), mu);
    double mode = rep.gamma_n * detail::standard_mode(alpha);
    if (!std::isfinite(mode)) throw numeric_error("gini_corrected: stable mode search failed");
    rep.mode_shift = std::abs(mode);
    rep.g_corrected = rep.g_np + rep.mode_shift;
    if (fitted_alpha) rep.g_mle = gini_mle_pareto(*fitted_alpha);
    return rep;
}

// empirical top-q share: the sum of the floor(qn) largest values over the
// total; h_q is the ceil((1-q)n)-th ascending order statistic
inline QuantileContribution quantile_contribution(const Sample& sample, double q,
                                                  std::optional<double> alpha = std::nullopt) {
    if (!(q > 0.0) || !(q < 1.0)) throw domain_error("quantile_contribution requires q in (0,1)");
    detail::require_positive(sample, "quantile_contribution");
    std::size_t n = sample.size();
    auto top = static_cast<std::size_t>(q * static_cast<double>(n));
    if (top < 1) throw data_error("quantile_contribution: q*n < 1, top share empty");
    std::vector<double> x = sample.values;
    std::sort(x.begin(), x.end(), std::greater<double>());
    KahanSum top_sum, total;
    for (std::size_t i = 0; i < n; ++i) {
        total.add(x[i]);
        if (i < top) top_sum.add(x[i]);
    }
    QuantileContribution out;
    out.q = q;
    out.kappa_q_hat = top_sum.value() / total.value();
    auto rank = static_cast<std::size_t>(std::ceil((1.0 - q) * static_cast<double>(n)));
    out.h_q = x[n - rank];  // ascending rank-th = descending (n-rank+1)-th
    if (alpha) {
        if (!(*alpha > 1.0)) throw domain_error("quantile_contribution theory requires alpha > 1");
        out.kappa_q_theory = std::pow(q, (*alpha - 1.0) / *alpha);
    }
    return out;
}

// sum-weighted average of subsample top shares vs the pooled top share;
// pooling concentrates (pooled >= weighted average in expectation)
inline std::pair<double, double> superadditivity_check(const std::vector<Sample>& samples, double q) {
    if (samples.empty()) throw data_error("superadditivity_check requires at least one sample");
    Sample pooled;
    KahanSum grand;
    double weighted = 0.0;
    std::vector<double> shares, sums;
    for (const auto& s : samples) {
        auto qc = quantile_contribution(s, q);
        double ssum = sum(s.values);
        shares.push_back(qc.kappa_q_hat);
        sums.push_back(ssum);
        grand.add(ssum);
        pooled.values.insert(pooled.values.end(), s.values.begin(), s.values.end());
    }
    for (std::size_t i = 0; i < shares.size(); ++i) weighted += (sums[i] / grand.value()) * shares[i];
    auto qp = quantile_contribution(pooled, q);
    return {weighted, qp.kappa_q_hat};
}

}  // namespace ht::inequality

#endif  // HT_INEQUALITY_HPP
