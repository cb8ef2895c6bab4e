#ifndef HT_SHADOW_HPP
#define HT_SHADOW_HPP

// Dual-distribution machinery for apparently-infinite-mean phenomena on a
// bounded support [L, H]: log transform to an unbounded dual, GPD inference
// there, and closed-form shadow mean / quantile / expected shortfall back on
// the bounded original.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "ht/common.hpp"
#include "ht/rng.hpp"
#include "ht/special.hpp"
#include "ht/tailfit.hpp"

namespace ht::shadow {

struct DualSpec {
    double L = 0.0;      // support floor
    double H = 0.0;      // remote upper bound
    double Lstar = 0.0;  // analysis threshold, L <= Lstar < H
};

inline void validate(const DualSpec& spec) {
    if (!(spec.L > 0.0) || !(spec.H > spec.L)) throw domain_error("DualSpec requires 0 < L < H");
    if (!(spec.Lstar >= spec.L) || !(spec.Lstar < spec.H))
        throw domain_error("DualSpec requires L <= Lstar < H");
}

struct ShadowResult {
    double alpha = 0.0;
    double sigma = 0.0;
    double shadow_mean = 0.0;
    double sample_mean = 0.0;
    double ratio = 0.0;
};

// z = L - H log((H-y)/(H-L)): identity-like for y << H, diverges as y -> H
inline double dual_transform(double y, const DualSpec& spec) {
    validate(spec);
    if (!(y >= spec.L) || !(y < spec.H)) throw domain_error("dual_transform requires y in [L, H)");
    return spec.L - spec.H * std::log((spec.H - y) / (spec.H - spec.L));
}

inline double dual_inverse(double z, const DualSpec& spec) {
    validate(spec);
    if (!(z >= spec.L)) throw domain_error("dual_inverse requires z >= L");
    return (spec.L - spec.H) * std::exp((spec.L - z) / spec.H) + spec.H;
}

// E[Y | Y > Lstar] = (H - Lstar) e^c c^alpha Gamma(1-alpha, c) + Lstar with
// c = alpha sigma / H; finite for any alpha > 0 because H is finite
inline double shadow_mean(const DualSpec& spec, double alpha, double sigma) {
    validate(spec);
    if (!(alpha > 0.0) || !(sigma > 0.0)) throw domain_error("shadow_mean requires alpha > 0, sigma > 0");
    double c = alpha * sigma / spec.H;
    return (spec.H - spec.Lstar) * std::exp(c) * std::pow(c, alpha) *
               special::upper_incomplete_gamma(1.0 - alpha, c) +
           spec.Lstar;
}

// CDF of Y above Lstar under the dual-GPD model
inline double shadow_cdf(double y, const DualSpec& spec, double alpha, double sigma) {
    validate(spec);
    if (!(alpha > 0.0) || !(sigma > 0.0)) throw domain_error("shadow_cdf requires alpha > 0, sigma > 0");
    if (!(y >= spec.Lstar) || !(y < spec.H)) throw domain_error("shadow_cdf requires y in [Lstar, H)");
    double w = spec.H * std::log((spec.H - spec.Lstar) / (spec.H - y));  // dual excess
    double xi = 1.0 / alpha;
    return 1.0 - std::pow(1.0 + xi * w / sigma, -alpha);
}

inline double shadow_quantile(double p, const DualSpec& spec, double alpha, double sigma) {
    validate(spec);
    if (!(alpha > 0.0) || !(sigma > 0.0)) throw domain_error("shadow_quantile requires alpha > 0, sigma > 0");
    if (!(p >= 0.0) || !(p < 1.0)) throw domain_error("shadow_quantile requires p in [0,1)");
    double c = alpha * sigma / spec.H;
    double g = c * std::pow(1.0 - p, -1.0 / alpha);
    return spec.H - (spec.H - spec.Lstar) * std::exp(c - g);
}

// ES(u) = E[Y | Y > u] for u >= Lstar, closed via the shifted dual excess
inline double shadow_expected_shortfall(double u, const DualSpec& spec, double alpha, double sigma) {
    validate(spec);
    if (!(alpha > 0.0) || !(sigma > 0.0))
        throw domain_error("shadow_expected_shortfall requires alpha > 0, sigma > 0");
    if (!(u >= spec.Lstar) || !(u < spec.H))
        throw domain_error("shadow_expected_shortfall requires u in [Lstar, H)");
    double c = alpha * sigma / spec.H;
    double l = std::log((spec.H - spec.Lstar) / (spec.H - u));
    return (spec.H - spec.Lstar) * std::exp(c) * std::pow(c + l, alpha) *
               special::upper_incomplete_gamma(1.0 - alpha, c + l) +
           (spec.H - (spec.H - spec.Lstar) * std::exp(-l));
}

// naive per-observation rescale to today's population
inline Sample rescale_series(const Sample& raw, const Sample& populations, double today_pop) {
    if (raw.size() != populations.size())
        throw data_error("rescale_series requires matching raw/population lengths");
    if (!(today_pop > 0.0)) throw domain_error("rescale_series requires today_pop > 0");
    Sample out = raw;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!(populations.values[i] > 0.0)) throw data_error("rescale_series requires positive populations");
        out.values[i] = raw.values[i] * (today_pop / populations.values[i]);
    }
    return out;
}

inline Sample smooth_rescale(const Sample& sample, const DualSpec& spec) {
    Sample out = sample;
    for (std::size_t i = 0; i < sample.size(); ++i) out.values[i] = dual_transform(sample.values[i], spec);
    return out;
}

// bounded Lomax mean via the exponential integral
inline double lomax_bounded_mean(double L, double H, double sigma, double alpha) {
    if (!(L > 0.0) || !(H > L)) throw domain_error("lomax_bounded_mean requires 0 < L < H");
    if (!(sigma > 0.0) || !(alpha > 0.0)) throw domain_error("lomax_bounded_mean requires sigma, alpha > 0");
    double x = sigma / H;
    return H - (H - L) * alpha * std::exp(x) * special::exponential_integral(alpha + 1.0, x);
}

// hard-truncation counterpart: conditional mean under a Heaviside cutoff at H
inline double heaviside_conditional_mean(double L, double H, double sigma, double alpha) {
    if (!(L > 0.0) || !(H > L)) throw domain_error("heaviside_conditional_mean requires 0 < L < H");
    if (!(sigma > 0.0) || !(alpha > 0.0) || alpha == 1.0)
        throw domain_error("heaviside_conditional_mean requires sigma > 0, alpha > 0, alpha != 1");
    double sa = std::pow(sigma, alpha);
    double top = alpha * sa * (H - L) / (sa - std::pow(H - L + sigma, alpha)) + (alpha - 1.0) * L + sigma;
    return top / (alpha - 1.0);
}

// mean excess e(u) = mean(x - u | x > u)
inline std::vector<std::pair<double, double>> mean_excess_curve(const Sample& sample,
                                                                const std::vector<double>& thresholds) {
    std::vector<std::pair<double, double>> out;
    out.reserve(thresholds.size());
    for (double u : thresholds) {
        KahanSum s;
        std::size_t n = 0;
        for (double x : sample.values) {
            if (x > u) {
                s.add(x - u);
                ++n;
            }
        }
        if (n == 0) throw data_error("mean_excess_curve: no exceedances at a threshold");
        out.emplace_back(u, s.value() / static_cast<double>(n));
    }
    return out;
}

// Advisory threshold pick: the candidate whose upper mean-excess curve is
// closest to linear (least-squares residual scale), keeping >= 30 exceedances.
inline double suggest_threshold(const Sample& sample) {
    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();
    if (n < 60) throw data_error("suggest_threshold requires at least 60 observations");
    std::vector<double> grid;
    for (int j = 0; j < 20; ++j) {
        double q = 0.50 + 0.02 * j;  // quantiles 0.50 .. 0.88
        auto idx = static_cast<std::size_t>(q * (n - 1));
        if (n - idx - 1 < 30) break;
        double u = sorted[idx];
        if (grid.empty() || u > grid.back()) grid.push_back(u);
    }
    if (grid.size() < 4) throw data_error("suggest_threshold: too few usable candidates");
    auto curve = mean_excess_curve(sample, grid);
    double best_u = grid.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 3 < curve.size(); ++i) {
        // least-squares line through curve[i..], scored by relative RMS residual
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t m = curve.size() - i;
        for (std::size_t j = i; j < curve.size(); ++j) {
            sx += curve[j].first;
            sy += curve[j].second;
            sxx += curve[j].first * curve[j].first;
            sxy += curve[j].first * curve[j].second;
        }
        double denom = m * sxx - sx * sx;
        if (denom == 0.0) continue;
        double slope = (m * sxy - sx * sy) / denom;
        double icept = (sy - slope * sx) / m;
        double rss = 0;
        for (std::size_t j = i; j < curve.size(); ++j) {
            double r = curve[j].second - (icept + slope * curve[j].first);
            rss += r * r;
        }
        double scale = sy / m;
        double score = std::sqrt(rss / m) / std::max(std::abs(scale), 1e-300);
        if (score < best_score) {
            best_score = score;
            best_u = curve[i].first;
        }
    }
    return best_u;
}

// Full pipeline: dual-transform exceedances above Lstar, GPD MLE on the dual
// excesses, shadow mean back on the original scale.
inline ShadowResult shadow_analysis(const Sample& sample, const DualSpec& spec) {
    validate(spec);
    Sample dual;
    dual.name = sample.name;
    KahanSum raw_sum;
    std::size_t n_above = 0;
    for (double y : sample.values) {
        if (y > spec.Lstar) {
            if (!(y < spec.H)) throw data_error("shadow_analysis: observation at or above H");
            dual.values.push_back(dual_transform(y, spec));
            raw_sum.add(y);
            ++n_above;
        }
    }
    if (n_above < 5) throw data_error("shadow_analysis requires at least 5 exceedances above Lstar");
    double zstar = dual_transform(spec.Lstar, spec);
    auto fit = tailfit::gpd_fit_mle(dual, zstar);
    if (!(fit.xi > 0.0)) throw numeric_error("shadow_analysis: dual tail not heavy (xi <= 0)");
    ShadowResult r;
    r.alpha = 1.0 / fit.xi;
    r.sigma = fit.beta;
    r.shadow_mean = shadow_mean(spec, r.alpha, r.sigma);
    r.sample_mean = raw_sum.value() / static_cast<double>(n_above);
    r.ratio = r.shadow_mean / r.sample_mean;
    return r;
}

struct GpdBootstrap {
    std::vector<double> xi;    // one entry per replication
    std::vector<double> beta;  // aligned with xi
};

inline double percentile(std::vector<double> v, double p) {
    if (v.empty()) throw data_error("percentile of empty vector");
    if (!(p >= 0.0) || !(p <= 1.0)) throw domain_error("percentile requires p in [0,1]");
    std::sort(v.begin(), v.end());
    double idx = p * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(idx);
    if (lo + 1 >= v.size()) return v.back();
    double frac = idx - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

// 90%-without-replacement resampling of the exceedance set
inline GpdBootstrap bootstrap_gpd(const Sample& sample, double u, std::size_t reps,
                                  std::uint64_t seed, double frac = 0.9) {
    if (!(frac > 0.0) || !(frac <= 1.0)) throw domain_error("bootstrap_gpd requires frac in (0,1]");
    std::vector<double> exceed;
    for (double x : sample.values)
        if (x > u) exceed.push_back(x);
    if (exceed.size() < 10) throw data_error("bootstrap_gpd requires at least 10 exceedances");
    auto keep = static_cast<std::size_t>(frac * static_cast<double>(exceed.size()));
    keep = std::max<std::size_t>(keep, 5);
    GpdBootstrap out;
    out.xi.reserve(reps);
    out.beta.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        rng::Counter g(seed, r);
        std::vector<double> pool = exceed;
        // partial Fisher-Yates: first `keep` entries are the subsample
        for (std::size_t i = 0; i < keep; ++i) {
            std::size_t j = i + static_cast<std::size_t>(g.next_u64() % (pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        Sample sub;
        sub.values.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep));
        auto fit = tailfit::gpd_fit_mle(sub, u);
        out.xi.push_back(fit.xi);
        out.beta.push_back(fit.beta);
    }
    return out;
}

}  // namespace ht::shadow

#endif  // HT_SHADOW_HPP
