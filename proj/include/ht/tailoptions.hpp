#ifndef HT_TAILOPTIONS_HPP
#define HT_TAILOPTIONS_HPP

// Power-law option pricing in the Karamata zone: calls priced off a single
// anchor, l-free relative put pricing, the no-arbitrage lower bound on the
// tail index, and price-curve arbitrage diagnostics.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ht/common.hpp"
#include "ht/special.hpp"

namespace ht::tailoptions {

enum class Side { call_on_price, call_on_return, put_on_return };

struct TailPricingSpec {
    double alpha = 0.0;
    double anchor_strike = 0.0;
    double anchor_price = 0.0;
    double spot = 1.0;
    Side side = Side::call_on_price;
};

struct PriceCurve {
    std::vector<double> strikes;  // ascending
    std::vector<double> prices;
    double implied_l = 0.0;
};

namespace detail {

// l-free strike factor of the put formula: b - a/(a-1) + b^{1-a}/(a-1)
inline double put_strike_factor(double K, double S0, double alpha) {
    double b = (S0 - K) / S0;
    return b - alpha / (alpha - 1.0) + std::pow(b, 1.0 - alpha) / (alpha - 1.0);
}

}  // namespace detail

inline void validate(const TailPricingSpec& spec) {
    if (!(spec.alpha > 1.0)) throw domain_error("TailPricingSpec requires alpha > 1");
    if (!(spec.anchor_price > 0.0)) throw domain_error("TailPricingSpec requires anchor_price > 0");
    if (!(spec.spot > 0.0)) throw domain_error("TailPricingSpec requires spot > 0");
    switch (spec.side) {
        case Side::call_on_price:
            if (!(spec.anchor_strike > 0.0))
                throw domain_error("call_on_price requires anchor_strike > 0");
            break;
        case Side::call_on_return:
            if (!(spec.anchor_strike > spec.spot))
                throw domain_error("call_on_return requires anchor_strike > spot");
            break;
        case Side::put_on_return:
            if (!(spec.anchor_strike > 0.0) || !(spec.anchor_strike < spec.spot))
                throw domain_error("put_on_return requires anchor_strike in (0, spot)");
            break;
    }
}

// invert the anchor price for the Karamata constant of the declared side
inline double implied_karamata_constant(const TailPricingSpec& spec) {
    validate(spec);
    double a = spec.alpha, K1 = spec.anchor_strike, Cm = spec.anchor_price, S0 = spec.spot;
    switch (spec.side) {
        case Side::call_on_price:
            return std::pow((a - 1.0) * Cm * std::pow(K1, a - 1.0), 1.0 / a);
        case Side::call_on_return:
            return std::pow(a - 1.0, 1.0 / a) * std::pow(Cm, 1.0 / a) *
                   std::pow(K1 - S0, 1.0 - 1.0 / a) / S0;
        case Side::put_on_return: {
            double R = detail::put_strike_factor(K1, S0, a);
            if (!(R > 0.0)) throw numeric_error("implied_karamata_constant: put factor not positive");
            double c = Cm / (S0 * R);
            return std::pow(c / (1.0 + c), 1.0 / a);
        }
    }
    throw domain_error("implied_karamata_constant: unknown side");
}

// zone membership is declared by the caller; this only reports it
inline bool in_karamata_zone(double K, const TailPricingSpec& spec) {
    double l = implied_karamata_constant(spec);
    switch (spec.side) {
        case Side::call_on_price:
            return K > l;
        case Side::call_on_return:
            return K >= spec.spot * (1.0 + l);
        case Side::put_on_return:
            return K <= spec.spot * (1.0 - l) && K > 0.0;
    }
    return false;
}

inline double price_call(double K, const TailPricingSpec& spec) {
    validate(spec);
    if (spec.side == Side::put_on_return) throw domain_error("price_call needs a call-side spec");
    double a = spec.alpha;
    double l = implied_karamata_constant(spec);
    if (spec.side == Side::call_on_price) {
        if (!(K > 0.0)) throw domain_error("price_call requires K > 0");
        return std::pow(K, 1.0 - a) * std::pow(l, a) / (a - 1.0);
    }
    if (!(K > spec.spot)) throw domain_error("price_call (returns mode) requires K > spot");
    return std::pow(l * spec.spot, a) * std::pow(K - spec.spot, 1.0 - a) / (a - 1.0);
}

// relative put pricing: P(K2) = P(K1) * R(K2)/R(K1), independent of l
inline double price_put(double K2, double K1, double P1, const TailPricingSpec& spec) {
    validate(spec);
    if (spec.side != Side::put_on_return) throw domain_error("price_put needs a put_on_return spec");
    if (!(P1 > 0.0)) throw domain_error("price_put requires P1 > 0");
    double S0 = spec.spot;
    if (!(K1 > 0.0) || !(K1 < S0) || !(K2 > 0.0) || !(K2 < S0))
        throw domain_error("price_put requires strikes in (0, spot)");
    return P1 * detail::put_strike_factor(K2, S0, spec.alpha) /
           detail::put_strike_factor(K1, S0, spec.alpha);
}

// absolute put price with the exact truncation normalizer lambda =
// 1/(1 - l^alpha); the "close to 1" shortcut kept behind a flag
inline double put_absolute(double K, const TailPricingSpec& spec, bool approximate_lambda = false) {
    validate(spec);
    if (spec.side != Side::put_on_return) throw domain_error("put_absolute needs a put_on_return spec");
    double S0 = spec.spot, a = spec.alpha;
    if (!(K > 0.0) || !(K < S0)) throw domain_error("put_absolute requires K in (0, spot)");
    double l = implied_karamata_constant(spec);
    double lam = approximate_lambda ? 1.0 : 1.0 / (1.0 - std::pow(l, a));
    return S0 * lam * std::pow(l, a) * detail::put_strike_factor(K, S0, a);
}

// lower bound on alpha from matching the power-law call slope to the
// Black-Scholes slope at the near strike (zero rates)
inline double min_alpha_no_arbitrage(double K, double sigma_of_K, double sigma_slope, double S0,
                                     double t, double l) {
    if (!(S0 > 0.0) || !(sigma_of_K > 0.0) || !(t > 0.0) || !(l > 0.0))
        throw domain_error("min_alpha_no_arbitrage requires positive S0, sigma, t, l");
    if (!(K > S0 * (1.0 + l)))
        throw domain_error("min_alpha_no_arbitrage requires K > S0 (1 + l)");
    double st = sigma_of_K * std::sqrt(t);
    double d1 = (std::log(S0 / K) + sigma_of_K * sigma_of_K * t / 2.0) / st;
    double d2 = d1 - st;
    double rhs = special::norm_cdf(d2) - sigma_slope * S0 * std::sqrt(t) * special::norm_pdf(d1);
    if (!(rhs > 0.0)) throw numeric_error("min_alpha_no_arbitrage: slope term drives the bound argument nonpositive");
    double base = l * S0 / (K - S0);
    return std::log(rhs) / std::log(base);
}

// pure-model curve across a strike grid
inline PriceCurve price_curve(const TailPricingSpec& spec, std::vector<double> strikes) {
    validate(spec);
    if (strikes.size() < 2) throw domain_error("price_curve requires at least 2 strikes");
    std::sort(strikes.begin(), strikes.end());
    PriceCurve curve;
    curve.implied_l = implied_karamata_constant(spec);
    curve.strikes = strikes;
    curve.prices.reserve(strikes.size());
    for (double K : strikes) {
        if (spec.side == Side::put_on_return)
            curve.prices.push_back(price_put(K, spec.anchor_strike, spec.anchor_price, spec));
        else
            curve.prices.push_back(price_call(K, spec));
    }
    return curve;
}

struct CurveDiagnostics {
    bool ok = true;
    std::vector<std::size_t> spread_violations;     // index i where C(K_{i+1}) > C(K_i), calls
    std::vector<std::size_t> butterfly_violations;  // interior index with negative implied density
    std::vector<double> implied_density;            // second divided differences, interior points
    bool is_put_curve = false;
};

// no-arbitrage checks on a call curve: prices nonincreasing in strike and
// convex (Breeden-Litzenberger density nonnegative); puts flip the slope check
inline CurveDiagnostics curve_diagnostics(const PriceCurve& curve, bool is_put_curve = false) {
    std::size_t n = curve.strikes.size();
    if (n != curve.prices.size() || n < 3)
        throw data_error("curve_diagnostics requires >= 3 aligned strikes/prices");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(curve.strikes[i + 1] > curve.strikes[i]))
            throw data_error("curve_diagnostics requires strictly ascending strikes");
    double scale = 0.0;
    for (double p : curve.prices) scale = std::max(scale, std::abs(p));
    double tol = 1e-12 * std::max(scale, 1.0);

    CurveDiagnostics diag;
    diag.is_put_curve = is_put_curve;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double spread = curve.prices[i + 1] - curve.prices[i];
        bool bad = is_put_curve ? (spread < -tol) : (spread > tol);
        if (bad) diag.spread_violations.push_back(i);
    }
    diag.implied_density.reserve(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double s1 = (curve.prices[i] - curve.prices[i - 1]) / (curve.strikes[i] - curve.strikes[i - 1]);
        double s2 = (curve.prices[i + 1] - curve.prices[i]) / (curve.strikes[i + 1] - curve.strikes[i]);
        double dd2 = 2.0 * (s2 - s1) / (curve.strikes[i + 1] - curve.strikes[i - 1]);
        diag.implied_density.push_back(dd2);
        if (dd2 < -tol) diag.butterfly_violations.push_back(i);
    }
    diag.ok = diag.spread_violations.empty() && diag.butterfly_violations.empty();
    return diag;
}

// advisory: empirical Karamata factor L(x) = x^alpha S(x) over an
// order-statistic grid; a plateau suggests the zone has been reached
inline std::vector<std::pair<double, double>> empirical_karamata_curve(const Sample& sample,
                                                                       double alpha,
                                                                       std::size_t points = 20) {
    if (!(alpha > 0.0)) throw domain_error("empirical_karamata_curve requires alpha > 0");
    if (sample.size() < points + 1 || points < 2)
        throw data_error("empirical_karamata_curve: too few observations for the grid");
    std::vector<double> x = sample.values;
    for (double v : x)
        if (!(v > 0.0)) throw data_error("empirical_karamata_curve requires positive values");
    std::sort(x.begin(), x.end());
    std::size_t n = x.size();
    std::vector<std::pair<double, double>> out;
    out.reserve(points);
    for (std::size_t j = 0; j < points; ++j) {
        // thresholds from the median to the 99th percentile
        double q = 0.5 + 0.49 * static_cast<double>(j) / static_cast<double>(points - 1);
        auto idx = static_cast<std::size_t>(q * static_cast<double>(n - 1));
        double u = x[idx];
        double surv = static_cast<double>(n - 1 - idx) / static_cast<double>(n);
        out.emplace_back(u, std::pow(u, alpha) * surv);
    }
    return out;
}

}  // namespace ht::tailoptions

#endif  // HT_TAILOPTIONS_HPP
