#ifndef HT_TAILFIT_HPP
#define HT_TAILFIT_HPP

// Tail-exponent inference: exceedance MLE with its exact sampling law,
// GPD fitting by profile likelihood, Frechet max calibration, hidden-tail
// accounting above the sample maximum, and stochastic-exponent mean bias.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ht/common.hpp"
#include "ht/special.hpp"

namespace ht::tailfit {

struct TailFit {
    double alpha_hat = 0.0;
    double L = 0.0;  // threshold used
    std::size_t n_exceed = 0;
    double stderr_ = 0.0;  // alpha_hat / sqrt(n)
    bool debiased = false;
};

struct GpdFit {
    double xi = 0.0;
    double beta = 0.0;  // scale
    double u = 0.0;     // threshold
    std::size_t n_exceed = 0;
    std::pair<double, double> stderrs{0.0, 0.0};  // (se_xi, se_beta)
    bool low_confidence = false;                  // fewer than 30 exceedances
};

// alpha_hat = n / sum log(x_i/L) over exceedances; (n-1)/n factor on request
inline TailFit pareto_mle(const Sample& sample, double L, bool debias = false) {
    if (!(L > 0.0)) throw domain_error("pareto_mle requires L > 0");
    KahanSum slog;
    std::size_t n = 0;
    for (double x : sample.values) {
        if (x > L) {
            slog.add(std::log(x / L));
            ++n;
        }
    }
    if (n < 2) throw data_error("pareto_mle requires at least 2 exceedances above L");
    TailFit fit;
    fit.L = L;
    fit.n_exceed = n;
    fit.debiased = debias;
    fit.alpha_hat = static_cast<double>(n) / slog.value();
    if (debias) fit.alpha_hat *= static_cast<double>(n - 1) / static_cast<double>(n);
    fit.stderr_ = fit.alpha_hat / std::sqrt(static_cast<double>(n));
    return fit;
}

// repeated exceedance MLE with the threshold at the (k+1)-th largest value
inline std::vector<TailFit> hill_sweep(const Sample& sample, const std::vector<int>& ks,
                                       bool debias = false) {
    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    std::vector<TailFit> out;
    out.reserve(ks.size());
    for (int k : ks) {
        if (k < 2 || static_cast<std::size_t>(k) >= sorted.size())
            throw domain_error("hill_sweep requires 2 <= k < sample size");
        double L = sorted[k];
        if (!(L > 0.0)) throw data_error("hill_sweep: order-statistic threshold not positive");
        out.push_back(pareto_mle(sample, L, debias));
    }
    return out;
}

// Sampling law of the exceedance MLE: inverse-gamma with rate alpha*n (raw)
// or alpha*(n-1) (debiased, mean alpha exactly). Truncation renormalizes the
// support to a >= truncate_at; the normalizer is P(n, c/truncate_at) exactly.
struct AlphaSamplingDensity {
    double alpha_true = 0.0;
    int n = 0;
    bool debiased = true;
    double c = 0.0;          // inverse-gamma rate
    double lower = 0.0;      // support lower bound
    double norm = 1.0;       // truncation mass
    double lgamma_n = 0.0;

    double operator()(double a) const {
        if (!(a > lower) || !(a > 0.0)) return 0.0;
        double lf = n * std::log(c / a) - c / a - std::log(a) - lgamma_n;
        return std::exp(lf) / norm;
    }
};

inline AlphaSamplingDensity alpha_sampling_density(double alpha_true, int n,
                                                   std::optional<double> truncate_at = std::nullopt,
                                                   bool debiased = true) {
    if (!(alpha_true > 1.0)) throw domain_error("alpha_sampling_density requires alpha_true > 1");
    if (n < 2) throw domain_error("alpha_sampling_density requires n >= 2");
    AlphaSamplingDensity d;
    d.alpha_true = alpha_true;
    d.n = n;
    d.debiased = debiased;
    d.c = debiased ? alpha_true * (n - 1) : alpha_true * n;
    d.lgamma_n = std::lgamma(static_cast<double>(n));
    if (truncate_at) {
        if (!(*truncate_at >= 1.0)) throw domain_error("alpha_sampling_density requires truncate_at >= 1");
        d.lower = *truncate_at;
        d.norm = special::gamma_p(static_cast<double>(n), d.c / *truncate_at);
    }
    return d;
}

inline double plugin_pareto_mean(const TailFit& fit) {
    if (!(fit.alpha_hat > 1.0)) throw domain_error("plugin_pareto_mean requires alpha_hat > 1");
    return fit.L * fit.alpha_hat / (fit.alpha_hat - 1.0);
}

namespace detail {

// full GPD log-likelihood on excesses
inline double gpd_loglik(const std::vector<double>& w, double xi, double beta) {
    if (!(beta > 0.0)) return -std::numeric_limits<double>::infinity();
    double n = static_cast<double>(w.size());
    if (std::abs(xi) < 1e-12) {
        KahanSum s;
        for (double v : w) s.add(v);
        return -n * std::log(beta) - s.value() / beta;
    }
    KahanSum s;
    for (double v : w) {
        double t = 1.0 + xi * v / beta;
        if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
        s.add(std::log(t));
    }
    return -n * std::log(beta) - (1.0 + 1.0 / xi) * s.value();
}

// profile log-likelihood over theta = xi/beta; xi(theta) closed form
inline double gpd_profile(const std::vector<double>& w, double theta, double* xi_out) {
    double n = static_cast<double>(w.size());
    KahanSum s;
    for (double v : w) {
        double t = 1.0 + theta * v;
        if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
        s.add(std::log(t));
    }
    double xi = s.value() / n;
    if (xi_out) *xi_out = xi;
    double r = xi / theta;
    if (!(r > 0.0)) return -std::numeric_limits<double>::infinity();
    return -n * (std::log(r) + xi + 1.0);
}

inline double golden_max_1d(const std::vector<double>& w, double lo, double hi) {
    constexpr double kPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kPhi * (b - a), x2 = a + kPhi * (b - a);
    double f1 = gpd_profile(w, x1, nullptr), f2 = gpd_profile(w, x2, nullptr);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (std::abs(a) + std::abs(b) + 1e-13); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kPhi * (b - a);
            f2 = gpd_profile(w, x2, nullptr);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kPhi * (b - a);
            f1 = gpd_profile(w, x1, nullptr);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// Profile-likelihood GPD MLE on excesses above u, multi-start over the
// reparameterized slope theta = xi/beta, with observed-information stderrs.
inline GpdFit gpd_fit_mle(const Sample& sample, double u) {
    std::vector<double> w;
    for (double x : sample.values)
        if (x > u) w.push_back(x - u);
    if (w.size() < 5) throw data_error("gpd_fit_mle requires at least 5 exceedances above u");

    double wbar = mean(w);
    double wmax = *std::max_element(w.begin(), w.end());

    std::vector<double> candidates;
    for (double xi0 : {0.1, 0.5, 1.0, 1.5, 2.5}) candidates.push_back(xi0 / wbar);
    for (int k = -8; k <= 8; ++k) candidates.push_back(std::pow(10.0, k / 2.0) / wbar);
    for (int k = 1; k <= 40; ++k) candidates.push_back(-(k / 41.0) / wmax);
    std::sort(candidates.begin(), candidates.end());

    double best_ll = detail::gpd_loglik(w, 0.0, wbar);
    double best_xi = 0.0, best_beta = wbar;
    bool at_boundary = false;

    std::vector<double> lls(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) lls[i] = detail::gpd_profile(w, candidates[i], nullptr);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool local = std::isfinite(lls[i]) && (i == 0 || lls[i] >= lls[i - 1]) &&
                     (i + 1 == candidates.size() || lls[i] >= lls[i + 1]);
        if (!local) continue;
        double lo = (i == 0) ? candidates[i] - std::abs(candidates[i]) : candidates[i - 1];
        double hi = (i + 1 == candidates.size()) ? candidates[i] * 10.0 : candidates[i + 1];
        if (!std::isfinite(detail::gpd_profile(w, lo, nullptr))) lo = candidates[i];
        double theta = detail::golden_max_1d(w, lo, hi);
        double xi;
        double ll = detail::gpd_profile(w, theta, &xi);
        if (ll > best_ll) {
            best_ll = ll;
            best_xi = xi;
            best_beta = xi / theta;
            at_boundary = theta < -0.999 / wmax;
        }
    }
    if (!std::isfinite(best_ll))
        throw numeric_error("gpd_fit_mle: likelihood not finite at any candidate");
    if (at_boundary)
        throw numeric_error("gpd_fit_mle: optimum at the theta = -1/max(w) boundary; fit unreliable");

    GpdFit fit;
    fit.xi = best_xi;
    fit.beta = best_beta;
    fit.u = u;
    fit.n_exceed = w.size();
    fit.low_confidence = w.size() < 30;

    // observed information via central differences on the full likelihood
    double hx = 1e-4 * std::max(std::abs(best_xi), 0.1);
    double hb = 1e-4 * best_beta;
    auto ll = [&](double xi, double beta) { return detail::gpd_loglik(w, xi, beta); };
    double f0 = ll(best_xi, best_beta);
    double dxx = (ll(best_xi + hx, best_beta) - 2 * f0 + ll(best_xi - hx, best_beta)) / (hx * hx);
    double dbb = (ll(best_xi, best_beta + hb) - 2 * f0 + ll(best_xi, best_beta - hb)) / (hb * hb);
    double dxb = (ll(best_xi + hx, best_beta + hb) - ll(best_xi + hx, best_beta - hb) -
                  ll(best_xi - hx, best_beta + hb) + ll(best_xi - hx, best_beta - hb)) /
                 (4 * hx * hb);
    double det = dxx * dbb - dxb * dxb;
    if (std::isfinite(det) && det > 0.0 && dxx < 0.0) {
        fit.stderrs = {std::sqrt(-dbb / det), std::sqrt(-dxx / det)};
    } else {
        // asymptotic covariance, valid for xi > -1/2
        double n = static_cast<double>(w.size());
        fit.stderrs = {std::sqrt((1.0 + best_xi) * (1.0 + best_xi) / n),
                       std::sqrt(2.0 * best_beta * best_beta * (1.0 + best_xi) / n)};
    }
    return fit;
}

// Frechet calibration of the n-sample maximum of a Pareto tail, with the
// exact max law alongside for preasymptotic comparison.
struct FrechetMax {
    double alpha = 0.0;
    double L = 0.0;
    std::int64_t n = 0;
    double beta = 0.0;  // L * n^{1/alpha}

    double frechet_cdf(double x) const {
        if (!(x > 0.0)) return 0.0;
        return std::exp(-std::pow(beta, alpha) * std::pow(x, -alpha));
    }
    double frechet_pdf(double x) const {
        if (!(x > 0.0)) return 0.0;
        double ba = std::pow(beta, alpha);
        return alpha * ba * std::pow(x, -alpha - 1.0) * std::exp(-ba * std::pow(x, -alpha));
    }
    double exact_cdf(double x) const {
        if (!(x > L)) return 0.0;
        return std::pow(1.0 - std::pow(L / x, alpha), static_cast<double>(n));
    }
    double exact_pdf(double x) const {
        if (!(x > L)) return 0.0;
        double F = 1.0 - std::pow(L / x, alpha);
        double f = alpha * std::pow(L, alpha) * std::pow(x, -alpha - 1.0);
        return static_cast<double>(n) * std::pow(F, static_cast<double>(n - 1)) * f;
    }
};

inline FrechetMax frechet_max_calibration(double alpha, double L, std::int64_t n) {
    if (!(alpha > 0.0) || !(L > 0.0) || n < 1)
        throw domain_error("frechet_max_calibration requires alpha > 0, L > 0, n >= 1");
    FrechetMax f;
    f.alpha = alpha;
    f.L = L;
    f.n = n;
    f.beta = L * std::pow(static_cast<double>(n), 1.0 / alpha);
    return f;
}

// exact density of the maximum of n standard Gaussians
struct GaussianMaxDensity {
    std::int64_t n = 1;
    double operator()(double x) const {
        return static_cast<double>(n) * special::norm_pdf(x) *
               std::pow(special::norm_cdf(x), static_cast<double>(n - 1));
    }
};

inline GaussianMaxDensity gaussian_exact_max_density(std::int64_t n) {
    if (n < 1) throw domain_error("gaussian_exact_max_density requires n >= 1");
    return GaussianMaxDensity{n};
}

// p-th moment hidden above K: alpha L^alpha K^{p-alpha}/(alpha-p); at p=0 the
// exceedance probability (L/K)^alpha
inline double hidden_tail_moment(double alpha, double L, double K, double p) {
    if (!(alpha > 0.0) || !(L > 0.0)) throw domain_error("hidden_tail_moment requires alpha > 0, L > 0");
    if (!(K > L)) throw domain_error("hidden_tail_moment requires K > L");
    if (p < 0.0) throw domain_error("hidden_tail_moment requires p >= 0");
    if (p >= alpha) throw numeric_error("hidden_tail_moment: p >= alpha, moment above K is infinite");
    if (p == 0.0) return std::pow(L / K, alpha);
    return alpha * std::pow(L, alpha) * std::pow(K, p - alpha) / (alpha - p);
}

// density of the p-th moment mass above the maximum of an n-sample; at p=0
// exactly Exp(n) regardless of alpha
struct HiddenTailDensity {
    int n = 0;
    double p = 0.0;
    double alpha = 0.0;
    double L = 1.0;
    double c = 1.0;  // L^{alpha p/(p-alpha)}

    double operator()(double z) const {
        if (!(z > 0.0)) return 0.0;
        double w = z * (1.0 - p / alpha);
        double e1 = p / (alpha - p);
        double e2 = alpha / (alpha - p);
        return n * c * std::pow(w, e1) * std::exp(-n * c * std::pow(w, e2));
    }
};

inline HiddenTailDensity hidden_tail_density(int n, double p, double alpha, double L) {
    if (n < 1) throw domain_error("hidden_tail_density requires n >= 1");
    if (!(alpha > 0.0) || !(L > 0.0)) throw domain_error("hidden_tail_density requires alpha > 0, L > 0");
    if (p < 0.0 || p >= alpha) throw domain_error("hidden_tail_density requires 0 <= p < alpha");
    HiddenTailDensity d;
    d.n = n;
    d.p = p;
    d.alpha = alpha;
    d.L = L;
    d.c = (p == 0.0) ? 1.0 : std::pow(L, alpha * p / (p - alpha));
    return d;
}

// Mean of a Pareto with a stochastic tail exponent: Jensen lifts the mean
// above the fixed-exponent value.
inline double stochastic_alpha_mean(const std::string& kind, double alpha0, double spread,
                                    double b_or_floor, double lambda_scale) {
    if (!(lambda_scale > 0.0)) throw domain_error("stochastic_alpha_mean requires lambda_scale > 0");
    if (spread < 0.0) throw domain_error("stochastic_alpha_mean requires spread >= 0");
    if (kind == "lognormal") {
        double b = b_or_floor;
        if (!(alpha0 > b)) throw domain_error("stochastic_alpha_mean requires alpha0 > b");
        double s2 = spread * spread;
        return lambda_scale * (alpha0 + std::exp(s2) - b) / (alpha0 - b);
    }
    if (kind == "gamma") {
        double s = spread;
        if (!(alpha0 > b_or_floor)) throw domain_error("stochastic_alpha_mean requires alpha0 > floor");
        if (!(alpha0 - s - 1.0 > 0.0))
            throw domain_error("stochastic_alpha_mean (gamma) requires alpha0 - spread - 1 > 0");
        double corr = (s == 0.0) ? 0.0
                                 : s * s / ((alpha0 - 1.0) * (alpha0 - s - 1.0) * (alpha0 + s - 1.0));
        return lambda_scale * (alpha0 / (alpha0 - 1.0) + corr);
    }
    throw domain_error("stochastic_alpha_mean: kind must be lognormal or gamma");
}

}  // namespace ht::tailfit

#endif  // HT_TAILFIT_HPP
