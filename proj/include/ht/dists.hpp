#ifndef HT_DISTS_HPP
#define HT_DISTS_HPP

// Test-bed distributions: samplers plus the analytic tail/kurtosis forms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ht/common.hpp"
#include "ht/quad.hpp"
#include "ht/rng.hpp"
#include "ht/special.hpp"

namespace ht::dists {

// survival S(x) = (L/x)^alpha on x >= L; mean L*alpha/(alpha-1) iff alpha > 1
struct ParetoI {
    double alpha;
    double L = 1.0;
};

// symmetric about `location`; alpha = 1 is Cauchy
struct StudentT {
    double alpha;
    double scale = 1.0;
    double location = 0.0;
};

struct Lognormal {
    double mu = 0.0;
    double sigma = 1.0;
};

// characteristic function exp(i mu t - |sigma t|^alpha (1 - i beta sgn(t) tan(pi alpha/2)));
// alpha_s = 2 is a Gaussian with variance 2 sigma^2 under this convention
struct StableParams {
    double alpha_s;
    double beta = 0.0;
    double mu = 0.0;
    double sigma = 1.0;
};

// Gaussian whose variance switches between sigma^2(1+a) (prob p) and
// sigma^2(1+b), b = -a p/(1-p), preserving the unconditional variance
struct TwoStateGaussian {
    double sigma = 1.0;
    double a = 0.0;
    double p = 0.5;
};

struct Exponential {
    double lambda = 1.0;
};

struct Gaussian {
    double mu = 0.0;
    double sigma = 1.0;
};

// equal-weight mix of N(-d/2, sigma^2) and N(+d/2, sigma^2)
struct BimodalGaussian {
    double d = 0.0;
    double sigma = 1.0;
};

using Dist = std::variant<ParetoI, StudentT, Lognormal, StableParams, TwoStateGaussian,
                          Exponential, Gaussian, BimodalGaussian>;

inline void validate(const ParetoI& d) {
    if (!(d.alpha > 0.0) || !(d.L > 0.0)) throw domain_error("ParetoI requires alpha > 0, L > 0");
}
inline void validate(const StudentT& d) {
    if (!(d.alpha > 0.0) || !(d.scale > 0.0)) throw domain_error("StudentT requires alpha > 0, scale > 0");
}
inline void validate(const Lognormal& d) {
    if (!(d.sigma > 0.0)) throw domain_error("Lognormal requires sigma > 0");
}
inline void validate(const StableParams& d) {
    if (!(d.alpha_s > 0.0) || d.alpha_s > 2.0 || std::abs(d.beta) > 1.0 || !(d.sigma > 0.0))
        throw domain_error("StableParams requires alpha_s in (0,2], |beta| <= 1, sigma > 0");
}
inline void validate(const TwoStateGaussian& d) {
    if (!(d.sigma > 0.0) || d.a < 0.0 || !(d.p > 0.0) || !(d.p < 1.0))
        throw domain_error("TwoStateGaussian requires sigma > 0, a >= 0, p in (0,1)");
    double b = -d.a * d.p / (1.0 - d.p);
    if (1.0 + b < 0.0) throw domain_error("TwoStateGaussian: variance-preserving b drops below -1");
}
inline void validate(const Exponential& d) {
    if (!(d.lambda > 0.0)) throw domain_error("Exponential requires lambda > 0");
}
inline void validate(const Gaussian& d) {
    if (!(d.sigma > 0.0)) throw domain_error("Gaussian requires sigma > 0");
}
inline void validate(const BimodalGaussian& d) {
    if (!(d.sigma > 0.0) || d.d < 0.0) throw domain_error("BimodalGaussian requires sigma > 0, d >= 0");
}
inline void validate(const Dist& d) {
    std::visit([](const auto& x) { validate(x); }, d);
}

// ---- single draws -----------------------------------------------------------

inline double draw(const ParetoI& d, rng::Counter& g) {
    return d.L * std::pow(1.0 - g.u01(), -1.0 / d.alpha);
}

inline double draw(const StudentT& d, rng::Counter& g) {
    // polar form: sqrt(nu (U^{-2/nu} - 1)) cos(2 pi V) is exactly t_nu
    double u = g.u01p();
    double v = g.u01();
    double t = std::sqrt(d.alpha * (std::pow(u, -2.0 / d.alpha) - 1.0)) *
               std::cos(6.283185307179586 * v);
    return d.location + d.scale * t;
}

inline double draw(const Lognormal& d, rng::Counter& g) {
    return std::exp(d.mu + d.sigma * g.gaussian());
}

inline double draw(const StableParams& d, rng::Counter& g) {
    // Chambers-Mallows-Stuck, in the parameterization of the characteristic
    // function above (continuous in alpha except the alpha = 1 log correction)
    double a = d.alpha_s;
    double V = M_PI * (g.u01p() - 0.5);
    double W = -std::log(g.u01p());
    if (std::abs(a - 1.0) < 1e-12) {
        double x = (2.0 / M_PI) * ((M_PI / 2.0 + d.beta * V) * std::tan(V) -
                                   d.beta * std::log((W * std::cos(V)) / (M_PI / 2.0 + d.beta * V)));
        return d.sigma * x + (2.0 / M_PI) * d.beta * d.sigma * std::log(d.sigma) + d.mu;
    }
    double tb = d.beta * std::tan(M_PI * a / 2.0);
    double B = std::atan(tb) / a;
    double S = std::pow(1.0 + tb * tb, 1.0 / (2.0 * a));
    double x = S * std::sin(a * (V + B)) / std::pow(std::cos(V), 1.0 / a) *
               std::pow(std::cos(V - a * (V + B)) / W, (1.0 - a) / a);
    return d.sigma * x + d.mu;
}

inline double draw(const TwoStateGaussian& d, rng::Counter& g) {
    double b = -d.a * d.p / (1.0 - d.p);
    double mult = (g.u01() < d.p) ? std::sqrt(1.0 + d.a) : std::sqrt(1.0 + b);
    return d.sigma * mult * g.gaussian();
}

inline double draw(const Exponential& d, rng::Counter& g) { return g.exponential() / d.lambda; }

inline double draw(const Gaussian& d, rng::Counter& g) { return d.mu + d.sigma * g.gaussian(); }

inline double draw(const BimodalGaussian& d, rng::Counter& g) {
    double m = (g.u01() < 0.5) ? -0.5 * d.d : 0.5 * d.d;
    return m + d.sigma * g.gaussian();
}

inline double draw(const Dist& d, rng::Counter& g) {
    return std::visit([&](const auto& x) { return draw(x, g); }, d);
}

// deterministic for fixed (dist, n, seed)
inline Sample sample(const Dist& d, std::size_t n, std::uint64_t seed,
                     const std::string& name = "sample") {
    if (n < 1) throw domain_error("sample requires n >= 1");
    validate(d);
    rng::Counter g(seed);
    Sample s;
    s.name = name;
    s.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.values[i] = draw(d, g);
    return s;
}

// ---- analytic means (used for Monte Carlo centering) ------------------------

inline bool has_finite_mean(const Dist& d) {
    if (auto* p = std::get_if<ParetoI>(&d)) return p->alpha > 1.0;
    if (auto* p = std::get_if<StudentT>(&d)) return p->alpha > 1.0;
    if (auto* p = std::get_if<StableParams>(&d)) return p->alpha_s > 1.0;
    return true;
}

inline double analytic_mean(const Dist& d) {
    if (auto* p = std::get_if<ParetoI>(&d)) {
        if (p->alpha <= 1.0) throw domain_error("ParetoI mean undefined for alpha <= 1");
        return p->L * p->alpha / (p->alpha - 1.0);
    }
    if (auto* p = std::get_if<StudentT>(&d)) {
        if (p->alpha <= 1.0) throw domain_error("StudentT mean undefined for alpha <= 1");
        return p->location;
    }
    if (auto* p = std::get_if<Lognormal>(&d)) return std::exp(p->mu + 0.5 * p->sigma * p->sigma);
    if (auto* p = std::get_if<StableParams>(&d)) {
        if (p->alpha_s <= 1.0) throw domain_error("stable mean undefined for alpha_s <= 1");
        return p->mu;
    }
    if (auto* p = std::get_if<Exponential>(&d)) return 1.0 / p->lambda;
    if (auto* p = std::get_if<Gaussian>(&d)) return p->mu;
    if (std::get_if<TwoStateGaussian>(&d)) return 0.0;
    if (std::get_if<BimodalGaussian>(&d)) return 0.0;
    throw domain_error("analytic mean unavailable");
}

// ---- closed forms ------------------------------------------------------------

// kurtosis of the variance-switching Gaussian; 3(a^2+1) in the symmetric case
inline double two_state_kurtosis(double a, double p) {
    if (a < 0.0 || !(p > 0.0) || !(p < 1.0)) throw domain_error("two_state_kurtosis requires a >= 0, p in (0,1)");
    return 3.0 * ((1.0 - a * a) * p - 1.0) / (p - 1.0);
}

// kurtosis of the equal-weight two-Gaussian mean/scale mixture
inline double mixture_kurtosis(double mu1, double mu2, double sigma1, double sigma2) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw domain_error("mixture_kurtosis requires sigmas > 0");
    double d = mu1 - mu2;
    double d2 = d * d;
    double s1 = sigma1 * sigma1;
    double s2 = sigma2 * sigma2;
    double num = d2 * d2 - 6.0 * (s1 - s2) * (s1 - s2);
    double den = d2 + 2.0 * (s1 + s2);
    return 3.0 - 2.0 * num / (den * den);
}

// mean separation at which an unequal-sigma mixture returns to kurtosis 3
inline double mixture_kurtosis_crossover(double sigma1, double sigma2) {
    double hi = std::max(sigma1, sigma2), lo = std::min(sigma1, sigma2);
    return std::pow(6.0, 0.25) * std::sqrt(hi * hi - lo * lo);
}

// the four points where a Gaussian's density response to sigma changes sign
inline std::vector<double> gaussian_crossovers(double mu, double sigma) {
    if (!(sigma > 0.0)) throw domain_error("gaussian_crossovers requires sigma > 0");
    double r17 = std::sqrt(17.0);
    double inner = std::sqrt((5.0 - r17) / 2.0);
    double outer = std::sqrt((5.0 + r17) / 2.0);
    return {mu - outer * sigma, mu - inner * sigma, mu + inner * sigma, mu + outer * sigma};
}

// Student-t analogue; alpha = 3 gives +-sqrt(4 -+ sqrt(13)) s
inline std::vector<double> student_crossovers(double alpha, double s) {
    if (!(alpha > 1.0) || !(s > 0.0)) throw domain_error("student_crossovers requires alpha > 1, s > 0");
    double disc = std::sqrt(17.0 * alpha * alpha + 18.0 * alpha + 1.0);
    double inner = std::sqrt(s * s * (5.0 * alpha + 1.0 - disc) / (2.0 * (alpha - 1.0)));
    double outer = std::sqrt(s * s * (5.0 * alpha + 1.0 + disc) / (2.0 * (alpha - 1.0)));
    return {-outer, -inner, inner, outer};
}

// ratio of standard deviation to mean absolute deviation
inline double std_over_mad(const Dist& d) {
    if (std::get_if<Gaussian>(&d)) return std::sqrt(M_PI / 2.0);
    if (auto* p = std::get_if<ParetoI>(&d)) {
        if (p->alpha <= 2.0) throw domain_error("std_over_mad: variance undefined for alpha <= 2");
        double a = p->alpha;
        return std::pow(a, a - 0.5) / (2.0 * std::sqrt(a - 2.0) * std::pow(a - 1.0, a - 1.0));
    }
    if (auto* p = std::get_if<StudentT>(&d)) {
        if (std::abs(p->alpha - 3.0) > 1e-12)
            throw domain_error("std_over_mad: StudentT supported at alpha = 3 only");
        return M_PI / 2.0;
    }
    throw domain_error("std_over_mad: unsupported distribution");
}

// E|X| of a centered stable law, real part of the complex closed form
inline double stable_mean_abs_dev(const StableParams& p) {
    validate(p);
    if (!(p.alpha_s > 1.0)) throw domain_error("stable_mean_abs_dev requires alpha_s > 1");
    // E|X - EX| is translation invariant, so mu plays no role
    double a = p.alpha_s;
    if (a == 2.0) return 2.0 * p.sigma / std::sqrt(M_PI);  // tan(pi) term vanishes
    std::complex<double> one_ib(1.0, p.beta * std::tan(M_PI * a / 2.0));
    double re = std::real(std::pow(one_ib, 1.0 / a));
    return (2.0 * p.sigma / M_PI) * std::tgamma((a - 1.0) / a) * re;
}

// density of the stable law by inversion of the characteristic function
inline double stable_pdf(double x, const StableParams& p) {
    validate(p);
    double a = p.alpha_s;
    double xs = x - p.mu;
    double tn = (std::abs(a - 1.0) < 1e-12) ? 0.0 : std::tan(M_PI * a / 2.0);
    auto f = [&](double t) {
        double ta = std::pow(p.sigma * t, a);
        return std::exp(-ta) * std::cos(ta * p.beta * tn - t * xs);
    };
    // integrand dies once (sigma t)^alpha ~ 42
    double tmax = std::pow(42.0, 1.0 / a) / p.sigma;
    return quad::integrate(f, 0.0, tmax, 1e-12) / M_PI;
}

// mode of the (unimodal) stable density by golden-section search
inline double stable_mode(const StableParams& p) {
    validate(p);
    double lo = p.mu - 12.0 * p.sigma;
    double hi = p.mu + 12.0 * p.sigma;
    const double phi = 0.6180339887498949;
    double c = hi - phi * (hi - lo);
    double d = lo + phi * (hi - lo);
    double fc = stable_pdf(c, p);
    double fd = stable_pdf(d, p);
    while (hi - lo > 1e-10 * p.sigma) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = stable_pdf(c, p);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = stable_pdf(d, p);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ht::dists

#endif  // HT_DISTS_HPP
