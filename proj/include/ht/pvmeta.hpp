#ifndef HT_PVMETA_HPP
#define HT_PVMETA_HPP

// Meta-distribution of p-values across statistically identical studies: exact
// finite-n density from the Student-T test construction, the large-n limit,
// its CDF, and the min-of-m (p-hacking) distribution.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "ht/common.hpp"
#include "ht/dists.hpp"
#include "ht/parallel.hpp"
#include "ht/quad.hpp"
#include "ht/rng.hpp"
#include "ht/special.hpp"

namespace ht::pvmeta {

struct PvMetaSpec {
    double p_median = 0.0;
    std::optional<int> n;  // degrees of freedom; empty means the limit form
};

inline void validate(const PvMetaSpec& spec) {
    if (!(spec.p_median > 0.0) || !(spec.p_median < 1.0) || spec.p_median == 0.5)
        throw domain_error("PvMetaSpec requires p_median in (0,1), != 1/2");
    if (spec.n && *spec.n < 2) throw domain_error("PvMetaSpec requires n >= 2");
}

namespace detail {

// finite-n density as a ratio of Student-T densities at the inverse-survival
// point; algebraically identical to the two-branch incomplete-beta form
inline double density_finite_t_ratio(double p, double p_median, int n) {
    double nu = static_cast<double>(n);
    double zbar = special::student_t_isf(p_median, nu);
    double zp = special::student_t_isf(p, nu);
    return special::student_t_pdf(zp - zbar, nu) / special::student_t_pdf(zp, nu);
}

// the printed two-branch form via inverse regularized incomplete betas
inline double density_finite_lambda(double p, double p_median, int n) {
    double nu = static_cast<double>(n);
    double half = 0.5;
    double lamM = special::inv_reg_incomplete_beta(1.0 - 2.0 * p_median, half, nu / 2.0);
    double expo = (nu + 1.0) / 2.0;
    if (p < 0.5) {
        double lam = special::inv_reg_incomplete_beta(2.0 * p, nu / 2.0, half);
        double N = (1.0 - lamM) + lam * lamM -
                   2.0 * std::sqrt(lam * (1.0 - lam) * lamM * (1.0 - lamM));
        return std::pow((1.0 - lamM) / N, expo);
    }
    double lam2 = special::inv_reg_incomplete_beta(2.0 * p - 1.0, half, nu / 2.0);
    double M = 1.0 - lam2 * lamM + 2.0 * std::sqrt(lam2 * (1.0 - lam2) * lamM * (1.0 - lamM));
    return std::pow((1.0 - lamM) / M, expo);
}

inline double density_limit(double p, double p_median) {
    double u = special::erfc_inv(2.0 * p);
    double um = special::erfc_inv(2.0 * p_median);
    return std::exp(-um * (um - 2.0 * u));
}

}  // namespace detail

inline double pv_density(double p, const PvMetaSpec& spec) {
    validate(spec);
    if (!(p > 0.0) || !(p < 1.0)) throw domain_error("pv_density requires p in (0,1)");
    if (!spec.n) return detail::density_limit(p, spec.p_median);
    // the p = 1/2 branch point is removable; take it from the t-ratio form
    if (p == 0.5) return detail::density_finite_t_ratio(p, spec.p_median, *spec.n);
    return detail::density_finite_lambda(p, spec.p_median, *spec.n);
}

// t-ratio evaluation of the same finite-n density, kept as a cross-check
inline double pv_density_t_ratio(double p, const PvMetaSpec& spec) {
    validate(spec);
    if (!spec.n) throw domain_error("pv_density_t_ratio requires a finite n");
    if (!(p > 0.0) || !(p < 1.0)) throw domain_error("pv_density_t_ratio requires p in (0,1)");
    return detail::density_finite_t_ratio(p, spec.p_median, *spec.n);
}

// limiting CDF: 1/2 erfc(erfc^-1(2k) - erfc^-1(2 p_median))
inline double pv_cdf(double k, double p_median) {
    if (!(k > 0.0) || !(k < 1.0)) throw domain_error("pv_cdf requires k in (0,1)");
    if (!(p_median > 0.0) || !(p_median < 1.0)) throw domain_error("pv_cdf requires p_median in (0,1)");
    return 0.5 * std::erfc(special::erfc_inv(2.0 * k) - special::erfc_inv(2.0 * p_median));
}

// finite-n CDF through the same T construction
inline double pv_cdf_finite(double k, const PvMetaSpec& spec) {
    validate(spec);
    if (!spec.n) throw domain_error("pv_cdf_finite requires a finite n");
    if (!(k > 0.0) || !(k < 1.0)) throw domain_error("pv_cdf_finite requires k in (0,1)");
    double nu = static_cast<double>(*spec.n);
    double zbar = special::student_t_isf(spec.p_median, nu);
    return special::student_t_sf(special::student_t_isf(k, nu) - zbar, nu);
}

// density of the smallest of m p-values under the limit meta-distribution
inline double pv_min_density(double p, double p_median, int m) {
    if (m < 1) throw domain_error("pv_min_density requires m >= 1");
    if (!(p > 0.0) || !(p < 1.0)) throw domain_error("pv_min_density requires p in (0,1)");
    double phi = detail::density_limit(p, p_median);
    if (m == 1) return phi;
    double F = pv_cdf(p, p_median);
    return m * phi * std::pow(1.0 - F, m - 1);
}

// E[min of m p-values] under the limit meta-distribution, integrated in
// u = erfc^{-1}(2p) coordinates where the integrand is a smooth Gaussian
inline double pv_min_expectation(double p_median, int m) {
    if (m < 1) throw domain_error("pv_min_expectation requires m >= 1");
    if (!(p_median > 0.0) || !(p_median < 1.0))
        throw domain_error("pv_min_expectation requires p_median in (0,1)");
    auto integrand = [&](double u) {
        double p = 0.5 * std::erfc(u);
        if (!(p > 0.0) || !(p < 1.0)) return 0.0;
        return p * pv_min_density(p, p_median, m) * std::exp(-u * u) / std::sqrt(M_PI);
    };
    double right = quad::integrate_to_inf(integrand, 0.0, 1e-12);
    double left = quad::integrate_to_inf([&](double u) { return integrand(-u); }, 0.0, 1e-12);
    return right + left;
}

// mean of the limit meta-distribution (the "true" p_s behind a median p_M)
inline double pv_mean_limit(double p_median) {
    if (!(p_median > 0.0) || !(p_median < 1.0)) throw domain_error("pv_mean_limit requires p_median in (0,1)");
    return 0.5 * std::erfc(special::erfc_inv(2.0 * p_median) / std::sqrt(2.0));
}

// small-p log-expansion fast path; keeps 5% relative accuracy only on
// p in [1e-6, 0.05] with p_median in [0.001, 0.05]
inline double pv_density_small(double p, double p_median) {
    constexpr double k2pi = 2.0 * M_PI;
    if (!(p > 0.0) || !(p < 1.0 / k2pi)) throw domain_error("pv_density_small requires p in (0, 1/(2 pi))");
    if (!(p_median > 0.0) || !(p_median < 1.0 / k2pi))
        throw domain_error("pv_density_small requires p_median in (0, 1/(2 pi))");
    auto logterm = [&](double q) { return -std::log(k2pi * std::log(1.0 / (k2pi * q * q))) - 2.0 * std::log(q); };
    double A = logterm(p);
    double B = logterm(p_median);
    return std::sqrt(k2pi) * p_median * std::sqrt(std::log(1.0 / (k2pi * p_median * p_median))) *
           std::exp(std::sqrt(A) * std::sqrt(B));
}

// Draw T = zbar + t_n with zbar set so the median one-tailed p equals
// p_median, then map back through the survival function. Sharded, so results
// do not depend on the worker count.
inline Sample pv_simulate(double p_median, int n, std::size_t reps, std::uint64_t seed,
                          unsigned workers = 1) {
    PvMetaSpec spec{p_median, n};
    validate(spec);
    if (reps < 1) throw domain_error("pv_simulate requires reps >= 1");
    double nu = static_cast<double>(n);
    double zbar = special::student_t_isf(p_median, nu);
    Sample out;
    out.name = "pvalues";
    out.values.resize(reps);
    auto plan = parallel::plan_shards(reps);
    parallel::run_shards(plan.count, workers, [&](std::size_t s) {
        rng::Counter g(seed, s);
        std::size_t begin = plan.begin(s), m = plan.size(s);
        for (std::size_t i = 0; i < m; ++i) {
            dists::StudentT t{nu, 1.0, 0.0};
            double T = zbar + dists::draw(t, g);
            out.values[begin + i] = special::student_t_sf(T, nu);
        }
    });
    return out;
}

}  // namespace ht::pvmeta

#endif  // HT_PVMETA_HPP
