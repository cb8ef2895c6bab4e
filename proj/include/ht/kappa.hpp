#ifndef HT_KAPPA_HPP
#define HT_KAPPA_HPP

// The kappa preasymptotic convergence metric:
//   kappa(n0, n) = 2 - (log n - log n0) / log(M(n)/M(n0)),
// with M(n) = E|S_n - E S_n| the mean absolute deviation of the n-sum.
// 0 for a Gaussian, 2 - alpha for a stable law, 1 at the Cauchy edge.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ht/common.hpp"
#include "ht/dists.hpp"
#include "ht/parallel.hpp"
#include "ht/special.hpp"

namespace ht::kappa {

struct KappaReport {
    int n0 = 1;
    std::vector<int> ns;
    std::vector<double> kappa;      // kappa(n0, n) per entry of ns
    std::vector<double> mc_stderr;  // batch stderr of each kappa entry
    std::vector<std::pair<int, double>> mad_curve;  // (n, M(n)) including n0
};

inline double kappa_from_mad(double m_n0, double m_n, int n0, int n) {
    if (!(m_n0 > 0.0) || !(m_n > 0.0)) throw domain_error("kappa_from_mad requires positive MADs");
    if (n <= n0 || n0 < 1) throw domain_error("kappa_from_mad requires n > n0 >= 1");
    if (m_n == m_n0) throw domain_error("kappa_from_mad: degenerate MAD ratio");
    return 2.0 - (std::log(static_cast<double>(n)) - std::log(static_cast<double>(n0))) /
                     std::log(m_n / m_n0);
}

// Monte Carlo M(n) on a common set of paths, batched for standard errors.
// Centering uses the analytic mean of the summand.
inline KappaReport kappa_empirical(const dists::Dist& dist, int n0, std::vector<int> ns,
                                   std::size_t paths, std::uint64_t seed, unsigned workers = 1) {
    dists::validate(dist);
    if (!dists::has_finite_mean(dist)) throw domain_error("kappa_empirical requires a finite-mean distribution");
    if (n0 < 1) throw domain_error("kappa_empirical requires n0 >= 1");
    if (ns.empty()) throw domain_error("kappa_empirical requires at least one target n");
    for (int n : ns)
        if (n <= n0) throw domain_error("kappa_empirical requires every n > n0");
    if (paths < 100) throw domain_error("kappa_empirical requires paths >= 100");

    double mu = dists::analytic_mean(dist);
    int nmax = n0;
    for (int n : ns) nmax = std::max(nmax, n);

    std::vector<int> checkpoints;
    checkpoints.push_back(n0);
    for (int n : ns) checkpoints.push_back(n);

    auto plan = parallel::plan_shards(paths);
    std::size_t nc = checkpoints.size();
    // per-shard sums of |S_n - n mu| at each checkpoint
    std::vector<std::vector<double>> shard_sums(plan.count, std::vector<double>(nc, 0.0));
    std::vector<std::size_t> shard_n(plan.count, 0);

    parallel::run_shards(plan.count, workers, [&](std::size_t s) {
        rng::Counter g(seed, s);
        std::size_t m = plan.size(s);
        auto& acc = shard_sums[s];
        for (std::size_t p = 0; p < m; ++p) {
            double run = 0.0;
            std::size_t ci = 0;
            for (int k = 1; k <= nmax && ci < nc; ++k) {
                run += dists::draw(dist, g);
                while (ci < nc && checkpoints[ci] == k) {
                    acc[ci] += std::abs(run - k * mu);
                    ++ci;
                }
            }
        }
        shard_n[s] = m;
    });

    // pooled M(n) and per-shard kappa batches for the delta-method stderr
    std::vector<double> mads(nc, 0.0);
    for (std::size_t s = 0; s < plan.count; ++s)
        for (std::size_t c = 0; c < nc; ++c) mads[c] += shard_sums[s][c];
    for (std::size_t c = 0; c < nc; ++c) mads[c] /= static_cast<double>(paths);

    KappaReport rep;
    rep.n0 = n0;
    rep.ns = ns;
    rep.mad_curve.emplace_back(n0, mads[0]);
    for (std::size_t c = 1; c < nc; ++c) rep.mad_curve.emplace_back(checkpoints[c], mads[c]);

    for (std::size_t c = 1; c < nc; ++c) {
        int n = checkpoints[c];
        double dlogn = std::log(static_cast<double>(n) / n0);
        double L = std::log(mads[c] / mads[0]);
        rep.kappa.push_back(2.0 - dlogn / L);
        // batch variance of the per-shard log MAD ratio
        double mv = 0.0, msq = 0.0;
        std::size_t nb = 0;
        for (std::size_t s = 0; s < plan.count; ++s) {
            if (shard_n[s] == 0) continue;
            double ls = std::log((shard_sums[s][c] / shard_n[s]) / (shard_sums[s][0] / shard_n[s]));
            mv += ls;
            msq += ls * ls;
            ++nb;
        }
        mv /= nb;
        double var_batch = (msq / nb - mv * mv) / (nb - 1);
        double se_L = std::sqrt(std::max(0.0, var_batch));
        rep.mc_stderr.push_back(dlogn * se_L / (L * L));
    }
    return rep;
}

// exact for exponential summands
inline double kappa_exponential_exact(double n) {
    if (!(n >= 2.0)) throw domain_error("kappa_exponential_exact requires n >= 2");
    return 2.0 - std::log(n) / (n * std::log(n) - n - std::lgamma(n) + 1.0);
}

// exact for the cubic-tail symmetric Student summand; the denominator term is
// e^n n^{-n} Gamma(n+1, n) = Q(n+1, n) exp(lgamma(n+1) + n - n log n)
inline double kappa_cubic_student_exact(double n) {
    if (!(n >= 2.0)) throw domain_error("kappa_cubic_student_exact requires n >= 2");
    double q = special::gamma_q(n + 1.0, n);
    double d = q * std::exp(std::lgamma(n + 1.0) + n - n * std::log(n)) - 1.0;
    return 2.0 - std::log(n) / std::log(d);
}

// n_v = n_g^{1/(1-kappa1)}: observations needed to match a Gaussian benchmark
inline double equivalent_sample_size(double kappa1, double n_g) {
    if (kappa1 < 0.0 || kappa1 >= 1.0) throw domain_error("equivalent_sample_size requires kappa1 in [0,1)");
    if (!(n_g > 1.0)) throw domain_error("equivalent_sample_size requires n_g > 1");
    return std::pow(n_g, 1.0 / (1.0 - kappa1));
}

// exact kappa(1,2) of the equal-weight two-Gaussian mean mixture with
// separation d; negative once the modes separate enough
inline double kappa_bimodal_exact(double d, double sigma) {
    if (!(sigma > 0.0) || d < 0.0) throw domain_error("kappa_bimodal_exact requires sigma > 0, d >= 0");
    if (d == 0.0) return 0.0;
    double m1 = sigma * std::sqrt(2.0 / M_PI) * std::exp(-d * d / (8.0 * sigma * sigma)) +
                0.5 * d * std::erf(d / (2.0 * std::sqrt(2.0) * sigma));
    double m2 = (sigma / std::sqrt(M_PI)) * (1.0 + std::exp(-d * d / (4.0 * sigma * sigma))) +
                0.5 * d * std::erf(d / (2.0 * sigma));
    return 2.0 - std::log(2.0) / std::log(m2 / m1);
}

}  // namespace ht::kappa

#endif  // HT_KAPPA_HPP
