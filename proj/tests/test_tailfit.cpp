#include <gtest/gtest.h>

#include <cmath>

#include "ht/dists.hpp"
#include "ht/quad.hpp"
#include "ht/rng.hpp"
#include "ht/tailfit.hpp"

using namespace ht;

namespace {

Sample make(std::vector<double> v) {
    Sample s;
    s.values = std::move(v);
    return s;
}

}  // namespace

TEST(ParetoMle, HandComputed) {
    auto fit = tailfit::pareto_mle(make({2.0, 4.0, 8.0}), 1.0);
    double slog = std::log(2.0) + std::log(4.0) + std::log(8.0);
    EXPECT_NEAR(fit.alpha_hat, 3.0 / slog, 1e-13);
    EXPECT_EQ(fit.n_exceed, 3u);
    EXPECT_NEAR(fit.stderr_, fit.alpha_hat / std::sqrt(3.0), 1e-13);
    EXPECT_FALSE(fit.debiased);
    auto deb = tailfit::pareto_mle(make({2.0, 4.0, 8.0}), 1.0, true);
    EXPECT_NEAR(deb.alpha_hat, 2.0 / slog, 1e-13);
    EXPECT_TRUE(deb.debiased);
}

TEST(ParetoMle, ScaleEquivariance) {
    auto s = dists::sample(dists::Dist(dists::ParetoI{1.7, 1.0}), 20000, 3);
    auto base = tailfit::pareto_mle(s, 1.0);
    Sample scaled = s;
    for (auto& x : scaled.values) x *= 100.0;
    auto fit = tailfit::pareto_mle(scaled, 100.0);
    EXPECT_NEAR(fit.alpha_hat, base.alpha_hat, 1e-12);
}

TEST(ParetoMle, RecoversTruthAndErrors) {
    auto s = dists::sample(dists::Dist(dists::ParetoI{2.0, 1.0}), 100000, 17);
    auto fit = tailfit::pareto_mle(s, 1.0);
    EXPECT_NEAR(fit.alpha_hat, 2.0, 4.0 * 2.0 / std::sqrt(100000.0));
    EXPECT_NEAR(tailfit::plugin_pareto_mean(fit), 2.0, 0.03);
    EXPECT_THROW(tailfit::pareto_mle(s, -1.0), domain_error);
    EXPECT_THROW(tailfit::pareto_mle(make({0.5, 0.6}), 1.0), data_error);  // no exceedances
    tailfit::TailFit bad;
    bad.alpha_hat = 0.9;
    bad.L = 1.0;
    EXPECT_THROW(tailfit::plugin_pareto_mean(bad), domain_error);
}

TEST(HillSweep, OrderStatisticThresholds) {
    auto fits = tailfit::hill_sweep(make({1.0, 2.0, 4.0, 8.0}), {2});
    ASSERT_EQ(fits.size(), 1u);
    // threshold is the third-largest value (2), so two exceedances
    EXPECT_EQ(fits[0].n_exceed, 2u);
    EXPECT_NEAR(fits[0].L, 2.0, 1e-15);
    EXPECT_NEAR(fits[0].alpha_hat, 2.0 / (std::log(4.0) + std::log(2.0)), 1e-13);
    EXPECT_THROW(tailfit::hill_sweep(make({1.0, 2.0, 3.0}), {1}), domain_error);
    EXPECT_THROW(tailfit::hill_sweep(make({1.0, 2.0, 3.0}), {3}), domain_error);
}

TEST(HillSweep, StabilizesNearTruth) {
    auto s = dists::sample(dists::Dist(dists::ParetoI{1.5, 1.0}), 50000, 29);
    auto fits = tailfit::hill_sweep(s, {100, 1000, 5000});
    for (const auto& f : fits) EXPECT_NEAR(f.alpha_hat, 1.5, 0.15);
}

TEST(AlphaSamplingDensity, FrozenSpots) {
    auto raw = tailfit::alpha_sampling_density(2.0, 5, std::nullopt, false);
    EXPECT_NEAR(raw(2.2), 0.390109787517867, 1e-12);
    EXPECT_NEAR(raw(2.0), 0.438668424419627, 1e-12);
    auto deb = tailfit::alpha_sampling_density(2.0, 5, std::nullopt, true);
    EXPECT_NEAR(deb(2.0), 0.390733629626329, 1e-12);
    auto deb2 = tailfit::alpha_sampling_density(1.2, 12, std::nullopt, true);
    EXPECT_NEAR(deb2(1.1), 1.24764998737578, 1e-11);
    auto trunc = tailfit::alpha_sampling_density(2.0, 5, 1.3, true);
    EXPECT_NEAR(trunc(2.0), 0.531604210827611, 1e-12);
}

TEST(AlphaSamplingDensity, NormalizesToOne) {
    for (bool debias : {false, true}) {
        auto f = tailfit::alpha_sampling_density(2.0, 8, std::nullopt, debias);
        double mass = quad::integrate_to_inf([&](double a) { return f(a); }, f.lower, 1e-11);
        EXPECT_NEAR(mass, 1.0, 1e-7);
    }
    auto t = tailfit::alpha_sampling_density(2.0, 8, 1.4, true);
    double mass = quad::integrate_to_inf([&](double a) { return t(a); }, 1.4, 1e-11);
    EXPECT_NEAR(mass, 1.0, 1e-7);
}

TEST(AlphaSamplingDensity, DebiasedMeanIsAlpha) {
    // with the (n-1) scaling the sampling density has mean alpha_true
    auto f = tailfit::alpha_sampling_density(1.7, 9, std::nullopt, true);
    double m = quad::integrate_to_inf([&](double a) { return a * f(a); }, f.lower, 1e-11);
    EXPECT_NEAR(m, 1.7, 1e-6);
}

TEST(GpdFit, RecoversSimulatedShape) {
    // inverse-CDF draws at xi = 0.3, beta = 2
    std::vector<double> w(5000);
    rng::Counter g(99);
    for (auto& x : w) x = 2.0 * (std::pow(1.0 - g.u01(), -0.3) - 1.0) / 0.3;
    auto fit = tailfit::gpd_fit_mle(make(w), 0.0);
    EXPECT_NEAR(fit.xi, 0.3, 0.08);
    EXPECT_NEAR(fit.beta, 2.0, 0.15);
    EXPECT_GT(fit.stderrs.first, 0.0);
    EXPECT_GT(fit.stderrs.second, 0.0);
    EXPECT_FALSE(fit.low_confidence);
    EXPECT_EQ(fit.n_exceed, 5000u);
}

TEST(GpdFit, ExponentialLimit) {
    auto s = dists::sample(dists::Dist(dists::Exponential{0.5}), 5000, 7);
    auto fit = tailfit::gpd_fit_mle(s, 0.0);
    EXPECT_NEAR(fit.xi, 0.0, 0.06);
    EXPECT_NEAR(fit.beta, 2.0, 0.15);
}

TEST(GpdFit, ParetoExceedances) {
    // exceedances of a Pareto(alpha) over u are GPD with xi = 1/alpha, beta = u/alpha
    auto s = dists::sample(dists::Dist(dists::ParetoI{2.0, 1.0}), 10000, 57);
    auto fit = tailfit::gpd_fit_mle(s, 1.5);
    EXPECT_NEAR(fit.xi, 0.5, 0.1);
    EXPECT_NEAR(fit.beta, 0.75, 0.12);
    EXPECT_EQ(fit.u, 1.5);
}

TEST(GpdFit, FlagsAndErrors) {
    std::vector<double> few;
    rng::Counter g(5);
    for (int i = 0; i < 20; ++i) few.push_back(g.exponential());
    auto fit = tailfit::gpd_fit_mle(make(few), 0.0);
    EXPECT_TRUE(fit.low_confidence);
    EXPECT_THROW(tailfit::gpd_fit_mle(make({1.0, 2.0}), 0.0), data_error);
}

TEST(FrechetMax, CalibrationAndConvergence) {
    auto f = tailfit::frechet_max_calibration(2.0, 1.0, 1000);
    EXPECT_NEAR(f.beta, std::sqrt(1000.0), 1e-12);
    // the exact law of the maximum converges to the Frechet calibration
    for (double x : {20.0, 40.0, 80.0}) {
        EXPECT_NEAR(f.exact_cdf(x), f.frechet_cdf(x), 0.002) << "x=" << x;
    }
    // densities integrate to one
    double mass = quad::integrate_to_inf([&](double x) { return f.frechet_pdf(x); }, 0.0, 1e-11);
    EXPECT_NEAR(mass, 1.0, 1e-7);
    double emass = quad::integrate_to_inf([&](double x) { return f.exact_pdf(x); }, 1.0, 1e-11);
    EXPECT_NEAR(emass, 1.0, 1e-7);
    EXPECT_THROW(tailfit::frechet_max_calibration(0.0, 1.0, 10), domain_error);
}

TEST(GaussianMax, FrozenModeAndMean) {
    auto f100 = tailfit::gaussian_exact_max_density(100);
    auto f1000 = tailfit::gaussian_exact_max_density(1000);
    // frozen mode locations: the density is locally maximal there
    EXPECT_GT(f100(2.37488814754), f100(2.37488814754 - 1e-3));
    EXPECT_GT(f100(2.37488814754), f100(2.37488814754 + 1e-3));
    EXPECT_GT(f1000(3.11526015481), f1000(3.11526015481 - 1e-3));
    EXPECT_GT(f1000(3.11526015481), f1000(3.11526015481 + 1e-3));
    // frozen means via quadrature
    double m100 = quad::integrate([&](double x) { return x * f100(x); }, -6.0, 10.0, 1e-12);
    EXPECT_NEAR(m100, 2.50759363644, 1e-8);
    double m1000 = quad::integrate([&](double x) { return x * f1000(x); }, -6.0, 10.0, 1e-12);
    EXPECT_NEAR(m1000, 3.24143576913, 1e-8);
    double mass = quad::integrate([&](double x) { return f1000(x); }, -6.0, 10.0, 1e-12);
    EXPECT_NEAR(mass, 1.0, 1e-9);
}

TEST(HiddenTail, MomentClosedForm) {
    EXPECT_NEAR(tailfit::hidden_tail_moment(2.0, 1.0, 10.0, 0.0), 0.01, 1e-15);
    EXPECT_NEAR(tailfit::hidden_tail_moment(2.0, 1.0, 10.0, 1.0), 0.2, 1e-13);
    // alpha L^alpha K^{p-alpha}/(alpha-p)
    EXPECT_NEAR(tailfit::hidden_tail_moment(1.7, 2.0, 50.0, 0.8),
                1.7 * std::pow(2.0, 1.7) * std::pow(50.0, 0.8 - 1.7) / (1.7 - 0.8), 1e-13);
    EXPECT_THROW(tailfit::hidden_tail_moment(2.0, 1.0, 10.0, 2.0), numeric_error);
    EXPECT_THROW(tailfit::hidden_tail_moment(2.0, 1.0, 10.0, 2.5), numeric_error);
    EXPECT_THROW(tailfit::hidden_tail_moment(2.0, 1.0, 0.5, 1.0), domain_error);  // K <= L
}

TEST(HiddenTail, DensityFrozenSpots) {
    auto g = tailfit::hidden_tail_density(10, 1.0, 2.0, 1.0);
    EXPECT_NEAR(g(0.05), 0.248442372656, 1e-11);
    EXPECT_NEAR(g(0.2), 0.904837418036, 1e-11);
    EXPECT_NEAR(g(1.0), 0.410424993119, 1e-11);
    // p = 0 reduces to Exp(n)
    auto g0 = tailfit::hidden_tail_density(10, 0.0, 2.0, 1.0);
    EXPECT_NEAR(g0(0.2), 10.0 * std::exp(-2.0), 1e-12);
    EXPECT_THROW(tailfit::hidden_tail_density(10, 2.0, 2.0, 1.0), domain_error);
}

TEST(HiddenTail, DensityNormalizes) {
    auto g = tailfit::hidden_tail_density(10, 1.0, 2.0, 1.0);
    double mass = quad::integrate_to_inf([&](double z) { return g(z); }, 0.0, 1e-11);
    EXPECT_NEAR(mass, 1.0, 1e-7);
}

TEST(HiddenTail, ExponentialApproximationError) {
    // z = (L/max)^alpha is exactly Beta(1,n); the Exp(n) approximation has
    // sup-norm CDF error of order 0.27/n, so n >= 100 keeps it below 0.5%
    for (int n : {20, 100, 400}) {
        double worst = 0.0;
        for (int i = 1; i < 2000; ++i) {
            double z = i / 2000.0;
            double exact = 1.0 - std::pow(1.0 - z, n);
            double approx = 1.0 - std::exp(-static_cast<double>(n) * z);
            worst = std::max(worst, std::abs(exact - approx));
        }
        EXPECT_NEAR(worst, 0.27 / n, 0.4 * 0.27 / n) << "n=" << n;
    }
}

TEST(StochasticAlpha, LognormalJensenLift) {
    EXPECT_NEAR(tailfit::stochastic_alpha_mean("lognormal", 2.0, 0.5, 1.0, 1.0),
                2.28402541669, 1e-9);
    EXPECT_NEAR(tailfit::stochastic_alpha_mean("lognormal", 3.0, 0.3, 1.0, 1.0),
                1.54708714185, 1e-9);
    EXPECT_NEAR(tailfit::stochastic_alpha_mean("lognormal", 2.0, 1.0, 1.0, 1.0),
                3.71828182846, 1e-9);
    // zero spread recovers the deterministic mean lambda alpha0/(alpha0 - b)
    EXPECT_NEAR(tailfit::stochastic_alpha_mean("lognormal", 2.0, 0.0, 1.0, 1.0), 2.0, 1e-12);
    EXPECT_THROW(tailfit::stochastic_alpha_mean("lognormal", 1.0, 0.5, 1.0, 1.0), domain_error);
}

TEST(StochasticAlpha, GammaJensenLift) {
    EXPECT_NEAR(tailfit::stochastic_alpha_mean("gamma", 3.0, 0.5, 1.0, 1.0), 1.533333333333, 1e-9);
    EXPECT_NEAR(tailfit::stochastic_alpha_mean("gamma", 2.5, 0.8, 1.0, 1.0),
                2.5 / 1.5 + 0.265010351967, 1e-9);
    // spread always lifts the mean above the deterministic value
    EXPECT_GT(tailfit::stochastic_alpha_mean("gamma", 3.0, 0.5, 1.0, 1.0), 1.5);
    EXPECT_THROW(tailfit::stochastic_alpha_mean("gamma", 2.0, 1.0, 1.0, 1.0), domain_error);
    EXPECT_THROW(tailfit::stochastic_alpha_mean("weibull", 3.0, 0.5, 1.0, 1.0), domain_error);
}
