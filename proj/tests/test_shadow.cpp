#include <gtest/gtest.h>

#include <cmath>

#include "ht/dists.hpp"
#include "ht/quad.hpp"
#include "ht/rng.hpp"
#include "ht/shadow.hpp"

using namespace ht;
using shadow::DualSpec;

namespace {

Sample make(std::vector<double> v) {
    Sample s;
    s.values = std::move(v);
    return s;
}

constexpr DualSpec kWide{1.0, 1000.0, 1.0};

}  // namespace

TEST(DualSpecValidate, AcceptsAndRejects) {
    EXPECT_NO_THROW(shadow::validate(DualSpec{1.0, 100.0, 1.0}));
    EXPECT_NO_THROW(shadow::validate(DualSpec{1.0, 100.0, 50.0}));
    EXPECT_THROW(shadow::validate(DualSpec{0.0, 100.0, 1.0}), domain_error);
    EXPECT_THROW(shadow::validate(DualSpec{2.0, 1.0, 2.0}), domain_error);
    EXPECT_THROW(shadow::validate(DualSpec{2.0, 100.0, 1.0}), domain_error);   // Lstar < L
    EXPECT_THROW(shadow::validate(DualSpec{1.0, 100.0, 100.0}), domain_error);  // Lstar >= H
}

TEST(DualTransform, RoundTripAndShape) {
    for (double y : {1.0, 5.0, 100.0, 999.0}) {
        double z = shadow::dual_transform(y, kWide);
        EXPECT_GE(z, y);  // convex lift: dual dominates the original
        EXPECT_NEAR(shadow::dual_inverse(z, kWide), y, 1e-9 * std::max(1.0, y));
    }
    EXPECT_EQ(shadow::dual_transform(1.0, kWide), 1.0);  // fixed point at L
    // near L the transform is close to the identity
    EXPECT_NEAR(shadow::dual_transform(2.0, kWide), 2.0, 1e-3);
    // approaching H it diverges
    EXPECT_GT(shadow::dual_transform(999.999, kWide), 5000.0);
    EXPECT_THROW(shadow::dual_transform(0.5, kWide), domain_error);
    EXPECT_THROW(shadow::dual_transform(1000.0, kWide), domain_error);
    EXPECT_THROW(shadow::dual_inverse(0.5, kWide), domain_error);
}

TEST(ShadowMean, FrozenSpots) {
    auto sm = [](double alpha, double sigma, double Lstar, double H) {
        return shadow::shadow_mean(DualSpec{Lstar, H, Lstar}, alpha, sigma);
    };
    EXPECT_NEAR(sm(0.5, 1.0, 1.0, 100.0), 12.4766977562255, 1e-10);
    EXPECT_NEAR(sm(0.7, 2.0, 1.0, 100.0), 11.4622079417687, 1e-10);
    EXPECT_NEAR(sm(1.2, 0.5, 1.0, 100.0), 2.74200071329537, 1e-11);
    EXPECT_NEAR(sm(0.53, 11.7, 10.0, 7200.0), 318.832957653245, 1e-9);
    EXPECT_NEAR(sm(2.0, 3.0, 5.0, 500.0), 10.6617109701017, 1e-11);
    EXPECT_NEAR(sm(0.9, 1.0, 2.0, 50.0), 5.72414920891346, 1e-11);
    EXPECT_THROW(sm(0.0, 1.0, 1.0, 100.0), domain_error);
    EXPECT_THROW(sm(0.5, 0.0, 1.0, 100.0), domain_error);
}

TEST(ShadowQuantile, FrozenSpotsAndCdfRoundTrip) {
    EXPECT_NEAR(shadow::shadow_quantile(0.25, kWide, 0.6, 2.0), 1.73725152786, 1e-9);
    EXPECT_NEAR(shadow::shadow_quantile(0.5, kWide, 0.6, 2.0), 3.60375369497, 1e-9);
    EXPECT_NEAR(shadow::shadow_quantile(0.9, kWide, 0.6, 2.0), 53.987566079, 1e-7);
    EXPECT_NEAR(shadow::shadow_quantile(0.99, kWide, 0.6, 2.0), 924.613127837, 1e-7);
    EXPECT_EQ(shadow::shadow_quantile(0.0, kWide, 0.6, 2.0), 1.0);  // at Lstar
    for (double p : {0.1, 0.5, 0.95}) {
        double q = shadow::shadow_quantile(p, kWide, 0.6, 2.0);
        EXPECT_NEAR(shadow::shadow_cdf(q, kWide, 0.6, 2.0), p, 1e-12);
    }
    EXPECT_THROW(shadow::shadow_quantile(1.0, kWide, 0.6, 2.0), domain_error);
    EXPECT_THROW(shadow::shadow_cdf(0.5, kWide, 0.6, 2.0), domain_error);
}

TEST(ExpectedShortfall, FrozenSpotsAndMeanIdentity) {
    EXPECT_NEAR(shadow::shadow_expected_shortfall(1.0, kWide, 0.6, 2.0), 37.2277075009085, 1e-9);
    EXPECT_NEAR(shadow::shadow_expected_shortfall(2.0, kWide, 0.6, 2.0), 52.9547113900312, 1e-9);
    EXPECT_NEAR(shadow::shadow_expected_shortfall(10.0, kWide, 0.6, 2.0), 126.517480425808, 1e-9);
    EXPECT_NEAR(shadow::shadow_expected_shortfall(100.0, kWide, 0.6, 2.0), 419.446266589342, 1e-9);
    // ES at the threshold is the shadow mean itself
    double es = shadow::shadow_expected_shortfall(1.0, kWide, 0.6, 2.0);
    double mean = shadow::shadow_mean(kWide, 0.6, 2.0);
    EXPECT_NEAR(es, mean, 1e-10 * mean);
    // ES exceeds its own threshold and increases with it
    double prev = es;
    for (double u : {5.0, 50.0, 500.0}) {
        double cur = shadow::shadow_expected_shortfall(u, kWide, 0.6, 2.0);
        EXPECT_GT(cur, u);
        EXPECT_GT(cur, prev);
        prev = cur;
    }
}

TEST(ShadowMean, MatchesQuantileIntegral) {
    // E[Y | Y > Lstar] equals the integral of the quantile function over (0,1)
    double viaq = quad::integrate(
        [&](double p) { return shadow::shadow_quantile(p, kWide, 0.6, 2.0); }, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(viaq, shadow::shadow_mean(kWide, 0.6, 2.0), 1e-6 * viaq);
}

TEST(BoundedMeans, LomaxFrozenAndLimit) {
    EXPECT_NEAR(shadow::lomax_bounded_mean(1.0, 100.0, 3.0, 2.0), 3.69831295606, 1e-9);
    EXPECT_NEAR(shadow::lomax_bounded_mean(1e4, 7.2e9, 84260.0, 0.53), 32843807.6748, 1.0);
    // enormous H recovers the unbounded Lomax mean L + sigma/(alpha-1)
    EXPECT_NEAR(shadow::lomax_bounded_mean(1.0, 1e9, 3.0, 2.0), 4.0, 1e-5);
    // the bound always pulls the mean down
    EXPECT_LT(shadow::lomax_bounded_mean(1.0, 100.0, 3.0, 2.0), 4.0);
    EXPECT_THROW(shadow::lomax_bounded_mean(1.0, 0.5, 3.0, 2.0), domain_error);
}

TEST(BoundedMeans, HeavisideFrozen) {
    EXPECT_NEAR(shadow::heaviside_conditional_mean(1.0, 100.0, 3.0, 2.0), 3.82857142857, 1e-9);
    EXPECT_NEAR(shadow::heaviside_conditional_mean(1e4, 7.2e9, 84260.0, 0.53), 19634988.1548, 1.0);
    EXPECT_THROW(shadow::heaviside_conditional_mean(1.0, 100.0, 3.0, 1.0), domain_error);
}

TEST(Rescale, SeriesAndSmooth) {
    auto out = shadow::rescale_series(make({10.0, 20.0}), make({100.0, 200.0}), 400.0);
    EXPECT_DOUBLE_EQ(out.values[0], 40.0);
    EXPECT_DOUBLE_EQ(out.values[1], 40.0);
    EXPECT_THROW(shadow::rescale_series(make({1.0}), make({1.0, 2.0}), 400.0), data_error);
    EXPECT_THROW(shadow::rescale_series(make({1.0}), make({0.0}), 400.0), data_error);
    EXPECT_THROW(shadow::rescale_series(make({1.0}), make({1.0}), 0.0), domain_error);

    auto sm = shadow::smooth_rescale(make({1.0, 5.0, 100.0}), kWide);
    EXPECT_DOUBLE_EQ(sm.values[0], shadow::dual_transform(1.0, kWide));
    EXPECT_DOUBLE_EQ(sm.values[2], shadow::dual_transform(100.0, kWide));
}

TEST(MeanExcess, HandComputed) {
    auto curve = shadow::mean_excess_curve(make({1.0, 2.0, 3.0, 4.0, 5.0}), {0.0, 2.5});
    ASSERT_EQ(curve.size(), 2u);
    EXPECT_DOUBLE_EQ(curve[0].second, 3.0);
    EXPECT_DOUBLE_EQ(curve[1].second, 1.5);
    EXPECT_THROW(shadow::mean_excess_curve(make({1.0}), {2.0}), data_error);
}

TEST(SuggestThreshold, PicksUsableCandidate) {
    // GPD(xi = 0.3, beta = 2) exceedances are exactly GPD at any threshold, so
    // any suggested candidate must support a fit close to the truth
    std::vector<double> w(5000);
    rng::Counter g(11);
    for (auto& x : w) x = 2.0 * (std::pow(1.0 - g.u01(), -0.3) - 1.0) / 0.3;
    auto s = make(w);
    double u = shadow::suggest_threshold(s);
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_GE(u, sorted[sorted.size() / 2 - 1]);
    EXPECT_LT(u, sorted.back());
    auto fit = tailfit::gpd_fit_mle(s, u);
    EXPECT_GE(fit.n_exceed, 30u);
    EXPECT_NEAR(fit.xi, 0.3, 0.2);
    EXPECT_THROW(shadow::suggest_threshold(make(std::vector<double>(59, 1.0))), data_error);
}

TEST(ShadowAnalysis, RecoversDualGpdModel) {
    // draw dual excesses from GPD(xi = 1/2, beta = 3), map back through the
    // dual inverse; the pipeline should recover alpha = 2, sigma = 3
    std::vector<double> y(20000);
    rng::Counter g(23);
    for (auto& v : y) {
        double w = 3.0 * (std::pow(1.0 - g.u01(), -0.5) - 1.0) / 0.5;
        v = shadow::dual_inverse(1.0 + w, kWide);
    }
    auto r = shadow::shadow_analysis(make(y), kWide);
    EXPECT_NEAR(r.alpha, 2.0, 0.15);
    EXPECT_NEAR(r.sigma, 3.0, 0.3);
    EXPECT_NEAR(r.shadow_mean, shadow::shadow_mean(kWide, r.alpha, r.sigma), 1e-12);
    EXPECT_GT(r.ratio, 1.0);
    EXPECT_NEAR(r.ratio, r.shadow_mean / r.sample_mean, 1e-12);
}

TEST(ShadowAnalysis, RejectsBadInputs) {
    EXPECT_THROW(shadow::shadow_analysis(make({2.0, 3.0, 1000.0, 4.0, 5.0, 6.0}), kWide),
                 data_error);  // observation at H
    EXPECT_THROW(shadow::shadow_analysis(make({2.0, 3.0}), kWide), data_error);
    // uniform dual excesses have xi = -1: not a heavy dual tail
    std::vector<double> y(2000);
    rng::Counter g(31);
    for (auto& v : y) v = shadow::dual_inverse(1.0 + 2.0 * g.u01(), kWide);
    EXPECT_THROW(shadow::shadow_analysis(make(y), kWide), numeric_error);
}

TEST(Percentile, InterpolatesAndValidates) {
    std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    EXPECT_DOUBLE_EQ(shadow::percentile(v, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(shadow::percentile(v, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(shadow::percentile(v, 0.5), 2.5);
    EXPECT_NEAR(shadow::percentile(v, 1.0 / 3.0), 2.0, 1e-12);
    EXPECT_THROW(shadow::percentile({}, 0.5), data_error);
    EXPECT_THROW(shadow::percentile(v, 1.5), domain_error);
}

TEST(BootstrapGpd, DeterministicAndBrackets) {
    std::vector<double> w(2000);
    rng::Counter g(47);
    for (auto& x : w) x = 2.0 * (std::pow(1.0 - g.u01(), -0.3) - 1.0) / 0.3;
    auto s = make(w);
    auto b1 = shadow::bootstrap_gpd(s, 0.0, 40, 7);
    auto b2 = shadow::bootstrap_gpd(s, 0.0, 40, 7);
    ASSERT_EQ(b1.xi.size(), 40u);
    EXPECT_EQ(b1.xi, b2.xi);
    EXPECT_EQ(b1.beta, b2.beta);
    auto b3 = shadow::bootstrap_gpd(s, 0.0, 40, 8);
    EXPECT_NE(b1.xi, b3.xi);
    // the replication spread brackets the true shape
    EXPECT_LT(shadow::percentile(b1.xi, 0.05), 0.3);
    EXPECT_GT(shadow::percentile(b1.xi, 0.95), 0.3);
    EXPECT_THROW(shadow::bootstrap_gpd(s, 0.0, 10, 1, 0.0), domain_error);
    EXPECT_THROW(shadow::bootstrap_gpd(make({1.0, 2.0, 3.0}), 0.0, 10, 1), data_error);
}
