#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ht/dists.hpp"
#include "ht/rng.hpp"
#include "ht/special.hpp"

using namespace ht;

namespace {

double empirical_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double idx = q * (static_cast<double>(v.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(idx);
    double frac = idx - static_cast<double>(lo);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

}  // namespace

TEST(CounterRng, DeterministicByConstruction) {
    rng::Counter a(42, 3), b(42, 3);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterRng, StreamsDiffer) {
    rng::Counter a(42, 0), b(42, 1), c(43, 0);
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t x = a.next_u64();
        if (x == b.next_u64()) ++same_ab;
        if (x == c.next_u64()) ++same_ac;
    }
    EXPECT_EQ(same_ab, 0);
    EXPECT_EQ(same_ac, 0);
}

TEST(CounterRng, UniformRanges) {
    rng::Counter g(7);
    for (int i = 0; i < 200000; ++i) {
        double u = g.u01();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    rng::Counter h(7, 1);
    for (int i = 0; i < 200000; ++i) {
        double u = h.u01p();
        EXPECT_GT(u, 0.0);
        EXPECT_LE(u, 1.0);
    }
}

TEST(CounterRng, UniformMoments) {
    rng::Counter g(11);
    double s = 0.0, s2 = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        double u = g.u01();
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 0.002);
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.002);
}

TEST(CounterRng, GaussianMoments) {
    rng::Counter g(5);
    double s = 0.0, s2 = 0.0, s4 = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        double z = g.gaussian();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
    EXPECT_NEAR(s4 / n, 3.0, 0.08);
}

TEST(Dists, ValidateRejectsBadParameters) {
    EXPECT_THROW(dists::validate(dists::Dist(dists::ParetoI{0.0, 1.0})), domain_error);
    EXPECT_THROW(dists::validate(dists::Dist(dists::ParetoI{2.0, -1.0})), domain_error);
    EXPECT_THROW(dists::validate(dists::Dist(dists::StudentT{-1.0})), domain_error);
    EXPECT_THROW(dists::validate(dists::Dist(dists::StableParams{2.5, 0.0, 0.0, 1.0})), domain_error);
    EXPECT_THROW(dists::validate(dists::Dist(dists::StableParams{1.5, 1.5, 0.0, 1.0})), domain_error);
    EXPECT_THROW(dists::validate(dists::Dist(dists::TwoStateGaussian{1.0, 2.0, 0.9})), domain_error);
    EXPECT_THROW(dists::validate(dists::Dist(dists::Exponential{0.0})), domain_error);
    EXPECT_THROW(dists::validate(dists::Dist(dists::BimodalGaussian{-1.0, 1.0})), domain_error);
    EXPECT_NO_THROW(dists::validate(dists::Dist(dists::ParetoI{1.5, 2.0})));
}

TEST(Dists, SampleIsDeterministic) {
    dists::Dist d = dists::ParetoI{2.0, 1.0};
    auto a = dists::sample(d, 1000, 9);
    auto b = dists::sample(d, 1000, 9);
    auto c = dists::sample(d, 1000, 10);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
}

TEST(Dists, ParetoDrawsMatchSurvival) {
    dists::Dist d = dists::ParetoI{2.0, 1.5};
    auto s = dists::sample(d, 300000, 21);
    double minv = *std::min_element(s.values.begin(), s.values.end());
    EXPECT_GE(minv, 1.5);
    for (double x : {2.0, 3.0, 6.0}) {
        double frac = 0.0;
        for (double v : s.values) frac += (v > x);
        frac /= static_cast<double>(s.values.size());
        double want = std::pow(1.5 / x, 2.0);
        EXPECT_NEAR(frac, want, 4.0 * std::sqrt(want * (1.0 - want) / 300000.0) + 1e-4);
    }
}

TEST(Dists, StudentDrawsAreExactlyT) {
    // polar closed-form draw: check the empirical survival against the
    // analytic one at several quantiles and tail depths
    for (double nu : {1.0, 3.0, 7.0}) {
        dists::Dist d = dists::StudentT{nu, 1.0, 0.0};
        auto s = dists::sample(d, 400000, 33);
        for (double q : {0.25, 0.1, 0.01}) {
            double x = special::student_t_isf(q, nu);
            double frac = 0.0;
            for (double v : s.values) frac += (v > x);
            frac /= static_cast<double>(s.values.size());
            EXPECT_NEAR(frac, q, 4.5 * std::sqrt(q * (1.0 - q) / 400000.0))
                << "nu=" << nu << " q=" << q;
        }
    }
}

TEST(Dists, StudentLocationScale) {
    dists::Dist d = dists::StudentT{3.0, 2.0, 5.0};
    auto s = dists::sample(d, 200000, 8);
    EXPECT_NEAR(mean(s.values), 5.0, 0.05);
    EXPECT_NEAR(empirical_quantile(s.values, 0.5), 5.0, 0.03);
}

TEST(Dists, ExponentialAndLognormalMoments) {
    auto e = dists::sample(dists::Dist(dists::Exponential{2.0}), 300000, 13);
    EXPECT_NEAR(mean(e.values), 0.5, 0.005);
    auto l = dists::sample(dists::Dist(dists::Lognormal{0.5, 0.8}), 300000, 14);
    double want = std::exp(0.5 + 0.8 * 0.8 / 2.0);
    EXPECT_NEAR(mean(l.values), want, 0.03);
    double lsum = 0.0;
    for (double v : l.values) lsum += std::log(v);
    EXPECT_NEAR(lsum / 300000.0, 0.5, 0.01);
}

TEST(Dists, StableQuantilesMatchReference) {
    // frozen reference quantiles under the same characteristic-function
    // convention, q in {.05,.10,.25,.50,.75,.90,.95}
    struct Case {
        dists::StableParams p;
        std::array<double, 7> want;
    };
    const double qs[7] = {0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95};
    const Case cases[] = {
        {{1.5, 1.0, 0.0, 1.0},
         {-2.7117446658238133, -2.331235781163115, -1.6328124092553145, -0.71671068545502159,
          0.48151210827609409, 2.1457331049510469, 3.8242359657932101}},
        {{1.2, 0.5, 0.0, 1.0},
         {-4.0104689961337119, -3.1001544808521611, -2.2320672139790427, -1.3472216266351007,
          -0.10886615242112033, 2.080348552030086, 4.855753060078305}},
        {{1.8, -0.7, 0.0, 1.0},
         {-2.652333879629273, -1.8901266995310082, -0.85743285642103495, 0.14158310444974753,
          1.0752246036192532, 1.898502728414631, 2.4000435664078492}},
    };
    for (const auto& c : cases) {
        auto s = dists::sample(dists::Dist(c.p), 500000, 71);
        for (int i = 0; i < 7; ++i) {
            double got = empirical_quantile(s.values, qs[i]);
            EXPECT_NEAR(got, c.want[i], 0.06 + 0.03 * std::abs(c.want[i]))
                << "alpha=" << c.p.alpha_s << " beta=" << c.p.beta << " q=" << qs[i];
        }
    }
}

TEST(Dists, CauchyQuantilesClosedForm) {
    auto s = dists::sample(dists::Dist(dists::StableParams{1.0, 0.0, 0.0, 1.0}), 500000, 72);
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        double want = std::tan(M_PI * (q - 0.5));
        EXPECT_NEAR(empirical_quantile(s.values, q), want, 0.05 + 0.03 * std::abs(want));
    }
}

TEST(Dists, StableGaussianCase) {
    // alpha_s = 2 is N(mu, 2 sigma^2)
    auto s = dists::sample(dists::Dist(dists::StableParams{2.0, 0.0, 1.0, 1.0}), 300000, 73);
    EXPECT_NEAR(mean(s.values), 1.0, 0.02);
    EXPECT_NEAR(variance(s.values), 2.0, 0.03);
}

TEST(Dists, TwoStateVariancePreserved) {
    dists::TwoStateGaussian ts{1.0, 5.0, 0.1};
    auto s = dists::sample(dists::Dist(ts), 400000, 19);
    EXPECT_NEAR(mean(s.values), 0.0, 0.01);
    EXPECT_NEAR(variance(s.values), 1.0, 0.02);
    EXPECT_NEAR(raw_kurtosis(s.values), dists::two_state_kurtosis(5.0, 0.1), 0.35);
}

TEST(Dists, BimodalMoments) {
    dists::BimodalGaussian bm{4.0, 1.0};
    auto s = dists::sample(dists::Dist(bm), 300000, 23);
    EXPECT_NEAR(mean(s.values), 0.0, 0.02);
    EXPECT_NEAR(variance(s.values), 1.0 + 4.0, 0.05);  // sigma^2 + d^2/4
}

TEST(Dists, FiniteMeanFlags) {
    EXPECT_FALSE(dists::has_finite_mean(dists::Dist(dists::ParetoI{0.9, 1.0})));
    EXPECT_FALSE(dists::has_finite_mean(dists::Dist(dists::ParetoI{1.0, 1.0})));
    EXPECT_TRUE(dists::has_finite_mean(dists::Dist(dists::ParetoI{1.01, 1.0})));
    EXPECT_FALSE(dists::has_finite_mean(dists::Dist(dists::StudentT{1.0})));
    EXPECT_TRUE(dists::has_finite_mean(dists::Dist(dists::StudentT{1.5})));
    EXPECT_FALSE(dists::has_finite_mean(dists::Dist(dists::StableParams{1.0, 0.0, 0.0, 1.0})));
    EXPECT_TRUE(dists::has_finite_mean(dists::Dist(dists::StableParams{1.5, 0.0, 0.0, 1.0})));
    EXPECT_TRUE(dists::has_finite_mean(dists::Dist(dists::Gaussian{})));
    EXPECT_TRUE(dists::has_finite_mean(dists::Dist(dists::Lognormal{})));
}

TEST(Dists, AnalyticMeans) {
    EXPECT_NEAR(dists::analytic_mean(dists::Dist(dists::ParetoI{2.5, 2.0})), 2.5 * 2.0 / 1.5, 1e-14);
    EXPECT_NEAR(dists::analytic_mean(dists::Dist(dists::StudentT{3.0, 2.0, 5.0})), 5.0, 1e-14);
    EXPECT_NEAR(dists::analytic_mean(dists::Dist(dists::Lognormal{0.5, 0.8})),
                std::exp(0.5 + 0.32), 1e-14);
    EXPECT_NEAR(dists::analytic_mean(dists::Dist(dists::Exponential{4.0})), 0.25, 1e-14);
    EXPECT_NEAR(dists::analytic_mean(dists::Dist(dists::Gaussian{3.0, 1.0})), 3.0, 1e-14);
    EXPECT_NEAR(dists::analytic_mean(dists::Dist(dists::StableParams{1.5, 0.5, 2.0, 1.0})), 2.0, 1e-14);
    EXPECT_NEAR(dists::analytic_mean(dists::Dist(dists::TwoStateGaussian{1.0, 2.0, 0.2})), 0.0, 1e-14);
    EXPECT_NEAR(dists::analytic_mean(dists::Dist(dists::BimodalGaussian{3.0, 1.0})), 0.0, 1e-14);
}

TEST(Closed, TwoStateKurtosis) {
    EXPECT_NEAR(dists::two_state_kurtosis(999.0, 0.001), 3000.0, 1e-9);
    EXPECT_NEAR(dists::two_state_kurtosis(0.0, 0.5), 3.0, 1e-13);
    EXPECT_GT(dists::two_state_kurtosis(1.0, 0.01), 3.0);
}

TEST(Closed, MixtureKurtosis) {
    EXPECT_NEAR(dists::mixture_kurtosis(3.0, -3.0, 1.0, 1.0), 1.38, 1e-12);
    EXPECT_NEAR(dists::mixture_kurtosis(0.0, 0.0, 1.0, 2.0), 4.08, 1e-12);
    EXPECT_NEAR(dists::mixture_kurtosis(1.0, -1.0, 0.5, 2.0), 3.8752, 1e-12);
    // at the crossover separation the mixture kurtosis returns to 3
    double c = dists::mixture_kurtosis_crossover(1.0, 2.0);
    EXPECT_NEAR(c, std::pow(6.0, 0.25) * std::sqrt(4.0 - 1.0), 1e-12);
    EXPECT_NEAR(dists::mixture_kurtosis(c / 2.0, -c / 2.0, 1.0, 2.0), 3.0, 1e-10);
}

TEST(Closed, GaussianCrossovers) {
    auto cr = dists::gaussian_crossovers(0.0, 1.0);
    ASSERT_EQ(cr.size(), 4u);
    double inner = std::sqrt((5.0 - std::sqrt(17.0)) / 2.0);
    double outer = std::sqrt((5.0 + std::sqrt(17.0)) / 2.0);
    EXPECT_NEAR(cr[0], -outer, 1e-12);
    EXPECT_NEAR(cr[1], -inner, 1e-12);
    EXPECT_NEAR(cr[2], inner, 1e-12);
    EXPECT_NEAR(cr[3], outer, 1e-12);
    EXPECT_NEAR(inner, 0.66, 0.01);
    EXPECT_NEAR(outer, 2.13, 0.01);
    auto shifted = dists::gaussian_crossovers(2.0, 3.0);
    EXPECT_NEAR(shifted[2], 2.0 + 3.0 * inner, 1e-12);
}

TEST(Closed, StudentCrossovers) {
    // x^2 = s^2 (5a+1 -+ sqrt(17a^2+18a+1)) / (2(a-1))
    double a = 3.0, s = 1.0;
    auto cr = dists::student_crossovers(a, s);
    ASSERT_EQ(cr.size(), 4u);
    double disc = std::sqrt(17.0 * a * a + 18.0 * a + 1.0);
    double inner = s * std::sqrt((5.0 * a + 1.0 - disc) / (2.0 * (a - 1.0)));
    double outer = s * std::sqrt((5.0 * a + 1.0 + disc) / (2.0 * (a - 1.0)));
    EXPECT_NEAR(cr[1], -inner, 1e-12);
    EXPECT_NEAR(cr[3], outer, 1e-12);
    EXPECT_THROW(dists::student_crossovers(1.0, 1.0), domain_error);
}

TEST(Closed, StdOverMad) {
    EXPECT_NEAR(dists::std_over_mad(dists::Dist(dists::Gaussian{0.0, 3.0})),
                std::sqrt(M_PI / 2.0), 1e-13);
    EXPECT_NEAR(dists::std_over_mad(dists::Dist(dists::ParetoI{2.5, 1.0})), 2.40562612162, 1e-9);
    EXPECT_NEAR(dists::std_over_mad(dists::Dist(dists::ParetoI{3.0, 1.0})), 1.94855715851, 1e-9);
    EXPECT_NEAR(dists::std_over_mad(dists::Dist(dists::ParetoI{4.0, 1.0})), 1.67610496281, 1e-9);
    EXPECT_NEAR(dists::std_over_mad(dists::Dist(dists::StudentT{3.0})), M_PI / 2.0, 1e-13);
    // undefined below two (infinite variance)
    EXPECT_THROW(dists::std_over_mad(dists::Dist(dists::ParetoI{1.8, 1.0})), domain_error);
}

TEST(Closed, StableMeanAbsDev) {
    EXPECT_NEAR(dists::stable_mean_abs_dev({2.0, 0.0, 0.0, 1.0}), 1.1283791671, 1e-9);
    EXPECT_NEAR(dists::stable_mean_abs_dev({1.5, 0.0, 0.0, 1.0}), 1.70546524015, 1e-9);
    EXPECT_NEAR(dists::stable_mean_abs_dev({1.5, 1.0, 0.0, 1.0}), 1.86087343386, 1e-9);
    EXPECT_NEAR(dists::stable_mean_abs_dev({1.2, 0.5, 0.0, 2.0}), 7.94367406557, 1e-9);
    EXPECT_NEAR(dists::stable_mean_abs_dev({1.8, -0.7, 0.0, 0.5}), 0.638348948965, 1e-9);
    // location shift leaves the mean absolute deviation unchanged
    EXPECT_NEAR(dists::stable_mean_abs_dev({1.5, 0.0, 3.0, 1.0}),
                dists::stable_mean_abs_dev({1.5, 0.0, 0.0, 1.0}), 1e-12);
    // scale is linear
    EXPECT_NEAR(dists::stable_mean_abs_dev({1.5, 0.5, 0.0, 2.0}),
                2.0 * dists::stable_mean_abs_dev({1.5, 0.5, 0.0, 1.0}), 1e-10);
    EXPECT_THROW(dists::stable_mean_abs_dev({1.0, 0.0, 0.0, 1.0}), domain_error);
}

TEST(Closed, StablePdfBasics) {
    // Cauchy density at 0 is 1/pi under this convention
    EXPECT_NEAR(dists::stable_pdf(0.0, {1.0, 0.0, 0.0, 1.0}), 1.0 / M_PI, 1e-8);
    EXPECT_NEAR(dists::stable_pdf(1.3, {1.0, 0.0, 0.0, 1.0}), 1.0 / (M_PI * (1.0 + 1.69)), 1e-8);
    // alpha_s = 2 is N(0, 2): f(x) = exp(-x^2/4)/sqrt(4 pi)
    EXPECT_NEAR(dists::stable_pdf(0.7, {2.0, 0.0, 0.0, 1.0}),
                std::exp(-0.49 / 4.0) / std::sqrt(4.0 * M_PI), 1e-8);
    // symmetry for beta = 0
    EXPECT_NEAR(dists::stable_pdf(1.1, {1.5, 0.0, 0.0, 1.0}),
                dists::stable_pdf(-1.1, {1.5, 0.0, 0.0, 1.0}), 1e-10);
}

TEST(Closed, StableModeScalesWithGamma) {
    double m1 = dists::stable_mode({1.5, 1.0, 0.0, 1.0});
    EXPECT_NEAR(m1, -1.16158727114, 2e-5);
    double m14 = dists::stable_mode({1.4, 1.0, 0.0, 1.0});
    EXPECT_NEAR(m14, -1.5827762162, 2e-5);
    double mg = dists::stable_mode({1.5, 1.0, 0.0, 0.25});
    EXPECT_NEAR(mg, 0.25 * m1, 2e-5);
    // symmetric case: mode at mu
    EXPECT_NEAR(dists::stable_mode({1.7, 0.0, 2.0, 1.0}), 2.0, 2e-4);
}
