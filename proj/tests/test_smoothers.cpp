#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "trendboot/smoothers.hpp"

using namespace trendboot;

namespace {

// Hand-coded closed forms, independent of the library.
long double ewma_w(long double eta, long long t, long long i) {
  if (i > t) return 0.0L;
  return eta * std::pow(1.0L - eta, static_cast<long double>(t - i));
}

long double brown_w(long double eta, long long t, long long i) {
  if (i > t) return 0.0L;
  return eta * (2.0L - eta * static_cast<long double>(t - i + 1)) *
         std::pow(1.0L - eta, static_cast<long double>(t - i));
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  std::vector<double> series(int n) {
    std::vector<double> x(n);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (auto& v : x) v = 3.0 * nd(rng) + uniform(-5.0, 5.0);
    return x;
  }
};

std::vector<double> run(const SmootherParams& p, const std::vector<double>& x) {
  Smoother s(p);
  std::vector<double> out;
  for (double v : x) out.push_back(s.update(v));
  return out;
}

}  // namespace

TEST(SmootherInit, ZeroState) {
  Smoother ewma(SmootherParams::ewma(0.5));
  EXPECT_EQ(ewma.time(), 0u);
  EXPECT_EQ(ewma.state(), std::vector<double>{0.0});
  Smoother brown(SmootherParams::brown(0.3));
  EXPECT_EQ(brown.state(), (std::vector<double>{0.0, 0.0}));
  Smoother hw(SmootherParams::holt_winters(0.3, 0.1, 0.2, 4));
  EXPECT_EQ(hw.state(), std::vector<double>(6, 0.0));
}

TEST(SmootherInit, RejectsBadParameters) {
  EXPECT_THROW(Smoother(SmootherParams::ewma(0.0)), ConfigError);
  EXPECT_THROW(Smoother(SmootherParams::ewma(1.0)), ConfigError);
  EXPECT_THROW(Smoother(SmootherParams::brown(-0.1)), ConfigError);
  EXPECT_THROW(Smoother(SmootherParams::holt_winters(0.3, 1.2, 0.2, 4)), ConfigError);
  EXPECT_THROW(Smoother(SmootherParams::holt_winters(0.3, 0.1, 0.2, 0)), ConfigError);
  EXPECT_NO_THROW(Smoother(SmootherParams::holt_winters(0.0, 1.0, 0.0, 1)));
}

TEST(SmootherUpdate, HandIteratedExamples) {
  Smoother ewma(SmootherParams::ewma(0.5));
  EXPECT_DOUBLE_EQ(ewma.update(1.0), 0.5);
  EXPECT_DOUBLE_EQ(ewma.update(1.0), 0.75);
  EXPECT_EQ(ewma.time(), 2u);

  Smoother brown(SmootherParams::brown(0.5));
  EXPECT_DOUBLE_EQ(brown.update(1.0), 0.75);
  EXPECT_EQ(brown.state(), (std::vector<double>{0.5, 0.25}));

  // Holt-Winters, L = 2, eta = (0.5, 0.5, 0.5), inputs 2, 4:
  // s1 = 0.5*2 = 1, b1 = 0.5, c1 = 0.5*(2-1) = 0.5
  // s2 = 0.5*4 + 0.5*(1 + 0.5) = 2.75, b2 = 0.5*1.75 + 0.25 = 1.125
  Smoother hw(SmootherParams::holt_winters(0.5, 0.5, 0.5, 2));
  EXPECT_DOUBLE_EQ(hw.update(2.0), 1.0);
  EXPECT_DOUBLE_EQ(hw.update(4.0), 2.75);
  const auto st = hw.state();
  EXPECT_DOUBLE_EQ(st[1], 1.125);
}

TEST(SmootherUpdate, ZeroInputStaysZero) {
  for (const auto& p : {SmootherParams::ewma(0.3), SmootherParams::brown(0.2),
                        SmootherParams::holt_winters(0.4, 0.2, 0.3, 5)}) {
    Smoother s(p);
    for (int k = 0; k < 50; ++k) ASSERT_EQ(s.update(0.0), 0.0);
  }
}

TEST(SmootherUpdate, RejectsNonFinite) {
  Smoother s(SmootherParams::ewma(0.3));
  EXPECT_THROW(s.update(std::numeric_limits<double>::quiet_NaN()), DataError);
  EXPECT_THROW(s.update(std::numeric_limits<double>::infinity()), DataError);
  EXPECT_EQ(s.time(), 0u);
}

TEST(SmootherState, RestoreContinuesIdentically) {
  Gen g(8);
  const auto x = g.series(120);
  for (const auto& p : {SmootherParams::ewma(0.3), SmootherParams::brown(0.2),
                        SmootherParams::holt_winters(0.4, 0.2, 0.3, 7)}) {
    Smoother a(p);
    for (int k = 0; k < 60; ++k) a.update(x[k]);
    Smoother b(p);
    b.restore(a.time(), a.state());
    for (int k = 60; k < 120; ++k) ASSERT_EQ(a.update(x[k]), b.update(x[k]));
  }
}

TEST(Weights, Examples) {
  const auto ewma = SmootherParams::ewma(0.5);
  EXPECT_DOUBLE_EQ(weight(ewma, 4, 4), 0.5);
  EXPECT_DOUBLE_EQ(weight(ewma, 3, 1), 0.125);
  EXPECT_EQ(weight(ewma, 3, 4), 0.0);
  EXPECT_DOUBLE_EQ(weight(SmootherParams::brown(0.5), 6, 6), 0.75);
  EXPECT_THROW(weight(ewma, 3, 0), DomainError);
  EXPECT_THROW(weight(SmootherParams::holt_winters(0.5, 0.5, 0.5, 2), 3, 1),
               UnsupportedOperation);
}

TEST(Weights, RecursionEqualsWeightedSum) {
  Gen g(21);
  for (int trial = 0; trial < 60; ++trial) {
    const double eta = g.uniform(0.01, 0.95);
    const bool brown = trial % 2 == 1;
    const auto p = brown ? SmootherParams::brown(eta) : SmootherParams::ewma(eta);
    const auto x = g.series(g.integer(1, 200));
    const auto levels = run(p, x);
    for (std::size_t t = 1; t <= x.size(); ++t) {
      long double direct = 0.0L;
      for (std::size_t i = 1; i <= t; ++i) {
        direct += (brown ? brown_w(eta, t, i) : ewma_w(eta, t, i)) * x[i - 1];
      }
      ASSERT_NEAR(levels[t - 1], static_cast<double>(direct), 1e-10) << eta << ' ' << t;
      ASSERT_NEAR(weight(p, t, 1), static_cast<double>(brown ? brown_w(eta, t, 1) : ewma_w(eta, t, 1)),
                  1e-14);
    }
  }
}

TEST(Weights, LinearityForEveryKind) {
  Gen g(5);
  for (int trial = 0; trial < 30; ++trial) {
    const double a = g.uniform(-3.0, 3.0), b = g.uniform(-3.0, 3.0);
    const int n = g.integer(1, 200);
    const auto x = g.series(n), y = g.series(n);
    std::vector<double> mix(n);
    for (int k = 0; k < n; ++k) mix[k] = a * x[k] + b * y[k];
    const SmootherParams kinds[] = {
        SmootherParams::ewma(g.uniform(0.01, 0.9)), SmootherParams::brown(g.uniform(0.01, 0.9)),
        SmootherParams::holt_winters(g.uniform(0.0, 1.0), g.uniform(0.0, 1.0), g.uniform(0.0, 1.0),
                                     static_cast<std::uint32_t>(g.integer(1, 12)))};
    for (const auto& p : kinds) {
      const auto lx = run(p, x), ly = run(p, y), lm = run(p, mix);
      for (int k = 0; k < n; ++k) ASSERT_NEAR(lm[k], a * lx[k] + b * ly[k], 1e-10);
    }
  }
}

TEST(Weights, EwmaTailIdentity) {
  Gen g(13);
  for (int trial = 0; trial < 100; ++trial) {
    const double eta = g.uniform(0.001, 0.99);
    const auto t = static_cast<std::uint64_t>(g.integer(1, 400));
    const auto p = SmootherParams::ewma(eta);
    double sum = 0.0;
    for (std::uint64_t i = 1; i <= t; ++i) sum += weight(p, t, i);
    ASSERT_NEAR(std::fabs(1.0 - sum), std::pow(1.0 - eta, static_cast<double>(t)), 1e-12);
  }
}

TEST(Weights, ScaledEwmaWeightsAreBoundedByTwo) {
  Gen g(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const double eta = g.uniform(1e-4, 0.9999);
    const auto p = SmootherParams::ewma(eta);
    const auto t = static_cast<std::uint64_t>(g.integer(1, 5000));
    const auto i = static_cast<std::uint64_t>(g.integer(1, static_cast<int>(t)));
    ASSERT_LE(effective_sample_size(p) * weight(p, t, i), 2.0);
  }
}

TEST(EffectiveSampleSize, Examples) {
  EXPECT_DOUBLE_EQ(effective_sample_size(SmootherParams::ewma(0.5)), 3.0);
  EXPECT_DOUBLE_EQ(effective_sample_size(SmootherParams::ewma(0.1)), 19.0);
  EXPECT_THROW(effective_sample_size(SmootherParams::holt_winters(0.5, 0.5, 0.5, 2)),
               UnsupportedOperation);
}

TEST(EffectiveSampleSize, BrownMatchesBruteForce) {
  long double ss = 0.0L;
  for (int i = 1; i <= 200; ++i) ss += brown_w(0.5L, 200, i) * brown_w(0.5L, 200, i);
  EXPECT_NEAR(effective_sample_size(SmootherParams::brown(0.5)), static_cast<double>(1.0L / ss),
              1e-10);
  for (double eta : {0.05, 0.1, 0.3}) {
    ss = 0.0L;
    for (int i = 1; i <= 20000; ++i) ss += brown_w(eta, 20000, i) * brown_w(eta, 20000, i);
    EXPECT_NEAR(effective_sample_size(SmootherParams::brown(eta)), static_cast<double>(1.0L / ss),
                1e-8)
        << eta;
  }
}

TEST(EffectiveSampleSize, EwmaEtaInverse) {
  for (double nu : {1.5, 3.0, 19.0, 30.0, 100.0, 1e4}) {
    EXPECT_NEAR(effective_sample_size(SmootherParams::ewma(ewma_eta_for_ess(nu))), nu, 1e-9 * nu);
  }
}

TEST(WeightDistance, Examples) {
  EXPECT_EQ(weight_distance(0.2, 0.7, 0.7, 3.0, 2), 0.0);
  const double d = weight_distance(0.2, 0.5, 0.6, 3.0, 2);
  EXPECT_GT(d, 0.0);
  EXPECT_LE(d, 4.0 * std::cbrt(2.0) * std::cbrt(0.1 + 0.2));
  EXPECT_EQ(d, weight_distance(0.2, 0.6, 0.5, 3.0, 2));
  EXPECT_THROW(weight_distance(0.2, 0.4, 0.6, 3.0, 2), DomainError);
  EXPECT_THROW(weight_distance(0.2, 0.5, 1.1, 3.0, 2), DomainError);
  EXPECT_THROW(weight_distance(0.2, 0.5, 0.6, 2.0, 2), DomainError);
}

TEST(WeightDistance, MatchesDirectSum) {
  Gen g(29);
  for (int trial = 0; trial < 50; ++trial) {
    const double eta = g.uniform(0.01, 0.5);
    const auto c = static_cast<std::uint32_t>(g.integer(1, 6));
    const double lo = 1.0 / c;
    const double s = g.uniform(lo, 1.0), t = g.uniform(lo, 1.0), gamma = g.uniform(2.1, 6.0);
    const long double nu = (2.0L - eta) / eta;
    const auto ms = static_cast<long long>(std::floor(s * c * static_cast<double>(nu)));
    const auto mt = static_cast<long long>(std::floor(t * c * static_cast<double>(nu)));
    long double acc = 0.0L;
    for (long long i = 1; i <= std::max(ms, mt); ++i) {
      acc += std::pow(std::fabs(nu * (ewma_w(eta, ms, i) - ewma_w(eta, mt, i))),
                      static_cast<long double>(gamma));
    }
    const double ref = static_cast<double>(std::pow(acc / nu, 1.0L / gamma));
    ASSERT_NEAR(weight_distance(eta, s, t, gamma, c), ref, 1e-10 * std::max(1.0, ref));
  }
}

TEST(WeightDistance, BoundHoldsOnGrid) {
  int checked = 0;
  for (double eta : {0.01, 0.03, 0.1, 0.2, 0.5}) {
    for (std::uint32_t c : {1u, 2u, 4u, 8u}) {
      for (double gamma : {2.5, 3.0, 5.0, 8.0, 12.0}) {
        const double lo = 1.0 / c;
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 3; ++b) {
            const double s = lo + (1.0 - lo) * a / 3.0;
            const double t = lo + (1.0 - lo) * (b + 0.5) / 3.0;
            const double bound =
                4.0 * std::pow(static_cast<double>(c), 1.0 / gamma) *
                std::pow(std::fabs(s - t) + eta, 1.0 / gamma);
            ASSERT_LE(weight_distance(eta, s, t, gamma, c), bound)
                << eta << ' ' << c << ' ' << gamma << ' ' << s << ' ' << t;
            ++checked;
          }
        }
      }
    }
  }
  EXPECT_GE(checked, 1000);
}

TEST(SmootherKindNames, RoundTrip) {
  for (auto k : {SmootherKind::kEwma, SmootherKind::kBrownDouble,
                 SmootherKind::kHoltWintersAdditive}) {
    EXPECT_EQ(parse_smoother_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_smoother_kind("spline"), ConfigError);
}
