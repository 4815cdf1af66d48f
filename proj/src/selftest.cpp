#include "trendboot/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "trendboot/engine.hpp"
#include "trendboot/numerics.hpp"

namespace trendboot {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckResult check_normal_round_trip(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(1e-6, 1.0 - 1e-6);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double p = unif(gen);
    worst = std::max(worst, std::fabs(numerics::std_normal_cdf(numerics::std_normal_quantile(p)) - p));
  }
  return {"normal quantile round trip", worst <= 1e-10, "max error " + sci(worst)};
}

CheckResult check_t_quantile(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(1e-6, 1.0 - 1e-6);
  std::uniform_real_distribution<double> dofs(2.1, 60.0);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double p = unif(gen);
    const double d = dofs(gen);
    const double q = numerics::student_t_quantile(p, d);
    worst = std::max(worst, std::fabs(numerics::student_t_cdf(q, d) - p) / std::min(p, 1.0 - p));
  }
  return {"student-t quantile round trip", worst <= 1e-9, "max relative error " + sci(worst)};
}

CheckResult check_recursion_vs_weights(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> etas(0.01, 0.9);
  std::normal_distribution<double> noise;
  double worst = 0.0;
  for (int inst = 0; inst < 40; ++inst) {
    const auto params =
        inst % 2 == 0 ? SmootherParams::ewma(etas(gen)) : SmootherParams::brown(etas(gen));
    std::vector<double> x(200);
    for (auto& v : x) v = noise(gen);
    Smoother s(params);
    for (std::uint64_t t = 1; t <= x.size(); ++t) {
      const double online = s.update(x[t - 1]);
      double direct = 0.0;
      for (std::uint64_t i = 1; i <= t; ++i) direct += weight(params, t, i) * x[i - 1];
      worst = std::max(worst, std::fabs(online - direct));
    }
  }
  return {"smoother recursion equals weighted sum", worst <= 1e-10, "max error " + sci(worst)};
}

CheckResult check_online_vs_direct(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> etas(0.02, 0.6);
  std::normal_distribution<double> noise;
  double worst = 0.0;
  for (int inst = 0; inst < 40; ++inst) {
    EngineConfig cfg;
    cfg.smoother = inst % 2 == 0 ? SmootherParams::ewma(etas(gen)) : SmootherParams::brown(etas(gen));
    cfg.t0 = 5;
    cfg.t1 = 30;
    cfg.t2 = 300;
    cfg.b1 = 3;
    cfg.b2 = 3;
    cfg.seed = gen();
    std::vector<double> warm(cfg.t0);
    for (auto& v : warm) v = noise(gen);
    Engine engine(cfg, warm);
    const std::size_t b = cfg.replicates();
    std::vector<std::vector<double>> v(b);
    std::vector<double> xs, lagged;
    for (std::uint64_t t = cfg.t0 + 1; t <= cfg.t2; ++t) {
      const double x = 0.01 * static_cast<double>(t) + noise(gen);
      lagged.push_back(engine.level());
      xs.push_back(x);
      engine.step(x);
      for (std::size_t k = 0; k < b; ++k) v[k].push_back(engine.last_multipliers()[k]);
      const std::uint64_t n = xs.size();
      for (std::size_t k = 0; k < b; ++k) {
        const double direct = bootstrap_delta_direct(cfg.smoother, v[k], xs, lagged, n);
        worst = std::max(worst, std::fabs(direct - engine.replicate_deltas()[k]));
      }
    }
  }
  return {"online bootstrap equals direct weighted sum", worst <= 1e-9, "max error " + sci(worst)};
}

CheckResult check_transform_moments() {
  std::string detail;
  bool ok = true;
  for (double dof : {3.0, 4.0, 8.0, 30.0}) {
    const Transform transform(TransformKind::kStudent, dof);
    RandomStream rs(7, StreamTag::kReplicate, static_cast<std::uint64_t>(dof));
    const int n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = transform(rs.normal());
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    ok = ok && std::fabs(mean) <= 0.01 && std::fabs(var - 1.0) <= 0.02;
    detail += "dof " + std::to_string(static_cast<int>(dof)) + ": mean " + sci(mean) + " var " +
              sci(var) + "; ";
  }
  return {"transform T keeps mean 0 and variance 1", ok, detail};
}

CheckResult check_latent_autocorrelation() {
  const double rho = persistence(50.0, kDefaultChi);
  const double scale = std::sqrt(1.0 - rho * rho);
  RandomStream rs(11, StreamTag::kReplicate, 0);
  const std::size_t n = 1'000'000;
  std::vector<double> z(n);
  double prev = rs.normal();
  for (auto& v : z) {
    prev = rho * prev + scale * rs.normal();
    v = prev;
  }
  bool ok = true;
  std::string detail;
  for (std::size_t h : {1u, 5u, 20u}) {
    double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    const std::size_t m = n - h;
    for (std::size_t k = 0; k < m; ++k) {
      sx += z[k];
      sy += z[k + h];
      sxy += z[k] * z[k + h];
      sxx += z[k] * z[k];
      syy += z[k + h] * z[k + h];
    }
    const double cov = sxy / m - (sx / m) * (sy / m);
    const double corr = cov / std::sqrt((sxx / m - (sx / m) * (sx / m)) * (syy / m - (sy / m) * (sy / m)));
    const double expected = std::pow(rho, static_cast<double>(h));
    ok = ok && std::fabs(corr - expected) <= 0.01;
    detail += "h=" + std::to_string(h) + ": " + sci(corr) + " vs " + sci(expected) + "; ";
  }
  return {"latent chain autocorrelation rho^h", ok, detail};
}

}  // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<CheckResult> out;
  out.push_back(check_normal_round_trip(gen));
  out.push_back(check_t_quantile(gen));
  out.push_back(check_recursion_vs_weights(gen));
  out.push_back(check_online_vs_direct(gen));
  out.push_back(check_transform_moments());
  out.push_back(check_latent_autocorrelation());
  return out;
}

}  // namespace trendboot
