#include "trendboot/dgp.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "trendboot/rng.hpp"

namespace trendboot {

void DgpParams::validate() const {
  if (!(std::fabs(phi) < 1.0)) throw ConfigError("AR coefficient phi must satisfy |phi| < 1");
  if (!(period > 0.0)) throw ConfigError("seasonal period must be positive");
  if (!(amplitude >= 0.0)) throw ConfigError("seasonal amplitude must be nonnegative");
  if (!(phase >= 0.0 && phase < 2.0 * std::numbers::pi)) {
    throw ConfigError("seasonal phase must lie in [0, 2 pi)");
  }
  if (!(shock_rate >= 0.0 && shock_rate <= 1.0)) throw ConfigError("shock rate must lie in [0, 1]");
  if (!(shock_scale >= 0.0)) throw ConfigError("shock scale must be nonnegative");
  if (!(sigma >= 0.0)) throw ConfigError("innovation scale sigma must be nonnegative");
  if (innovation == InnovationKind::kStandardizedT && !(innovation_df > 2.0)) {
    throw ConfigError("standardized-t innovations need df > 2");
  }
  if (!std::isfinite(mu) || !std::isfinite(a)) throw ConfigError("mu and a must be finite");
}

DgpParams DgpParams::preset(std::string_view name, double phi) {
  DgpParams p;
  p.mu = 0.0;
  p.sigma = 1.0;
  p.phi = phi;
  if (name == "stationary") {
    // all mean components off
  } else if (name == "trend_seasonal") {
    p.a = 1e-3;
    p.amplitude = 0.4;
    p.period = 400.0;
    p.phase = 0.0;
  } else if (name == "trend_shocks") {
    p.a = 1e-3;
    p.shock_rate = 0.005;
    p.shock_scale = 2.0;
  } else {
    throw ConfigError("unknown DGP preset '" + std::string(name) + "'");
  }
  p.validate();
  return p;
}

SimOutput simulate(const DgpParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  RandomStream noise(seed, StreamTag::kDgpNoise, 0);
  RandomStream shocks(seed, StreamTag::kDgpShocks, 0);
  RandomStream tail(seed, StreamTag::kDgpTailScale, 0);
  const bool heavy = params.innovation == InnovationKind::kStandardizedT;
  std::chi_squared_distribution<double> chi2(heavy ? params.innovation_df : 1.0);
  const double t_scale =
      heavy ? std::sqrt((params.innovation_df - 2.0) / params.innovation_df) : 1.0;

  SimOutput out;
  out.x.resize(n);
  out.m.resize(n);
  double level_shift = 0.0;
  double prev_dev = 0.0;  // X_0 - m_0
  const double omega = 2.0 * std::numbers::pi / params.period;
  for (std::size_t k = 0; k < n; ++k) {
    const double i = static_cast<double>(k + 1);
    // Bernoulli and jump draws come from their own stream every step, so the
    // noise stream is unaffected by the shock settings.
    const double u = shocks.uniform();
    const double jump = shocks.normal();
    if (u < params.shock_rate) level_shift += params.shock_scale * jump;
    const double m = params.mu + params.a * i + params.amplitude * std::sin(omega * i + params.phase) +
                     level_shift;
    double z = noise.normal();
    if (heavy) z *= t_scale / std::sqrt(chi2(tail.engine()) / params.innovation_df);
    const double dev = params.phi * prev_dev + params.sigma * z;
    out.m[k] = m;
    out.x[k] = m + dev;
    prev_dev = dev;
  }
  return out;
}

std::vector<double> true_smoothed_mean(const SmootherParams& params, std::span<const double> m) {
  Smoother smoother(params);
  std::vector<double> out;
  out.reserve(m.size());
  for (double v : m) out.push_back(smoother.update(v));
  return out;
}

}  // namespace trendboot
