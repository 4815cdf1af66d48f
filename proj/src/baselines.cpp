#include "trendboot/baselines.hpp"

#include <cmath>

namespace trendboot {

EngineConfig iid_engine_config(const EngineConfig& base) {
  EngineConfig cfg = base;
  cfg.chi = 0.0;
  return cfg;
}

double asympcs_halfwidth(double nu, double sigma2, double rho_mix, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("asympcs_halfwidth: alpha must lie in (0, 1)");
  if (!(nu > 0.0)) throw DomainError("asympcs_halfwidth: nu must be positive");
  if (!(rho_mix > 0.0)) throw DomainError("asympcs_halfwidth: mixture parameter must be positive");
  if (!(sigma2 >= 0.0)) throw DomainError("asympcs_halfwidth: variance must be nonnegative");
  const double r2 = rho_mix * rho_mix;
  const double inflate = 1.0 + nu * sigma2 * r2;
  return std::sqrt(2.0 * inflate / (nu * nu * r2) * std::log(std::sqrt(inflate) / alpha));
}

void AsympCsConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("AsympCS alpha must lie in (0, 1)");
  if (!(nu > 0.0)) throw ConfigError("AsympCS needs a positive effective sample size");
  if (rho_mix < 0.0) throw ConfigError("AsympCS mixture parameter must be positive");
  if (!(variance_eta >= 0.0 && variance_eta < 1.0)) {
    throw ConfigError("AsympCS variance_eta must lie in (0, 1)");
  }
}

double AsympCsConfig::effective_rho_mix() const {
  return rho_mix > 0.0 ? rho_mix : 1.0 / std::sqrt(nu);
}

double AsympCsConfig::effective_variance_eta() const {
  if (variance_eta > 0.0) return variance_eta;
  // EWMA parameter with the same effective sample size, clamped for nu <= 1.
  return nu > 1.0 ? 2.0 / (nu + 1.0) : 0.5;
}

AsympCs::AsympCs(const AsympCsConfig& cfg)
    : cfg_((cfg.validate(), cfg)),
      rho_mix_(cfg_.effective_rho_mix()),
      eta_(cfg_.effective_variance_eta()) {}

double AsympCs::step(double x, double level_prev) {
  if (!std::isfinite(x)) throw DataError("AsympCS step: observation is not finite");
  const double y = x - level_prev;
  sigma2_ = eta_ * y * y + (1.0 - eta_) * sigma2_;
  ++t_;
  return asympcs_halfwidth(cfg_.nu, sigma2_, rho_mix_, cfg_.alpha);
}

}  // namespace trendboot
