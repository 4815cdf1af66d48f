#pragma once

#include <cstdint>

#include "trendboot/engine.hpp"

namespace trendboot {

/// The iid Gaussian multiplier bootstrap: the engine with chi = 0 (rho = 0).
EngineConfig iid_engine_config(const EngineConfig& base);

/// Gaussian-mixture asymptotic confidence sequence half-width
///   sqrt( 2 (1 + nu s2 r^2) / (nu^2 r^2) * log( sqrt(1 + nu s2 r^2) / alpha ) ).
double asympcs_halfwidth(double nu, double sigma2, double rho_mix, double alpha);

struct AsympCsConfig {
  double alpha = 0.1;
  /// Mixture parameter; zero selects the default 1 / sqrt(nu).
  double rho_mix = 0.0;
  double nu = 0.0;
  /// EWMA parameter of the innovation-variance estimate. The runners pass
  /// the main smoother's eta; zero selects the EWMA parameter matching nu.
  double variance_eta = 0.0;

  void validate() const;
  double effective_rho_mix() const;
  double effective_variance_eta() const;
};

/// Online AsympCS band on one-step innovations Y_t = X_t - level(t-1).
class AsympCs {
 public:
  explicit AsympCs(const AsympCsConfig& cfg);

  /// Update the variance estimate with Y_t = x - level_prev and return the
  /// half-width w_t.
  double step(double x, double level_prev);

  double sigma2() const { return sigma2_; }
  std::uint64_t time() const { return t_; }
  const AsympCsConfig& config() const { return cfg_; }

 private:
  AsympCsConfig cfg_;
  double rho_mix_;
  double eta_;
  double sigma2_ = 0.0;
  std::uint64_t t_ = 0;
};

}  // namespace trendboot
