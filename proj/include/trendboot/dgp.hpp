#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trendboot/errors.hpp"
#include "trendboot/smoothers.hpp"

namespace trendboot {

enum class InnovationKind { kGaussian, kStandardizedT };

/// Mean structure and noise of the simulated series
///   X_i = m_i + phi (X_{i-1} - m_{i-1}) + sigma z_i,
///   m_i = mu + a i + A sin(2 pi i / P + psi) + L_i,
///   L_i = L_{i-1} + B_i J_i,  B_i ~ Bernoulli(p),  J_i ~ N(0, sigma_J^2).
struct DgpParams {
  double mu = 0.0;
  double a = 0.0;
  double amplitude = 0.0;
  double period = 400.0;
  double phase = 0.0;
  double shock_rate = 0.0;
  double shock_scale = 0.0;
  double phi = 0.0;
  double sigma = 1.0;
  InnovationKind innovation = InnovationKind::kGaussian;
  /// Degrees of freedom for standardized-t innovations; must exceed 2.
  double innovation_df = 6.0;

  void validate() const;

  /// Named regimes: "stationary", "trend_seasonal", "trend_shocks".
  static DgpParams preset(std::string_view name, double phi);

  friend bool operator==(const DgpParams&, const DgpParams&) = default;
};

struct SimOutput {
  std::vector<double> x;
  std::vector<double> m;
};

/// Simulate n observations. Deterministic in (params, n, seed).
///
/// Standardized-t innovations are built as z / sqrt(W / df) / sqrt(df / (df - 2))
/// with the same Gaussian z the Gaussian variant would use and W ~ chi^2_df
/// from a separate stream, so the two variants share their Gaussian
/// component for a given seed.
SimOutput simulate(const DgpParams& params, std::size_t n, std::uint64_t seed);

/// Smoothed mean mu_eta(t) = sum_i w_t(i) m_i for t = 1..m.size(), computed by
/// running the (linear) smoother recursion on m.
std::vector<double> true_smoothed_mean(const SmootherParams& params, std::span<const double> m);

}  // namespace trendboot
