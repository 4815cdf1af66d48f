#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trendboot/errors.hpp"

namespace trendboot {

enum class SmootherKind { kEwma, kBrownDouble, kHoltWintersAdditive };

std::string_view to_string(SmootherKind kind);
SmootherKind parse_smoother_kind(std::string_view name);

/// Smoothing parameters. EWMA and Brown use eta[0]; Holt-Winters uses all
/// three (level, trend, seasonal) and `period`.
struct SmootherParams {
  SmootherKind kind = SmootherKind::kEwma;
  std::array<double, 3> eta{0.1, 0.0, 0.0};
  std::uint32_t period = 1;

  static SmootherParams ewma(double eta);
  static SmootherParams brown(double eta);
  static SmootherParams holt_winters(double level, double trend, double seasonal,
                                     std::uint32_t period);

  /// Throws ConfigError when the parameters are out of range.
  void validate() const;

  friend bool operator==(const SmootherParams&, const SmootherParams&) = default;
};

/// Recursive exponential smoother. State size depends only on the kind (and
/// the seasonal period), never on the number of observations consumed.
class Smoother {
 public:
  explicit Smoother(const SmootherParams& params);

  /// Consume one observation and return the level estimate.
  double update(double x);

  /// Same as update() without the finiteness check; for internal hot loops
  /// whose inputs are already validated.
  double update_unchecked(double x) noexcept;

  double level() const noexcept { return level_; }
  std::uint64_t time() const noexcept { return t_; }
  const SmootherParams& params() const noexcept { return params_; }

  /// Raw recursion state, in a kind-specific order:
  /// EWMA {s}, Brown {s1, s2}, Holt-Winters {s, b, c_(t-L+1..t) oldest first}.
  std::vector<double> state() const;
  void restore(std::uint64_t t, std::span<const double> state);

 private:
  SmootherParams params_;
  std::uint64_t t_ = 0;
  double s1_ = 0.0;  // EWMA / Brown first stage / HW level
  double s2_ = 0.0;  // Brown second stage / HW trend
  double level_ = 0.0;
  std::vector<double> seasonal_;  // ring buffer, HW only
  std::size_t seasonal_pos_ = 0;
};

/// Closed-form weight w_{t,eta}(i) for EWMA and Brown; 0 for i > t.
/// Throws UnsupportedOperation for Holt-Winters and DomainError for i < 1.
double weight(const SmootherParams& params, std::uint64_t t, std::uint64_t i);

/// Effective sample size (sum_i w_{n,eta}(i)^2)^-1 at the steady-state
/// horizon. EWMA uses the exact (2 - eta) / eta; Brown sums squared weights
/// until the increments fall below 1e-12.
double effective_sample_size(const SmootherParams& params);

/// EWMA smoothing parameter whose effective sample size is `nu`.
double ewma_eta_for_ess(double nu);

/// Normalized l_gamma distance between the rescaled EWMA weight vectors
/// nu * w_{floor(s c nu)}(.) and nu * w_{floor(t c nu)}(.):
///   ( (1/nu) sum_i |nu w_{m_s}(i) - nu w_{m_t}(i)|^gamma )^(1/gamma).
double weight_distance(double eta, double s, double t, double gamma, std::uint32_t c);

}  // namespace trendboot
