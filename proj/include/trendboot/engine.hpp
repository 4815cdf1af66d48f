#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trendboot/multipliers.hpp"
#include "trendboot/rng.hpp"
#include "trendboot/smoothers.hpp"

namespace trendboot {

/// Parameters of the online bootstrap.
///
/// Observations 1..t0 are burn-in for the main smoother. Bootstrap replicates
/// start at t0 + 1; the first critical value is computed at t1 and refreshed
/// at every t0 + 2^k (t1 - t0) up to t2, each with an alpha / K budget.
/// Replicates 1..b1 estimate the scale, replicates b1+1..b1+b2 calibrate the
/// critical value.
struct EngineConfig {
  SmootherParams smoother = SmootherParams::ewma(0.1);
  double alpha = 0.1;
  std::uint64_t t0 = 500;
  std::uint64_t t1 = 900;
  std::uint64_t t2 = 3500;
  std::uint32_t b1 = 40;
  std::uint32_t b2 = 160;
  double chi = kDefaultChi;
  std::uint64_t seed = 0;
  TransformKind transform = TransformKind::kStudentStandard;
  /// Effective sample size driving rho and the transform dof. Zero means
  /// "derive from the smoother"; required for Holt-Winters.
  double nu = 0.0;
  /// Overrides 2 + nu^(1/3) when positive.
  double dof = 0.0;

  void validate() const;
  double effective_nu() const;
  std::uint32_t replicates() const { return b1 + b2; }
  /// K = ceil(log2((t2 - t0) / (t1 - t0))).
  std::uint32_t block_count() const;
  /// 1-based order statistic of the calibration maxima used as the
  /// (1 - alpha/K) empirical quantile: ceil(b2 (1 - alpha / K)).
  std::uint32_t quantile_rank() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

struct StepOutput {
  std::uint64_t t = 0;
  double level = 0.0;
  double sigma_star = 0.0;
  /// q * sigma_star; absent until the band is live (t > t1).
  std::optional<double> halfwidth;
  bool recalibrated = false;
  std::optional<double> q_current;
};

/// Online bootstrap engine. Memory is O(b1 + b2), fixed at construction;
/// step() performs no allocation.
class Engine {
 public:
  /// `warmup` must hold exactly cfg.t0 finite observations.
  Engine(const EngineConfig& cfg, std::span<const double> warmup);

  /// Consume X_t for t = time() + 1.
  StepOutput step(double x);

  /// As step(), with the standard-normal innovations of every replicate
  /// supplied by the caller instead of drawn from the replicate streams.
  StepOutput step_with_innovations(double x, std::span<const double> xi);

  const EngineConfig& config() const { return cfg_; }
  std::uint64_t time() const { return t_; }
  double level() const { return main_.level(); }
  double rho() const { return rho_; }
  double dof() const { return transform_.dof(); }
  double nu() const { return nu_; }
  std::uint32_t blocks() const { return blocks_; }
  std::uint32_t recalibrations() const { return recalibrations_; }
  std::optional<double> critical_value() const { return q_; }
  bool is_boundary(std::uint64_t t) const;

  /// Current bootstrap errors, one per replicate (scale replicates first).
  std::span<const double> replicate_deltas() const { return delta_; }
  /// Multipliers V drawn at the latest step.
  std::span<const double> last_multipliers() const { return v_; }
  /// Running maxima of the calibration replicates.
  std::span<const double> maxima() const { return maxima_; }

  /// Versioned key-value text record of the complete state.
  std::string snapshot() const;
  static Engine restore(const std::string& record);

 private:
  Engine(const EngineConfig& cfg, bool);
  StepOutput advance(double x, std::span<const double> xi);
  double scale_estimate() const;
  double calibration_quantile();

  EngineConfig cfg_;
  double nu_;
  double rho_;
  double innovation_scale_;
  std::uint32_t blocks_;
  std::uint32_t rank_;
  Transform transform_;

  Smoother main_;
  std::uint64_t t_ = 0;
  std::uint64_t next_boundary_ = 0;
  std::uint32_t recalibrations_ = 0;
  std::optional<double> q_;

  std::vector<RandomStream> streams_;
  std::vector<double> z_;
  std::vector<double> v_;
  std::vector<Smoother> replicas_;
  std::vector<double> delta_;
  std::vector<double> maxima_;
  std::vector<double> scratch_;
  std::vector<double> xi_;
};

enum class Sidedness { kTwoSided, kUpper, kLower };

struct Decision {
  bool exceeded = false;
  std::optional<std::uint64_t> first_exceed_time;
};

/// Sequential band check: records the first t with a band miss against
/// `center`. Only steps with a live band are considered.
class ExceedanceMonitor {
 public:
  explicit ExceedanceMonitor(Sidedness sides = Sidedness::kTwoSided) : sides_(sides) {}

  /// Returns true if this step is a miss.
  bool observe(std::uint64_t t, double estimate, double center, double halfwidth);

  const Decision& decision() const { return decision_; }
  std::uint64_t live_steps() const { return live_steps_; }

 private:
  Sidedness sides_;
  Decision decision_;
  std::uint64_t live_steps_ = 0;
};

/// Reject H0: level(t) == null_center(t) for all live t if any band miss
/// occurs. `null_center` is aligned with `outputs`. Throws NotCalibrated when
/// no output carries a band.
Decision run_test(std::span<const StepOutput> outputs, std::span<const double> null_center,
                  Sidedness sides = Sidedness::kTwoSided);

/// Direct evaluation of a bootstrap error:
///   sum_{i=1..t} w_t(i) V_i (X_i - lagged_level_i),
/// all series indexed from the first bootstrap step. EWMA and Brown only.
double bootstrap_delta_direct(const SmootherParams& params, std::span<const double> multipliers,
                              std::span<const double> x, std::span<const double> lagged_levels,
                              std::uint64_t t);

}  // namespace trendboot
