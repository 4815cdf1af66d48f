#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trendboot/baselines.hpp"
#include "trendboot/dgp.hpp"
#include "trendboot/engine.hpp"

namespace trendboot {

inline constexpr int kMetricsSchemaVersion = 1;

/// Method ids accepted by the experiment runner.
inline constexpr std::string_view kMethodOurs = "ours";
inline constexpr std::string_view kMethodIid = "iid";
inline constexpr std::string_view kMethodWs = "ws";

void validate_method(std::string_view id);

struct ExperimentConfig {
  std::string dgp_id = "stationary";
  DgpParams dgp = DgpParams::preset("stationary", 0.3);
  std::vector<std::string> methods{"ours", "iid", "ws"};

  SmootherKind smoother = SmootherKind::kEwma;
  /// Effective sample sizes to evaluate; mapped to eta per smoother kind.
  std::vector<double> nu_grid{30.0, 50.0, 100.0};
  double alpha = 0.1;
  std::uint64_t t0 = 500;
  std::uint64_t t1 = 900;
  std::uint64_t t2 = 3500;
  std::uint32_t b1 = 40;
  std::uint32_t b2 = 160;
  double chi = kDefaultChi;
  TransformKind transform = TransformKind::kStudentStandard;
  double dof = 0.0;

  double ws_rho_mix = 0.0;
  double ws_variance_eta = 0.0;

  std::size_t replications = 150;
  std::uint64_t seed = 1;
  /// First time of the power curve; zero means t1 + 1.
  std::uint64_t power_start = 0;
  /// Worker threads; zero means TRENDBOOT_THREADS or the hardware count.
  unsigned threads = 0;

  std::string output;
  std::string power_output;

  void validate() const;
  std::uint64_t effective_power_start() const;
  /// Engine configuration for one grid point and method (seed left at 0).
  EngineConfig engine_config(double nu, std::string_view method) const;
};

struct MetricsRow {
  std::string method;
  std::string dgp;
  double phi = 0.0;
  double nu = 0.0;
  double eta = 0.0;
  std::size_t replications = 0;
  double uniform_coverage = 0.0;
  double mc_stderr = 0.0;
  double avg_width = 0.0;
  double mean_sigma_star = 0.0;
  /// power_curve[k] is the rejection fraction by t = power_start + k.
  std::vector<double> power_curve;
  std::uint64_t power_start = 0;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
};

/// Fraction of replications without a band miss. Throws DomainError when
/// empty.
double uniform_coverage(std::span<const bool> exceed_flags);

/// Binomial Monte Carlo standard error sqrt(c (1 - c) / n).
double coverage_stderr(double coverage, std::size_t replications);

/// For t = first..last, the fraction of replications rejecting by t.
std::vector<double> power_curve(std::span<const std::optional<std::uint64_t>> first_reject_times,
                                std::uint64_t first, std::uint64_t last);

/// Lag-h differences x_t - x_{t-h}; element k corresponds to t = h + 1 + k
/// (1-based), so the result has x.size() - h entries.
std::vector<double> jump_transform(std::span<const double> x, std::size_t h);

/// Smoothing parameter whose effective sample size equals nu for the given
/// kind (closed form for EWMA, bisection for Brown).
double eta_for_ess(SmootherKind kind, double nu);

/// Outcome of one method on one simulated series.
struct ReplicationOutcome {
  bool exceeded = false;
  double avg_width = 0.0;
  double mean_sigma_star = 0.0;
  std::optional<std::uint64_t> first_reject;
};

/// Run `method` on a series with known smoothed mean over the horizon
/// (t1, t2]. The zero-null test starts at `power_start`.
ReplicationOutcome evaluate_method(std::string_view method, const EngineConfig& engine_cfg,
                                   const AsympCsConfig& ws_cfg, std::span<const double> x,
                                   std::span<const double> smoothed_mean,
                                   std::uint64_t power_start);

/// Full Monte Carlo experiment; deterministic in the configuration.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_metrics_csv(std::ostream& out, const ExperimentResult& result);
void write_power_csv(std::ostream& out, const ExperimentResult& result);

/// Worker count from TRENDBOOT_THREADS, falling back to the hardware count.
unsigned default_thread_count();

}  // namespace trendboot
