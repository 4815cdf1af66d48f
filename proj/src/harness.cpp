#include "trendboot/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "trendboot/rng.hpp"

namespace trendboot {
namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void validate_method(std::string_view id) {
  if (id != kMethodOurs && id != kMethodIid && id != kMethodWs) {
    throw ConfigError("unknown method id '" + std::string(id) + "' (expected ours, iid or ws)");
  }
}

void ExperimentConfig::validate() const {
  dgp.validate();
  if (methods.empty()) throw ConfigError("at least one method is required");
  for (const auto& m : methods) validate_method(m);
  if (nu_grid.empty()) throw ConfigError("the nu grid must not be empty");
  if (smoother == SmootherKind::kHoltWintersAdditive) {
    throw ConfigError("experiments support ewma and brown smoothing only");
  }
  if (replications < 1) throw ConfigError("replications must be at least 1");
  for (double nu : nu_grid) engine_config(nu, kMethodOurs).validate();
  const auto ps = effective_power_start();
  if (ps <= t1 || ps > t2) throw ConfigError("power_start must lie in (t1, t2]");
}

std::uint64_t ExperimentConfig::effective_power_start() const {
  return power_start == 0 ? t1 + 1 : power_start;
}

EngineConfig ExperimentConfig::engine_config(double nu, std::string_view method) const {
  EngineConfig cfg;
  cfg.smoother.kind = smoother;
  cfg.smoother.eta = {eta_for_ess(smoother, nu), 0.0, 0.0};
  cfg.smoother.period = 1;
  cfg.alpha = alpha;
  cfg.t0 = t0;
  cfg.t1 = t1;
  cfg.t2 = t2;
  cfg.b1 = b1;
  cfg.b2 = b2;
  cfg.chi = chi;
  cfg.transform = transform;
  cfg.dof = dof;
  if (method == kMethodIid) cfg = iid_engine_config(cfg);
  return cfg;
}

double uniform_coverage(std::span<const bool> exceed_flags) {
  if (exceed_flags.empty()) throw DomainError("uniform_coverage: no replications");
  const auto misses = std::count(exceed_flags.begin(), exceed_flags.end(), true);
  return 1.0 - static_cast<double>(misses) / static_cast<double>(exceed_flags.size());
}

double coverage_stderr(double coverage, std::size_t replications) {
  if (replications == 0) throw DomainError("coverage_stderr: no replications");
  return std::sqrt(coverage * (1.0 - coverage) / static_cast<double>(replications));
}

std::vector<double> power_curve(std::span<const std::optional<std::uint64_t>> first_reject_times,
                                std::uint64_t first, std::uint64_t last) {
  std::vector<double> curve;
  if (first > last || first_reject_times.empty()) {
    if (first <= last) curve.assign(last - first + 1, 0.0);
    return curve;
  }
  std::vector<std::uint64_t> times;
  for (const auto& t : first_reject_times) {
    if (t) times.push_back(*t);
  }
  std::sort(times.begin(), times.end());
  const double n = static_cast<double>(first_reject_times.size());
  curve.reserve(last - first + 1);
  std::size_t count = 0;
  for (std::uint64_t t = first; t <= last; ++t) {
    while (count < times.size() && times[count] <= t) ++count;
    curve.push_back(static_cast<double>(count) / n);
  }
  return curve;
}

std::vector<double> jump_transform(std::span<const double> x, std::size_t h) {
  if (h < 1) throw DomainError("jump_transform: horizon h must be at least 1");
  if (h >= x.size()) throw DomainError("jump_transform: horizon h must be shorter than the series");
  std::vector<double> out(x.size() - h);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = x[k + h] - x[k];
  return out;
}

double eta_for_ess(SmootherKind kind, double nu) {
  switch (kind) {
    case SmootherKind::kEwma:
      return ewma_eta_for_ess(nu);
    case SmootherKind::kBrownDouble: {
      if (!(nu > 1.0) || !std::isfinite(nu)) {
        throw ConfigError("effective sample size must be a finite value above 1");
      }
      // effective_sample_size is decreasing in eta.
      double lo = 1e-6;
      double hi = 0.999;
      if (effective_sample_size(SmootherParams::brown(hi)) > nu ||
          effective_sample_size(SmootherParams::brown(lo)) < nu) {
        throw ConfigError("no Brown smoothing parameter attains the requested nu");
      }
      for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (effective_sample_size(SmootherParams::brown(mid)) > nu) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    case SmootherKind::kHoltWintersAdditive:
      break;
  }
  throw UnsupportedOperation("eta_for_ess: Holt-Winters has no effective sample size mapping");
}

ReplicationOutcome evaluate_method(std::string_view method, const EngineConfig& engine_cfg,
                                   const AsympCsConfig& ws_cfg, std::span<const double> x,
                                   std::span<const double> smoothed_mean,
                                   std::uint64_t power_start) {
  const std::uint64_t t0 = engine_cfg.t0;
  const std::uint64_t t1 = engine_cfg.t1;
  const std::uint64_t t2 = engine_cfg.t2;
  if (x.size() < t2 || smoothed_mean.size() < t2) {
    throw ConfigError("evaluate_method: series shorter than t2");
  }
  ExceedanceMonitor coverage;
  ExceedanceMonitor null_test;
  double width_sum = 0.0;
  double sigma_sum = 0.0;
  std::uint64_t live = 0;

  auto record = [&](std::uint64_t t, double level, double halfwidth, double scale) {
    coverage.observe(t, level, smoothed_mean[t - 1], halfwidth);
    if (t >= power_start) null_test.observe(t, level, 0.0, halfwidth);
    width_sum += 2.0 * halfwidth;
    sigma_sum += scale;
    ++live;
  };

  if (method == kMethodWs) {
    Smoother smoother(engine_cfg.smoother);
    AsympCs cs(ws_cfg);
    for (std::uint64_t t = 1; t <= t2; ++t) {
      const double prev = smoother.level();
      const double level = smoother.update(x[t - 1]);
      if (t < 2) continue;
      const double hw = cs.step(x[t - 1], prev);
      if (t > t1) record(t, level, hw, std::sqrt(cs.sigma2()));
    }
  } else {
    validate_method(method);
    Engine engine(engine_cfg, x.first(t0));
    for (std::uint64_t t = t0 + 1; t <= t2; ++t) {
      const StepOutput out = engine.step(x[t - 1]);
      if (out.halfwidth) record(t, out.level, *out.halfwidth, out.sigma_star);
    }
  }

  ReplicationOutcome outcome;
  outcome.exceeded = coverage.decision().exceeded;
  outcome.first_reject = null_test.decision().first_exceed_time;
  if (live > 0) {
    outcome.avg_width = width_sum / static_cast<double>(live);
    outcome.mean_sigma_star = sigma_sum / static_cast<double>(live);
  }
  return outcome;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("TRENDBOOT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n_nu = cfg.nu_grid.size();
  const std::size_t n_methods = cfg.methods.size();
  const std::uint64_t power_start = cfg.effective_power_start();

  // Configurations are fixed per grid point; seeds vary per replication.
  std::vector<std::vector<EngineConfig>> engine_cfgs(n_nu);
  std::vector<AsympCsConfig> ws_cfgs(n_nu);
  std::vector<SmootherParams> smoothers(n_nu);
  for (std::size_t g = 0; g < n_nu; ++g) {
    for (const auto& m : cfg.methods) engine_cfgs[g].push_back(cfg.engine_config(cfg.nu_grid[g], m));
    smoothers[g] = engine_cfgs[g].front().smoother;
    ws_cfgs[g].alpha = cfg.alpha;
    ws_cfgs[g].nu = cfg.nu_grid[g];
    ws_cfgs[g].rho_mix = cfg.ws_rho_mix;
    ws_cfgs[g].variance_eta = cfg.ws_variance_eta > 0.0 ? cfg.ws_variance_eta : smoothers[g].eta[0];
    ws_cfgs[g].validate();
  }

  // outcomes[r][g * n_methods + k]
  std::vector<std::vector<ReplicationOutcome>> outcomes(cfg.replications);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= cfg.replications) return;
      try {
        const std::uint64_t data_seed = derive_seed(cfg.seed, 2 * r);
        const std::uint64_t engine_seed = derive_seed(cfg.seed, 2 * r + 1);
        const SimOutput sim = simulate(cfg.dgp, cfg.t2, data_seed);
        auto& row = outcomes[r];
        row.reserve(n_nu * n_methods);
        for (std::size_t g = 0; g < n_nu; ++g) {
          const auto target = true_smoothed_mean(smoothers[g], sim.m);
          for (std::size_t k = 0; k < n_methods; ++k) {
            EngineConfig ecfg = engine_cfgs[g][k];
            ecfg.seed = engine_seed;
            row.push_back(
                evaluate_method(cfg.methods[k], ecfg, ws_cfgs[g], sim.x, target, power_start));
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cfg.replications);
        return;
      }
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(cfg.threads ? cfg.threads : default_thread_count(),
                                      static_cast<unsigned>(cfg.replications)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (std::size_t g = 0; g < n_nu; ++g) {
    for (std::size_t k = 0; k < n_methods; ++k) {
      // vector<bool> is not contiguous, so flags live in a plain array
      std::unique_ptr<bool[]> exceeded(new bool[cfg.replications]);
      std::vector<std::optional<std::uint64_t>> rejects;
      double width = 0.0;
      double sigma = 0.0;
      for (std::size_t r = 0; r < cfg.replications; ++r) {
        const auto& o = outcomes[r][g * n_methods + k];
        exceeded[r] = o.exceeded;
        rejects.push_back(o.first_reject);
        width += o.avg_width;
        sigma += o.mean_sigma_star;
      }
      MetricsRow row;
      row.method = cfg.methods[k];
      row.dgp = cfg.dgp_id;
      row.phi = cfg.dgp.phi;
      row.nu = cfg.nu_grid[g];
      row.eta = smoothers[g].eta[0];
      row.replications = cfg.replications;
      row.uniform_coverage =
          uniform_coverage(std::span<const bool>(exceeded.get(), cfg.replications));
      row.mc_stderr = coverage_stderr(row.uniform_coverage, cfg.replications);
      row.avg_width = width / static_cast<double>(cfg.replications);
      row.mean_sigma_star = sigma / static_cast<double>(cfg.replications);
      row.power_start = power_start;
      row.power_curve = power_curve(rejects, power_start, cfg.t2);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_metrics_csv(std::ostream& out, const ExperimentResult& result) {
  out << "schema_version,method,dgp,phi,nu,eta,replications,uniform_coverage,mc_stderr,"
         "avg_width,mean_sigma_star,final_power\n";
  for (const auto& r : result.rows) {
    out << kMetricsSchemaVersion << ',' << r.method << ',' << r.dgp << ',' << fmt_real(r.phi) << ','
        << fmt_real(r.nu) << ',' << fmt_real(r.eta) << ',' << r.replications << ','
        << fmt_real(r.uniform_coverage) << ',' << fmt_real(r.mc_stderr) << ','
        << fmt_real(r.avg_width) << ',' << fmt_real(r.mean_sigma_star) << ','
        << fmt_real(r.power_curve.empty() ? 0.0 : r.power_curve.back()) << '\n';
  }
}

void write_power_csv(std::ostream& out, const ExperimentResult& result) {
  out << "method,nu,t,fraction\n";
  for (const auto& r : result.rows) {
    for (std::size_t k = 0; k < r.power_curve.size(); ++k) {
      out << r.method << ',' << fmt_real(r.nu) << ',' << (r.power_start + k) << ','
          << fmt_real(r.power_curve[k]) << '\n';
    }
  }
}

}  // namespace trendboot
