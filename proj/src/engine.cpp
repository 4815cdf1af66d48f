#include "trendboot/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace trendboot {
namespace {

constexpr double kScaleFloor = 1e-300;
constexpr const char* kSnapshotMagic = "trendboot-engine";
constexpr int kSnapshotVersion = 1;

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError("engine snapshot: malformed real '" + s + "'");
  }
  return v;
}

std::vector<double> parse_hex_list(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_hex(tok));
  return out;
}

std::string hex_list(std::span<const double> values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ' ';
    out += hex(values[k]);
  }
  return out;
}

}  // namespace

void EngineConfig::validate() const {
  smoother.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(t0 < t1)) throw ConfigError("t1 must exceed t0");
  if (!(t1 < t2)) throw ConfigError("t2 must exceed t1");
  if (b1 < 2) throw ConfigError("b1 must be at least 2 to estimate a variance");
  if (b2 < 1) throw ConfigError("b2 must be at least 1");
  if (!(chi >= 0.0) || !std::isfinite(chi)) throw ConfigError("chi must be a nonnegative number");
  if (nu < 0.0 || !std::isfinite(nu)) throw ConfigError("nu must be a nonnegative number");
  if (dof != 0.0 && !(dof > 2.0)) throw ConfigError("transform dof must exceed 2");
  if (smoother.kind == SmootherKind::kHoltWintersAdditive && nu == 0.0) {
    throw ConfigError("Holt-Winters smoothing requires an explicit effective sample size (nu)");
  }
}

double EngineConfig::effective_nu() const {
  return nu > 0.0 ? nu : effective_sample_size(smoother);
}

std::uint32_t EngineConfig::block_count() const {
  // Smallest k with 2^k (t1 - t0) >= t2 - t0; integer doubling avoids log2
  // rounding at exact powers of two.
  std::uint32_t k = 0;
  std::uint64_t span = t1 - t0;
  while (span < t2 - t0) {
    span *= 2;
    ++k;
  }
  return std::max<std::uint32_t>(k, 1);
}

std::uint32_t EngineConfig::quantile_rank() const {
  const double target = static_cast<double>(b2) * (1.0 - alpha / block_count());
  const auto rank = static_cast<std::uint32_t>(std::ceil(target - 1e-9));
  return std::clamp<std::uint32_t>(rank, 1, b2);
}

Engine::Engine(const EngineConfig& cfg, bool)
    : cfg_((cfg.validate(), cfg)),
      nu_(cfg_.effective_nu()),
      rho_(persistence(nu_, cfg_.chi)),
      innovation_scale_(std::sqrt(1.0 - rho_ * rho_)),
      blocks_(cfg_.block_count()),
      rank_(cfg_.quantile_rank()),
      transform_(cfg_.transform, cfg_.dof > 0.0 ? cfg_.dof : transform_dof(nu_)),
      main_(cfg_.smoother),
      next_boundary_(cfg_.t1) {
  const std::uint32_t b = cfg_.replicates();
  streams_.reserve(b);
  for (std::uint32_t k = 0; k < b; ++k) streams_.emplace_back(cfg_.seed, StreamTag::kReplicate, k);
  z_.assign(b, 0.0);
  v_.assign(b, 0.0);
  replicas_.assign(b, Smoother(cfg_.smoother));
  delta_.assign(b, 0.0);
  maxima_.assign(cfg_.b2, 0.0);
  scratch_.assign(cfg_.b2, 0.0);
  xi_.assign(b, 0.0);
}

Engine::Engine(const EngineConfig& cfg, std::span<const double> warmup) : Engine(cfg, true) {
  if (warmup.size() != cfg_.t0) {
    throw ConfigError("engine warmup must hold exactly t0 = " + std::to_string(cfg_.t0) +
                      " observations, got " + std::to_string(warmup.size()));
  }
  for (double x : warmup) main_.update(x);
  t_ = cfg_.t0;
}

bool Engine::is_boundary(std::uint64_t t) const {
  if (t < cfg_.t1 || t > cfg_.t2) return false;
  const std::uint64_t width = cfg_.t1 - cfg_.t0;
  const std::uint64_t offset = t - cfg_.t0;
  if (offset % width != 0) return false;
  const std::uint64_t ratio = offset / width;
  return std::has_single_bit(ratio);
}

StepOutput Engine::step(double x) {
  for (std::size_t b = 0; b < xi_.size(); ++b) xi_[b] = streams_[b].normal();
  return advance(x, xi_);
}

StepOutput Engine::step_with_innovations(double x, std::span<const double> xi) {
  if (xi.size() != replicas_.size()) {
    throw ConfigError("step_with_innovations: need one innovation per replicate");
  }
  return advance(x, xi);
}

double Engine::scale_estimate() const {
  const std::uint32_t n = cfg_.b1;
  double mean = 0.0;
  for (std::uint32_t b = 0; b < n; ++b) mean += delta_[b];
  mean /= n;
  double ss = 0.0;
  for (std::uint32_t b = 0; b < n; ++b) {
    const double d = delta_[b] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / (n - 1));
}

double Engine::calibration_quantile() {
  std::copy(maxima_.begin(), maxima_.end(), scratch_.begin());
  const auto nth = scratch_.begin() + (rank_ - 1);
  std::nth_element(scratch_.begin(), nth, scratch_.end());
  return *nth;
}

StepOutput Engine::advance(double x, std::span<const double> xi) {
  if (!std::isfinite(x)) throw DataError("engine step: observation is not finite");
  if (t_ >= cfg_.t2) {
    throw SequenceExhausted("engine step: end time t2 = " + std::to_string(cfg_.t2) +
                            " already reached");
  }
  ++t_;

  // (1) replicates, centered on the lagged level
  const double residual = x - main_.level();
  for (std::size_t b = 0; b < replicas_.size(); ++b) {
    z_[b] = rho_ * z_[b] + innovation_scale_ * xi[b];
    v_[b] = transform_(z_[b]);
    delta_[b] = replicas_[b].update_unchecked(v_[b] * residual);
  }

  // (2) scale from the first b1 replicates
  const double sigma = scale_estimate();

  // (3) running maxima of the calibration replicates; a degenerate scale
  // carries no information, so the update is skipped.
  if (sigma > 0.0) {
    const double inv = 1.0 / std::max(sigma, kScaleFloor);
    for (std::uint32_t k = 0; k < cfg_.b2; ++k) {
      maxima_[k] = std::max(maxima_[k], std::fabs(delta_[cfg_.b1 + k]) * inv);
    }
  }

  // (4) recalibration at block boundaries
  StepOutput out;
  if (t_ == next_boundary_) {
    q_ = calibration_quantile();
    ++recalibrations_;
    out.recalibrated = true;
    next_boundary_ = cfg_.t0 + 2 * (next_boundary_ - cfg_.t0);
  }

  // (5) main smoother
  main_.update_unchecked(x);

  out.t = t_;
  out.level = main_.level();
  out.sigma_star = sigma;
  out.q_current = q_;
  if (q_ && t_ > cfg_.t1) out.halfwidth = *q_ * sigma;
  return out;
}

std::string Engine::snapshot() const {
  std::ostringstream out;
  out << kSnapshotMagic << ' ' << kSnapshotVersion << '\n';
  out << "config.smoother " << to_string(cfg_.smoother.kind) << '\n';
  out << "config.eta " << hex_list(cfg_.smoother.eta) << '\n';
  out << "config.period " << cfg_.smoother.period << '\n';
  out << "config.alpha " << hex(cfg_.alpha) << '\n';
  out << "config.t0 " << cfg_.t0 << '\n';
  out << "config.t1 " << cfg_.t1 << '\n';
  out << "config.t2 " << cfg_.t2 << '\n';
  out << "config.b1 " << cfg_.b1 << '\n';
  out << "config.b2 " << cfg_.b2 << '\n';
  out << "config.chi " << hex(cfg_.chi) << '\n';
  out << "config.seed " << cfg_.seed << '\n';
  out << "config.transform " << to_string(cfg_.transform) << '\n';
  out << "config.nu " << hex(cfg_.nu) << '\n';
  out << "config.dof " << hex(cfg_.dof) << '\n';
  out << "state.t " << t_ << '\n';
  out << "state.main " << main_.time() << ' ' << hex_list(main_.state()) << '\n';
  out << "state.next_boundary " << next_boundary_ << '\n';
  out << "state.recalibrations " << recalibrations_ << '\n';
  out << "state.q " << (q_ ? hex(*q_) : std::string("none")) << '\n';
  out << "state.maxima " << hex_list(maxima_) << '\n';
  for (std::size_t b = 0; b < replicas_.size(); ++b) {
    out << "replicate." << b << ".z " << hex(z_[b]) << '\n';
    out << "replicate." << b << ".v " << hex(v_[b]) << '\n';
    out << "replicate." << b << ".smoother " << replicas_[b].time() << ' '
        << hex_list(replicas_[b].state()) << '\n';
    out << "replicate." << b << ".rng " << streams_[b].serialize() << '\n';
  }
  return out.str();
}

Engine Engine::restore(const std::string& record) {
  std::istringstream in(record);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != kSnapshotMagic) throw ConfigError("engine snapshot: unrecognized record");
  if (version != kSnapshotVersion) {
    throw ConfigError("engine snapshot: unsupported version " + std::to_string(version));
  }
  std::map<std::string, std::string> fields;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto space = line.find(' ');
    const std::string key = line.substr(0, space);
    fields[key] = space == std::string::npos ? std::string() : line.substr(space + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError("engine snapshot: missing field '" + key + "'");
    return it->second;
  };
  auto get_u64 = [&](const std::string& key) { return std::stoull(get(key)); };

  EngineConfig cfg;
  cfg.smoother.kind = parse_smoother_kind(get("config.smoother"));
  const auto eta = parse_hex_list(get("config.eta"));
  if (eta.size() != 3) throw ConfigError("engine snapshot: config.eta needs three values");
  std::copy(eta.begin(), eta.end(), cfg.smoother.eta.begin());
  cfg.smoother.period = static_cast<std::uint32_t>(get_u64("config.period"));
  cfg.alpha = parse_hex(get("config.alpha"));
  cfg.t0 = get_u64("config.t0");
  cfg.t1 = get_u64("config.t1");
  cfg.t2 = get_u64("config.t2");
  cfg.b1 = static_cast<std::uint32_t>(get_u64("config.b1"));
  cfg.b2 = static_cast<std::uint32_t>(get_u64("config.b2"));
  cfg.chi = parse_hex(get("config.chi"));
  cfg.seed = get_u64("config.seed");
  cfg.transform = parse_transform_kind(get("config.transform"));
  cfg.nu = parse_hex(get("config.nu"));
  cfg.dof = parse_hex(get("config.dof"));

  Engine engine(cfg, true);
  engine.t_ = get_u64("state.t");
  {
    std::istringstream main_in(get("state.main"));
    std::uint64_t main_t = 0;
    main_in >> main_t;
    std::string rest;
    std::getline(main_in, rest);
    engine.main_.restore(main_t, parse_hex_list(rest));
  }
  engine.next_boundary_ = get_u64("state.next_boundary");
  engine.recalibrations_ = static_cast<std::uint32_t>(get_u64("state.recalibrations"));
  const std::string& q = get("state.q");
  if (q != "none") engine.q_ = parse_hex(q);
  const auto maxima = parse_hex_list(get("state.maxima"));
  if (maxima.size() != engine.maxima_.size()) {
    throw ConfigError("engine snapshot: maxima count does not match b2");
  }
  engine.maxima_ = maxima;
  for (std::size_t b = 0; b < engine.replicas_.size(); ++b) {
    const std::string prefix = "replicate." + std::to_string(b) + ".";
    engine.z_[b] = parse_hex(get(prefix + "z"));
    engine.v_[b] = parse_hex(get(prefix + "v"));
    std::istringstream rep_in(get(prefix + "smoother"));
    std::uint64_t rep_t = 0;
    rep_in >> rep_t;
    std::string rest;
    std::getline(rep_in, rest);
    engine.replicas_[b].restore(rep_t, parse_hex_list(rest));
    engine.delta_[b] = engine.replicas_[b].level();
    engine.streams_[b] = RandomStream::deserialize(get(prefix + "rng"));
  }
  return engine;
}

bool ExceedanceMonitor::observe(std::uint64_t t, double estimate, double center,
                                double halfwidth) {
  ++live_steps_;
  const double dev = estimate - center;
  bool miss = false;
  switch (sides_) {
    case Sidedness::kTwoSided:
      miss = std::fabs(dev) > halfwidth;
      break;
    case Sidedness::kUpper:
      miss = dev > halfwidth;
      break;
    case Sidedness::kLower:
      miss = -dev > halfwidth;
      break;
  }
  if (miss && !decision_.exceeded) {
    decision_.exceeded = true;
    decision_.first_exceed_time = t;
  }
  return miss;
}

Decision run_test(std::span<const StepOutput> outputs, std::span<const double> null_center,
                  Sidedness sides) {
  if (null_center.size() != outputs.size()) {
    throw ConfigError("run_test: null_center must align with the step outputs");
  }
  ExceedanceMonitor monitor(sides);
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const auto& o = outputs[k];
    if (!o.halfwidth) continue;
    monitor.observe(o.t, o.level, null_center[k], *o.halfwidth);
  }
  if (monitor.live_steps() == 0) {
    throw NotCalibrated("run_test: no calibrated band in the supplied horizon");
  }
  return monitor.decision();
}

double bootstrap_delta_direct(const SmootherParams& params, std::span<const double> multipliers,
                              std::span<const double> x, std::span<const double> lagged_levels,
                              std::uint64_t t) {
  if (params.kind == SmootherKind::kHoltWintersAdditive) {
    throw UnsupportedOperation("bootstrap_delta_direct: no closed-form Holt-Winters weights");
  }
  if (multipliers.size() < t || x.size() < t || lagged_levels.size() < t) {
    throw DomainError("bootstrap_delta_direct: series shorter than t");
  }
  double acc = 0.0;
  for (std::uint64_t i = 1; i <= t; ++i) {
    acc += weight(params, t, i) * multipliers[i - 1] * (x[i - 1] - lagged_levels[i - 1]);
  }
  return acc;
}

}  // namespace trendboot
