#include "trendboot/smoothers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trendboot {

std::string_view to_string(SmootherKind kind) {
  switch (kind) {
    case SmootherKind::kEwma:
      return "ewma";
    case SmootherKind::kBrownDouble:
      return "brown";
    case SmootherKind::kHoltWintersAdditive:
      return "holt_winters";
  }
  return "unknown";
}

SmootherKind parse_smoother_kind(std::string_view name) {
  if (name == "ewma") return SmootherKind::kEwma;
  if (name == "brown") return SmootherKind::kBrownDouble;
  if (name == "holt_winters" || name == "hw") return SmootherKind::kHoltWintersAdditive;
  throw ConfigError("unknown smoother kind '" + std::string(name) + "'");
}

SmootherParams SmootherParams::ewma(double eta) {
  SmootherParams p{SmootherKind::kEwma, {eta, 0.0, 0.0}, 1};
  p.validate();
  return p;
}

SmootherParams SmootherParams::brown(double eta) {
  SmootherParams p{SmootherKind::kBrownDouble, {eta, 0.0, 0.0}, 1};
  p.validate();
  return p;
}

SmootherParams SmootherParams::holt_winters(double level, double trend, double seasonal,
                                            std::uint32_t period) {
  SmootherParams p{SmootherKind::kHoltWintersAdditive, {level, trend, seasonal}, period};
  p.validate();
  return p;
}

void SmootherParams::validate() const {
  switch (kind) {
    case SmootherKind::kEwma:
    case SmootherKind::kBrownDouble:
      if (!(eta[0] > 0.0 && eta[0] < 1.0)) {
        throw ConfigError("smoothing parameter eta must lie in (0, 1), got " +
                          std::to_string(eta[0]));
      }
      break;
    case SmootherKind::kHoltWintersAdditive:
      for (double e : eta) {
        if (!(e >= 0.0 && e <= 1.0)) {
          throw ConfigError("Holt-Winters smoothing parameters must lie in [0, 1]");
        }
      }
      if (period < 1) throw ConfigError("Holt-Winters period must be at least 1");
      break;
  }
}

Smoother::Smoother(const SmootherParams& params) : params_(params) {
  params_.validate();
  if (params_.kind == SmootherKind::kHoltWintersAdditive) {
    seasonal_.assign(params_.period, 0.0);
  }
}

double Smoother::update(double x) {
  if (!std::isfinite(x)) throw DataError("smoother update: observation is not finite");
  return update_unchecked(x);
}

double Smoother::update_unchecked(double x) noexcept {
  ++t_;
  switch (params_.kind) {
    case SmootherKind::kEwma: {
      const double eta = params_.eta[0];
      s1_ = eta * x + (1.0 - eta) * s1_;
      level_ = s1_;
      break;
    }
    case SmootherKind::kBrownDouble: {
      const double eta = params_.eta[0];
      s1_ = eta * x + (1.0 - eta) * s1_;
      s2_ = eta * s1_ + (1.0 - eta) * s2_;
      level_ = 2.0 * s1_ - s2_;
      break;
    }
    case SmootherKind::kHoltWintersAdditive: {
      const auto [e1, e2, e3] = params_.eta;
      const double c_lag = seasonal_[seasonal_pos_];  // c_{t-L}
      const double s_prev = s1_;
      const double b_prev = s2_;
      s1_ = e1 * (x - c_lag) + (1.0 - e1) * (s_prev + b_prev);
      s2_ = e2 * (s1_ - s_prev) + (1.0 - e2) * b_prev;
      seasonal_[seasonal_pos_] = e3 * (x - s1_) + (1.0 - e3) * c_lag;
      seasonal_pos_ = (seasonal_pos_ + 1) % seasonal_.size();
      level_ = s1_;
      break;
    }
  }
  return level_;
}

std::vector<double> Smoother::state() const {
  switch (params_.kind) {
    case SmootherKind::kEwma:
      return {s1_};
    case SmootherKind::kBrownDouble:
      return {s1_, s2_};
    case SmootherKind::kHoltWintersAdditive: {
      std::vector<double> out{s1_, s2_};
      for (std::size_t k = 0; k < seasonal_.size(); ++k) {
        out.push_back(seasonal_[(seasonal_pos_ + k) % seasonal_.size()]);
      }
      return out;
    }
  }
  return {};
}

void Smoother::restore(std::uint64_t t, std::span<const double> state) {
  const std::size_t expected = params_.kind == SmootherKind::kEwma          ? 1
                               : params_.kind == SmootherKind::kBrownDouble ? 2
                                                                            : 2 + seasonal_.size();
  if (state.size() != expected) {
    throw ConfigError("smoother restore: expected " + std::to_string(expected) +
                      " state values, got " + std::to_string(state.size()));
  }
  t_ = t;
  s1_ = state[0];
  s2_ = expected > 1 ? state[1] : 0.0;
  seasonal_pos_ = 0;
  for (std::size_t k = 0; k < seasonal_.size(); ++k) seasonal_[k] = state[2 + k];
  switch (params_.kind) {
    case SmootherKind::kEwma:
    case SmootherKind::kHoltWintersAdditive:
      level_ = s1_;
      break;
    case SmootherKind::kBrownDouble:
      level_ = 2.0 * s1_ - s2_;
      break;
  }
}

double weight(const SmootherParams& params, std::uint64_t t, std::uint64_t i) {
  if (i < 1) throw DomainError("weight: index i must be at least 1");
  if (params.kind == SmootherKind::kHoltWintersAdditive) {
    throw UnsupportedOperation("weight: no closed form for Holt-Winters smoothing");
  }
  if (i > t) return 0.0;
  const double eta = params.eta[0];
  const double lag = static_cast<double>(t - i);
  const double geometric = std::pow(1.0 - eta, lag);
  if (params.kind == SmootherKind::kEwma) return eta * geometric;
  return eta * (2.0 - eta * (lag + 1.0)) * geometric;
}

double effective_sample_size(const SmootherParams& params) {
  params.validate();
  const double eta = params.eta[0];
  switch (params.kind) {
    case SmootherKind::kEwma:
      return (2.0 - eta) / eta;
    case SmootherKind::kBrownDouble: {
      // Steady state: weights indexed by lag k = t - i >= 0. Past the sign
      // change at k ~ 2/eta the terms decay monotonically, so stop there once
      // an increment is negligible.
      const double turn = 2.0 / eta;
      double sum = 0.0;
      for (std::uint64_t k = 0;; ++k) {
        const double kd = static_cast<double>(k);
        const double w = eta * (2.0 - eta * (kd + 1.0)) * std::pow(1.0 - eta, kd);
        const double inc = w * w;
        sum += inc;
        if (kd > turn + 1.0 && inc < 1e-12 * sum) break;
      }
      return 1.0 / sum;
    }
    case SmootherKind::kHoltWintersAdditive:
      break;
  }
  throw UnsupportedOperation("effective_sample_size: no closed form for Holt-Winters smoothing");
}

double ewma_eta_for_ess(double nu) {
  if (!(nu > 1.0) || !std::isfinite(nu)) {
    throw ConfigError("effective sample size must be a finite value above 1");
  }
  return 2.0 / (nu + 1.0);
}

double weight_distance(double eta, double s, double t, double gamma, std::uint32_t c) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("weight_distance: eta must lie in (0, 1)");
  if (!(gamma > 2.0)) throw DomainError("weight_distance: gamma must exceed 2");
  if (c < 1) throw DomainError("weight_distance: c must be positive");
  const double lower = 1.0 / static_cast<double>(c);
  if (!(s >= lower && s <= 1.0 && t >= lower && t <= 1.0)) {
    throw DomainError("weight_distance: s and t must lie in [1/c, 1]");
  }
  const double nu = (2.0 - eta) / eta;
  const auto ms = static_cast<std::uint64_t>(std::floor(s * c * nu));
  const auto mt = static_cast<std::uint64_t>(std::floor(t * c * nu));
  const auto horizon = std::max(ms, mt);
  const auto ewma = SmootherParams::ewma(eta);
  double acc = 0.0;
  for (std::uint64_t i = 1; i <= horizon; ++i) {
    const double diff = nu * (weight(ewma, ms, i) - weight(ewma, mt, i));
    acc += std::pow(std::fabs(diff), gamma);
  }
  return std::pow(acc / nu, 1.0 / gamma);
}

}  // namespace trendboot
