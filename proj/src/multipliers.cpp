#include "trendboot/multipliers.hpp"

#include <cmath>
#include <string>

#include "trendboot/numerics.hpp"

namespace trendboot {

double persistence(double nu, double chi) {
  if (!(nu > 0.0)) throw ConfigError("persistence: effective sample size must be positive");
  if (!(chi >= 0.0)) throw ConfigError("persistence: chi must be nonnegative");
  return 1.0 - std::pow(nu, -chi);
}

bool chi_outside_theory(double chi) { return !(chi > 0.0 && chi < 0.5); }

double transform_dof(double nu) {
  if (!(nu > 0.0)) throw ConfigError("transform_dof: effective sample size must be positive");
  return 2.0 + std::cbrt(nu);
}

double transform_T(double z, double dof) {
  if (!std::isfinite(z)) throw DomainError("transform_T: argument must be finite");
  // Evaluate on the lower tail and reflect: Phi(z) rounds to 1 long before
  // Phi(-z) underflows.
  if (z > 0.0) return -numerics::unit_variance_t_quantile(numerics::std_normal_cdf(-z), dof);
  if (z == 0.0) return 0.0;
  return numerics::unit_variance_t_quantile(numerics::std_normal_cdf(z), dof);
}

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kStudent:
      return "student";
    case TransformKind::kStudentStandard:
      return "student_standard";
    case TransformKind::kIdentity:
      break;
  }
  return "identity";
}

TransformKind parse_transform_kind(std::string_view name) {
  if (name == "student" || name == "t") return TransformKind::kStudent;
  if (name == "student_standard" || name == "t_standard") return TransformKind::kStudentStandard;
  if (name == "identity" || name == "id") return TransformKind::kIdentity;
  throw ConfigError("unknown transform '" + std::string(name) + "'");
}

Transform::Transform(TransformKind kind, double dof) : kind_(kind), dof_(dof) {
  if (kind_ == TransformKind::kIdentity) return;
  if (!(dof_ > 2.0)) throw ConfigError("transform degrees of freedom must exceed 2");
  if (kind_ == TransformKind::kStudentStandard) scale_ = std::sqrt(dof_ / (dof_ - 2.0));
  const int nodes = static_cast<int>(2 * kTableRange * kCellsPerUnit) + 1;
  value_.resize(nodes);
  slope_.resize(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double z = -kTableRange + static_cast<double>(k) / kCellsPerUnit;
    const double v = transform_T(z, dof_);
    value_[k] = v;
    slope_[k] = numerics::std_normal_pdf(z) / numerics::unit_variance_t_pdf(v, dof_);
  }
}

double Transform::operator()(double z) const {
  if (kind_ == TransformKind::kIdentity) return z;
  const double u = (z + kTableRange) * kCellsPerUnit;
  if (!(u >= 0.0 && u < static_cast<double>(value_.size() - 1))) {
    return scale_ * transform_T(z, dof_);
  }
  const auto k = static_cast<std::size_t>(u);
  const double s = u - static_cast<double>(k);
  constexpr double h = 1.0 / kCellsPerUnit;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return scale_ *
         (h00 * value_[k] + h10 * h * slope_[k] + h01 * value_[k + 1] + h11 * h * slope_[k + 1]);
}

MultiplierConfig MultiplierConfig::from_ess(double nu, double chi) {
  MultiplierConfig cfg;
  cfg.nu = nu;
  cfg.chi = chi;
  cfg.rho = persistence(nu, chi);
  cfg.dof = transform_dof(nu);
  return cfg;
}

double multiplier_step(MultiplierState& state, double rho, double xi, const Transform& transform) {
  state.z = rho * state.z + std::sqrt(1.0 - rho * rho) * xi;
  return transform(state.z);
}

}  // namespace trendboot
