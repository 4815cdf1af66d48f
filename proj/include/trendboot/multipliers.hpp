#pragma once

#include <string_view>
#include <vector>

#include "trendboot/errors.hpp"

namespace trendboot {

inline constexpr double kDefaultChi = 1.0 / 3.0;

/// Persistence of the latent multiplier chain, 1 - nu^-chi.
/// chi = 0 gives the iid multiplier bootstrap.
double persistence(double nu, double chi);

/// True when chi lies outside (0, 1/2), the range covered by the theory.
/// Such values are accepted but should be reported to the user.
bool chi_outside_theory(double chi);

/// Degrees of freedom of the heavy-tailed transform, 2 + nu^(1/3).
double transform_dof(double nu);

/// T(z) = unit-variance t_dof quantile of Phi(z). Exact evaluation.
double transform_T(double z, double dof);

/// kStudent is T above. kStudentStandard uses the standard t_dof quantile
/// instead, so T(Z) has variance dof / (dof - 2). kIdentity gives Gaussian
/// multipliers.
enum class TransformKind { kStudent, kStudentStandard, kIdentity };

std::string_view to_string(TransformKind kind);
TransformKind parse_transform_kind(std::string_view name);

/// Fast evaluator for T with a fixed dof.
///
/// On |z| <= kTableRange the transform is a cubic Hermite interpolant on a
/// uniform grid built from exact values and exact derivatives
/// T'(z) = phi(z) / f(T(z)); outside it falls back to transform_T. The
/// interpolation error is below 1e-8 relative for dof >= 2.5 and below
/// 2e-10 for dof >= 8.
class Transform {
 public:
  static constexpr double kTableRange = 6.0;
  static constexpr int kCellsPerUnit = 64;

  Transform(TransformKind kind, double dof);

  double operator()(double z) const;

  TransformKind kind() const { return kind_; }
  double dof() const { return dof_; }

 private:
  TransformKind kind_;
  double dof_;
  double scale_ = 1.0;
  std::vector<double> value_;
  std::vector<double> slope_;
};

struct MultiplierConfig {
  double nu = 0.0;
  double chi = kDefaultChi;
  double rho = 0.0;
  double dof = 0.0;

  /// rho and dof derived from nu and chi; throws ConfigError for nu <= 0.
  static MultiplierConfig from_ess(double nu, double chi);
};

/// Latent AR(1) Gaussian value of one multiplier chain; starts at zero.
struct MultiplierState {
  double z = 0.0;
};

/// Advance z <- rho z + sqrt(1 - rho^2) xi and return V = T(z).
double multiplier_step(MultiplierState& state, double rho, double xi, const Transform& transform);

}  // namespace trendboot
