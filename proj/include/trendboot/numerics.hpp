#pragma once

#include "trendboot/errors.hpp"

namespace trendboot::numerics {

/// Standard normal CDF, accurate to ~1e-16 absolute.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Inverse of std_normal_cdf on (0, 1). Acklam's rational approximation
/// followed by one Halley step against the erfc-based CDF.
double std_normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_beta(double x, double a, double b);

/// Inverse of regularized_beta in x: returns x with I_x(a, b) = p.
double inverse_regularized_beta(double p, double a, double b);

/// CDF of the standard Student-t with (possibly fractional) `dof` > 0.
double student_t_cdf(double x, double dof);

/// Density of the standard Student-t.
double student_t_pdf(double x, double dof);

/// p-quantile of the standard Student-t (scale 1, variance dof/(dof-2)).
double student_t_quantile(double p, double dof);

/// p-quantile of the Student-t rescaled to unit variance:
/// sqrt((dof - 2) / dof) * student_t_quantile(p, dof). Requires dof > 2.
double unit_variance_t_quantile(double p, double dof);

/// Density of the unit-variance Student-t.
double unit_variance_t_pdf(double x, double dof);

}  // namespace trendboot::numerics
