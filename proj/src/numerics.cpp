#include "trendboot/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace trendboot::numerics {
namespace {

constexpr int kMaxIterations = 300;
constexpr double kTiny = 1e-300;

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(what) + ": probability must lie in (0, 1)");
  }
}

// Remainder of Stirling's series: lgamma(x) - [(x - 1/2) log x - x + log(2 pi)/2].
double stirling_remainder(double x) {
  const double r = 1.0 / (x * x);
  return (1.0 / 12.0 - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r / 1680.0))) / x;
}

// log B(a, b). For a large shape the leading Stirling terms are combined
// analytically; plain lgamma differences lose ~log10(a) digits there.
double log_beta(double a, double b) {
  const double big = std::max(a, b);
  const double small = std::min(a, b);
  if (big < 10.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double sum = big + small;
  const double correction = stirling_remainder(big) - stirling_remainder(sum);
  if (small < 10.0) {
    return std::lgamma(small) - (big - 0.5) * std::log1p(small / big) - small * std::log(sum) +
           small + correction;
  }
  return 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(small) -
         (big - 0.5) * std::log1p(small / big) + small * std::log(small / sum) +
         stirling_remainder(small) + correction;
}

// Continued fraction for I_x(a, b), modified Lentz. Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

// Acklam's rational approximation to the normal quantile (rel. error ~1e-9).
double acklam_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// I_x(a, b) with y = 1 - x supplied separately, so that neither x nor y
// loses precision when the other is close to 1.
double regularized_beta_xy(double x, double y, double a, double b) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return 1.0;
  const double front = std::exp(a * std::log(x) + b * std::log(y) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(y, b, a) / b;
}

// Upper tail of the standard t: P(T > x) for x >= 0.
double student_t_upper_tail(double x, double dof) {
  const double x2 = x * x;
  const double denom = dof + x2;
  return 0.5 * regularized_beta_xy(dof / denom, x2 / denom, 0.5 * dof, 0.5);
}

}  // namespace

double std_normal_cdf(double x) {
  if (std::isnan(x)) throw DomainError("std_normal_cdf: argument is NaN");
  if (std::isinf(x)) {
    throw DomainError("std_normal_cdf: argument must be finite");
  }
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  require_open_unit(p, "std_normal_quantile");
  if (p == 0.5) return 0.0;
  // Work on the lower tail and reflect; keeps the result exactly odd.
  const bool upper = p > 0.5;
  const double tail = upper ? 1.0 - p : p;
  double x = acklam_quantile(tail);
  // One Halley step. 1 - p is exact for p > 0.5 in double, so reflecting
  // costs nothing.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - tail;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return upper ? -x : x;
}

double regularized_beta(double x, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) {
    throw DomainError("regularized_beta: shape parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("regularized_beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  return regularized_beta_xy(x, 1.0 - x, a, b);
}

double inverse_regularized_beta(double p, double a, double b) {
  if (!(a > 0.0 && b > 0.0)) {
    throw DomainError("inverse_regularized_beta: shape parameters must be positive");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("inverse_regularized_beta: p must lie in [0, 1]");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const double a1 = a - 1.0;
  const double b1 = b - 1.0;
  double x;
  if (a >= 1.0 && b >= 1.0) {
    const double pp = p < 0.5 ? p : 1.0 - p;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (p < 0.5) z = -z;
    const double al = (z * z - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = z * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                         (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    x = a / (a + b * std::exp(2.0 * w));
  } else {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (p < t / w) {
      x = std::pow(a * w * p, 1.0 / a);
    } else {
      x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
  }

  // Halley iterations with bracketing; lo/hi tighten as the sign of the
  // residual is observed so a wild step cannot escape the root.
  const double log_norm = -log_beta(a, b);
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    if (x <= 0.0 || x >= 1.0) x = 0.5 * (lo + hi);
    const double err = regularized_beta(x, a, b) - p;
    if (err == 0.0) return x;
    if (err < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density = std::exp(a1 * std::log(x) + b1 * std::log1p(-x) + log_norm);
    double step;
    if (density > 0.0 && std::isfinite(density)) {
      const double u = err / density;
      step = u / (1.0 - 0.5 * std::min(1.0, u * (a1 / x - b1 / (1.0 - x))));
    } else {
      step = x - 0.5 * (lo + hi);
    }
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * std::max(x, 1e-300) || hi - lo <= 1e-16 * hi) {
      return next;
    }
    x = next;
  }
  return x;
}

double student_t_pdf(double x, double dof) {
  if (!(dof > 0.0)) throw DomainError("student_t_pdf: dof must be positive");
  const double log_c = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                       0.5 * std::log(dof * std::numbers::pi);
  return std::exp(log_c - 0.5 * (dof + 1.0) * std::log1p(x * x / dof));
}

double student_t_cdf(double x, double dof) {
  if (!(dof > 0.0)) throw DomainError("student_t_cdf: dof must be positive");
  if (std::isnan(x)) throw DomainError("student_t_cdf: argument is NaN");
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double tail = student_t_upper_tail(std::fabs(x), dof);
  return x >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double dof) {
  require_open_unit(p, "student_t_quantile");
  if (!(dof > 0.0)) throw DomainError("student_t_quantile: dof must be positive");
  if (p == 0.5) return 0.0;
  const bool upper = p > 0.5;
  const double tail = upper ? 1.0 - p : p;  // P(T > |t|)
  const double two_tail = 2.0 * tail;

  double t;
  if (two_tail < 0.5) {
    // P(|T| > t) = I_{dof/(dof+t^2)}(dof/2, 1/2)
    const double x = inverse_regularized_beta(two_tail, 0.5 * dof, 0.5);
    t = std::sqrt(dof * (1.0 - x) / x);
  } else {
    // P(|T| <= t) = I_{t^2/(dof+t^2)}(1/2, dof/2)
    const double y = inverse_regularized_beta(1.0 - two_tail, 0.5, 0.5 * dof);
    t = std::sqrt(dof * y / (1.0 - y));
  }

  // Newton polish on log P(T > t), which is close to linear in the tails.
  const double log_tail = std::log(tail);
  for (int it = 0; it < 50; ++it) {
    const double s = student_t_upper_tail(t, dof);
    const double dens = student_t_pdf(t, dof);
    if (!(s > 0.0 && dens > 0.0)) break;
    const double step = (std::log(s) - log_tail) * s / dens;
    t += step;
    if (std::fabs(step) <= 1e-15 * std::max(1.0, std::fabs(t))) break;
  }
  return upper ? t : -t;
}

double unit_variance_t_quantile(double p, double dof) {
  if (!(dof > 2.0)) {
    throw DomainError("unit_variance_t_quantile: dof must exceed 2");
  }
  require_open_unit(p, "unit_variance_t_quantile");
  return std::sqrt((dof - 2.0) / dof) * student_t_quantile(p, dof);
}

double unit_variance_t_pdf(double x, double dof) {
  if (!(dof > 2.0)) throw DomainError("unit_variance_t_pdf: dof must exceed 2");
  const double scale = std::sqrt((dof - 2.0) / dof);
  return student_t_pdf(x / scale, dof) / scale;
}

}  // namespace trendboot::numerics
