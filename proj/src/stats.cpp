#include "collatt/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace collatt {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

ChiSquare chi_square_statistic(std::span<const uint64_t> observed,
                               std::span<const double> expected_probs,
                               uint64_t total, double min_expected) {
  if (observed.size() != expected_probs.size())
    throw std::invalid_argument("chi_square: cell count mismatch");
  double stat = 0.0;
  int cells = 0;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probs[i] * static_cast<double>(total);
    const double o = static_cast<double>(observed[i]);
    if (e < min_expected) {
      pooled_obs += o;
      pooled_exp += e;
    } else {
      stat += (o - e) * (o - e) / e;
      ++cells;
    }
  }
  if (pooled_exp > 0.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  return ChiSquare{stat, cells > 1 ? cells - 1 : 0};
}

double chi_square_quantile(int dof, double upper_tail) {
  if (dof < 1) throw std::invalid_argument("chi_square_quantile: dof < 1");
  const double z = normal_quantile(1.0 - upper_tail);
  const double k = static_cast<double>(dof);
  const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

bool chi_square_pass(std::span<const uint64_t> observed,
                     std::span<const double> expected_probs, uint64_t total,
                     double significance) {
  const ChiSquare cs =
      chi_square_statistic(observed, expected_probs, total);
  if (cs.dof < 1) return true;
  return cs.statistic <= chi_square_quantile(cs.dof, significance);
}

}  // namespace collatt
