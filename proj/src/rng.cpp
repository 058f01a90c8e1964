#include "runway/rng.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace runway {

double KeyedStream::normal_quantile(double u) {
  static const boost::math::normal_distribution<double> unit;
  return boost::math::quantile(unit, u);
}

double KeyedStream::truncated_normal_quantile(const TruncatedNormal& d, double u) {
  if (d.sd_s <= 0.0) return d.mean_s;
  static const boost::math::normal_distribution<double> unit;
  const double lo = boost::math::cdf(unit, d.lo_sd);
  const double hi = boost::math::cdf(unit, d.hi_sd);
  const double p = std::clamp(lo + u * (hi - lo), 1e-300, 1.0 - 1e-16);
  const double z = std::clamp(boost::math::quantile(unit, p), d.lo_sd, d.hi_sd);
  return d.mean_s + d.sd_s * z;
}

double KeyedStream::beta_quantile(const BetaShape& b, double u) { return boost::math::ibeta_inv(b.alpha, b.beta, u); }

}  // namespace runway
