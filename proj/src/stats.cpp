#include "srwa/stats.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "srwa/error.hpp"

namespace srwa {

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double t_half_width(std::span<const double> v, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
  if (v.size() < 2) return 0.0;
  const boost::math::students_t dist(static_cast<double>(v.size() - 1));
  const double q = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
  return q * sample_std(v) / std::sqrt(static_cast<double>(v.size()));
}

double sign_test_p(int wins, int losses) {
  const int n = wins + losses;
  if (n <= 0) return 1.0;
  if (wins <= 0) return 1.0;
  const boost::math::binomial dist(n, 0.5);
  // P(X >= wins) = 1 - P(X <= wins - 1)
  return boost::math::cdf(boost::math::complement(dist, wins - 1));
}

}  // namespace srwa
