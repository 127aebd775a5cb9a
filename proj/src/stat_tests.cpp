#include "povshift/stat_tests.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace povshift {

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("paired_t_test: lists have different lengths (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                ")");
  if (a.size() < 2) throw std::invalid_argument("paired_t_test: need at least two pairs");

  size_t n = a.size();
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult result;
  result.df = static_cast<int>(n) - 1;
  if (sd == 0.0) {
    if (mean > 0.0) {
      result.t = std::numeric_limits<double>::infinity();
      result.p = 0.0;
    } else if (mean < 0.0) {
      result.t = -std::numeric_limits<double>::infinity();
      result.p = 1.0;
    } else {
      result.t = 0.0;
      result.p = 1.0;
    }
    return result;
  }

  result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t dist(static_cast<double>(result.df));
  result.p = boost::math::cdf(boost::math::complement(dist, result.t));
  return result;
}

}  // namespace povshift
