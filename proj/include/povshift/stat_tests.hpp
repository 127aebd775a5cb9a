#pragma once

#include <vector>

namespace povshift {

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int df = 0;
};

// One-tailed paired t-test for mean(a - b) > 0. Zero-variance conventions:
// identical lists give p = 1; uniformly positive differences give p = 0;
// uniformly negative differences give p = 1. Throws std::invalid_argument on
// length mismatch or fewer than two pairs.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace povshift
