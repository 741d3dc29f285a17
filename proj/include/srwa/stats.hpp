#pragma once

#include <span>

namespace srwa {

double mean(std::span<const double> v);
// Sample standard deviation (n - 1); zero for fewer than two values.
double sample_std(std::span<const double> v);
// Half-width of the two-sided t confidence interval for the mean.
double t_half_width(std::span<const double> v, double confidence = 0.95);
// One-sided sign test p-value for "wins exceed losses": P(Bin(n, 1/2) >= wins)
// with ties discarded. One when there are no untied pairs.
double sign_test_p(int wins, int losses);

}  // namespace srwa
