#pragma once

#include <cstdint>
#include <span>

namespace collatt {

// Lower quantile of the standard normal distribution (rational
// approximation, absolute error below 1e-8 over (0,1)).
double normal_quantile(double p);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
};

// Pearson statistic against expected_probs * total. Cells with expected
// count below min_expected are merged into one pooled cell first.
ChiSquare chi_square_statistic(std::span<const uint64_t> observed,
                               std::span<const double> expected_probs,
                               uint64_t total, double min_expected = 5.0);

// Upper-tail quantile by the Wilson-Hilferty cube approximation.
double chi_square_quantile(int dof, double upper_tail);

// Goodness-of-fit accept/reject at the given significance level.
bool chi_square_pass(std::span<const uint64_t> observed,
                     std::span<const double> expected_probs, uint64_t total,
                     double significance);

}  // namespace collatt
