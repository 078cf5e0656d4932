#pragma once

#include <string>
#include <vector>

#include "collatt/dynamics.hpp"

namespace collatt {

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_deviation = 0.0;
  std::string detail;  // replay hint for the worst instance
};

// Each suite runs its checks over randomized instances derived from the
// base config's seed (plus a few pinned witness instances) and reports one
// CheckResult per check with the largest deviation observed.

// Kraus completeness, the scalar jump-factor identity, and the two-factor
// norm chain against the four-outcome distribution.
std::vector<CheckResult> verify_kraus(const RunConfig& base,
                                      int instances = 100);

// Outcome distributions agree across every linear extension of a stem.
std::vector<CheckResult> verify_gamma(const RunConfig& base,
                                      int instances = 20);

// Marginals on a region and its past are unchanged when R-matrices vary
// only at vertices spacelike to it.
std::vector<CheckResult> verify_nosignal(const RunConfig& base,
                                         int instances = 50);

// Final-configuration marginal matches the Born distribution of the
// unitarily evolved state, plus an order-dependence witness.
std::vector<CheckResult> verify_samols(const RunConfig& base,
                                       int instances = 10);

// Conjugated-jump route reproduces operator-product history probabilities
// and the conjugated jump is blind to spacelike R-matrix changes.
std::vector<CheckResult> verify_heisenberg(const RunConfig& base);

// name in {kraus, gamma, nosignal, samols, heisenberg, all}.
std::vector<CheckResult> verify_suite(const std::string& name,
                                      const RunConfig& base);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace collatt
