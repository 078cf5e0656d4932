#pragma once

#include <stdexcept>
#include <string>

namespace collatt {

// Invalid user input: bad config text, malformed record, bad CLI arguments.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation was refused because it would exceed a resource bound
// (factorial or exponential enumeration, state dimension, ...).
struct guardrail_error : std::runtime_error {
  explicit guardrail_error(const std::string& what) : std::runtime_error(what) {}
};

// A hit was requested for an outcome of probability zero. Only reachable at
// X=0 and signals a sampler bug, never a physics condition.
struct impossible_outcome : std::runtime_error {
  explicit impossible_outcome(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace collatt
