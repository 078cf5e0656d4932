#pragma once

#include <string>
#include <utility>
#include <vector>

#include "collatt/dynamics.hpp"

namespace collatt {

// Outcome of one scripted investigation. Every number is a deterministic
// function of the parameters (all randomness flows through recorded seeds).
// verdict is "pass"/"fail" only where a statistical bar exists, otherwise
// "observational".
struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, double>> stats;
  std::string verdict = "observational";
  std::vector<std::string> notes;
  std::vector<std::string> trace_columns;
  std::vector<std::vector<double>> trace_rows;

  double stat(const std::string& key) const;
};

// Collapse of a two-branch macroscopic superposition: starts from
// (|0...0> + |1...1>)/sqrt(2) with identity vertex unitaries and follows
// the Born weight of the all-zeros branch through every vertex event.
// A run counts as collapsed when min(w, 1-w) drops below 1e-6.
struct MacroCollapseParams {
  Geometry geometry{2};
  int steps = 24;
  double x = 0.5;
  double p = 1.0;
  uint64_t seed = 1;
  int runs = 16;
};
inline constexpr double kCollapseThreshold = 1e-6;
ExperimentReport macro_collapse(const MacroCollapseParams& params);

// Statistics of realized values: per-slot bias, within-event L/R
// correlation, and lag-1 correlation between successive events of a run.
// At x = 1 the values must look like fair coin flips and the verdict is a
// 3-sigma pass/fail; at x < 1 the report is observational.
struct NoiseProfileParams {
  Geometry geometry{2};
  int steps = 64;
  double x = 1.0;
  double p = 1.0;
  uint64_t seed = 1;
  int runs = 64;
  StateSpec state;
  RMatrixSpec rmatrix;
};
ExperimentReport noise_profile(const NoiseProfileParams& params);

// Does the distribution of late outcomes, conditioned on a shared early
// history, depend on the initial wavefunction? Two runs differing only in
// the initial state are conditioned on the same early outcomes and their
// late-window outcome distributions are compared by total variation
// distance. The motion sequence is pinned to the canonical one so both
// configurations grow the same vertices.
struct KentParams {
  Geometry geometry{2};
  double x = 0.5;
  uint64_t seed = 1;
  StateSpec state_a;
  StateSpec state_b;
  RMatrixSpec rmatrix;
  std::vector<VertexOutcome> filter;  // required outcomes of the first vertices
  int window = 2;                     // number of late vertices compared
  int samples = 20000;                // per configuration, sampling mode only
  bool exact = true;                  // prefer exact enumeration when small
};
ExperimentReport kent_state_dependence(const KentParams& params);

}  // namespace collatt
