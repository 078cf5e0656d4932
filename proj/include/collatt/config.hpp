#pragma once

#include <string>
#include <vector>

#include "collatt/dynamics.hpp"

namespace collatt {

struct OutputSpec {
  std::string dir = "out";
  bool final_state = false;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

// Optional [experiment] section: parameters shared by the scripted
// investigations. `alt_state` is the second initial state of the
// state-dependence experiment.
struct ExperimentSection {
  bool present = false;
  int runs = 16;
  int samples = 20000;
  int window = 2;
  bool exact = true;
  std::vector<VertexOutcome> filter;
  StateSpec alt_state;

  friend bool operator==(const ExperimentSection&, const ExperimentSection&) =
      default;
};

struct ConfigFile {
  RunConfig run;
  OutputSpec output;
  ExperimentSection experiment;

  friend bool operator==(const ConfigFile&, const ConfigFile&) = default;
};

// Plain-text sectioned key/value format. Unknown sections or keys are
// rejected; parse(serialize(c)) == c for every representable config.
ConfigFile parse_config(const std::string& text);
std::string serialize_config(const ConfigFile& cfg);

ConfigFile load_config(const std::string& path);

// Run-defining sections only ([lattice] [dynamics] [state] [rmatrix]);
// this is the config echo embedded in run records.
std::string serialize_run_config(const RunConfig& cfg);
RunConfig parse_run_config(const std::string& text);

// Shared numeric formatting: 17 significant digits, lossless for doubles.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace collatt
