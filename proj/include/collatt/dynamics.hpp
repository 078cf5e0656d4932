#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "collatt/lattice.hpp"
#include "collatt/quantum.hpp"
#include "collatt/rng.hpp"

namespace collatt {

enum class DynamicsKind { grw, samols, unitary };

std::string to_string(DynamicsKind k);
DynamicsKind dynamics_kind_from_string(const std::string& s);

// Initial wavefunction on sigma_0. Default is |0...0>.
struct StateSpec {
  enum class Kind { basis, product, amplitudes };
  Kind kind = Kind::basis;
  // basis: one character per slot, slot 0 first.
  std::string bits = "";
  // product: per-slot (re0, im0, re1, im1); normalized slot by slot.
  std::vector<std::array<double, 4>> qubits;
  // amplitudes: sparse (index, value); normalized as a whole.
  std::vector<std::pair<uint64_t, cd>> amps;

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

// R-matrix assignment over the lattice: a uniform kind plus region
// overrides keyed by (slot pair, per-pair motion ordinal range).
struct RMatrixSpec {
  enum class Kind { identity, swap, random_unitary, explicit_entries };
  Kind kind = Kind::identity;
  uint64_t seed = 0;                  // random_unitary
  std::array<cd, 16> entries{};       // explicit, row major
  struct Override {
    int slot = 0;
    int first_ordinal = 0;
    int last_ordinal = 0;
    Kind kind = Kind::identity;  // explicit entries not allowed in overrides
    uint64_t seed = 0;
    friend bool operator==(const Override&, const Override&) = default;
  };
  std::vector<Override> overrides;

  friend bool operator==(const RMatrixSpec&, const RMatrixSpec&) = default;
};

struct RunConfig {
  Geometry geometry{2};
  DynamicsKind kind = DynamicsKind::grw;
  int steps = 0;
  double x = 0.5;  // grw only
  double p = 1.0;  // grw only: per-vertex realization probability
  uint64_t seed = 0;
  StateSpec state;
  RMatrixSpec rmatrix;

  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Hard cap on the surface width for runs: 2^(2*13) amplitudes is the
// largest state the simulator will allocate.
inline constexpr int kMaxRunHalfWidth = 13;

StateVector make_initial_state(const Geometry& geom, const StateSpec& spec);
RAssignment make_assignment(const RMatrixSpec& spec);

// One vertex event. For grw, norm_l/norm_r are the hit normalizations N_L
// and N_R (their squares are the sequential outcome probabilities). For
// samols they are the square roots of the sequential Born conditionals.
// Unrealized events (skipped p-gate, or unitary dynamics) carry no values.
struct Event {
  int vertex = 0;
  int slot = 0;  // pair = (slot, slot+1 mod 2N)
  bool realized = false;
  VertexOutcome outcome{};
  double norm_l = 0.0;
  double norm_r = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
};

// The reproducible artifact of a run: (config, seed) determine every field.
struct RunRecord {
  RunConfig config;
  std::string generator{kGeneratorId};
  std::vector<int> motions;  // chosen pair slot per step
  std::vector<Event> events;
  std::vector<int> samols_initial;  // realized sigma_0 values, samols only
  std::optional<std::vector<cd>> final_state;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// In-flight run state. One trajectory is strictly sequential; independent
// trajectories share nothing.
class Trajectory {
 public:
  explicit Trajectory(const RunConfig& config);

  void step();
  // Forced-motion variant: crosses the given RL pair instead of drawing
  // from the motion stream. Event sampling is unchanged.
  void step_at(int slot);

  const Surface& surface() const { return surface_; }
  const CausalDag& dag() const { return dag_; }
  const StateVector& state() const { return psi_; }
  const RunRecord& record() const { return record_; }
  int steps_taken() const { return static_cast<int>(record_.motions.size()); }

  // Realized values on the current surface (samols only).
  const std::vector<int>& realized() const { return realized_; }

  RunRecord finish(bool dump_final_state = false) &&;

 private:
  int draw_motion();
  void step_grw(int slot, int vertex);
  void step_samols(int slot, int vertex);
  void sample_samols_initial();

  RunConfig config_;
  JumpSpec spec_;
  RAssignment assignment_;
  Surface surface_;
  CausalDag dag_;
  StateVector psi_;
  RunRng rng_;
  RunRecord record_;
  std::vector<int> realized_;
};

// Executes `steps` steps of the configured dynamics. Pure function of
// (config, seed): repeated invocations produce identical records.
RunRecord run(const RunConfig& config, bool dump_final_state = false);

}  // namespace collatt
