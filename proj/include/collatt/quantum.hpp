#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "collatt/errors.hpp"
#include "collatt/rmatrix.hpp"

namespace collatt {

using cd = std::complex<double>;

inline constexpr double kNormTol = 1e-10;

// Adjacent cyclic slot pair (i, i+1 mod 2N). For every elementary motion the
// outgoing L link sits at `first` and the outgoing R link at `second`.
struct SlotPair {
  int first = 0;
  int second = 1;

  friend bool operator==(const SlotPair&, const SlotPair&) = default;
};

SlotPair adjacent_pair(int first, int num_slots);

// GRW jump parameter, 0 <= X <= 1. X=0 is projective collapse, X=1 leaves
// every state untouched.
struct JumpSpec {
  double x = 0.5;

  void validate() const {
    if (!(x >= 0.0 && x <= 1.0))
      throw config_error("jump spec: X must lie in [0,1]");
  }
};

// Realized field values on the outgoing (L, R) link pair of a vertex.
struct VertexOutcome {
  int alpha_l = 0;
  int alpha_r = 0;

  int index() const { return 2 * alpha_l + alpha_r; }
  static VertexOutcome from_index(int k) { return {(k >> 1) & 1, k & 1}; }

  friend auto operator<=>(const VertexOutcome&, const VertexOutcome&) = default;
};

// Wavefunction on a surface: 2^(2N) amplitudes with basis index
// sum_i b_i 2^i, where b_i is the field value on the link in slot i.
class StateVector {
 public:
  // |0...0>
  explicit StateVector(int num_qubits);
  static StateVector basis_state(int num_qubits, uint64_t index);
  // Takes the amplitudes as given; use normalized() afterwards if needed.
  StateVector(int num_qubits, std::vector<cd> amps);

  int num_qubits() const { return num_qubits_; }
  uint64_t dim() const { return uint64_t{1} << num_qubits_; }
  const std::vector<cd>& amplitudes() const { return amps_; }
  std::vector<cd>& amplitudes() { return amps_; }
  cd amplitude(uint64_t idx) const { return amps_.at(idx); }

  double norm_squared() const;
  double norm() const;
  StateVector normalized() const;
  void check_normalized(double tol = kNormTol) const;

  double max_abs_diff(const StateVector& other) const;

 private:
  int num_qubits_;
  std::vector<cd> amps_;
};

// Raw kernels: act in place, no normalization bookkeeping. The oracle builds
// the unnormalized operator products of the history formula out of these.

// Generic two-site 4x4 application on the pair; matrix index 2*b_first +
// b_second on both sides.
void apply_two_site_inplace(StateVector& psi, SlotPair pair,
                            const Eigen::Matrix4cd& m);

// Multiplies each amplitude by the pair jump factor j(b_L,a_L) j(b_R,a_R).
void apply_jump_inplace(StateVector& psi, SlotPair pair, VertexOutcome outcome,
                        JumpSpec spec);

// Single-link version.
void apply_link_jump_inplace(StateVector& psi, int slot, int alpha_hat,
                             JumpSpec spec);

// Public operations. Each checks that its input is normalized and returns a
// normalized state.

// R-matrix evolution across a vertex at the given adjacent pair.
StateVector apply_unitary(const StateVector& psi, SlotPair pair,
                          const TwoQubitUnitary& u);
void apply_unitary_inplace(StateVector& psi, SlotPair pair,
                           const TwoQubitUnitary& u);

// j = (delta + (1-delta) X) / sqrt(1+X^2)
double jump_factor(JumpSpec spec, int alpha, int alpha_hat);

struct HitResult {
  StateVector state;
  double norm;  // the normalization N; N^2 is the outcome's probability
};

// GRW hit on one link: amplitudes weighted by the jump factor, then
// renormalized. Throws impossible_outcome when the outcome has zero weight
// (reachable only at X=0).
HitResult link_hit(const StateVector& psi, int slot, int alpha_hat,
                   JumpSpec spec);
void link_hit_inplace(StateVector& psi, int slot, int alpha_hat, JumpSpec spec,
                      double* norm_out);

// (N(0)^2, N(1)^2) for a hit on the given slot; sums to 1.
std::array<double, 2> link_jump_distribution(const StateVector& psi, int slot,
                                             JumpSpec spec);

// N(alpha_hat_v)^2 for the four outcomes of a vertex event, indexed by
// VertexOutcome::index(); sums to 1 (the J's are Kraus operators).
std::array<double, 4> vertex_jump_distribution(const StateVector& psi,
                                               SlotPair pair, JumpSpec spec);

// Pair hit: identical to link_hit on the L slot followed by link_hit on the
// R slot; the returned norm squared equals the vertex distribution entry.
HitResult vertex_hit(const StateVector& psi, SlotPair pair,
                     VertexOutcome outcome, JumpSpec spec);

// Conditional Born distribution on the free pair given realized values on
// every other slot, indexed by 2*(value at pair.first) + (value at
// pair.second). Throws when conditioning on a null event.
std::array<double, 4> born_conditional(const StateVector& psi,
                                       const std::map<int, int>& fixed,
                                       SlotPair free);

// Normalized Haar-ish random state (iid complex Gaussian amplitudes),
// bit-stable per seed. Used by verification suites and tests.
StateVector random_state(int num_qubits, uint64_t seed);

}  // namespace collatt
