#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "collatt/errors.hpp"

namespace collatt {

// The local evolution law at a vertex: a 4x4 unitary mapping the state on
// the two ingoing links to the two outgoing links. Row and column indices
// are 2*(value on the first slot of the pair) + (value on the second slot);
// rows index the outgoing (L,R) pair, columns the ingoing (R,L) pair.
class TwoQubitUnitary {
 public:
  static TwoQubitUnitary identity();
  static TwoQubitUnitary swap_gate();
  // Haar-distributed, bit-stable for a given seed.
  static TwoQubitUnitary haar_random(uint64_t seed);
  // Validates U†U = 1 within 1e-12.
  static TwoQubitUnitary from_matrix(const Eigen::Matrix4cd& m);

  const Eigen::Matrix4cd& matrix() const { return m_; }
  double unitarity_defect() const;

  friend bool operator==(const TwoQubitUnitary& a, const TwoQubitUnitary& b) {
    return a.m_ == b.m_;
  }

 private:
  explicit TwoQubitUnitary(const Eigen::Matrix4cd& m) : m_(m) {}
  Eigen::Matrix4cd m_;
};

inline constexpr double kUnitarityTol = 1e-12;

// Rule mapping vertices to R-matrices: one uniform default plus region
// overrides keyed by (first slot of the pair, per-pair motion ordinal).
// That key names a lattice vertex independently of the motion order, which
// is what makes "replace the R-matrix in region A" well defined.
class RAssignment {
 public:
  explicit RAssignment(TwoQubitUnitary base) : base_(std::move(base)) {}

  // Applies to vertices at `slot` with pair ordinal in [first, last].
  void add_override(int slot, int first_ordinal, int last_ordinal,
                    TwoQubitUnitary u);

  // Later overrides win.
  const TwoQubitUnitary& resolve(int slot, int pair_ordinal) const;

  const TwoQubitUnitary& base() const { return base_; }

 private:
  struct Rule {
    int slot;
    int first_ordinal;
    int last_ordinal;
    TwoQubitUnitary u;
  };
  TwoQubitUnitary base_;
  std::vector<Rule> rules_;
};

}  // namespace collatt
