#pragma once

#include <Eigen/Dense>
#include <vector>

#include "collatt/lattice.hpp"
#include "collatt/quantum.hpp"
#include "collatt/rmatrix.hpp"

namespace collatt {

// Exhaustive-enumeration caps. Atom counts grow as 4^n and operator
// matrices as 4^num_slots, so these bounds keep the oracle exact and fast.
inline constexpr int kMaxOracleVertices = 8;
inline constexpr int kMaxOperatorHalfWidth = 5;

// Probability distribution over joint vertex outcomes, keyed canonically:
// vertices sorted by ordinal, atom index packs two bits per vertex with
// the lowest ordinal in the lowest bits. Canonical keys make distributions
// produced under different vertex orderings directly comparable.
struct HistoryDistribution {
  std::vector<int> vertices;  // ascending ordinals
  std::vector<double> p;      // size 4^vertices.size()

  double total() const;
  double max_abs_diff(const HistoryDistribution& other) const;
  // Marginal onto a subset of the vertices (must be a subsequence).
  HistoryDistribution marginal(const std::vector<int>& subset) const;
};

// Probability of one complete outcome history: apply J(outcome_k) U(v_k)
// in labeling order to psi0 and return the squared norm of the result.
// The labeling must be natural for the subgraph it covers.
double history_probability(const CausalDag& dag,
                           const std::vector<int>& labeling,
                           const std::vector<VertexOutcome>& outcomes,
                           const RAssignment& assignment,
                           const StateVector& psi0, const JumpSpec& spec);

// Same probability via the chain of sequential conditionals: the product
// of renormalized one-vertex outcome probabilities along the labeling.
// Independent evaluation route for cross-checks.
double history_probability_chain(const CausalDag& dag,
                                 const std::vector<int>& labeling,
                                 const std::vector<VertexOutcome>& outcomes,
                                 const RAssignment& assignment,
                                 const StateVector& psi0,
                                 const JumpSpec& spec);

// All 4^n outcome histories for one vertex ordering, by prefix-sharing
// recursion (each unitary is applied once per distinct prefix).
HistoryDistribution enumerate_distribution(const CausalDag& dag,
                                           const std::vector<int>& labeling,
                                           const RAssignment& assignment,
                                           const StateVector& psi0,
                                           const JumpSpec& spec);

struct OrderIndependenceResult {
  double max_deviation = 0.0;
  int num_extensions = 0;
};

// Enumerates the outcome distribution under every linear extension of the
// stem and reports the largest pointwise disagreement between any pair.
OrderIndependenceResult gamma_independence_check(
    const CausalDag& dag, const std::vector<int>& stem,
    const RAssignment& assignment, const StateVector& psi0,
    const JumpSpec& spec, int max_stem = kDefaultExtensionBound);

// Dense embedding of J(outcome) U at a vertex into the full 2^num_slots
// dimensional space.
Eigen::MatrixXcd embedded_event_operator(const Vertex& v,
                                         VertexOutcome outcome,
                                         const TwoQubitUnitary& u,
                                         int num_slots, const JumpSpec& spec);

// Largest singular value of [E1, E2] for the embedded event operators of
// two vertices. Exactly zero (to rounding) when the vertices act on
// disjoint slot pairs, which spacelike vertices always do.
double commutator_norm(const CausalDag& dag, int v1, int v2,
                       VertexOutcome o1, VertexOutcome o2,
                       const RAssignment& assignment, int num_slots,
                       const JumpSpec& spec);

// Conjugated jump operator for position k (0-based) of the labeling:
// W† J(outcome) W with W = U(v_k) ... U(v_1).
Eigen::MatrixXcd heisenberg_jump(const CausalDag& dag,
                                 const std::vector<int>& labeling, int k,
                                 VertexOutcome outcome,
                                 const RAssignment& assignment, int num_slots,
                                 const JumpSpec& spec);

// History probability evaluated as |J~_n ... J~_1 |psi0>|^2 with the
// conjugated jumps above and one overall unitary absorbed into the norm.
double heisenberg_history_probability(const CausalDag& dag,
                                      const std::vector<int>& labeling,
                                      const std::vector<VertexOutcome>& outcomes,
                                      const RAssignment& assignment,
                                      const StateVector& psi0,
                                      const JumpSpec& spec);

// Union of the causal pasts of `vertices` together with the vertices
// themselves, sorted ascending.
std::vector<int> past_closure(const CausalDag& dag,
                              const std::vector<int>& vertices);

struct NoSignalingResult {
  double max_deviation = 0.0;
  std::vector<int> stem;    // past closure of A and B, creation order
  std::vector<int> target;  // B and its causal past
};

// Compares the joint outcome distribution on B and its causal past between
// two R-matrix assignments that differ only at vertices of A, where every
// vertex of A is spacelike to every vertex of B. Enumeration runs over the
// past closure of A and B so that A's operators genuinely participate.
NoSignalingResult no_signaling_check(const CausalDag& dag,
                                     const std::vector<int>& a_vertices,
                                     const std::vector<int>& b_vertices,
                                     const RAssignment& assign1,
                                     const RAssignment& assign2,
                                     const StateVector& psi0,
                                     const JumpSpec& spec);

// Exhaustive enumeration of realized-value histories under the
// unitary-plus-conditional-sampling dynamics: every initial surface
// configuration weighted by the Born rule, then every per-step pair value
// weighted by its conditional probability.
struct SamolsDistribution {
  HistoryDistribution vertex_dist;     // joint pair-value outcomes
  std::vector<double> final_marginal;  // realized final configuration
};

SamolsDistribution samols_enumerate(const CausalDag& dag,
                                    const std::vector<int>& labeling,
                                    const RAssignment& assignment,
                                    const StateVector& psi0);

// Probability of one realized-value history (initial configuration plus
// the value pair revealed at each step, in labeling order).
double samols_history_probability(const CausalDag& dag,
                                  const std::vector<int>& labeling,
                                  const std::vector<int>& initial_bits,
                                  const std::vector<VertexOutcome>& outcomes,
                                  const RAssignment& assignment,
                                  const StateVector& psi0);

}  // namespace collatt
