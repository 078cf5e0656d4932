#include "collatt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace collatt {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Position of each labeling entry in the ascending-ordinal ordering, which
// fixes its two-bit field inside a canonical atom index.
std::vector<int> canonical_positions(const std::vector<int>& labeling) {
  std::vector<int> sorted = labeling;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "vertex labeling contains duplicates");
  std::vector<int> pos(labeling.size());
  for (size_t k = 0; k < labeling.size(); ++k)
    pos[k] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), labeling[k]) -
        sorted.begin());
  return pos;
}

void check_history_inputs(const CausalDag& dag, const std::vector<int>& labeling,
                          const StateVector& psi0) {
  require(psi0.num_qubits() == dag.geometry().num_slots(),
          "state width does not match the lattice");
  require(dag.is_natural_labeling(labeling),
          "labeling is not natural: some vertex precedes its own cause");
}

}  // namespace

double HistoryDistribution::total() const {
  double t = 0.0;
  for (double x : p) t += x;
  return t;
}

double HistoryDistribution::max_abs_diff(const HistoryDistribution& other) const {
  require(vertices == other.vertices,
          "distributions cover different vertex sets");
  require(p.size() == other.p.size(), "distribution size mismatch");
  double m = 0.0;
  for (size_t i = 0; i < p.size(); ++i)
    m = std::max(m, std::abs(p[i] - other.p[i]));
  return m;
}

HistoryDistribution HistoryDistribution::marginal(
    const std::vector<int>& subset) const {
  require(std::is_sorted(subset.begin(), subset.end()),
          "marginal subset must be sorted");
  std::vector<int> field(subset.size());
  for (size_t i = 0; i < subset.size(); ++i) {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), subset[i]);
    require(it != vertices.end() && *it == subset[i],
            "marginal subset is not contained in the distribution");
    field[i] = static_cast<int>(it - vertices.begin());
  }
  HistoryDistribution out;
  out.vertices = subset;
  out.p.assign(size_t{1} << (2 * subset.size()), 0.0);
  for (size_t a = 0; a < p.size(); ++a) {
    size_t sub = 0;
    for (size_t i = 0; i < subset.size(); ++i)
      sub |= ((a >> (2 * field[i])) & 3u) << (2 * i);
    out.p[sub] += p[a];
  }
  return out;
}

double history_probability(const CausalDag& dag,
                           const std::vector<int>& labeling,
                           const std::vector<VertexOutcome>& outcomes,
                           const RAssignment& assignment,
                           const StateVector& psi0, const JumpSpec& spec) {
  require(labeling.size() == outcomes.size(),
          "one outcome per labeled vertex required");
  check_history_inputs(dag, labeling, psi0);
  StateVector psi = psi0;
  const int n = psi.num_qubits();
  for (size_t k = 0; k < labeling.size(); ++k) {
    const Vertex& v = dag.vertex(labeling[k]);
    const SlotPair pair = adjacent_pair(v.slot, n);
    apply_two_site_inplace(psi, pair,
                           assignment.resolve(v.slot, v.pair_ordinal).matrix());
    apply_jump_inplace(psi, pair, outcomes[k], spec);
  }
  return psi.norm_squared();
}

double history_probability_chain(const CausalDag& dag,
                                 const std::vector<int>& labeling,
                                 const std::vector<VertexOutcome>& outcomes,
                                 const RAssignment& assignment,
                                 const StateVector& psi0,
                                 const JumpSpec& spec) {
  require(labeling.size() == outcomes.size(),
          "one outcome per labeled vertex required");
  check_history_inputs(dag, labeling, psi0);
  StateVector psi = psi0;
  const int n = psi.num_qubits();
  double prob = 1.0;
  for (size_t k = 0; k < labeling.size(); ++k) {
    const Vertex& v = dag.vertex(labeling[k]);
    const SlotPair pair = adjacent_pair(v.slot, n);
    apply_unitary_inplace(psi, pair, assignment.resolve(v.slot, v.pair_ordinal));
    const auto dist = vertex_jump_distribution(psi, pair, spec);
    const double pk = dist[outcomes[k].index()];
    prob *= pk;
    if (pk <= 0.0) return 0.0;
    psi = vertex_hit(psi, pair, outcomes[k], spec).state;
  }
  return prob;
}

namespace {

struct Enumerator {
  const CausalDag& dag;
  const std::vector<int>& labeling;
  const std::vector<int>& pos;
  const RAssignment& assignment;
  const JumpSpec& spec;
  std::vector<double>& p;

  void recurse(const StateVector& psi, size_t k, size_t atom) const {
    if (k == labeling.size()) {
      p[atom] += psi.norm_squared();
      return;
    }
    const Vertex& v = dag.vertex(labeling[k]);
    const SlotPair pair = adjacent_pair(v.slot, psi.num_qubits());
    StateVector evolved = psi;
    apply_two_site_inplace(evolved, pair,
                           assignment.resolve(v.slot, v.pair_ordinal).matrix());
    for (int oi = 0; oi < 4; ++oi) {
      StateVector branch = evolved;
      apply_jump_inplace(branch, pair, VertexOutcome::from_index(oi), spec);
      recurse(branch, k + 1, atom | (size_t{unsigned(oi)} << (2 * pos[k])));
    }
  }
};

}  // namespace

HistoryDistribution enumerate_distribution(const CausalDag& dag,
                                           const std::vector<int>& labeling,
                                           const RAssignment& assignment,
                                           const StateVector& psi0,
                                           const JumpSpec& spec) {
  if (labeling.size() > kMaxOracleVertices)
    throw guardrail_error("too many vertices for exhaustive enumeration: " +
                          std::to_string(labeling.size()) + ", limit " +
                          std::to_string(kMaxOracleVertices));
  check_history_inputs(dag, labeling, psi0);
  const std::vector<int> pos = canonical_positions(labeling);

  HistoryDistribution dist;
  dist.vertices = labeling;
  std::sort(dist.vertices.begin(), dist.vertices.end());
  dist.p.assign(size_t{1} << (2 * labeling.size()), 0.0);
  Enumerator{dag, labeling, pos, assignment, spec, dist.p}.recurse(psi0, 0, 0);
  return dist;
}

OrderIndependenceResult gamma_independence_check(
    const CausalDag& dag, const std::vector<int>& stem,
    const RAssignment& assignment, const StateVector& psi0,
    const JumpSpec& spec, int max_stem) {
  OrderIndependenceResult result;
  HistoryDistribution first;
  for_each_linear_extension(
      dag, stem,
      [&](const std::vector<int>& labeling) {
        HistoryDistribution d =
            enumerate_distribution(dag, labeling, assignment, psi0, spec);
        if (result.num_extensions == 0)
          first = std::move(d);
        else
          result.max_deviation =
              std::max(result.max_deviation, first.max_abs_diff(d));
        ++result.num_extensions;
      },
      max_stem);
  return result;
}

Eigen::MatrixXcd embedded_event_operator(const Vertex& v, VertexOutcome outcome,
                                         const TwoQubitUnitary& u,
                                         int num_slots, const JumpSpec& spec) {
  if (num_slots > 2 * kMaxOperatorHalfWidth)
    throw guardrail_error("surface too wide for dense operators: " +
                          std::to_string(num_slots) + " slots, limit " +
                          std::to_string(2 * kMaxOperatorHalfWidth));
  const SlotPair pair = adjacent_pair(v.slot, num_slots);
  const auto dim = uint64_t{1} << num_slots;
  Eigen::MatrixXcd e(dim, dim);
  for (uint64_t c = 0; c < dim; ++c) {
    StateVector col = StateVector::basis_state(num_slots, c);
    apply_two_site_inplace(col, pair, u.matrix());
    apply_jump_inplace(col, pair, outcome, spec);
    for (uint64_t r = 0; r < dim; ++r) e(r, c) = col.amplitude(r);
  }
  return e;
}

double commutator_norm(const CausalDag& dag, int v1, int v2, VertexOutcome o1,
                       VertexOutcome o2, const RAssignment& assignment,
                       int num_slots, const JumpSpec& spec) {
  const Vertex& a = dag.vertex(v1);
  const Vertex& b = dag.vertex(v2);
  const Eigen::MatrixXcd e1 = embedded_event_operator(
      a, o1, assignment.resolve(a.slot, a.pair_ordinal), num_slots, spec);
  const Eigen::MatrixXcd e2 = embedded_event_operator(
      b, o2, assignment.resolve(b.slot, b.pair_ordinal), num_slots, spec);
  const Eigen::MatrixXcd c = e1 * e2 - e2 * e1;
  return c.jacobiSvd().singularValues()(0);
}

namespace {

// Applies the two-site unitary to every column of w (w <- embed(u) * w).
void apply_two_site_to_columns(Eigen::MatrixXcd& w, SlotPair pair,
                               const Eigen::Matrix4cd& m) {
  const auto dim = static_cast<uint64_t>(w.rows());
  const uint64_t bit_first = uint64_t{1} << pair.first;
  const uint64_t bit_second = uint64_t{1} << pair.second;
  const uint64_t sub[4] = {0, bit_second, bit_first, bit_first | bit_second};
  for (Eigen::Index col = 0; col < w.cols(); ++col) {
    for (uint64_t base = 0; base < dim; ++base) {
      if (base & (bit_first | bit_second)) continue;
      cd in[4], out[4];
      for (int i = 0; i < 4; ++i) in[i] = w(base | sub[i], col);
      for (int r = 0; r < 4; ++r) {
        out[r] = cd{0.0, 0.0};
        for (int cidx = 0; cidx < 4; ++cidx) out[r] += m(r, cidx) * in[cidx];
      }
      for (int i = 0; i < 4; ++i) w(base | sub[i], col) = out[i];
    }
  }
}

// Diagonal of the pair jump operator in the computational basis.
Eigen::VectorXd jump_diagonal(SlotPair pair, VertexOutcome outcome,
                              int num_slots, const JumpSpec& spec) {
  const auto dim = uint64_t{1} << num_slots;
  Eigen::VectorXd d(dim);
  for (uint64_t idx = 0; idx < dim; ++idx) {
    const int bl = static_cast<int>((idx >> pair.first) & 1);
    const int br = static_cast<int>((idx >> pair.second) & 1);
    d(idx) = jump_factor(spec, bl, outcome.alpha_l) *
             jump_factor(spec, br, outcome.alpha_r);
  }
  return d;
}

// W = U(v_{k}) ... U(v_1) for the first `count` entries of the labeling.
Eigen::MatrixXcd unitary_prefix(const CausalDag& dag,
                                const std::vector<int>& labeling, size_t count,
                                const RAssignment& assignment, int num_slots) {
  const auto dim = uint64_t{1} << num_slots;
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(dim, dim);
  for (size_t j = 0; j < count; ++j) {
    const Vertex& v = dag.vertex(labeling[j]);
    apply_two_site_to_columns(w, adjacent_pair(v.slot, num_slots),
                              assignment.resolve(v.slot, v.pair_ordinal).matrix());
  }
  return w;
}

}  // namespace

Eigen::MatrixXcd heisenberg_jump(const CausalDag& dag,
                                 const std::vector<int>& labeling, int k,
                                 VertexOutcome outcome,
                                 const RAssignment& assignment, int num_slots,
                                 const JumpSpec& spec) {
  if (num_slots > 2 * kMaxOperatorHalfWidth)
    throw guardrail_error("surface too wide for dense operators: " +
                          std::to_string(num_slots) + " slots, limit " +
                          std::to_string(2 * kMaxOperatorHalfWidth));
  require(k >= 0 && static_cast<size_t>(k) < labeling.size(),
          "labeling position out of range");
  require(dag.is_natural_labeling(labeling),
          "labeling is not natural: some vertex precedes its own cause");
  const Eigen::MatrixXcd w =
      unitary_prefix(dag, labeling, static_cast<size_t>(k) + 1, assignment,
                     num_slots);
  const Vertex& v = dag.vertex(labeling[k]);
  const Eigen::VectorXd d =
      jump_diagonal(adjacent_pair(v.slot, num_slots), outcome, num_slots, spec);
  return w.adjoint() * d.asDiagonal() * w;
}

double heisenberg_history_probability(const CausalDag& dag,
                                      const std::vector<int>& labeling,
                                      const std::vector<VertexOutcome>& outcomes,
                                      const RAssignment& assignment,
                                      const StateVector& psi0,
                                      const JumpSpec& spec) {
  require(labeling.size() == outcomes.size(),
          "one outcome per labeled vertex required");
  check_history_inputs(dag, labeling, psi0);
  const int n = psi0.num_qubits();
  if (n > 2 * kMaxOperatorHalfWidth)
    throw guardrail_error("surface too wide for dense operators: " +
                          std::to_string(n) + " slots, limit " +
                          std::to_string(2 * kMaxOperatorHalfWidth));
  const auto dim = uint64_t{1} << n;

  Eigen::VectorXcd psi(dim);
  for (uint64_t i = 0; i < dim; ++i) psi(i) = psi0.amplitude(i);
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(dim, dim);
  for (size_t k = 0; k < labeling.size(); ++k) {
    const Vertex& v = dag.vertex(labeling[k]);
    const SlotPair pair = adjacent_pair(v.slot, n);
    apply_two_site_to_columns(w, pair,
                              assignment.resolve(v.slot, v.pair_ordinal).matrix());
    const Eigen::VectorXd d = jump_diagonal(pair, outcomes[k], n, spec);
    Eigen::VectorXcd t = w * psi;
    for (uint64_t i = 0; i < dim; ++i) t(i) *= d(i);
    psi = w.adjoint() * t;
  }
  return psi.squaredNorm();
}

std::vector<int> past_closure(const CausalDag& dag,
                              const std::vector<int>& vertices) {
  std::set<int> closed(vertices.begin(), vertices.end());
  for (int v : dag.causal_past(vertices)) closed.insert(v);
  return {closed.begin(), closed.end()};
}

NoSignalingResult no_signaling_check(const CausalDag& dag,
                                     const std::vector<int>& a_vertices,
                                     const std::vector<int>& b_vertices,
                                     const RAssignment& assign1,
                                     const RAssignment& assign2,
                                     const StateVector& psi0,
                                     const JumpSpec& spec) {
  require(!b_vertices.empty(), "the target vertex set must be non-empty");
  for (int a : a_vertices)
    for (int b : b_vertices)
      require(dag.is_spacelike(a, b), "vertex sets are not spacelike");

  NoSignalingResult result;
  std::vector<int> ab = a_vertices;
  ab.insert(ab.end(), b_vertices.begin(), b_vertices.end());
  result.stem = past_closure(dag, ab);
  result.target = past_closure(dag, b_vertices);

  const std::set<int> a_set(a_vertices.begin(), a_vertices.end());
  for (int v : result.stem) {
    if (a_set.count(v)) continue;
    const Vertex& vert = dag.vertex(v);
    require(assign1.resolve(vert.slot, vert.pair_ordinal) ==
                assign2.resolve(vert.slot, vert.pair_ordinal),
            "assignments differ outside the signaling region");
  }

  // Natural labeling that enumerates the target's past closure before the
  // rest of the stem. No vertex outside the closure precedes one inside it,
  // so appending the remainder in creation order stays natural.
  std::vector<int> labeling = result.target;
  const std::set<int> in_target(result.target.begin(), result.target.end());
  for (int v : result.stem)
    if (!in_target.count(v)) labeling.push_back(v);

  const HistoryDistribution d1 =
      enumerate_distribution(dag, labeling, assign1, psi0, spec);
  const HistoryDistribution d2 =
      enumerate_distribution(dag, labeling, assign2, psi0, spec);
  result.max_deviation =
      d1.marginal(result.target).max_abs_diff(d2.marginal(result.target));
  return result;
}

namespace {

struct SamolsEnumerator {
  const CausalDag& dag;
  const std::vector<int>& labeling;
  const std::vector<int>& pos;
  const std::vector<StateVector>& evolved;  // evolved[k]: after k unitaries
  SamolsDistribution& out;

  void recurse(std::vector<int>& realized, size_t k, size_t atom,
               double weight) const {
    if (k == labeling.size()) {
      out.vertex_dist.p[atom] += weight;
      uint64_t cfg = 0;
      for (size_t s = 0; s < realized.size(); ++s)
        if (realized[s]) cfg |= uint64_t{1} << s;
      out.final_marginal[cfg] += weight;
      return;
    }
    const int n = evolved[0].num_qubits();
    const Vertex& v = dag.vertex(labeling[k]);
    const SlotPair pair = adjacent_pair(v.slot, n);
    std::map<int, int> fixed;
    for (int s = 0; s < n; ++s)
      if (s != pair.first && s != pair.second) fixed[s] = realized[s];
    const auto cond = born_conditional(evolved[k + 1], fixed, pair);
    for (int val = 0; val < 4; ++val) {
      if (cond[val] <= 0.0) continue;
      const VertexOutcome o = VertexOutcome::from_index(val);
      const int keep_l = realized[pair.first];
      const int keep_r = realized[pair.second];
      realized[pair.first] = o.alpha_l;
      realized[pair.second] = o.alpha_r;
      recurse(realized, k + 1, atom | (size_t{unsigned(val)} << (2 * pos[k])),
              weight * cond[val]);
      realized[pair.first] = keep_l;
      realized[pair.second] = keep_r;
    }
  }
};

std::vector<StateVector> evolved_states(const CausalDag& dag,
                                        const std::vector<int>& labeling,
                                        const RAssignment& assignment,
                                        const StateVector& psi0) {
  std::vector<StateVector> evolved{psi0};
  for (int vi : labeling) {
    const Vertex& v = dag.vertex(vi);
    StateVector next = evolved.back();
    apply_two_site_inplace(next, adjacent_pair(v.slot, next.num_qubits()),
                           assignment.resolve(v.slot, v.pair_ordinal).matrix());
    evolved.push_back(std::move(next));
  }
  return evolved;
}

}  // namespace

SamolsDistribution samols_enumerate(const CausalDag& dag,
                                    const std::vector<int>& labeling,
                                    const RAssignment& assignment,
                                    const StateVector& psi0) {
  if (labeling.size() > kMaxOracleVertices)
    throw guardrail_error("too many vertices for exhaustive enumeration: " +
                          std::to_string(labeling.size()) + ", limit " +
                          std::to_string(kMaxOracleVertices));
  const int n = psi0.num_qubits();
  if (n > 2 * kMaxOperatorHalfWidth)
    throw guardrail_error("surface too wide for exhaustive enumeration: " +
                          std::to_string(n) + " slots, limit " +
                          std::to_string(2 * kMaxOperatorHalfWidth));
  check_history_inputs(dag, labeling, psi0);
  const std::vector<int> pos = canonical_positions(labeling);
  const std::vector<StateVector> evolved =
      evolved_states(dag, labeling, assignment, psi0);

  SamolsDistribution out;
  out.vertex_dist.vertices = labeling;
  std::sort(out.vertex_dist.vertices.begin(), out.vertex_dist.vertices.end());
  out.vertex_dist.p.assign(size_t{1} << (2 * labeling.size()), 0.0);
  out.final_marginal.assign(size_t{1} << n, 0.0);

  const SamolsEnumerator enumerator{dag, labeling, pos, evolved, out};
  std::vector<int> realized(n, 0);
  for (uint64_t cfg = 0; cfg < psi0.dim(); ++cfg) {
    const double w = std::norm(psi0.amplitude(cfg));
    if (w <= 0.0) continue;
    for (int s = 0; s < n; ++s) realized[s] = static_cast<int>((cfg >> s) & 1);
    enumerator.recurse(realized, 0, 0, w);
  }
  return out;
}

double samols_history_probability(const CausalDag& dag,
                                  const std::vector<int>& labeling,
                                  const std::vector<int>& initial_bits,
                                  const std::vector<VertexOutcome>& outcomes,
                                  const RAssignment& assignment,
                                  const StateVector& psi0) {
  require(labeling.size() == outcomes.size(),
          "one outcome per labeled vertex required");
  check_history_inputs(dag, labeling, psi0);
  const int n = psi0.num_qubits();
  require(static_cast<int>(initial_bits.size()) == n,
          "one initial value per slot required");

  uint64_t cfg = 0;
  for (int s = 0; s < n; ++s) {
    require(initial_bits[s] == 0 || initial_bits[s] == 1,
            "initial values must be 0 or 1");
    if (initial_bits[s]) cfg |= uint64_t{1} << s;
  }
  double prob = std::norm(psi0.amplitude(cfg));
  if (prob <= 0.0) return 0.0;

  std::vector<int> realized = initial_bits;
  StateVector psi = psi0;
  for (size_t k = 0; k < labeling.size(); ++k) {
    const Vertex& v = dag.vertex(labeling[k]);
    const SlotPair pair = adjacent_pair(v.slot, n);
    apply_two_site_inplace(psi, pair,
                           assignment.resolve(v.slot, v.pair_ordinal).matrix());
    std::map<int, int> fixed;
    for (int s = 0; s < n; ++s)
      if (s != pair.first && s != pair.second) fixed[s] = realized[s];
    const auto cond = born_conditional(psi, fixed, pair);
    prob *= cond[outcomes[k].index()];
    if (prob <= 0.0) return 0.0;
    realized[pair.first] = outcomes[k].alpha_l;
    realized[pair.second] = outcomes[k].alpha_r;
  }
  return prob;
}

}  // namespace collatt
