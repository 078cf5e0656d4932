#include "collatt/dynamics.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "collatt/errors.hpp"
#include "collatt/rmatrix.hpp"

namespace collatt {

std::string to_string(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::grw: return "grw";
    case DynamicsKind::samols: return "samols";
    case DynamicsKind::unitary: return "unitary";
  }
  throw std::logic_error("unreachable dynamics kind");
}

DynamicsKind dynamics_kind_from_string(const std::string& s) {
  if (s == "grw") return DynamicsKind::grw;
  if (s == "samols") return DynamicsKind::samols;
  if (s == "unitary") return DynamicsKind::unitary;
  throw config_error("unknown dynamics kind: " + s);
}

void RunConfig::validate() const {
  geometry.validate();
  if (steps < 0) throw config_error("steps must be non-negative");
  if (!(x >= 0.0 && x <= 1.0)) throw config_error("x must lie in [0, 1]");
  if (!(p >= 0.0 && p <= 1.0)) throw config_error("p must lie in [0, 1]");
}

StateVector make_initial_state(const Geometry& geom, const StateSpec& spec) {
  const int n = geom.num_slots();
  const uint64_t dim = uint64_t{1} << n;
  switch (spec.kind) {
    case StateSpec::Kind::basis: {
      if (spec.bits.empty()) return StateVector(n);
      if (static_cast<int>(spec.bits.size()) != n)
        throw config_error("basis bit string must have one bit per slot");
      uint64_t idx = 0;
      for (int i = 0; i < n; ++i) {
        if (spec.bits[i] == '1') idx |= uint64_t{1} << i;
        else if (spec.bits[i] != '0')
          throw config_error("basis bits must be 0 or 1");
      }
      return StateVector::basis_state(n, idx);
    }
    case StateSpec::Kind::product: {
      if (static_cast<int>(spec.qubits.size()) != n)
        throw config_error("product state needs one qubit per slot");
      std::vector<cd> amps{cd{1.0, 0.0}};
      for (int i = 0; i < n; ++i) {
        const auto& q = spec.qubits[i];
        const cd a0{q[0], q[1]};
        const cd a1{q[2], q[3]};
        const double w = std::norm(a0) + std::norm(a1);
        if (w <= 0.0)
          throw config_error("product state slot amplitude is zero");
        const double s = 1.0 / std::sqrt(w);
        std::vector<cd> next(amps.size() * 2);
        for (size_t idx = 0; idx < amps.size(); ++idx) {
          next[idx] = amps[idx] * (a0 * s);
          next[idx + amps.size()] = amps[idx] * (a1 * s);
        }
        amps = std::move(next);
      }
      return StateVector(n, std::move(amps));
    }
    case StateSpec::Kind::amplitudes: {
      std::vector<cd> amps(dim, cd{0.0, 0.0});
      for (const auto& [idx, a] : spec.amps) {
        if (idx >= dim)
          throw config_error("amplitude index out of range");
        amps[idx] = a;
      }
      double w = 0.0;
      for (const cd& a : amps) w += std::norm(a);
      if (w <= 0.0) throw config_error("state vector has zero norm");
      const double s = 1.0 / std::sqrt(w);
      for (cd& a : amps) a *= s;
      return StateVector(n, std::move(amps));
    }
  }
  throw std::logic_error("unreachable state kind");
}

namespace {

TwoQubitUnitary resolve_unitary(RMatrixSpec::Kind kind, uint64_t seed,
                                const std::array<cd, 16>& entries) {
  switch (kind) {
    case RMatrixSpec::Kind::identity: return TwoQubitUnitary::identity();
    case RMatrixSpec::Kind::swap: return TwoQubitUnitary::swap_gate();
    case RMatrixSpec::Kind::random_unitary:
      return TwoQubitUnitary::haar_random(seed);
    case RMatrixSpec::Kind::explicit_entries: {
      Eigen::Matrix4cd m;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m(r, c) = entries[4 * r + c];
      return TwoQubitUnitary::from_matrix(m);
    }
  }
  throw std::logic_error("unreachable rmatrix kind");
}

}  // namespace

RAssignment make_assignment(const RMatrixSpec& spec) {
  RAssignment a(resolve_unitary(spec.kind, spec.seed, spec.entries));
  for (const auto& o : spec.overrides) {
    if (o.kind == RMatrixSpec::Kind::explicit_entries)
      throw config_error("explicit entries are not allowed in overrides");
    if (o.first_ordinal < 0 || o.last_ordinal < o.first_ordinal)
      throw config_error("override ordinal range is empty");
    a.add_override(o.slot, o.first_ordinal, o.last_ordinal,
                   resolve_unitary(o.kind, o.seed, spec.entries));
  }
  return a;
}

Trajectory::Trajectory(const RunConfig& config)
    : config_(config),
      spec_{config.x},
      assignment_(make_assignment(config.rmatrix)),
      surface_(initial_surface(config.geometry)),
      dag_(config.geometry),
      psi_(make_initial_state(config.geometry, config.state)),
      rng_(config.seed) {
  config_.validate();
  if (config_.geometry.half_width > kMaxRunHalfWidth)
    throw guardrail_error("surface too wide to simulate: n = " +
                          std::to_string(config_.geometry.half_width) +
                          ", limit " + std::to_string(kMaxRunHalfWidth));
  record_.config = config_;
  realized_.assign(config_.geometry.num_slots(), 0);
  if (config_.kind == DynamicsKind::samols) sample_samols_initial();
}

int Trajectory::draw_motion() {
  const std::vector<int> pairs = rl_pairs(surface_);
  const uint64_t pick = uniform_index(rng_.motion(), pairs.size());
  return pairs[pick];
}

void Trajectory::step() { step_at(draw_motion()); }

void Trajectory::step_at(int slot) {
  const int vertex = apply_motion_inplace(surface_, slot, dag_);
  record_.motions.push_back(slot);

  const Vertex& v = dag_.vertex(vertex);
  const SlotPair pair = adjacent_pair(v.slot, surface_.num_slots());
  const TwoQubitUnitary u = assignment_.resolve(v.slot, v.pair_ordinal);
  apply_two_site_inplace(psi_, pair, u.matrix());

  switch (config_.kind) {
    case DynamicsKind::grw:
      step_grw(slot, vertex);
      break;
    case DynamicsKind::samols:
      step_samols(slot, vertex);
      break;
    case DynamicsKind::unitary: {
      // Same per-step event budget as the other kinds.
      uniform_unit(rng_.event());
      uniform_unit(rng_.event());
      uniform_unit(rng_.event());
      Event ev;
      ev.vertex = vertex;
      ev.slot = slot;
      record_.events.push_back(ev);
      break;
    }
  }
  psi_.check_normalized();
}

void Trajectory::step_grw(int slot, int vertex) {
  const SlotPair pair = adjacent_pair(slot, surface_.num_slots());
  const double gate = uniform_unit(rng_.event());
  const double ul = uniform_unit(rng_.event());
  const double ur = uniform_unit(rng_.event());

  Event ev;
  ev.vertex = vertex;
  ev.slot = slot;
  if (gate < config_.p) {
    const auto dist_l = link_jump_distribution(psi_, pair.first, spec_);
    const int al = sample_discrete(ul, dist_l);
    double nl = 0.0;
    link_hit_inplace(psi_, pair.first, al, spec_, &nl);

    const auto dist_r = link_jump_distribution(psi_, pair.second, spec_);
    const int ar = sample_discrete(ur, dist_r);
    double nr = 0.0;
    link_hit_inplace(psi_, pair.second, ar, spec_, &nr);

    ev.realized = true;
    ev.outcome = VertexOutcome{al, ar};
    ev.norm_l = nl;
    ev.norm_r = nr;
  }
  record_.events.push_back(ev);
}

void Trajectory::step_samols(int slot, int vertex) {
  const SlotPair pair = adjacent_pair(slot, surface_.num_slots());
  uniform_unit(rng_.event());  // keeps the event budget aligned with grw
  const double ul = uniform_unit(rng_.event());
  const double ur = uniform_unit(rng_.event());

  std::map<int, int> fixed;
  for (int s = 0; s < surface_.num_slots(); ++s)
    if (s != pair.first && s != pair.second) fixed[s] = realized_[s];
  const auto cond = born_conditional(psi_, fixed, pair);

  const std::array<double, 2> marg{cond[0] + cond[1], cond[2] + cond[3]};
  const int vl = sample_discrete(ul, marg);
  const std::array<double, 2> rest{cond[2 * vl] / marg[vl],
                                   cond[2 * vl + 1] / marg[vl]};
  const int vr = sample_discrete(ur, rest);

  realized_[pair.first] = vl;
  realized_[pair.second] = vr;

  Event ev;
  ev.vertex = vertex;
  ev.slot = slot;
  ev.realized = true;
  ev.outcome = VertexOutcome{vl, vr};
  ev.norm_l = std::sqrt(marg[vl]);
  ev.norm_r = std::sqrt(rest[vr]);
  record_.events.push_back(ev);
}

void Trajectory::sample_samols_initial() {
  const int n = surface_.num_slots();
  const auto& amps = psi_.amplitudes();
  uint64_t prefix = 0;
  for (int s = 0; s < n; ++s) {
    const uint64_t below = (uint64_t{1} << s) - 1;
    double w[2] = {0.0, 0.0};
    for (uint64_t idx = 0; idx < amps.size(); ++idx) {
      if ((idx & below) != prefix) continue;
      w[(idx >> s) & 1] += std::norm(amps[idx]);
    }
    const double total = w[0] + w[1];
    const std::array<double, 2> dist{w[0] / total, w[1] / total};
    const int v = sample_discrete(uniform_unit(rng_.event()), dist);
    realized_[s] = v;
    record_.samols_initial.push_back(v);
    if (v) prefix |= uint64_t{1} << s;
  }
}

RunRecord Trajectory::finish(bool dump_final_state) && {
  if (dump_final_state) record_.final_state = psi_.amplitudes();
  return std::move(record_);
}

RunRecord run(const RunConfig& config, bool dump_final_state) {
  Trajectory t(config);
  for (int i = 0; i < config.steps; ++i) t.step();
  return std::move(t).finish(dump_final_state);
}

}  // namespace collatt
