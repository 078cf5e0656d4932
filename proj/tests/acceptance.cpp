// Acceptance gate: every release-blocking property, one pass/fail line each.
// Runs without any test framework so the output stays a flat checklist.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "collatt/config.hpp"
#include "collatt/dynamics.hpp"
#include "collatt/experiments.hpp"
#include "collatt/oracle.hpp"
#include "collatt/record.hpp"
#include "collatt/rng.hpp"
#include "collatt/stats.hpp"
#include "collatt/verify.hpp"

using namespace collatt;

namespace {

struct Outcome {
  bool pass = false;
  double deviation = 0.0;
  std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const char* label, double time_limit_s,
                   Outcome (*fn)()) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (time_limit_s > 0.0 && elapsed > time_limit_s) {
    out.pass = false;
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("over the ") +
                  std::to_string(static_cast<int>(time_limit_s)) +
                  " s budget";
  }
  if (!out.pass) ++g_failures;
  std::printf("criterion %2d: %s  %-24s deviation %.3e  %6.2f s%s%s\n", id,
              out.pass ? "pass" : "FAIL", label, out.deviation, elapsed,
              out.detail.empty() ? "" : "  ", out.detail.c_str());
  std::fflush(stdout);
}

double fold(const std::vector<CheckResult>& results,
            const std::vector<std::string>& names, bool* pass) {
  double dev = 0.0;
  for (const CheckResult& r : results)
    for (const std::string& n : names)
      if (r.name == n) {
        dev = std::max(dev, r.max_deviation);
        *pass = *pass && r.pass;
      }
  return dev;
}

std::vector<int> random_motions(std::mt19937_64& rng, Geometry geom,
                                int count) {
  Surface s = initial_surface(geom);
  CausalDag dag(geom);
  std::vector<int> motions;
  for (int k = 0; k < count; ++k) {
    const std::vector<int> pairs = rl_pairs(s);
    const int slot = pairs[uniform_index(rng, pairs.size())];
    apply_motion_inplace(s, slot, dag);
    motions.push_back(slot);
  }
  return motions;
}

// 1. Four vertex-outcome probabilities sum to 1.
Outcome kraus_completeness() {
  Outcome out{true, 0.0, ""};
  out.deviation = fold(verify_suite("kraus", RunConfig{}),
                       {"kraus.sum", "kraus.scalar"}, &out.pass);
  out.detail = "100 states, N<=3, X in {0,0.25,0.5,1}";
  return out;
}

// 2. Sequential hit norms reproduce the pair distribution.
Outcome chain_rule() {
  Outcome out{true, 0.0, ""};
  out.deviation =
      fold(verify_suite("kraus", RunConfig{}), {"kraus.chain"}, &out.pass);
  out.detail = "all 4 outcomes on 100 states";
  return out;
}

// 3. Outcome distribution identical across all linear extensions.
Outcome gamma_independence() {
  Outcome out{true, 0.0, ""};
  out.deviation = fold(verify_suite("gamma", RunConfig{}),
                       {"gamma.diamond", "gamma.random"}, &out.pass);
  out.detail = "20 random stems plus the 4-vertex diamond";
  return out;
}

// 4. Embedded event operators commute iff the vertices are spacelike.
Outcome spacelike_commutators() {
  Outcome out{true, 0.0, ""};
  std::mt19937_64 rng(splitmix64(0xc0117a7e5ull));
  double worst_spacelike = 0.0;
  double best_timelike = 0.0;
  int spacelike_instances = 0;
  while (spacelike_instances < 20) {
    const Geometry geom{2 + static_cast<int>(uniform_index(rng, 2))};
    const int steps = 2 + static_cast<int>(uniform_index(rng, 3));
    const GrownLattice g = grow_lattice(geom, random_motions(rng, geom, steps));
    std::vector<std::pair<int, int>> spacelike, timelike;
    for (int u = 0; u < g.dag.size(); ++u)
      for (int v = u + 1; v < g.dag.size(); ++v)
        (g.dag.is_spacelike(u, v) ? spacelike : timelike).push_back({u, v});
    if (spacelike.empty()) continue;
    ++spacelike_instances;

    RAssignment assign(TwoQubitUnitary::haar_random(rng()));
    const JumpSpec spec{uniform_unit(rng)};
    const auto [u1, v1] = spacelike[uniform_index(rng, spacelike.size())];
    for (int k1 = 0; k1 < 4; ++k1)
      for (int k2 = 0; k2 < 4; ++k2)
        worst_spacelike = std::max(
            worst_spacelike,
            commutator_norm(g.dag, u1, v1, VertexOutcome::from_index(k1),
                            VertexOutcome::from_index(k2), assign,
                            geom.num_slots(), spec));
    if (!timelike.empty()) {
      const auto [u2, v2] = timelike[uniform_index(rng, timelike.size())];
      for (int k1 = 0; k1 < 4; ++k1)
        for (int k2 = 0; k2 < 4; ++k2)
          best_timelike = std::max(
              best_timelike,
              commutator_norm(g.dag, u2, v2, VertexOutcome::from_index(k1),
                              VertexOutcome::from_index(k2), assign,
                              geom.num_slots(), spec));
    }
  }
  out.pass = worst_spacelike <= 1e-12 && best_timelike > 1e-6;
  out.deviation = worst_spacelike;
  char buf[96];
  std::snprintf(buf, sizeof buf, "timelike witness norm %.3e", best_timelike);
  out.detail = buf;
  return out;
}

// 5. Conjugated-jump product equals the operator product on every atom,
//    and the conjugated jumps ignore spacelike R-matrix changes.
Outcome heisenberg_equivalence() {
  Outcome out{true, 0.0, ""};
  out.deviation = fold(
      verify_suite("heisenberg", RunConfig{}),
      {"heisenberg.product", "heisenberg.chain", "heisenberg.invariance"},
      &out.pass);
  out.detail = "256 atoms of the 4-vertex stem";
  return out;
}

// 6. Joint distribution on B and its past ignores R-matrix changes in A.
Outcome no_signaling() {
  Outcome out{true, 0.0, ""};
  out.deviation =
      fold(verify_suite("nosignal", RunConfig{}), {"nosignal.random"},
           &out.pass);
  out.detail = "50 random spacelike A/B configurations";
  return out;
}

// 7. Sampled run frequencies match the exact 4-vertex distribution.
Outcome sampler_fidelity() {
  Outcome out;
  RunConfig cfg;
  cfg.geometry = Geometry{2};
  cfg.kind = DynamicsKind::grw;
  cfg.steps = 4;
  cfg.x = 0.5;
  cfg.rmatrix.kind = RMatrixSpec::Kind::random_unitary;
  cfg.rmatrix.seed = 0xb5e55ed;

  // Every 4-step run grows the same four vertices (both depth-1 pairs, then
  // both depth-2 pairs), so outcomes can be keyed by slot across motion
  // orders and compared against one fixed-order enumeration.
  const GrownLattice g = grow_lattice(cfg.geometry, {0, 2, 1, 3});
  const HistoryDistribution dist =
      enumerate_distribution(g.dag, {0, 1, 2, 3}, make_assignment(cfg.rmatrix),
                             StateVector(4), JumpSpec{cfg.x});
  std::vector<double> expected(256, 0.0);
  for (uint64_t atom = 0; atom < 256; ++atom) {
    uint64_t slot_atom = 0;
    for (int k = 0; k < 4; ++k)
      slot_atom |= ((atom >> (2 * k)) & 3) << (2 * g.dag.vertex(k).slot);
    expected[slot_atom] = dist.p[atom];
  }

  const uint64_t total = 200000;
  std::vector<uint64_t> observed(256, 0);
  for (uint64_t i = 0; i < total; ++i) {
    cfg.seed = 0xc7a0000 + i;
    const RunRecord rec = run(cfg);
    uint64_t key = 0;
    for (const Event& e : rec.events)
      key |= static_cast<uint64_t>(e.outcome.index()) << (2 * e.slot);
    ++observed[key];
  }

  const ChiSquare cs = chi_square_statistic(observed, expected, total);
  const double bound = chi_square_quantile(cs.dof, 1e-3);
  out.pass = cs.statistic <= bound;
  out.deviation = cs.statistic;
  char buf[96];
  std::snprintf(buf, sizeof buf, "chi2 %.1f vs %.1f at dof %d, 2e5 runs",
                cs.statistic, bound, cs.dof);
  out.detail = buf;
  return out;
}

// 8. X=1 events are exact fair coin flips and never disturb the state.
Outcome white_noise_limit() {
  Outcome out{true, 0.0, ""};
  for (int i = 0; i < 30; ++i) {
    const int half = 1 + i % 3;
    const StateVector psi = random_state(2 * half, 9000 + i);
    const SlotPair pair = adjacent_pair(i % (2 * half), 2 * half);
    for (double p : vertex_jump_distribution(psi, pair, JumpSpec{1.0}))
      out.deviation = std::max(out.deviation, std::abs(p - 0.25));
  }
  out.pass = out.deviation <= 1e-12;

  NoiseProfileParams np;
  np.steps = 1000;
  np.runs = 100;  // 1e5 events
  np.x = 1.0;
  np.rmatrix.kind = RMatrixSpec::Kind::random_unitary;
  np.rmatrix.seed = 17;
  const ExperimentReport rep = noise_profile(np);
  out.pass = out.pass && rep.verdict == "pass";

  RunConfig grw;
  grw.geometry = Geometry{2};
  grw.kind = DynamicsKind::grw;
  grw.x = 1.0;
  grw.seed = 41;
  grw.rmatrix.kind = RMatrixSpec::Kind::random_unitary;
  grw.rmatrix.seed = 23;
  RunConfig uni = grw;
  uni.kind = DynamicsKind::unitary;
  Trajectory a(grw), b(uni);
  double state_dev = 0.0;
  for (int step = 0; step < 50; ++step) {
    a.step();
    b.step();
    state_dev = std::max(state_dev, a.state().max_abs_diff(b.state()));
  }
  out.pass = out.pass && state_dev <= 1e-12;
  out.deviation = std::max(out.deviation, state_dev);
  char buf[96];
  std::snprintf(buf, sizeof buf,
                "bias %.2f sigma over %g events, lockstep dev %.1e",
                rep.stat("max_bias_sigma"), rep.stat("events"), state_dev);
  out.detail = buf;
  return out;
}

// 9. Realized-configuration marginals reproduce the Born rule, and the
//    vertex-value joint depends on the labeling for a deep enough stem.
Outcome samols_marginals() {
  Outcome out{true, 0.0, ""};
  const std::vector<CheckResult> results =
      verify_suite("samols", RunConfig{});
  out.deviation =
      fold(results, {"samols.marginal", "samols.total"}, &out.pass);
  double witness = 0.0;
  for (const CheckResult& r : results)
    if (r.name == "samols.order_witness") {
      witness = r.max_deviation;
      out.pass = out.pass && r.pass;
    }
  char buf[64];
  std::snprintf(buf, sizeof buf, "labeling witness deviation %.3e", witness);
  out.detail = buf;
  return out;
}

// 10. A vertex event preserves the expected Born weight of every basis
//     configuration.
Outcome martingale() {
  Outcome out{true, 0.0, ""};
  std::mt19937_64 rng(splitmix64(0x3a7c1ull));
  const double corners[] = {0.0, 0.25, 1.0};
  for (int i = 0; i < 100; ++i) {
    const int half = 1 + i % 3;
    const int slots = 2 * half;
    const StateVector psi = random_state(slots, 7000 + i);
    const JumpSpec spec{i % 4 == 3 ? uniform_unit(rng) : corners[i % 3]};
    const SlotPair pair = adjacent_pair(
        static_cast<int>(uniform_index(rng, slots)), slots);
    const std::array<double, 4> dist =
        vertex_jump_distribution(psi, pair, spec);
    std::vector<double> expect(psi.dim(), 0.0);
    for (int k = 0; k < 4; ++k) {
      if (dist[k] <= 0.0) continue;
      const HitResult hit =
          vertex_hit(psi, pair, VertexOutcome::from_index(k), spec);
      for (uint64_t idx = 0; idx < psi.dim(); ++idx)
        expect[idx] += dist[k] * std::norm(hit.state.amplitude(idx));
    }
    for (uint64_t idx = 0; idx < psi.dim(); ++idx)
      out.deviation = std::max(
          out.deviation,
          std::abs(expect[idx] - std::norm(psi.amplitude(idx))));
  }
  out.pass = out.deviation <= 1e-12;
  out.detail = "100 states and X values, every basis weight";
  return out;
}

// 11. (config, seed) determines the record byte for byte, and text
//     round-trips are exact.
Outcome determinism_round_trip() {
  Outcome out{true, 0.0, ""};
  std::mt19937_64 rng(splitmix64(0x11ec03d5ull));
  const DynamicsKind kinds[] = {DynamicsKind::grw, DynamicsKind::samols,
                                DynamicsKind::unitary};
  const double xs[] = {0.0, 0.3, 0.7, 1.0};
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    RunConfig cfg;
    cfg.geometry = Geometry{1 + i % 3};
    cfg.kind = kinds[i % 3];
    cfg.steps = i % 7;
    cfg.x = xs[i % 4];
    cfg.p = i % 5 == 0 ? 0.0 : (i % 2 ? 0.5 : 1.0);
    cfg.seed = rng();
    const int slots = cfg.geometry.num_slots();
    switch (i % 3) {
      case 0:
        break;  // |0...0>
      case 1: {
        cfg.state.kind = StateSpec::Kind::product;
        cfg.state.qubits.assign(slots,
                                std::array<double, 4>{1.0, 0.0, 1.0, 0.0});
        break;
      }
      case 2: {
        cfg.state.kind = StateSpec::Kind::amplitudes;
        cfg.state.amps = {{0, cd(0.6, 0.0)},
                          {(uint64_t{1} << slots) - 1, cd(0.0, 0.8)}};
        break;
      }
    }
    switch (i % 4) {
      case 0:
        break;  // identity
      case 1:
        cfg.rmatrix.kind = RMatrixSpec::Kind::swap;
        break;
      case 2: {
        cfg.rmatrix.kind = RMatrixSpec::Kind::random_unitary;
        cfg.rmatrix.seed = rng();
        cfg.rmatrix.overrides.push_back(
            {static_cast<int>(uniform_index(rng, slots)), 0, 2,
             RMatrixSpec::Kind::swap, 0});
        break;
      }
      case 3: {
        cfg.rmatrix.kind = RMatrixSpec::Kind::explicit_entries;
        const Eigen::Matrix4cd u = TwoQubitUnitary::haar_random(rng()).matrix();
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c)
            cfg.rmatrix.entries[4 * r + c] = u(r, c);
        break;
      }
    }
    const bool dump = i % 2 == 0;
    const std::string text1 = serialize_record(run(cfg, dump));
    const std::string text2 = serialize_record(run(cfg, dump));
    const RunRecord parsed = parse_record(text1);
    if (text1 != text2 || serialize_record(parsed) != text1 ||
        !(parsed == run(cfg, dump))) {
      out.pass = false;
      out.detail = "mismatch at instance " + std::to_string(i);
      break;
    }
    ++checked;
  }
  if (out.pass) out.detail = std::to_string(checked) + " records round-trip";
  return out;
}

// 12. Full-width simulation stays fast and within two state buffers.
Outcome performance_floor() {
  Outcome out;
  RunConfig cfg;
  cfg.geometry = Geometry{10};
  cfg.kind = DynamicsKind::grw;
  cfg.steps = 1000;
  cfg.x = 0.5;
  cfg.seed = 7;
  cfg.rmatrix.kind = RMatrixSpec::Kind::random_unitary;
  cfg.rmatrix.seed = 3;
  const auto t0 = std::chrono::steady_clock::now();
  const RunRecord rec = run(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
  // one state vector is 16 MiB; two buffers plus slack
  out.pass = rec.events.size() == 1000 && elapsed < 60.0 && peak_mb < 120.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "1000 steps at n=10 in %.1f s, peak %.0f MB",
                elapsed, peak_mb);
  out.detail = buf;
  return out;
}

}  // namespace

int main() {
  std::printf("acceptance checks\n");
  run_criterion(1, "kraus completeness", 1.0, kraus_completeness);
  run_criterion(2, "sequential chain rule", 1.0, chain_rule);
  run_criterion(3, "order independence", 60.0, gamma_independence);
  run_criterion(4, "spacelike commutators", 30.0, spacelike_commutators);
  run_criterion(5, "heisenberg equivalence", 30.0, heisenberg_equivalence);
  run_criterion(6, "no signaling", 120.0, no_signaling);
  run_criterion(7, "sampler fidelity", 60.0, sampler_fidelity);
  run_criterion(8, "white noise at x=1", 0.0, white_noise_limit);
  run_criterion(9, "samols born marginals", 0.0, samols_marginals);
  run_criterion(10, "martingale", 0.0, martingale);
  run_criterion(11, "determinism round-trip", 0.0, determinism_round_trip);
  run_criterion(12, "performance floor", 60.0, performance_floor);

  if (g_failures == 0) {
    std::printf("all 12 criteria pass\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
