#include "collatt/oracle.hpp"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"

#include "collatt/errors.hpp"

using namespace collatt;

namespace {

constexpr double kTolExact = 1e-12;
constexpr double kTolEnum = 1e-10;

std::vector<VertexOutcome> atom_outcomes(uint64_t atom, int n) {
  std::vector<VertexOutcome> out;
  for (int k = 0; k < n; ++k)
    out.push_back(VertexOutcome::from_index((atom >> (2 * k)) & 3));
  return out;
}

std::vector<int> iota_stem(const CausalDag& dag) {
  std::vector<int> stem(dag.size());
  std::iota(stem.begin(), stem.end(), 0);
  return stem;
}

}  // namespace

TEST(HistoryProbability, SingleVertexMatchesVertexDistribution) {
  const GrownLattice g = grow_lattice(Geometry{1}, {0});
  const RAssignment assign(TwoQubitUnitary::identity());
  const StateVector psi(2);
  const JumpSpec spec{0.5};
  EXPECT_NEAR(history_probability(g.dag, {0}, {VertexOutcome{0, 0}}, assign,
                                  psi, spec),
              0.64, kTolExact);
  for (int k = 0; k < 4; ++k) {
    const double p = history_probability(
        g.dag, {0}, {VertexOutcome::from_index(k)}, assign, psi, spec);
    EXPECT_NEAR(p, vertex_jump_distribution(psi, {0, 1}, spec)[k], kTolExact);
  }
}

TEST(HistoryProbability, UniformAtXOne) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1});
  const RAssignment assign(TwoQubitUnitary::haar_random(2));
  const StateVector psi = random_state(4, 6);
  for (uint64_t atom = 0; atom < 64; ++atom) {
    const double p = history_probability(g.dag, {0, 1, 2},
                                         atom_outcomes(atom, 3), assign, psi,
                                         JumpSpec{1.0});
    EXPECT_NEAR(p, 1.0 / 64, kTolExact);
  }
}

TEST(HistoryProbability, AtomsSumToOne) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1, 3});
  const RAssignment assign(TwoQubitUnitary::haar_random(10));
  const StateVector psi = random_state(4, 44);
  const JumpSpec spec{0.35};
  double total = 0.0;
  for (uint64_t atom = 0; atom < 256; ++atom)
    total += history_probability(g.dag, iota_stem(g.dag),
                                 atom_outcomes(atom, 4), assign, psi, spec);
  EXPECT_NEAR(total, 1.0, kTolEnum);
}

TEST(HistoryProbability, RejectsNonNaturalLabeling) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1});
  const RAssignment assign(TwoQubitUnitary::identity());
  const StateVector psi(4);
  EXPECT_THROW(history_probability(g.dag, {2, 0, 1}, atom_outcomes(0, 3),
                                   assign, psi, JumpSpec{0.5}),
               std::invalid_argument);
  EXPECT_THROW(history_probability(g.dag, {0, 1}, atom_outcomes(0, 3), assign,
                                   psi, JumpSpec{0.5}),
               std::invalid_argument);
}

TEST(ThreeRoutes, AgreeOnEveryAtom) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1, 3});
  RAssignment assign(TwoQubitUnitary::haar_random(20));
  assign.add_override(1, 0, 0, TwoQubitUnitary::haar_random(21));
  const StateVector psi = random_state(4, 3);
  const JumpSpec spec{0.6};
  const std::vector<int> labeling = iota_stem(g.dag);
  for (uint64_t atom = 0; atom < 256; ++atom) {
    const std::vector<VertexOutcome> outcomes = atom_outcomes(atom, 4);
    const double a =
        history_probability(g.dag, labeling, outcomes, assign, psi, spec);
    const double b =
        history_probability_chain(g.dag, labeling, outcomes, assign, psi, spec);
    const double c = heisenberg_history_probability(g.dag, labeling, outcomes,
                                                    assign, psi, spec);
    EXPECT_NEAR(a, b, kTolExact);
    EXPECT_NEAR(a, c, kTolExact);
  }
}

TEST(EnumerateDistribution, MatchesHistoryProbability) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1});
  const RAssignment assign(TwoQubitUnitary::haar_random(14));
  const StateVector psi = random_state(4, 8);
  const JumpSpec spec{0.45};
  const std::vector<int> labeling = iota_stem(g.dag);
  const HistoryDistribution dist =
      enumerate_distribution(g.dag, labeling, assign, psi, spec);
  EXPECT_EQ(dist.vertices, labeling);
  ASSERT_EQ(dist.p.size(), 64u);
  EXPECT_NEAR(dist.total(), 1.0, kTolEnum);
  for (uint64_t atom = 0; atom < 64; ++atom)
    EXPECT_NEAR(dist.p[atom],
                history_probability(g.dag, labeling, atom_outcomes(atom, 3),
                                    assign, psi, spec),
                kTolExact);
}

TEST(EnumerateDistribution, FirstVertexMarginal) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1, 3});
  const RAssignment assign(TwoQubitUnitary::haar_random(5));
  const StateVector psi = random_state(4, 12);
  const JumpSpec spec{0.5};
  const HistoryDistribution dist =
      enumerate_distribution(g.dag, iota_stem(g.dag), assign, psi, spec);
  const HistoryDistribution m = dist.marginal({0});
  const StateVector evolved =
      apply_unitary(psi, {0, 1}, assign.resolve(0, 0));
  const std::array<double, 4> expect =
      vertex_jump_distribution(evolved, {0, 1}, spec);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(m.p[k], expect[k], kTolExact);
}

TEST(EnumerateDistribution, ProjectiveLimitEchoesBasisValues) {
  const GrownLattice g = grow_lattice(Geometry{1}, {0, 1});
  const RAssignment assign(TwoQubitUnitary::identity());
  const StateVector psi = StateVector::basis_state(2, 0b01);  // slot 0 = 1
  const HistoryDistribution dist =
      enumerate_distribution(g.dag, {0, 1}, assign, psi, JumpSpec{0.0});
  // vertex 0 reads (slot0, slot1) = (1, 0); vertex 1 reads (slot1, slot0)
  const uint64_t atom = VertexOutcome{1, 0}.index() |
                        (VertexOutcome{0, 1}.index() << 2);
  EXPECT_NEAR(dist.p[atom], 1.0, kTolExact);
}

TEST(GammaIndependence, SpacelikeChainAndDiamond) {
  const RAssignment assign(TwoQubitUnitary::haar_random(31));
  const JumpSpec spec{0.5};

  const GrownLattice anti = grow_lattice(Geometry{2}, {0, 2});
  const OrderIndependenceResult r1 = gamma_independence_check(
      anti.dag, {0, 1}, assign, random_state(4, 1), spec);
  EXPECT_EQ(r1.num_extensions, 2);
  EXPECT_LE(r1.max_deviation, kTolEnum);

  const GrownLattice chain = grow_lattice(Geometry{1}, {0, 1});
  const OrderIndependenceResult r2 = gamma_independence_check(
      chain.dag, {0, 1}, assign, random_state(2, 2), spec);
  EXPECT_EQ(r2.num_extensions, 1);
  EXPECT_EQ(r2.max_deviation, 0.0);

  const GrownLattice diamond = grow_lattice(Geometry{2}, {0, 2, 1, 3});
  const OrderIndependenceResult r3 = gamma_independence_check(
      diamond.dag, iota_stem(diamond.dag), assign, random_state(4, 3), spec);
  EXPECT_EQ(r3.num_extensions, 4);
  EXPECT_LE(r3.max_deviation, kTolEnum);
}

TEST(CommutatorNorm, SpacelikeVerticesCommute) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2});
  RAssignment assign(TwoQubitUnitary::haar_random(7));
  assign.add_override(2, 0, 0, TwoQubitUnitary::haar_random(8));
  const JumpSpec spec{0.4};
  for (int k1 = 0; k1 < 4; ++k1)
    for (int k2 = 0; k2 < 4; ++k2)
      EXPECT_LE(commutator_norm(g.dag, 0, 1, VertexOutcome::from_index(k1),
                                VertexOutcome::from_index(k2), assign, 4, spec),
                kTolExact);
}

TEST(CommutatorNorm, PredecessorPairDoesNot) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1});
  const RAssignment assign(TwoQubitUnitary::haar_random(9));
  const JumpSpec spec{0.4};
  double best = 0.0;
  for (int k1 = 0; k1 < 4; ++k1)
    for (int k2 = 0; k2 < 4; ++k2)
      best = std::max(best,
                      commutator_norm(g.dag, 0, 2, VertexOutcome::from_index(k1),
                                      VertexOutcome::from_index(k2), assign, 4,
                                      spec));
  EXPECT_GT(best, 1e-6);
}

TEST(CommutatorNorm, ScalarJumpsAlwaysCommute) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1});
  const RAssignment assign(TwoQubitUnitary::identity());
  for (int k1 = 0; k1 < 4; ++k1)
    for (int k2 = 0; k2 < 4; ++k2)
      EXPECT_LE(commutator_norm(g.dag, 0, 2, VertexOutcome::from_index(k1),
                                VertexOutcome::from_index(k2), assign, 4,
                                JumpSpec{1.0}),
                kTolExact);
}

TEST(HeisenbergJump, FirstVertexWithIdentityEvolution) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0});
  const RAssignment assign(TwoQubitUnitary::identity());
  const JumpSpec spec{0.5};
  for (int k = 0; k < 4; ++k) {
    const VertexOutcome o = VertexOutcome::from_index(k);
    const Eigen::MatrixXcd conj =
        heisenberg_jump(g.dag, {0}, 0, o, assign, 4, spec);
    const Eigen::MatrixXcd plain = embedded_event_operator(
        g.dag.vertex(0), o, TwoQubitUnitary::identity(), 4, spec);
    EXPECT_LE((conj - plain).cwiseAbs().maxCoeff(), kTolExact);
  }
}

TEST(HeisenbergJump, IgnoresSpacelikeRMatrixChanges) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2});
  const RAssignment assign1(TwoQubitUnitary::haar_random(16));
  RAssignment assign2(TwoQubitUnitary::haar_random(16));
  assign2.add_override(2, 0, 0, TwoQubitUnitary::haar_random(17));
  const JumpSpec spec{0.5};
  // position 1 of labeling {1, 0} is vertex 0; vertex 1 (slot 2) is spacelike
  for (int k = 0; k < 4; ++k) {
    const VertexOutcome o = VertexOutcome::from_index(k);
    const Eigen::MatrixXcd a =
        heisenberg_jump(g.dag, {1, 0}, 1, o, assign1, 4, spec);
    const Eigen::MatrixXcd b =
        heisenberg_jump(g.dag, {1, 0}, 1, o, assign2, 4, spec);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), kTolExact);
  }
}

TEST(NoSignaling, EmptyRegionIsTrivial) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2});
  const RAssignment assign(TwoQubitUnitary::haar_random(3));
  const NoSignalingResult r = no_signaling_check(
      g.dag, {}, {1}, assign, assign, random_state(4, 4), JumpSpec{0.5});
  EXPECT_EQ(r.max_deviation, 0.0);
  EXPECT_EQ(r.target, (std::vector<int>{1}));
}

TEST(NoSignaling, FirstLayerSpacelikeRegions) {
  const GrownLattice g = grow_lattice(Geometry{3}, {0, 2, 4});
  const RAssignment assign1(TwoQubitUnitary::haar_random(23));
  RAssignment assign2(TwoQubitUnitary::haar_random(23));
  assign2.add_override(0, 0, 0, TwoQubitUnitary::haar_random(24));
  const NoSignalingResult r =
      no_signaling_check(g.dag, {0}, {1}, assign1, assign2,
                         random_state(6, 5), JumpSpec{0.5});
  EXPECT_LE(r.max_deviation, kTolEnum);
  EXPECT_EQ(r.stem, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.target, (std::vector<int>{1}));
}

TEST(NoSignaling, NonEmptyPastJoint) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1, 3});
  ASSERT_TRUE(g.dag.is_spacelike(2, 3));
  const RAssignment assign1(TwoQubitUnitary::haar_random(33));
  RAssignment assign2(TwoQubitUnitary::haar_random(33));
  assign2.add_override(3, 0, 0, TwoQubitUnitary::haar_random(34));
  const NoSignalingResult r =
      no_signaling_check(g.dag, {3}, {2}, assign1, assign2,
                         random_state(4, 6), JumpSpec{0.3});
  EXPECT_LE(r.max_deviation, kTolEnum);
  EXPECT_EQ(r.target, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(r.stem, (std::vector<int>{0, 1, 2, 3}));
}

TEST(NoSignaling, ValidatesRegionsAndAssignments) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1});
  const RAssignment assign1(TwoQubitUnitary::haar_random(41));
  RAssignment changed(TwoQubitUnitary::haar_random(42));
  const StateVector psi = random_state(4, 7);
  const JumpSpec spec{0.5};
  // vertex 0 precedes vertex 2
  EXPECT_THROW(
      no_signaling_check(g.dag, {0}, {2}, assign1, assign1, psi, spec),
      std::invalid_argument);
  // assignments differ at B itself, not just at A
  EXPECT_THROW(
      no_signaling_check(g.dag, {0}, {1}, assign1, changed, psi, spec),
      std::invalid_argument);
  EXPECT_THROW(no_signaling_check(g.dag, {0}, {}, assign1, assign1, psi, spec),
               std::invalid_argument);
}

TEST(PastClosure, IncludesTheVerticesThemselves) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1});
  EXPECT_EQ(past_closure(g.dag, {2}), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(past_closure(g.dag, {0}), (std::vector<int>{0}));
  EXPECT_EQ(past_closure(g.dag, {}), (std::vector<int>{}));
}

TEST(SamolsHistory, SingleStepProductForm) {
  const GrownLattice g = grow_lattice(Geometry{1}, {0});
  const RAssignment assign(TwoQubitUnitary::haar_random(26));
  const StateVector psi = random_state(2, 9);
  const StateVector evolved = apply_unitary(psi, {0, 1}, assign.base());
  const std::array<double, 4> joint = born_conditional(evolved, {}, {0, 1});
  for (int b0 = 0; b0 < 2; ++b0)
    for (int b1 = 0; b1 < 2; ++b1)
      for (int k = 0; k < 4; ++k) {
        const double expect = std::norm(psi.amplitude(b0 | (b1 << 1))) *
                              joint[k];
        EXPECT_NEAR(
            samols_history_probability(g.dag, {0}, {b0, b1},
                                       {VertexOutcome::from_index(k)}, assign,
                                       psi),
            expect, kTolExact);
      }
}

TEST(SamolsEnumerate, MarginalIsBornRule) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1});
  RAssignment assign(TwoQubitUnitary::haar_random(29));
  const StateVector psi = random_state(4, 10);
  const SamolsDistribution dist =
      samols_enumerate(g.dag, {0, 1, 2}, assign, psi);
  EXPECT_NEAR(dist.vertex_dist.total(), 1.0, kTolEnum);

  StateVector evolved = psi;
  for (int v = 0; v < g.dag.size(); ++v) {
    const Vertex& vx = g.dag.vertex(v);
    apply_unitary_inplace(
        evolved, adjacent_pair(vx.slot, 4), assign.resolve(vx.slot, vx.pair_ordinal));
  }
  ASSERT_EQ(dist.final_marginal.size(), 16u);
  double sum = 0.0;
  for (uint64_t idx = 0; idx < 16; ++idx) {
    EXPECT_NEAR(dist.final_marginal[idx], std::norm(evolved.amplitude(idx)),
                kTolEnum);
    sum += dist.final_marginal[idx];
  }
  EXPECT_NEAR(sum, 1.0, kTolEnum);
}

TEST(SamolsEnumerate, SpacelikePairOrderIndependent) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2});
  const RAssignment assign(TwoQubitUnitary::haar_random(37));
  const StateVector psi = random_state(4, 11);
  const SamolsDistribution a = samols_enumerate(g.dag, {0, 1}, assign, psi);
  const SamolsDistribution b = samols_enumerate(g.dag, {1, 0}, assign, psi);
  EXPECT_LE(a.vertex_dist.max_abs_diff(b.vertex_dist), kTolEnum);
}

TEST(SamolsEnumerate, DeeperStemOrderDependenceWitness) {
  const GrownLattice g = grow_lattice(Geometry{2}, {0, 2, 1, 3});
  const RAssignment assign(TwoQubitUnitary::haar_random(0x5357495401ull));
  const StateVector psi(4);
  const SamolsDistribution a =
      samols_enumerate(g.dag, {0, 1, 2, 3}, assign, psi);
  const SamolsDistribution b =
      samols_enumerate(g.dag, {0, 1, 3, 2}, assign, psi);
  EXPECT_GT(a.vertex_dist.max_abs_diff(b.vertex_dist), 1e-6);
  // the two labelings still agree on the final surface configuration
  for (uint64_t idx = 0; idx < 16; ++idx)
    EXPECT_NEAR(a.final_marginal[idx], b.final_marginal[idx], kTolEnum);
}

TEST(Guardrails, RefuseOversizedEnumerations) {
  const GrownLattice g =
      grow_lattice(Geometry{2}, {0, 2, 1, 3, 0, 2, 1, 3, 0});
  const RAssignment assign(TwoQubitUnitary::identity());
  const StateVector psi(4);
  const JumpSpec spec{0.5};
  EXPECT_THROW(
      enumerate_distribution(g.dag, iota_stem(g.dag), assign, psi, spec),
      guardrail_error);

  const GrownLattice wide = grow_lattice(Geometry{6}, {0});
  EXPECT_THROW(
      commutator_norm(wide.dag, 0, 0, VertexOutcome{}, VertexOutcome{},
                      assign, 12, spec),
      guardrail_error);
}
