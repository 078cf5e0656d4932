#include "collatt/lattice.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

namespace collatt {

Surface::Surface(Geometry geom, std::vector<LinkId> slots)
    : geom_(geom), slots_(std::move(slots)) {
  geom_.validate();
  if (static_cast<int>(slots_.size()) != geom_.num_slots())
    throw config_error("surface: expected " + std::to_string(geom_.num_slots()) +
                       " slots, got " + std::to_string(slots_.size()));
  int r = 0;
  for (const LinkId& l : slots_)
    if (l.dir == Dir::R) ++r;
  if (r != geom_.half_width)
    throw config_error("surface: needs exactly N R links and N L links");
}

std::string Surface::pattern() const {
  std::string p;
  p.reserve(slots_.size());
  for (const LinkId& l : slots_) p.push_back(l.dir == Dir::R ? 'R' : 'L');
  return p;
}

Surface initial_surface(Geometry geom) {
  geom.validate();
  std::vector<LinkId> slots;
  slots.reserve(geom.num_slots());
  for (int i = 0; i < geom.num_slots(); ++i)
    slots.push_back(LinkId{i % 2 == 0 ? Dir::R : Dir::L, i, 0});
  return Surface(geom, std::move(slots));
}

std::vector<int> rl_pairs(const Surface& s) {
  std::vector<int> out;
  const int n = s.num_slots();
  for (int i = 0; i < n; ++i)
    if (s.slot(i).dir == Dir::R && s.slot((i + 1) % n).dir == Dir::L)
      out.push_back(i);
  return out;
}

const Vertex& CausalDag::vertex(int v) const {
  check_vertex(v);
  return vertices_[v];
}

const std::vector<int>& CausalDag::direct_predecessors(int v) const {
  check_vertex(v);
  return preds_[v];
}

void CausalDag::check_vertex(int v) const {
  if (v < 0 || v >= size())
    throw std::out_of_range("causal dag: unknown vertex " + std::to_string(v));
}

bool CausalDag::reaches(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  const auto& bits = ancestors_[v];
  const size_t word = static_cast<size_t>(u) / 64;
  if (word >= bits.size()) return false;
  return (bits[word] >> (u % 64)) & 1u;
}

bool CausalDag::is_spacelike(int u, int v) const {
  if (u == v) {
    check_vertex(u);
    return false;
  }
  return !reaches(u, v) && !reaches(v, u);
}

std::vector<int> CausalDag::causal_past(const std::vector<int>& vs) const {
  std::set<int> in(vs.begin(), vs.end());
  std::set<int> past;
  for (int v : vs) {
    check_vertex(v);
    const auto& bits = ancestors_[v];
    for (size_t w = 0; w < bits.size(); ++w) {
      uint64_t word = bits[w];
      while (word) {
        const int u = static_cast<int>(w * 64 + std::countr_zero(word));
        word &= word - 1;
        if (!in.count(u)) past.insert(u);
      }
    }
  }
  return {past.begin(), past.end()};
}

bool CausalDag::is_downward_closed(const std::vector<int>& vs) const {
  std::set<int> in(vs.begin(), vs.end());
  for (int v : vs) {
    check_vertex(v);
    for (int p : preds_[v])
      if (!in.count(p)) return false;
  }
  return true;
}

bool CausalDag::is_natural_labeling(const std::vector<int>& seq) const {
  std::set<int> in(seq.begin(), seq.end());
  if (in.size() != seq.size()) return false;  // repeats
  std::set<int> placed;
  for (int v : seq) {
    check_vertex(v);
    // every predecessor must already be listed, so the set is a stem
    for (int p : preds_[v])
      if (!placed.count(p)) return false;
    placed.insert(v);
  }
  return true;
}

int CausalDag::add_vertex(int slot, LinkId in_r, LinkId in_l, LinkId out_l,
                          LinkId out_r) {
  const int ordinal = size();
  Vertex v;
  v.ordinal = ordinal;
  v.slot = slot;
  v.pair_ordinal = pair_counts_[slot]++;
  v.in_r = in_r;
  v.in_l = in_l;
  v.out_l = out_l;
  v.out_r = out_r;
  vertices_.push_back(v);

  std::vector<int> preds;
  for (const LinkId& in : {in_r, in_l}) {
    auto it = creator_.find(in);
    if (it != creator_.end()) preds.push_back(it->second);
  }
  std::sort(preds.begin(), preds.end());
  preds.erase(std::unique(preds.begin(), preds.end()), preds.end());

  const size_t words = static_cast<size_t>(ordinal) / 64 + 1;
  std::vector<uint64_t> anc(words, 0);
  for (int p : preds) {
    const auto& pb = ancestors_[p];
    for (size_t w = 0; w < pb.size(); ++w) anc[w] |= pb[w];
    anc[static_cast<size_t>(p) / 64] |= 1ull << (p % 64);
  }
  preds_.push_back(std::move(preds));
  ancestors_.push_back(std::move(anc));

  creator_[out_l] = ordinal;
  creator_[out_r] = ordinal;
  return ordinal;
}

int apply_motion_inplace(Surface& s, int i, CausalDag& dag) {
  const int n = s.num_slots();
  if (i < 0 || i >= n)
    throw std::invalid_argument("apply_motion: slot " + std::to_string(i) +
                                " out of range");
  const int j = (i + 1) % n;
  const LinkId in_r = s.slot(i);
  const LinkId in_l = s.slot(j);
  if (in_r.dir != Dir::R || in_l.dir != Dir::L)
    throw std::invalid_argument("apply_motion: slot " + std::to_string(i) +
                                " does not name an RL pair");
  const LinkId out_l{Dir::L, in_l.line, in_l.segment + 1};
  const LinkId out_r{Dir::R, in_r.line, in_r.segment + 1};
  s.set_slot(i, out_l);
  s.set_slot(j, out_r);
  return dag.add_vertex(i, in_r, in_l, out_l, out_r);
}

std::pair<Surface, int> apply_motion(const Surface& s, int i, CausalDag& dag) {
  Surface next = s;
  const int v = apply_motion_inplace(next, i, dag);
  return {std::move(next), v};
}

GrownLattice grow_lattice(Geometry geom, const std::vector<int>& motion_slots) {
  GrownLattice g{initial_surface(geom), CausalDag(geom)};
  for (int slot : motion_slots) apply_motion_inplace(g.surface, slot, g.dag);
  return g;
}

std::vector<int> canonical_motion_sequence(Geometry geom, int steps) {
  if (steps < 0) throw config_error("steps must be non-negative");
  Surface s = initial_surface(geom);
  CausalDag dag(geom);
  std::vector<int> motions;
  motions.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const int slot = rl_pairs(s).front();
    apply_motion_inplace(s, slot, dag);
    motions.push_back(slot);
  }
  return motions;
}

namespace {

void extend(const CausalDag& dag, const std::vector<int>& stem,
            std::vector<int>& pending_preds, std::vector<bool>& placed,
            std::vector<int>& prefix,
            const std::function<void(const std::vector<int>&)>& fn) {
  if (prefix.size() == stem.size()) {
    fn(prefix);
    return;
  }
  for (size_t k = 0; k < stem.size(); ++k) {
    if (placed[k] || pending_preds[k] != 0) continue;
    placed[k] = true;
    prefix.push_back(stem[k]);
    // decrement counters of direct successors within the stem
    for (size_t m = 0; m < stem.size(); ++m) {
      if (placed[m]) continue;
      for (int p : dag.direct_predecessors(stem[m]))
        if (p == stem[k]) --pending_preds[m];
    }
    extend(dag, stem, pending_preds, placed, prefix, fn);
    for (size_t m = 0; m < stem.size(); ++m) {
      if (placed[m] || m == k) continue;
      for (int p : dag.direct_predecessors(stem[m]))
        if (p == stem[k]) ++pending_preds[m];
    }
    prefix.pop_back();
    placed[k] = false;
  }
}

}  // namespace

void for_each_linear_extension(const CausalDag& dag, const std::vector<int>& stem,
                               const std::function<void(const std::vector<int>&)>& fn,
                               int max_size) {
  if (static_cast<int>(stem.size()) > max_size)
    throw guardrail_error("linear_extensions: stem of " +
                          std::to_string(stem.size()) +
                          " vertices exceeds bound " + std::to_string(max_size));
  if (!dag.is_downward_closed(stem))
    throw std::invalid_argument("linear_extensions: stem is not a partial stem");

  std::vector<int> sorted = stem;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("linear_extensions: repeated vertex in stem");

  std::vector<int> pending(sorted.size(), 0);
  for (size_t k = 0; k < sorted.size(); ++k) {
    for (int p : dag.direct_predecessors(sorted[k]))
      if (std::binary_search(sorted.begin(), sorted.end(), p)) ++pending[k];
  }
  std::vector<bool> placed(sorted.size(), false);
  std::vector<int> prefix;
  prefix.reserve(sorted.size());
  extend(dag, sorted, pending, placed, prefix, fn);
}

std::vector<std::vector<int>> linear_extensions(const CausalDag& dag,
                                                const std::vector<int>& stem,
                                                int max_size) {
  std::vector<std::vector<int>> out;
  for_each_linear_extension(
      dag, stem, [&out](const std::vector<int>& ext) { out.push_back(ext); },
      max_size);
  return out;
}

}  // namespace collatt
