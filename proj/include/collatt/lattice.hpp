#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "collatt/errors.hpp"

namespace collatt {

// Periodic 1+1 null lattice. A spacelike surface cuts 2N links, N of them
// left-moving and N right-moving. Slot indices are taken mod 2N throughout.
struct Geometry {
  int half_width = 1;  // N

  int num_slots() const { return 2 * half_width; }
  void validate() const {
    if (half_width < 1) throw config_error("lattice: n must be >= 1");
  }

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

enum class Dir : uint8_t { L = 0, R = 1 };

// A link is one segment of a null line between two crossings. `line` names
// the ray (fixed at the initial surface), `segment` counts crossings along
// it, so the triple is unique within a run.
struct LinkId {
  Dir dir = Dir::R;
  int line = 0;
  int segment = 0;

  friend auto operator<=>(const LinkId&, const LinkId&) = default;
};

// A surface is the cyclic sequence of links it cuts. Slot i of any surface
// reachable from the initial one always holds the current link at the same
// spatial position: an elementary motion replaces the pair (i, i+1) in place.
class Surface {
 public:
  Surface(Geometry geom, std::vector<LinkId> slots);

  const Geometry& geometry() const { return geom_; }
  int num_slots() const { return geom_.num_slots(); }
  const LinkId& slot(int i) const { return slots_.at(i); }
  const std::vector<LinkId>& slots() const { return slots_; }

  // L/R sequence, 'L' and 'R' characters, slot 0 first.
  std::string pattern() const;

  void set_slot(int i, LinkId link) { slots_.at(i) = link; }

 private:
  Geometry geom_;
  std::vector<LinkId> slots_;
};

// Constant-time initial surface with pattern R,L,R,L,... (slot i carries a
// fresh segment-0 link of line i). Alternation yields N RL pairs, the
// maximum number of available motions.
Surface initial_surface(Geometry geom);

// All slot indices i (mod 2N) with direction R at i and L at i+1. Non-empty
// for every reachable surface.
std::vector<int> rl_pairs(const Surface& s);

// One vertex of the causal DAG, created when an elementary motion crosses
// it. in links are the consumed (R, L) pair, out links the produced (L, R)
// pair; each out link continues its in link's null line with segment+1.
struct Vertex {
  int ordinal = 0;       // creation index within the run
  int slot = 0;          // motion acted on slots (slot, slot+1 mod 2N)
  int pair_ordinal = 0;  // how many earlier vertices used the same slot pair
  LinkId in_r, in_l;
  LinkId out_l, out_r;

  int slot_second(int num_slots) const { return (slot + 1) % num_slots; }
};

// Vertices created so far plus the induced strict partial order. Direct
// predecessors of v are the creators of v's in links; reachability is kept
// incrementally as per-vertex ancestor bitsets.
class CausalDag {
 public:
  explicit CausalDag(Geometry geom) : geom_(geom) { geom_.validate(); }

  const Geometry& geometry() const { return geom_; }
  int size() const { return static_cast<int>(vertices_.size()); }
  const Vertex& vertex(int v) const;
  const std::vector<int>& direct_predecessors(int v) const;

  // u strictly precedes v.
  bool reaches(int u, int v) const;
  // Neither reaches the other; false for u == v.
  bool is_spacelike(int u, int v) const;

  // All vertices strictly preceding some element of vs, excluding vs itself.
  std::vector<int> causal_past(const std::vector<int>& vs) const;

  // vs contains every predecessor of each of its elements (partial stem test).
  bool is_downward_closed(const std::vector<int>& vs) const;

  // Every proper prefix of seq is downward closed within seq's vertex set.
  bool is_natural_labeling(const std::vector<int>& seq) const;

  // Registers the vertex produced by a motion; returns its ordinal.
  int add_vertex(int slot, LinkId in_r, LinkId in_l, LinkId out_l, LinkId out_r);

 private:
  void check_vertex(int v) const;

  Geometry geom_;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<uint64_t>> ancestors_;  // bit u set in [v]: u < v
  std::map<LinkId, int> creator_;
  std::map<int, int> pair_counts_;  // first slot -> motions so far
};

// Elementary motion across the vertex at pair (i, i+1): the RL pair is
// replaced by the LR pair of continuation links and the new vertex is
// appended to the dag. Rejects i that does not name an RL pair.
int apply_motion_inplace(Surface& s, int i, CausalDag& dag);
std::pair<Surface, int> apply_motion(const Surface& s, int i, CausalDag& dag);

// Convenience for oracle setups: cross the given pair slots in order,
// starting from the initial surface.
struct GrownLattice {
  Surface surface;
  CausalDag dag;
};
GrownLattice grow_lattice(Geometry geom, const std::vector<int>& motion_slots);

// Deterministic motion sequence that always crosses the lowest-index
// available RL pair. Useful when two runs must share a vertex set.
std::vector<int> canonical_motion_sequence(Geometry geom, int steps);

inline constexpr int kDefaultExtensionBound = 10;

// Calls fn once per linear extension of the stem (a total order consistent
// with the dag order), each exactly once, in lexicographic ordinal order.
// The stem must be a partial stem (downward closed); enumeration is
// factorial in |stem| and refuses stems above max_size.
void for_each_linear_extension(const CausalDag& dag, const std::vector<int>& stem,
                               const std::function<void(const std::vector<int>&)>& fn,
                               int max_size = kDefaultExtensionBound);

std::vector<std::vector<int>> linear_extensions(const CausalDag& dag,
                                                const std::vector<int>& stem,
                                                int max_size = kDefaultExtensionBound);

}  // namespace collatt
