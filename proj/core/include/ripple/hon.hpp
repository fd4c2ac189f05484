#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "ripple/graph.hpp"
#include "ripple/small_graph.hpp"
#include "ripple/types.hpp"

namespace ripple {

// Thrown when the rejection sampler exhausts its proposal budget, which
// signals pathological input (for example a state with no neighbors at all).
struct AttemptBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact neighborhood of state s in the higher-order network over size-|s|
// connected induced subgraphs: all states obtained by swapping one vertex
// u of s for an outside vertex v adjacent to s such that the result stays
// connected.  Sorted, duplicate-free.  This is the enumeration route; the
// sampling route below must never replace it in tests.
std::vector<Cis> hon_neighbors(const InputGraph& g, const Cis& s);

// Union of two states that share all but one vertex each; throws
// std::invalid_argument when the overlap is wrong.
Cis merge_union(const Cis& u, const Cis& v);

// Induced subgraph on the union of an adjacent state pair, validated.
SmallGraph merge_edge_subgraph(const InputGraph& g, const Cis& u, const Cis& v);

inline uint64_t default_attempt_cap(int m) { return 10000ull * uint64_t(m) * uint64_t(m); }

// One uniform draw from hon_neighbors(g, s) by rejection, without
// enumerating the neighborhood.  Proposal: drop u with probability
// proportional to (deg_s - deg(u)), pick an anchor a != u proportional to
// deg(a), pick v uniform among a's neighbors, then thin by the number of
// anchors that could have proposed v.  Accepts only valid swaps; an
// articulation-point drop requires an explicit connectivity check.
// Throws AttemptBudgetError after attempt_cap proposals.
Cis sample_hon_neighbor(const InputGraph& g, const Cis& s, std::mt19937_64& rng,
                        uint64_t attempt_cap = 0);

// Precomputed per-state context for repeated draws from the same state;
// the walk keeps one for its current state.
class NeighborSampler {
 public:
  NeighborSampler(const InputGraph& g, const Cis& s);

  // Draws one neighbor; total_proposals() tracks rejection effort.
  Cis draw(std::mt19937_64& rng, uint64_t attempt_cap = 0);
  uint64_t total_proposals() const { return proposals_; }

 private:
  const InputGraph* g_;
  Cis s_;
  SmallGraph sg_;
  uint16_t art_mask_ = 0;
  uint64_t deg_s_ = 0;
  std::array<uint32_t, kMaxOrder> dg_{};
  uint64_t proposals_ = 0;
};

}  // namespace ripple
