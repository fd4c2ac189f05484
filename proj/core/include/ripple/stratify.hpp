#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ripple/graph.hpp"
#include "ripple/types.hpp"

namespace ripple {

// Disjoint walk-state seeds: n1 connected subgraphs of k-1 vertices with
// pairwise disjoint vertex sets, at least one per seedable component.
struct SeedSet {
  std::vector<Cis> seeds;
  std::vector<int32_t> seed_of;  // per vertex: owning seed index or -1
  std::vector<std::string> warnings;
};

// Greedy farthest-point placement: one seed per component with >= k-1
// vertices first (random start), then starts maximizing BFS distance to all
// claimed vertices; each seed grows to k-1 vertices by BFS over unclaimed
// vertices.  Beyond 64 seeds placement falls back to random unclaimed
// starts.  Throws std::invalid_argument when n1 is below the number of
// seedable components.  May return fewer than n1 seeds (with a warning)
// when no room is left.
SeedSet select_seeds(const InputGraph& g, int n1, int k, std::mt19937_64& rng);

SeedSet seeds_from_vertex_lists(const InputGraph& g, int k,
                                const std::vector<std::vector<VertexId>>& lists);

std::string seeds_to_json(const SeedSet& seeds);
std::vector<std::vector<VertexId>> seed_lists_from_json(const std::string& text);

// Distance layers around the seed vertices plus ownership, fixing the
// stratum label of every walk state.
struct Stratification {
  std::vector<uint32_t> dist;    // BFS distance to the seed vertex union
  std::vector<int32_t> seed_of;  // owning seed per vertex or -1
  uint32_t r_max = 1;            // upper bound on stratum labels
};

Stratification make_stratification(const InputGraph& g, const SeedSet& seeds, int k);

// Stratum label of a walk state: 1 + sum over its vertices of (distance to
// the seed union, plus 1 for seed vertices outside the largest single-seed
// connected overlap V*).  Seeds themselves land in stratum 1.  Ties for V*
// break toward the lexicographically smallest sorted vertex list.
uint32_t rho(const InputGraph& g, const Stratification& strat, const Cis& s);

// Largest connected subset of V(s) contained in one seed's vertex set;
// exposed for tests.
Cis largest_seed_overlap(const InputGraph& g, const Stratification& strat, const Cis& s);

struct EpsReport {
  bool ok = false;
  uint64_t num_states = 0;
  uint32_t num_strata = 0;  // distinct stratum labels
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
};

// Desk-scale exhaustive check that the stratification makes every stratum
// reachable and escapable: stratum 1 present in every state component, every
// non-seed state has a neighbor in a strictly earlier stratum, every
// non-empty stratum has an edge to earlier strata, and every contracted
// stratum graph is connected.  Builds the explicit state network; subject to
// the oracle caps.
EpsReport validate_eps(const InputGraph& g, const Stratification& strat, int k);

}  // namespace ripple
