#pragma once

#include <cstdint>
#include <random>

#include "ripple/graph.hpp"
#include "ripple/pattern_key.hpp"
#include "ripple/stratify.hpp"
#include "ripple/types.hpp"

namespace ripple {

// Single-chain state-network walk: per-transition average of the traversed
// edge's pattern weight.  In the walk's stationary regime every network
// edge is equally likely, so the result converges to the per-edge average
// weight vector (pattern concentrations, not absolute counts).  The state
// size is taken from `start`.  No burn-in is applied; the caller picks the
// start and the budget.  Propagates AttemptBudgetError from degenerate
// states.
CountVector mcmc_ratio_estimate(const InputGraph& g, const Cis& start, uint64_t steps,
                                std::mt19937_64& rng);

// Single-supernode regenerative baseline: all seed states are contracted
// into one walk origin, seed-incident network edges are counted exactly,
// and the rest is estimated from return tours.  The reference point the
// stratified estimator improves on.
struct BaselineResult {
  CountVector counts;      // exact_part + tour_part
  CountVector exact_part;  // edges with a seed-state endpoint, exact
  CountVector tour_part;   // scaled tour estimate over the remaining edges
  double edge_total = 0;
  double edge_exact = 0;          // seed-incident network edge count
  double edge_tour_estimate = 0;  // estimated count of the remaining edges
  double edge_tour_variance = 0;  // variance of the per-tour edge estimates
  uint64_t tours = 0;             // completed tours
  uint64_t aborted = 0;           // tours discarded on a proposal budget
  uint64_t steps = 0;             // states visited across all tours
  double mean_tour_len = 0;       // mean states per completed tour
};

// Attempts m_tours tours (fewer when step_budget > 0 runs out mid-stream).
// Tours start on a uniformly random border edge, walk the state network
// unrestricted, and end on re-entering the seed set; only edges with both
// endpoints outside the seed set earn rewards.  Requires every component
// that has walk states to contain a seed, like the stratified estimator.
BaselineResult supernode_tour_estimate(const InputGraph& g, const SeedSet& seeds,
                                       uint64_t m_tours, std::mt19937_64& rng,
                                       uint64_t step_budget = 0);

}  // namespace ripple
