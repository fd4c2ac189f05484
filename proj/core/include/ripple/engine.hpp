#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ripple/graph.hpp"
#include "ripple/hon.hpp"
#include "ripple/pattern_key.hpp"
#include "ripple/reservoir.hpp"
#include "ripple/stratify.hpp"
#include "ripple/types.hpp"

namespace ripple {

struct RunConfig {
  int k = 4;
  double epsilon = 0.03;         // per-stratum relative error target
  int n1 = 1;                    // number of walk-state seeds
  uint32_t reservoir_capacity = 100000;
  uint64_t min_tours = 256;      // per stratum, before the stopping rule applies
  uint64_t max_tours = 1000000;  // per stratum, cap on attempted tours
  uint64_t max_steps = 1000000;  // states per tour; longer tours are discarded
  uint64_t rejection_cap = 100000;  // stratum-membership rejections per transition
  int workers = 1;
  uint64_t rng_seed = 1;
  uint64_t batch = 0;  // tours per stopping-rule check; 0 = 64 * workers

  uint64_t effective_batch() const { return batch ? batch : 64ull * uint64_t(workers); }
  void validate() const;  // throws std::invalid_argument
};

// Per-stratum outcome.  reward_sum holds raw per-pattern tour reward sums;
// the stratum's contribution to the estimate is reward_sum * deg_hat /
// (2 * tours).  The row for stratum 1 is exact: tours == 0 and reward_sum
// is already the contribution.
struct StratumResult {
  uint32_t r = 0;
  bool skipped = false;  // no inbound crossing mass, stratum never walked
  double deg_hat = 0;    // estimated supernode degree
  uint64_t tours = 0;    // completed tours
  uint64_t aborted = 0;  // tours discarded on a step or proposal budget
  CountVector reward_sum;
  double edge_estimate = 0;  // scaled estimate of this stratum's network edge share
  double edge_variance = 0;  // variance of the per-tour edge estimates
  double mean_tour_len = 0;  // mean states visited per completed tour
  uint64_t max_tour_len = 0;
  double reservoir_pressure = 0;  // max outbound cell fill ratio seen/capacity
  uint64_t total_steps = 0;       // states visited, aborted tours included
};

struct RippleResult {
  RunConfig config;
  CountVector counts;
  double total = 0;           // sum over counts
  CountVector first_stratum;  // exact seed-incident contribution
  std::vector<StratumResult> strata;
  std::vector<std::string> warnings;
  uint32_t strata_used = 1;  // highest stratum with inbound crossing mass
  uint64_t total_steps = 0;
  double wall_time_s = 0;  // informational; excluded from machine output
};

// One regenerative tour on the contracted graph of stratum r, from a start
// state with label r (the implicit first step out of the supernode).  From
// a label-r state the transition is uniform over all network neighbors;
// from a higher-labeled state it is rejection-restricted back to label r.
// The tour ends on reaching a label below r.  The entering and terminal
// supernode edges earn nothing; every other traversed edge earns its merge
// pattern 1/gamma, recorded as a pattern-cache id.  Visits to states above
// r are reported as crossings.  A tour that exhausts max_steps, the
// rejection cap, or the proposal budget reports completed == false and must
// be discarded whole.
struct TourOutcome {
  bool completed = false;
  uint64_t steps = 0;  // states visited, supernode excluded
  uint64_t f1 = 0;     // rewarded transitions
  std::vector<std::pair<uint32_t, double>> pattern_increments;  // (id, 1/gamma)
  std::vector<std::pair<uint32_t, Cis>> crossings;              // (label, state)
  std::vector<Cis> visited;                                     // trace only
};

// Memoizes stratum labels; walk states recur heavily.
class RhoCache {
 public:
  RhoCache(const InputGraph& g, const Stratification& strat) : g_(&g), strat_(&strat) {}
  uint32_t get(const Cis& s) {
    auto it = map_.find(s);
    if (it != map_.end()) return it->second;
    uint32_t r = rho(*g_, *strat_, s);
    map_.emplace(s, r);
    return r;
  }

 private:
  const InputGraph* g_;
  const Stratification* strat_;
  std::unordered_map<Cis, uint32_t, CisHash> map_;
};

// Memoizes the two per-step costs that dominate the walk: the draw context
// of a state and the merge pattern of a traversed state pair.  Both are
// pure functions of the graph, so hits change nothing about the sampled
// law or the rng stream; the maps are dropped wholesale when they grow
// past their caps.  One instance per worker: pattern ids are cache-local.
class WalkCache {
 public:
  explicit WalkCache(const InputGraph& g) : g_(&g) {}

  NeighborSampler& sampler(const Cis& s) {
    if (samplers_.size() >= kMaxSamplers) samplers_.clear();
    return samplers_.try_emplace(s, *g_, s).first->second;
  }

  struct EdgeInfo {
    uint32_t id = 0;
    double inv_gamma = 0;
  };
  const EdgeInfo* find_edge(const Cis& u, const Cis& v) const {
    auto it = edges_.find(pair_key(u, v));
    return it == edges_.end() ? nullptr : &it->second;
  }
  void put_edge(const Cis& u, const Cis& v, EdgeInfo e) {
    if (edges_.size() >= kMaxEdges) edges_.clear();
    edges_.emplace(pair_key(u, v), e);
  }

 private:
  struct PairKey {
    Cis a, b;
    bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
  };
  struct PairHash {
    size_t operator()(const PairKey& p) const {
      return CisHash{}(p.a) * 0x9e3779b97f4a7c15ull ^ CisHash{}(p.b);
    }
  };
  static PairKey pair_key(const Cis& u, const Cis& v) {
    return u < v ? PairKey{u, v} : PairKey{v, u};
  }

  static constexpr size_t kMaxSamplers = 1u << 13;
  static constexpr size_t kMaxEdges = 1u << 16;
  const InputGraph* g_;
  std::unordered_map<Cis, NeighborSampler, CisHash> samplers_;
  std::unordered_map<PairKey, EdgeInfo, PairHash> edges_;
};

void sample_tour(const InputGraph& g, const Stratification& strat, uint32_t r,
                 const Cis& start, std::mt19937_64& rng, PatternCache& cache,
                 RhoCache& rho_cache, uint64_t max_steps, uint64_t rejection_cap,
                 bool trace, TourOutcome& out, WalkCache* wcache = nullptr);

TourOutcome sample_tour(const InputGraph& g, const Stratification& strat, uint32_t r,
                        const Cis& start, std::mt19937_64& rng, PatternCache& cache,
                        RhoCache& rho_cache, uint64_t max_steps, uint64_t rejection_cap,
                        bool trace = false, WalkCache* wcache = nullptr);

struct FirstPassResult {
  CountVector counts;            // exact sum of f over seed-incident edge pairs
  std::vector<double> beta_row;  // [t]: exact crossing edge count into stratum t
  uint64_t edges = 0;            // distinct seed-incident network edges
};

// Exact pass over the neighborhoods of the seed states: accumulates the
// seed-incident share of the estimate, the exact first row of the crossing
// grid, and the row-1 reservoir cells.
FirstPassResult first_stratum_pass(const InputGraph& g, const SeedSet& seeds,
                                   const Stratification& strat, ReservoirMatrix& rmat,
                                   std::mt19937_64& rng, PatternCache& cache);

class RippleEngine {
 public:
  RippleEngine(const InputGraph& g, RunConfig cfg);
  RippleEngine(const InputGraph& g, RunConfig cfg, SeedSet seeds);

  // Single shot; a second call returns the stored result.
  RippleResult run();

  // run() internals, exposed for instrumented tests.  prepare() selects
  // seeds (unless preset), stratifies, and runs the exact first pass;
  // run_stratum() walks one stratum and updates the crossing grid.
  void prepare();
  StratumResult run_stratum(uint32_t r);
  const Stratification& strat() const { return strat_; }
  const SeedSet& seeds() const { return seeds_; }
  const ReservoirMatrix& reservoirs() const { return *rmat_; }
  double beta(uint32_t q, uint32_t r) const;
  uint32_t max_active_stratum() const { return max_active_; }

 private:
  struct WorkerSlot {
    std::mt19937_64 rng;
    PatternCache cache;
    std::unique_ptr<RhoCache> rho;
    std::unique_ptr<WalkCache> walk;
    std::vector<double> acc;  // per-stratum reward accumulator, by cache id
    TourOutcome buf;
    // per-batch tallies
    uint64_t b_done = 0, b_aborted = 0, b_steps_all = 0, b_steps_done = 0, b_maxlen = 0;
    long double b_fs = 0, b_fss = 0;
  };

  void ingest(StratumResult sr);

  const InputGraph* g_;
  RunConfig cfg_;
  SeedSet seeds_;
  bool seeds_preset_ = false;
  bool prepared_ = false;
  bool ran_ = false;
  Stratification strat_;
  std::unique_ptr<ReservoirMatrix> rmat_;
  std::vector<std::vector<double>> beta_;
  std::vector<WorkerSlot> workers_;
  uint32_t max_active_ = 1;
  RippleResult result_;
};

// Normal-approximation interval for the mean of per-tour estimates.
std::pair<double, double> confidence_interval(const std::vector<double>& tour_estimates,
                                              double level);

// Inverse standard normal CDF (rational approximation, relative error
// below 1.2e-9).
double normal_quantile(double p);

}  // namespace ripple
