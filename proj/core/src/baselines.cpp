#include "ripple/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ripple/hon.hpp"

namespace ripple {

CountVector mcmc_ratio_estimate(const InputGraph& g, const Cis& start, uint64_t steps,
                                std::mt19937_64& rng) {
  if (steps == 0) throw std::invalid_argument("mcmc_ratio_estimate: needs at least one step");
  PatternCache cache;
  std::vector<double> acc;
  Cis cur = start;
  for (uint64_t i = 0; i < steps; ++i) {
    NeighborSampler sampler(g, cur);
    Cis nxt = sampler.draw(rng);
    SmallGraph merged = merge_edge_subgraph(g, cur, nxt);
    uint32_t id = cache.intern(merged);
    if (acc.size() < cache.distinct()) acc.resize(cache.distinct(), 0.0);
    acc[id] += cache.info(id).inv_gamma;
    cur = nxt;
  }
  CountVector out;
  for (size_t id = 0; id < acc.size(); ++id)
    if (acc[id] != 0.0) out[cache.info(uint32_t(id)).key] = acc[id] / double(steps);
  return out;
}

BaselineResult supernode_tour_estimate(const InputGraph& g, const SeedSet& seeds,
                                       uint64_t m_tours, std::mt19937_64& rng,
                                       uint64_t step_budget) {
  if (seeds.seeds.empty())
    throw std::invalid_argument("supernode_tour_estimate: needs at least one seed");
  std::unordered_set<Cis, CisHash> seed_set(seeds.seeds.begin(), seeds.seeds.end());

  PatternCache cache;
  std::vector<double> acc_exact, acc_tour;
  std::vector<Cis> border;  // outside endpoint per directed seed-to-outside edge
  uint64_t exact_edges = 0;

  BaselineResult out;
  for (const Cis& s : seeds.seeds) {
    for (const Cis& v : hon_neighbors(g, s)) {
      bool v_is_seed = seed_set.count(v) > 0;
      // An edge between two seeds is enumerated from both; count it once.
      if (v_is_seed && !(s < v)) continue;
      SmallGraph merged = merge_edge_subgraph(g, s, v);
      uint32_t id = cache.intern(merged);
      if (acc_exact.size() < cache.distinct()) acc_exact.resize(cache.distinct(), 0.0);
      acc_exact[id] += cache.info(id).inv_gamma;
      ++exact_edges;
      if (!v_is_seed) border.push_back(v);
    }
  }
  out.edge_exact = double(exact_edges);

  const double d = double(border.size());
  long double f_sum = 0, f_sqsum = 0;
  uint64_t m = 0, steps_total = 0, steps_done = 0;
  std::vector<std::pair<uint32_t, double>> incr;

  if (!border.empty()) {
    std::uniform_int_distribution<size_t> pick(0, border.size() - 1);
    for (uint64_t attempt = 0; attempt < m_tours; ++attempt) {
      if (step_budget && steps_total >= step_budget) break;
      Cis cur = border[pick(rng)];
      uint64_t tour_steps = 1;
      uint64_t f1 = 0;
      incr.clear();
      bool completed = false;
      bool fatal = false;
      while (true) {
        if (step_budget && steps_total + tour_steps >= step_budget) break;
        NeighborSampler sampler(g, cur);
        Cis nxt;
        try {
          nxt = sampler.draw(rng);
        } catch (const AttemptBudgetError&) {
          fatal = true;
          break;
        }
        if (seed_set.count(nxt)) {
          // Terminal edge back into the contracted origin: counted exactly.
          completed = true;
          break;
        }
        SmallGraph merged = merge_edge_subgraph(g, cur, nxt);
        uint32_t id = cache.intern(merged);
        incr.emplace_back(id, cache.info(id).inv_gamma);
        ++f1;
        ++tour_steps;
        cur = nxt;
      }
      steps_total += tour_steps;
      if (fatal) {
        ++out.aborted;
        continue;
      }
      if (!completed) break;  // step budget ran out mid-tour; discard it
      ++m;
      steps_done += tour_steps;
      f_sum += (long double)f1;
      f_sqsum += (long double)f1 * (long double)f1;
      if (acc_tour.size() < cache.distinct()) acc_tour.resize(cache.distinct(), 0.0);
      for (const auto& [id, w] : incr) acc_tour[id] += w;
    }
  }

  out.tours = m;
  out.steps = steps_total;
  if (m) {
    out.mean_tour_len = double(steps_done) / double(m);
    long double mean = f_sum / (long double)m;
    out.edge_tour_estimate = (d / 2.0) * double(mean);
    if (m >= 2) {
      long double var = (f_sqsum - f_sum * f_sum / (long double)m) / (long double)(m - 1);
      if (var < 0) var = 0;
      out.edge_tour_variance = double(var) * (d / 2.0) * (d / 2.0);
    }
  }
  out.edge_total = out.edge_exact + out.edge_tour_estimate;

  for (size_t id = 0; id < acc_exact.size(); ++id)
    if (acc_exact[id] != 0.0) out.exact_part[cache.info(uint32_t(id)).key] += acc_exact[id];
  if (m) {
    double scale = d / (2.0 * double(m));
    for (size_t id = 0; id < acc_tour.size(); ++id)
      if (acc_tour[id] != 0.0) out.tour_part[cache.info(uint32_t(id)).key] += acc_tour[id] * scale;
  }
  out.counts = out.exact_part;
  for (const auto& [key, val] : out.tour_part) out.counts[key] += val;
  return out;
}

}  // namespace ripple
