#include "ripple/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include "ripple/oracle.hpp"

namespace ripple {

namespace {

// Keeps the crossing grid and reservoir matrix at a sane size; the label
// range grows with graph diameter times subgraph order.
constexpr uint32_t kMaxStrata = 2048;

}  // namespace

void RunConfig::validate() const {
  if (k < 2 || k > kMaxOrder) throw std::invalid_argument("k must be in [2, 12]");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (n1 < 1) throw std::invalid_argument("n1 must be at least 1");
  if (reservoir_capacity < 1) throw std::invalid_argument("reservoir capacity must be at least 1");
  if (min_tours < 2) throw std::invalid_argument("min_tours must be at least 2");
  if (max_tours < min_tours) throw std::invalid_argument("max_tours must be >= min_tours");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  if (rejection_cap < 1) throw std::invalid_argument("rejection_cap must be at least 1");
  if (workers < 1 || workers > 1024) throw std::invalid_argument("workers must be in [1, 1024]");
}

void sample_tour(const InputGraph& g, const Stratification& strat, uint32_t r,
                 const Cis& start, std::mt19937_64& rng, PatternCache& cache,
                 RhoCache& rho_cache, uint64_t max_steps, uint64_t rejection_cap,
                 bool trace, TourOutcome& out, WalkCache* wcache) {
  (void)strat;  // reached through rho_cache
  out.completed = false;
  out.steps = 1;
  out.f1 = 0;
  out.pattern_increments.clear();
  out.crossings.clear();
  out.visited.clear();

  Cis cur = start;
  uint32_t cur_rho = rho_cache.get(cur);
  if (trace) out.visited.push_back(cur);

  std::optional<NeighborSampler> local;
  while (true) {
    NeighborSampler* sampler;
    if (wcache) {
      sampler = &wcache->sampler(cur);
    } else {
      local.emplace(g, cur);
      sampler = &*local;
    }
    Cis nxt;
    uint32_t nxt_rho;
    if (cur_rho == r) {
      try {
        nxt = sampler->draw(rng);
      } catch (const AttemptBudgetError&) {
        return;
      }
      nxt_rho = rho_cache.get(nxt);
    } else {
      // A state above r may only step back into stratum r; edges out of it
      // to other labels do not exist in the contracted graph.
      uint64_t rejections = 0;
      for (;;) {
        try {
          nxt = sampler->draw(rng);
        } catch (const AttemptBudgetError&) {
          return;
        }
        nxt_rho = rho_cache.get(nxt);
        if (nxt_rho == r) break;
        if (++rejections >= rejection_cap) return;
      }
    }
    if (nxt_rho < r) {
      // Terminal edge into the supernode: no reward.
      out.completed = true;
      return;
    }
    const WalkCache::EdgeInfo* hit = wcache ? wcache->find_edge(cur, nxt) : nullptr;
    uint32_t id;
    double wgt;
    if (hit) {
      id = hit->id;
      wgt = hit->inv_gamma;
    } else {
      SmallGraph merged = merge_edge_subgraph(g, cur, nxt);
      id = cache.intern(merged);
      wgt = cache.info(id).inv_gamma;
      if (wcache) wcache->put_edge(cur, nxt, {id, wgt});
    }
    out.pattern_increments.emplace_back(id, wgt);
    ++out.f1;
    if (nxt_rho > r) out.crossings.emplace_back(nxt_rho, nxt);
    if (out.steps + 1 > max_steps) return;  // runaway tour, discarded
    ++out.steps;
    cur = nxt;
    cur_rho = nxt_rho;
    if (trace) out.visited.push_back(cur);
  }
}

TourOutcome sample_tour(const InputGraph& g, const Stratification& strat, uint32_t r,
                        const Cis& start, std::mt19937_64& rng, PatternCache& cache,
                        RhoCache& rho_cache, uint64_t max_steps, uint64_t rejection_cap,
                        bool trace, WalkCache* wcache) {
  TourOutcome out;
  sample_tour(g, strat, r, start, rng, cache, rho_cache, max_steps, rejection_cap, trace, out,
              wcache);
  return out;
}

FirstPassResult first_stratum_pass(const InputGraph& g, const SeedSet& seeds,
                                   const Stratification& strat, ReservoirMatrix& rmat,
                                   std::mt19937_64& rng, PatternCache& cache) {
  FirstPassResult fp;
  fp.beta_row.assign(rmat.r_max() + 1, 0.0);
  std::vector<double> acc;
  for (const Cis& s : seeds.seeds) {
    for (const Cis& v : hon_neighbors(g, s)) {
      uint32_t t = rho(g, strat, v);
      // An edge between two seed states would be seen from both ends; count
      // it from its smaller endpoint only.
      if (t == 1 && !(s < v)) continue;
      if (t >= 2) {
        fp.beta_row[t] += 1.0;
        rmat.cell(1, t).offer(v, rng);
      } else {
        fp.beta_row[1] += 1.0;
      }
      ++fp.edges;
      SmallGraph merged = merge_edge_subgraph(g, s, v);
      uint32_t id = cache.intern(merged);
      if (acc.size() < cache.distinct()) acc.resize(cache.distinct(), 0.0);
      acc[id] += cache.info(id).inv_gamma;
    }
  }
  for (size_t id = 0; id < acc.size(); ++id)
    if (acc[id] != 0.0) fp.counts[cache.info(uint32_t(id)).key] += acc[id];
  return fp;
}

RippleEngine::RippleEngine(const InputGraph& g, RunConfig cfg) : g_(&g), cfg_(cfg) {
  cfg_.validate();
}

RippleEngine::RippleEngine(const InputGraph& g, RunConfig cfg, SeedSet seeds)
    : g_(&g), cfg_(cfg), seeds_(std::move(seeds)), seeds_preset_(true) {
  cfg_.validate();
}

double RippleEngine::beta(uint32_t q, uint32_t r) const {
  if (q >= beta_.size() || r >= beta_.size()) return 0.0;
  return beta_[q][r];
}

void RippleEngine::prepare() {
  if (prepared_) return;
  prepared_ = true;
  result_ = RippleResult{};
  result_.config = cfg_;

  if (!seeds_preset_) {
    std::mt19937_64 seed_rng(stream_seed(cfg_.rng_seed, 0, 0));
    seeds_ = select_seeds(*g_, cfg_.n1, cfg_.k, seed_rng);
  }
  for (const auto& w : seeds_.warnings) result_.warnings.push_back(w);
  if (seeds_.seeds.empty()) {
    result_.warnings.push_back(
        "no component can host a size-" + std::to_string(cfg_.k - 1) +
        " walk state; the count is exactly zero");
    result_.strata_used = 0;
    max_active_ = 0;
    return;
  }

  strat_ = make_stratification(*g_, seeds_, cfg_.k);
  if (strat_.r_max > kMaxStrata)
    throw ResourceCapError("stratum label range exceeds the supported maximum");

  rmat_ = std::make_unique<ReservoirMatrix>(strat_.r_max, cfg_.reservoir_capacity,
                                            uint8_t(cfg_.k - 1));
  beta_.assign(strat_.r_max + 1, std::vector<double>(strat_.r_max + 1, 0.0));
  workers_ = std::vector<WorkerSlot>(size_t(cfg_.workers));
  for (auto& w : workers_) {
    w.rho = std::make_unique<RhoCache>(*g_, strat_);
    w.walk = std::make_unique<WalkCache>(*g_);
  }

  std::mt19937_64 fp_rng(stream_seed(cfg_.rng_seed, 0, 1));
  FirstPassResult fp =
      first_stratum_pass(*g_, seeds_, strat_, *rmat_, fp_rng, workers_[0].cache);
  result_.first_stratum = fp.counts;

  StratumResult s1;
  s1.r = 1;
  s1.reward_sum = fp.counts;
  s1.edge_estimate = double(fp.edges);
  for (uint32_t t = 2; t <= strat_.r_max; ++t) {
    beta_[1][t] = fp.beta_row[t];
    if (beta_[1][t] > 0 && t > max_active_) max_active_ = t;
    s1.reservoir_pressure = std::max(s1.reservoir_pressure, rmat_->cell(1, t).pressure());
  }
  ingest(std::move(s1));
}

StratumResult RippleEngine::run_stratum(uint32_t r) {
  prepare();
  StratumResult sr;
  sr.r = r;
  if (r < 2 || r > strat_.r_max) throw std::invalid_argument("stratum out of range");

  std::vector<std::pair<uint32_t, double>> inbound;  // (source stratum, crossing weight)
  double dhat = 0;
  for (uint32_t q = 1; q < r; ++q) {
    double w = beta_[q][r];
    if (w > 0 && rmat_->cell(q, r).retained() > 0) {
      inbound.emplace_back(q, w);
      dhat += w;
    }
  }
  sr.deg_hat = dhat;
  if (inbound.empty() || !(dhat > 0)) {
    sr.skipped = true;
    return sr;
  }

  std::vector<double> cum(inbound.size());
  double c = 0;
  for (size_t i = 0; i < inbound.size(); ++i) {
    c += inbound[i].second;
    cum[i] = c;
  }

  for (int w = 0; w < cfg_.workers; ++w) {
    workers_[w].rng.seed(stream_seed(cfg_.rng_seed, uint64_t(w), r));
    workers_[w].acc.clear();
  }

  long double f_sum = 0, f_sqsum = 0;
  uint64_t m = 0, aborted = 0, attempts = 0;
  uint64_t steps_all = 0, steps_done = 0, maxlen = 0;

  auto worker_batch = [&](int wi, uint64_t n) {
    WorkerSlot& ws = workers_[size_t(wi)];
    ws.b_done = ws.b_aborted = ws.b_steps_all = ws.b_steps_done = ws.b_maxlen = 0;
    ws.b_fs = ws.b_fss = 0;
    std::uniform_real_distribution<double> pick_cell(0.0, dhat);
    for (uint64_t i = 0; i < n; ++i) {
      size_t ci = 0;
      if (inbound.size() > 1) {
        double x = pick_cell(ws.rng);
        ci = size_t(std::lower_bound(cum.begin(), cum.end(), x) - cum.begin());
        if (ci >= cum.size()) ci = cum.size() - 1;
      }
      Cis start = rmat_->cell(inbound[ci].first, r).sample_uniform(ws.rng);
      sample_tour(*g_, strat_, r, start, ws.rng, ws.cache, *ws.rho, cfg_.max_steps,
                  cfg_.rejection_cap, false, ws.buf, ws.walk.get());
      ws.b_steps_all += ws.buf.steps;
      if (!ws.buf.completed) {
        ++ws.b_aborted;
        continue;
      }
      ++ws.b_done;
      double f = double(ws.buf.f1);
      ws.b_fs += f;
      ws.b_fss += f * f;
      ws.b_steps_done += ws.buf.steps;
      if (ws.buf.steps > ws.b_maxlen) ws.b_maxlen = ws.buf.steps;
      if (ws.acc.size() < ws.cache.distinct()) ws.acc.resize(ws.cache.distinct(), 0.0);
      for (const auto& [id, wgt] : ws.buf.pattern_increments) ws.acc[id] += wgt;
      for (const auto& [t, st] : ws.buf.crossings) rmat_->cell(r, t).offer(st, ws.rng);
    }
  };

  while (attempts < cfg_.max_tours) {
    uint64_t batch = std::min(cfg_.effective_batch(), cfg_.max_tours - attempts);
    if (cfg_.workers == 1) {
      worker_batch(0, batch);
    } else {
      // Fixed per-worker shares keep the tour partition independent of
      // thread scheduling.
      std::vector<std::thread> threads;
      threads.reserve(size_t(cfg_.workers));
      uint64_t base = batch / uint64_t(cfg_.workers);
      uint64_t extra = batch % uint64_t(cfg_.workers);
      for (int w = 0; w < cfg_.workers; ++w) {
        uint64_t share = base + (uint64_t(w) < extra ? 1 : 0);
        if (share) threads.emplace_back(worker_batch, w, share);
      }
      for (auto& t : threads) t.join();
    }
    for (int w = 0; w < cfg_.workers; ++w) {
      const WorkerSlot& ws = workers_[size_t(w)];
      m += ws.b_done;
      aborted += ws.b_aborted;
      f_sum += ws.b_fs;
      f_sqsum += ws.b_fss;
      steps_all += ws.b_steps_all;
      steps_done += ws.b_steps_done;
      if (ws.b_maxlen > maxlen) maxlen = ws.b_maxlen;
    }
    attempts += batch;
    if (m >= cfg_.min_tours && m >= 2) {
      long double mean = f_sum / (long double)m;
      long double var = (f_sqsum - f_sum * f_sum / (long double)m) / (long double)(m - 1);
      if (var < 0) var = 0;
      // Stopping rule: standard error of the per-tour mean within epsilon
      // of the mean itself.  The deg_hat/2 scale divides out.
      if (std::sqrt(double(var / (long double)m)) <= cfg_.epsilon * double(mean)) break;
    }
  }

  sr.tours = m;
  sr.aborted = aborted;
  sr.total_steps = steps_all;
  sr.max_tour_len = maxlen;
  if (m) {
    sr.mean_tour_len = double(steps_done) / double(m);
    long double mean = f_sum / (long double)m;
    sr.edge_estimate = (dhat / 2.0) * double(mean);
    if (m >= 2) {
      long double var = (f_sqsum - f_sum * f_sum / (long double)m) / (long double)(m - 1);
      if (var < 0) var = 0;
      sr.edge_variance = double(var) * (dhat / 2.0) * (dhat / 2.0);
    }
  }

  for (int w = 0; w < cfg_.workers; ++w) {
    WorkerSlot& ws = workers_[size_t(w)];
    for (size_t id = 0; id < ws.acc.size(); ++id)
      if (ws.acc[id] != 0.0) sr.reward_sum[ws.cache.info(uint32_t(id)).key] += ws.acc[id];
    ws.acc.clear();
  }

  if (m) {
    for (uint32_t t = r + 1; t <= strat_.r_max; ++t) {
      const Reservoir& cell = rmat_->cell(r, t);
      uint64_t raw = cell.seen();
      if (raw) {
        beta_[r][t] = double(raw) * dhat / double(m);
        if (t > max_active_) max_active_ = t;
      }
      sr.reservoir_pressure = std::max(sr.reservoir_pressure, cell.pressure());
    }
  }
  return sr;
}

void RippleEngine::ingest(StratumResult sr) {
  if (!sr.skipped) {
    // Stratum 1 is exact; walked strata scale by deg_hat / (2 m).
    double scale = sr.r == 1 ? 1.0 : (sr.tours ? sr.deg_hat / (2.0 * double(sr.tours)) : 0.0);
    for (const auto& [key, val] : sr.reward_sum) result_.counts[key] += val * scale;
  }
  if (sr.aborted)
    result_.warnings.push_back("stratum " + std::to_string(sr.r) + ": discarded " +
                               std::to_string(sr.aborted) + " unfinished tours");
  result_.total_steps += sr.total_steps;
  result_.strata.push_back(std::move(sr));
}

RippleResult RippleEngine::run() {
  if (ran_) return result_;
  ran_ = true;
  auto t0 = std::chrono::steady_clock::now();
  prepare();
  if (!seeds_.seeds.empty()) {
    for (uint32_t r = 2; r <= max_active_; ++r) ingest(run_stratum(r));
    result_.strata_used = max_active_;
  }
  result_.total = total_sum(result_.counts);
  result_.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result_;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0, 1)");
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, x;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  return x;
}

std::pair<double, double> confidence_interval(const std::vector<double>& tour_estimates,
                                              double level) {
  if (tour_estimates.size() < 2)
    throw std::invalid_argument("confidence interval needs at least two samples");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("confidence level must be in (0, 1)");
  long double sum = 0, sq = 0;
  for (double x : tour_estimates) {
    sum += x;
    sq += (long double)x * x;
  }
  size_t n = tour_estimates.size();
  long double mean = sum / (long double)n;
  long double var = (sq - sum * sum / (long double)n) / (long double)(n - 1);
  if (var < 0) var = 0;
  double se = std::sqrt(double(var / (long double)n));
  double z = normal_quantile(0.5 + level / 2.0);
  return {double(mean) - z * se, double(mean) + z * se};
}

}  // namespace ripple
