#include "ripple/stratify.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ripple/oracle.hpp"
#include "ripple/small_graph.hpp"

namespace ripple {

namespace {

// BFS growth over unclaimed vertices; returns k-1 vertices or empty.
std::vector<VertexId> grow_seed(const InputGraph& g, VertexId start, int want,
                                const std::vector<int32_t>& seed_of) {
  std::vector<VertexId> picked;
  std::vector<char> seen(g.num_vertices(), 0);
  std::queue<VertexId> q;
  q.push(start);
  seen[start] = 1;
  while (!q.empty() && static_cast<int>(picked.size()) < want) {
    VertexId u = q.front();
    q.pop();
    picked.push_back(u);
    for (VertexId v : g.neighbors(u)) {
      if (!seen[v] && seed_of[v] < 0) {
        seen[v] = 1;
        q.push(v);
      }
    }
  }
  if (static_cast<int>(picked.size()) < want) return {};
  return picked;
}

void claim(SeedSet& out, const std::vector<VertexId>& verts) {
  Cis s;
  for (VertexId v : verts) s.push(v);
  s.normalize();
  int32_t id = static_cast<int32_t>(out.seeds.size());
  for (VertexId v : verts) out.seed_of[v] = id;
  out.seeds.push_back(s);
}

}  // namespace

SeedSet select_seeds(const InputGraph& g, int n1, int k, std::mt19937_64& rng) {
  if (k < 2) throw std::invalid_argument("select_seeds: k must be >= 2");
  int want = k - 1;
  SeedSet out;
  out.seed_of.assign(g.num_vertices(), -1);

  Components comps = connected_components(g);
  std::vector<uint32_t> eligible;
  for (uint32_t c = 0; c < comps.count; ++c) {
    if (static_cast<int>(comps.sizes[c]) >= want) eligible.push_back(c);
    else {
      std::ostringstream msg;
      msg << "component of size " << comps.sizes[c] << " cannot host a " << want
          << "-vertex seed; skipped";
      out.warnings.push_back(msg.str());
    }
  }
  if (n1 < static_cast<int>(eligible.size())) {
    throw std::invalid_argument("select_seeds: n1 below the number of seedable components");
  }

  // One seed per seedable component, from a random component vertex.
  for (uint32_t c : eligible) {
    std::vector<VertexId> members;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (comps.comp[v] == c) members.push_back(v);
    std::uniform_int_distribution<size_t> pick(0, members.size() - 1);
    VertexId start = members[pick(rng)];
    auto verts = grow_seed(g, start, want, out.seed_of);
    claim(out, verts);  // component size >= want and nothing claimed yet
  }

  std::vector<VertexId> claimed;
  auto refresh_claimed = [&] {
    claimed.clear();
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (out.seed_of[v] >= 0) claimed.push_back(v);
  };

  while (static_cast<int>(out.seeds.size()) < n1) {
    bool placed = false;
    if (out.seeds.size() < 64) {
      // Farthest-point: candidates by descending distance to claimed set.
      refresh_claimed();
      auto dist = multi_source_bfs_dist(g, claimed);
      std::vector<VertexId> order;
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (out.seed_of[v] < 0 && dist[v] != kUnreachable && dist[v] > 0) order.push_back(v);
      std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        if (dist[a] != dist[b]) return dist[a] > dist[b];
        return a < b;
      });
      for (VertexId start : order) {
        auto verts = grow_seed(g, start, want, out.seed_of);
        if (!verts.empty()) {
          claim(out, verts);
          placed = true;
          break;
        }
      }
    } else {
      // Dense regime: random unclaimed starts.
      std::vector<VertexId> unclaimed;
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (out.seed_of[v] < 0) unclaimed.push_back(v);
      std::shuffle(unclaimed.begin(), unclaimed.end(), rng);
      for (VertexId start : unclaimed) {
        auto verts = grow_seed(g, start, want, out.seed_of);
        if (!verts.empty()) {
          claim(out, verts);
          placed = true;
          break;
        }
      }
    }
    if (!placed) {
      std::ostringstream msg;
      msg << "requested " << n1 << " seeds, placed " << out.seeds.size()
          << "; no room for more disjoint seeds";
      out.warnings.push_back(msg.str());
      break;
    }
  }
  return out;
}

SeedSet seeds_from_vertex_lists(const InputGraph& g, int k,
                                const std::vector<std::vector<VertexId>>& lists) {
  SeedSet out;
  out.seed_of.assign(g.num_vertices(), -1);
  for (const auto& list : lists) {
    if (static_cast<int>(list.size()) != k - 1)
      throw std::invalid_argument("seed list has wrong size");
    Cis s;
    for (VertexId v : list) {
      if (v >= g.num_vertices()) throw std::invalid_argument("seed vertex out of range");
      if (out.seed_of[v] >= 0) throw std::invalid_argument("seeds overlap");
      s.push(v);
    }
    s.normalize();
    for (int i = 1; i < s.size; ++i)
      if (s.v[i] == s.v[i - 1]) throw std::invalid_argument("seed repeats a vertex");
    if (!is_connected(induce(g, s))) throw std::invalid_argument("seed is not connected");
    int32_t id = static_cast<int32_t>(out.seeds.size());
    for (VertexId v : list) out.seed_of[v] = id;
    out.seeds.push_back(s);
  }
  return out;
}

std::string seeds_to_json(const SeedSet& seeds) {
  nlohmann::json j;
  j["seeds"] = nlohmann::json::array();
  for (const Cis& s : seeds.seeds) {
    std::vector<VertexId> verts(s.begin(), s.end());
    j["seeds"].push_back(verts);
  }
  return j.dump(2);
}

std::vector<std::vector<VertexId>> seed_lists_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const nlohmann::json& arr = j.is_array() ? j : j.at("seeds");
  std::vector<std::vector<VertexId>> out;
  for (const auto& row : arr) out.push_back(row.get<std::vector<VertexId>>());
  return out;
}

Stratification make_stratification(const InputGraph& g, const SeedSet& seeds, int k) {
  Stratification strat;
  strat.seed_of = seeds.seed_of;
  std::vector<VertexId> sources;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (seeds.seed_of[v] >= 0) sources.push_back(v);
  strat.dist = multi_source_bfs_dist(g, sources);
  uint32_t max_dist = 0;
  for (uint32_t d : strat.dist)
    if (d != kUnreachable) max_dist = std::max(max_dist, d);
  strat.r_max = 1 + uint32_t(k - 1) * (max_dist + 1);
  return strat;
}

Cis largest_seed_overlap(const InputGraph& g, const Stratification& strat, const Cis& s) {
  SmallGraph sg = induce(g, s);
  // Positions of s grouped by owning seed.
  std::map<int32_t, uint16_t> groups;
  for (int i = 0; i < s.size; ++i) {
    int32_t id = strat.seed_of[s.v[i]];
    if (id >= 0) groups[id] |= uint16_t(1u << i);
  }
  auto lex_less = [&](uint16_t a, uint16_t b) {
    // Compare as sorted vertex-id lists; positions ascend with ids.
    while (a && b) {
      int pa = __builtin_ctz(a), pb = __builtin_ctz(b);
      if (pa != pb) return pa < pb;
      a &= uint16_t(a - 1);
      b &= uint16_t(b - 1);
    }
    return a == 0 && b != 0;
  };
  uint16_t best = 0;
  for (auto& [id, mask] : groups) {
    uint16_t rest = mask;
    while (rest) {
      // Flood one connected piece of this group.
      uint16_t comp = uint16_t(1u << __builtin_ctz(rest));
      for (;;) {
        uint16_t grow = comp;
        uint16_t m = comp;
        while (m) {
          int u = __builtin_ctz(m);
          m &= uint16_t(m - 1);
          grow |= uint16_t(sg.row[u] & mask);
        }
        if (grow == comp) break;
        comp = grow;
      }
      rest &= uint16_t(~comp);
      int bc = __builtin_popcount(comp), bb = __builtin_popcount(best);
      if (bc > bb || (bc == bb && lex_less(comp, best))) best = comp;
    }
  }
  Cis out;
  uint16_t m = best;
  while (m) {
    int i = __builtin_ctz(m);
    m &= uint16_t(m - 1);
    out.push(s.v[i]);
  }
  return out;
}

uint32_t rho(const InputGraph& g, const Stratification& strat, const Cis& s) {
  Cis vstar = largest_seed_overlap(g, strat, s);
  uint32_t r = 1;
  for (int i = 0; i < s.size; ++i) {
    VertexId u = s.v[i];
    uint32_t d = strat.dist[u];
    if (d == kUnreachable) throw std::logic_error("rho: state outside the seeded region");
    r += d;
    if (strat.seed_of[u] >= 0 && !vstar.contains(u)) r += 1;
  }
  return r;
}

EpsReport validate_eps(const InputGraph& g, const Stratification& strat, int k) {
  EpsReport rep;
  HonGraph hon = build_hon(g, k - 1);
  rep.num_states = hon.states.size();
  if (hon.states.empty()) {
    rep.ok = true;
    rep.warnings.push_back("no walk states; nothing to validate");
    return rep;
  }

  std::vector<uint32_t> r(hon.states.size());
  std::set<uint32_t> labels;
  for (uint32_t i = 0; i < hon.states.size(); ++i) {
    r[i] = rho(g, strat, hon.states[i]);
    labels.insert(r[i]);
    if (r[i] < 1 || r[i] > strat.r_max) {
      std::ostringstream msg;
      msg << "state " << i << " has stratum " << r[i] << " outside [1, " << strat.r_max << "]";
      rep.violations.push_back(msg.str());
    }
  }
  rep.num_strata = static_cast<uint32_t>(labels.size());

  // Stratum 1 is exactly the seed set.
  std::map<int32_t, int> group_size;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (strat.seed_of[v] >= 0) group_size[strat.seed_of[v]]++;
  uint64_t first = 0;
  for (uint32_t i = 0; i < hon.states.size(); ++i) {
    if (r[i] != 1) continue;
    ++first;
    int32_t id = strat.seed_of[hon.states[i].v[0]];
    for (VertexId v : hon.states[i]) {
      if (strat.seed_of[v] != id) {
        rep.violations.push_back("stratum-1 state spans multiple seeds");
        break;
      }
    }
  }
  if (first != group_size.size()) {
    std::ostringstream msg;
    msg << "stratum 1 holds " << first << " states but there are " << group_size.size()
        << " seeds";
    rep.violations.push_back(msg.str());
  }

  // Stratum 1 reached in every state component.
  Components comps = connected_components(hon.graph);
  std::vector<uint32_t> comp_min(comps.count, UINT32_MAX);
  for (uint32_t i = 0; i < hon.states.size(); ++i)
    comp_min[comps.comp[i]] = std::min(comp_min[comps.comp[i]], r[i]);
  for (uint32_t c = 0; c < comps.count; ++c) {
    if (comp_min[c] != 1) {
      std::ostringstream msg;
      msg << "state component " << c << " never reaches stratum 1 (min " << comp_min[c] << ")";
      rep.violations.push_back(msg.str());
    }
  }

  // Every non-seed state can step strictly down.
  for (uint32_t i = 0; i < hon.states.size(); ++i) {
    if (r[i] == 1) continue;
    bool down = false;
    for (VertexId j : hon.graph.neighbors(i))
      if (r[j] < r[i]) { down = true; break; }
    if (!down) {
      std::ostringstream msg;
      msg << "state " << i << " in stratum " << r[i] << " has no neighbor in an earlier stratum";
      rep.violations.push_back(msg.str());
    }
  }

  // Each non-empty stratum graph is connected once earlier strata contract.
  for (uint32_t rr : labels) {
    if (rr == 1) continue;
    std::unordered_map<uint32_t, uint32_t> local;  // hon vertex -> local id; 0 = supernode
    std::vector<std::vector<uint32_t>> adj(1);
    auto local_id = [&](uint32_t v) {
      auto it = local.find(v);
      if (it != local.end()) return it->second;
      uint32_t id = static_cast<uint32_t>(adj.size());
      local.emplace(v, id);
      adj.emplace_back();
      return id;
    };
    for (uint32_t i = 0; i < hon.states.size(); ++i) {
      if (r[i] != rr) continue;
      uint32_t li = local_id(i);
      for (VertexId j : hon.graph.neighbors(i)) {
        uint32_t lj = r[j] < rr ? 0 : local_id(j);
        adj[li].push_back(lj);
        adj[lj].push_back(li);
      }
    }
    if (adj.size() <= 1) continue;
    std::vector<char> seen(adj.size(), 0);
    std::queue<uint32_t> q;
    uint32_t start = adj[0].empty() ? 1 : 0;  // skip the supernode when absent
    q.push(start);
    seen[start] = 1;
    uint32_t reached = 0;
    while (!q.empty()) {
      uint32_t u = q.front();
      q.pop();
      ++reached;
      for (uint32_t v : adj[u])
        if (!seen[v]) { seen[v] = 1; q.push(v); }
    }
    uint32_t expect = static_cast<uint32_t>(adj.size()) - (adj[0].empty() ? 1 : 0);
    if (reached != expect) {
      std::ostringstream msg;
      msg << "stratum " << rr << " graph is disconnected (" << reached << " of " << expect
          << " nodes reached)";
      rep.violations.push_back(msg.str());
    }
  }

  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace ripple
