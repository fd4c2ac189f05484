#include "ripple/oracle.hpp"

#include <algorithm>

#include "ripple/hon.hpp"
#include "ripple/small_graph.hpp"

namespace ripple {

namespace {

struct EsuState {
  const InputGraph* g;
  int k;
  uint64_t cap;
  uint64_t emitted = 0;
  const std::function<void(const Cis&)>* visit;
  std::vector<VertexId> sub;
  std::vector<char> in_sub_or_nbr;  // blocks re-adding the exclusive frontier

  void extend(std::vector<VertexId>& ext, VertexId root) {
    if (static_cast<int>(sub.size()) == k) {
      if (++emitted > cap) throw ResourceCapError("subgraph enumeration cap exceeded");
      Cis s;
      for (VertexId v : sub) s.push(v);
      s.normalize();
      (*visit)(s);
      return;
    }
    while (!ext.empty()) {
      VertexId w = ext.back();
      ext.pop_back();
      std::vector<VertexId> next = ext;
      std::vector<VertexId> added;
      for (VertexId u : g->neighbors(w)) {
        if (u > root && !in_sub_or_nbr[u]) {
          next.push_back(u);
          in_sub_or_nbr[u] = 1;
          added.push_back(u);
        }
      }
      sub.push_back(w);
      extend(next, root);
      sub.pop_back();
      for (VertexId u : added) in_sub_or_nbr[u] = 0;
    }
  }
};

}  // namespace

void enumerate_cis(const InputGraph& g, int k, const std::function<void(const Cis&)>& visit,
                   uint64_t cap) {
  if (k < 1 || k > kMaxOrder) throw std::invalid_argument("enumerate_cis: k out of range");
  EsuState st;
  st.g = &g;
  st.k = k;
  st.cap = cap;
  st.visit = &visit;
  st.in_sub_or_nbr.assign(g.num_vertices(), 0);
  for (VertexId root = 0; root < g.num_vertices(); ++root) {
    if (k == 1) {
      if (++st.emitted > cap) throw ResourceCapError("subgraph enumeration cap exceeded");
      visit(Cis{root});
      continue;
    }
    std::vector<VertexId> ext;
    for (VertexId u : g.neighbors(root)) {
      if (u > root) {
        ext.push_back(u);
        st.in_sub_or_nbr[u] = 1;
      }
    }
    std::vector<VertexId> marked = ext;
    st.sub.assign(1, root);
    st.extend(ext, root);
    for (VertexId u : marked) st.in_sub_or_nbr[u] = 0;
  }
}

std::vector<Cis> enumerate_cis_list(const InputGraph& g, int k, uint64_t cap) {
  std::vector<Cis> out;
  enumerate_cis(g, k, [&](const Cis& s) { out.push_back(s); }, cap);
  std::sort(out.begin(), out.end());
  return out;
}

ExactCounts exact_count_vector(const InputGraph& g, int k, uint64_t cap) {
  ExactCounts e;
  PatternCache cache;
  std::vector<uint64_t> by_id;
  enumerate_cis(g, k, [&](const Cis& s) {
    uint32_t id = cache.intern(induce(g, s));
    if (id >= by_id.size()) by_id.resize(id + 1, 0);
    by_id[id]++;
    e.total++;
  }, cap);
  for (uint32_t id = 0; id < by_id.size(); ++id)
    if (by_id[id]) e.counts[cache.info(id).key] = by_id[id];
  return e;
}

CountVector to_count_vector(const ExactCounts& e) {
  CountVector v;
  for (auto& [k, c] : e.counts) v[k] = static_cast<double>(c);
  return v;
}

HonGraph build_hon(const InputGraph& g, int m, uint64_t vertex_cap) {
  HonGraph hon;
  try {
    hon.states = enumerate_cis_list(g, m, std::min<uint64_t>(vertex_cap, kMaxCisEnumeration));
  } catch (const ResourceCapError&) {
    throw ResourceCapError("higher-order network vertex cap exceeded");
  }
  hon.id.reserve(hon.states.size());
  for (uint32_t i = 0; i < hon.states.size(); ++i) hon.id.emplace(hon.states[i], i);

  std::vector<std::pair<VertexId, VertexId>> edges;
  for (uint32_t i = 0; i < hon.states.size(); ++i) {
    for (const Cis& t : hon_neighbors(g, hon.states[i])) {
      auto it = hon.id.find(t);
      if (it == hon.id.end()) continue;  // cannot happen: swaps stay connected
      if (i < it->second) edges.emplace_back(i, it->second);
    }
  }
  hon.graph = InputGraph::from_edges(static_cast<VertexId>(hon.states.size()), edges);
  return hon;
}

uint32_t gamma_bruteforce(const InputGraph& g, const Cis& s) {
  if (s.size < 2) throw std::invalid_argument("gamma_bruteforce: order must be >= 2");
  SmallGraph sg = induce(g, s);
  if (!is_connected(sg)) throw std::invalid_argument("gamma_bruteforce: disconnected input");
  uint16_t full = uint16_t((1u << s.size) - 1);
  uint32_t pairs = 0;
  for (int x = 0; x < s.size; ++x) {
    for (int y = x + 1; y < s.size; ++y) {
      bool x_ok = is_connected_subset(sg, uint16_t(full & ~(1u << x)));
      bool y_ok = is_connected_subset(sg, uint16_t(full & ~(1u << y)));
      if (x_ok && y_ok) ++pairs;
    }
  }
  return pairs;
}

}  // namespace ripple
