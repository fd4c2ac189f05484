#include "ripple/hon.hpp"

#include <algorithm>

namespace ripple {

namespace {

// Bits over positions of s: which s-vertices are adjacent to v in g.
uint16_t adjacency_bits(const InputGraph& g, const Cis& s, VertexId v) {
  uint16_t bits = 0;
  auto row = g.neighbors(v);
  const VertexId* it = row.data();
  const VertexId* end = it + row.size();
  int j = 0;
  while (it != end && j < s.size) {
    if (*it < s.v[j]) ++it;
    else if (*it > s.v[j]) ++j;
    else {
      bits |= uint16_t(1u << j);
      ++it;
      ++j;
    }
  }
  return bits;
}

// Connectivity of (s minus position u) plus an outside vertex attached via
// vbits, using the dense adjacency of s.
bool swap_keeps_connected(const SmallGraph& sg, int u_pos, uint16_t vbits) {
  uint16_t mask = uint16_t(((1u << sg.order) - 1) & ~(1u << u_pos));
  if (mask == 0) return vbits != 0;  // order-1 state: any attachment works
  uint16_t attach = uint16_t(vbits & mask);
  if (attach == 0) return false;
  uint16_t seen = attach;
  uint16_t frontier = attach;
  while (frontier) {
    uint16_t next = 0;
    while (frontier) {
      int w = __builtin_ctz(frontier);
      frontier &= uint16_t(frontier - 1);
      next |= uint16_t(sg.row[w] & mask & ~seen);
    }
    seen |= next;
    frontier = next;
  }
  return seen == mask;
}

Cis swap_state(const Cis& s, int u_pos, VertexId v) {
  Cis t;
  for (int i = 0; i < s.size; ++i)
    if (i != u_pos) t.push(s.v[i]);
  t.push(v);
  t.normalize();
  return t;
}

}  // namespace

std::vector<Cis> hon_neighbors(const InputGraph& g, const Cis& s) {
  std::vector<Cis> out;
  if (s.size == 0) return out;
  if (s.size == 1) {
    for (VertexId v : g.neighbors(s.v[0])) out.push_back(Cis{v});
    std::sort(out.begin(), out.end());
    return out;
  }
  SmallGraph sg = induce(g, s);
  // Outside vertices adjacent to s.
  std::vector<VertexId> cand;
  for (int i = 0; i < s.size; ++i)
    for (VertexId v : g.neighbors(s.v[i]))
      if (!s.contains(v)) cand.push_back(v);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  for (VertexId v : cand) {
    uint16_t vbits = adjacency_bits(g, s, v);
    for (int u = 0; u < s.size; ++u)
      if (swap_keeps_connected(sg, u, vbits)) out.push_back(swap_state(s, u, v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Cis merge_union(const Cis& u, const Cis& v) {
  if (u.size != v.size || u.size == 0)
    throw std::invalid_argument("merge_union: states must have equal nonzero order");
  Cis out;
  int i = 0, j = 0, common = 0;
  while (i < u.size || j < v.size) {
    if (j >= v.size || (i < u.size && u.v[i] < v.v[j])) out.push(u.v[i++]);
    else if (i >= u.size || v.v[j] < u.v[i]) out.push(v.v[j++]);
    else {
      out.push(u.v[i]);
      ++i;
      ++j;
      ++common;
    }
  }
  if (common != u.size - 1)
    throw std::invalid_argument("merge_union: states must share all but one vertex");
  return out;
}

SmallGraph merge_edge_subgraph(const InputGraph& g, const Cis& u, const Cis& v) {
  return induce(g, merge_union(u, v));
}

NeighborSampler::NeighborSampler(const InputGraph& g, const Cis& s) : g_(&g), s_(s) {
  if (s.size == 0) throw std::invalid_argument("NeighborSampler: empty state");
  sg_ = induce(g, s);
  if (!is_connected(sg_)) throw std::invalid_argument("NeighborSampler: disconnected state");
  for (int i = 0; i < s.size; ++i) {
    dg_[i] = g.degree(s.v[i]);
    deg_s_ += dg_[i];
  }
  if (s.size >= 2) art_mask_ = articulation_points(sg_);
}

Cis NeighborSampler::draw(std::mt19937_64& rng, uint64_t attempt_cap) {
  const InputGraph& g = *g_;
  int m = s_.size;
  if (attempt_cap == 0) attempt_cap = default_attempt_cap(m);

  if (m == 1) {
    auto row = g.neighbors(s_.v[0]);
    if (row.empty()) throw AttemptBudgetError("state has no neighbors");
    std::uniform_int_distribution<size_t> pick(0, row.size() - 1);
    ++proposals_;
    return Cis{row[pick(rng)]};
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (uint64_t attempt = 0; attempt < attempt_cap; ++attempt) {
    ++proposals_;
    // u with probability (deg_s - dg(u)) / ((m-1) deg_s)
    double x = unit(rng) * double((m - 1)) * double(deg_s_);
    int u_pos = 0;
    for (; u_pos < m - 1; ++u_pos) {
      double w = double(deg_s_ - dg_[u_pos]);
      if (x < w) break;
      x -= w;
    }
    // anchor a != u with probability dg(a) / (deg_s - dg(u))
    double y = unit(rng) * double(deg_s_ - dg_[u_pos]);
    int a_pos = -1;
    for (int i = 0; i < m; ++i) {
      if (i == u_pos) continue;
      double w = double(dg_[i]);
      if (y < w) { a_pos = i; break; }
      y -= w;
    }
    if (a_pos < 0) a_pos = (u_pos == m - 1) ? m - 2 : m - 1;  // fp edge guard
    auto row = g.neighbors(s_.v[a_pos]);
    std::uniform_int_distribution<size_t> pick(0, row.size() - 1);
    VertexId v = row[pick(rng)];

    if (s_.contains(v)) continue;  // includes v == u; not a valid swap
    uint16_t vbits = adjacency_bits(g, s_, v);
    int bias = __builtin_popcount(vbits & ~uint16_t(1u << u_pos));
    if (bias > 1 && unit(rng) * bias >= 1.0) continue;
    if ((art_mask_ >> u_pos) & 1u) {
      if (!swap_keeps_connected(sg_, u_pos, vbits)) continue;
    }
    return swap_state(s_, u_pos, v);
  }
  throw AttemptBudgetError("neighbor sampling attempt budget exceeded");
}

Cis sample_hon_neighbor(const InputGraph& g, const Cis& s, std::mt19937_64& rng,
                        uint64_t attempt_cap) {
  NeighborSampler sampler(g, s);
  return sampler.draw(rng, attempt_cap);
}

}  // namespace ripple
