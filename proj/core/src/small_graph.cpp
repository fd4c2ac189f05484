#include "ripple/small_graph.hpp"

#include <stdexcept>

namespace ripple {

SmallGraph induce(const InputGraph& g, const Cis& s) {
  if (s.size > kMaxOrder) throw std::length_error("induce: order above cap");
  SmallGraph sg;
  sg.order = s.size;
  for (int i = 0; i < s.size; ++i) sg.label[i] = static_cast<uint8_t>(g.label(s.v[i]));
  for (int i = 0; i < s.size; ++i) {
    auto row = g.neighbors(s.v[i]);
    const VertexId* it = row.data();
    const VertexId* end = it + row.size();
    // Both the adjacency row and s are sorted: merge scan.
    int j = 0;
    while (it != end && j < s.size) {
      if (*it < s.v[j]) ++it;
      else if (*it > s.v[j]) ++j;
      else {
        if (j != i) sg.row[i] |= uint16_t(1u << j);
        ++it;
        ++j;
      }
    }
  }
  return sg;
}

bool is_connected_subset(const SmallGraph& sg, uint16_t mask) {
  if (mask == 0) return false;
  int start = __builtin_ctz(mask);
  uint16_t seen = uint16_t(1u << start);
  uint16_t frontier = seen;
  while (frontier) {
    uint16_t next = 0;
    while (frontier) {
      int u = __builtin_ctz(frontier);
      frontier &= uint16_t(frontier - 1);
      next |= uint16_t(sg.row[u] & mask & ~seen);
    }
    seen |= next;
    frontier = next;
  }
  return seen == mask;
}

bool is_connected(const SmallGraph& sg) {
  if (sg.order == 0) return false;
  return is_connected_subset(sg, uint16_t((1u << sg.order) - 1));
}

namespace {

struct ArtDfs {
  const SmallGraph* sg;
  std::array<int8_t, kMaxOrder> disc{}, low{};
  int8_t timer = 0;
  uint16_t cut = 0;

  void run(int u, int parent) {
    disc[u] = low[u] = ++timer;
    int children = 0;
    uint16_t nb = sg->row[u];
    while (nb) {
      int v = __builtin_ctz(nb);
      nb &= uint16_t(nb - 1);
      if (disc[v] == 0) {
        ++children;
        run(v, u);
        if (low[v] < low[u]) low[u] = low[v];
        if (parent >= 0 && low[v] >= disc[u]) cut |= uint16_t(1u << u);
      } else if (v != parent && disc[v] < low[u]) {
        low[u] = disc[v];
      }
    }
    if (parent < 0 && children > 1) cut |= uint16_t(1u << u);
  }
};

}  // namespace

uint16_t articulation_points(const SmallGraph& sg) {
  if (!is_connected(sg)) throw std::invalid_argument("articulation_points: disconnected input");
  ArtDfs dfs;
  dfs.sg = &sg;
  dfs.run(0, -1);
  return dfs.cut;
}

uint32_t gamma(const SmallGraph& sg) {
  if (sg.order < 2) throw std::invalid_argument("gamma: order must be >= 2");
  uint32_t free_count = sg.order - __builtin_popcount(articulation_points(sg));
  return free_count * (free_count - 1) / 2;
}

}  // namespace ripple
