#pragma once

#include <array>
#include <cstdint>

#include "ripple/graph.hpp"
#include "ripple/types.hpp"

namespace ripple {

// Dense adjacency view of a subgraph of order <= kMaxOrder, with per-vertex
// labels.  Vertex i of the SmallGraph corresponds to the i-th (ascending)
// vertex of the inducing set.
struct SmallGraph {
  uint8_t order = 0;
  std::array<uint16_t, kMaxOrder> row{};   // row[i] bit j set iff edge (i,j)
  std::array<uint8_t, kMaxOrder> label{};

  void add_edge(int i, int j) {
    row[i] |= uint16_t(1u << j);
    row[j] |= uint16_t(1u << i);
  }
  bool has_edge(int i, int j) const { return (row[i] >> j) & 1u; }
  int degree(int i) const { return __builtin_popcount(row[i]); }
  int num_edges() const {
    int s = 0;
    for (int i = 0; i < order; ++i) s += degree(i);
    return s / 2;
  }
};

// Induced subgraph of g on the vertices of s (sorted ascending).
SmallGraph induce(const InputGraph& g, const Cis& s);

// Connectivity of the full vertex set, or of the subset given by mask.
bool is_connected(const SmallGraph& sg);
bool is_connected_subset(const SmallGraph& sg, uint16_t mask);

// Articulation points of a connected SmallGraph, as a bitmask over its
// vertices.  Throws std::invalid_argument on disconnected input.
uint16_t articulation_points(const SmallGraph& sg);

// Number of walk-state pairs that merge to this subgraph: C(order - a, 2)
// with a the articulation point count.  Requires connected input of
// order >= 2.
uint32_t gamma(const SmallGraph& sg);

}  // namespace ripple
