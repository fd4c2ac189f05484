#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ripple/types.hpp"

namespace ripple {

// Immutable simple undirected graph in CSR form.  Shared read-only across
// worker threads; nothing here mutates after construction.
class InputGraph {
 public:
  InputGraph() = default;

  // Builds from an edge list.  Edges are deduplicated, symmetrized and
  // self-loop-free; endpoints must be < n.  labels may be empty (unlabeled).
  static InputGraph from_edges(VertexId n,
                               const std::vector<std::pair<VertexId, VertexId>>& edges,
                               std::vector<uint32_t> labels = {});

  VertexId num_vertices() const { return n_; }
  uint64_t num_edges() const { return m_; }

  std::span<const VertexId> neighbors(VertexId u) const {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }
  uint32_t degree(VertexId u) const {
    return static_cast<uint32_t>(offsets_[u + 1] - offsets_[u]);
  }
  // Labels are optional; unlabeled graphs report 0 for every vertex.
  uint32_t label(VertexId u) const { return labels_.empty() ? 0 : labels_[u]; }
  bool labeled() const { return !labels_.empty(); }

  // Binary search on the sorted adjacency row.
  bool has_edge(VertexId u, VertexId v) const;

 private:
  VertexId n_ = 0;
  uint64_t m_ = 0;
  std::vector<uint64_t> offsets_;
  std::vector<VertexId> adj_;
  std::vector<uint32_t> labels_;
};

struct LoadedGraph {
  InputGraph graph;
  // original_id[i] is the file id remapped to dense id i.  Identity when the
  // file ids are already 0..n-1.
  std::vector<uint64_t> original_id;
};

// Reads a whitespace-separated edge list.  Lines starting with '#' or '%'
// are comments.  Arbitrary non-negative ids are remapped densely to 0..n-1
// in ascending id order; self-loops are dropped (their endpoint is kept as a
// degree-0 vertex); duplicate and reversed edges collapse to one.
// labels_path, when non-empty, holds one integer per line for dense vertex i.
LoadedGraph load_edge_list(const std::string& path, const std::string& labels_path = "");

// Writes "u v" lines with dense ids, one undirected edge each (u < v),
// ascending.  Reloading the output reproduces the adjacency structure.
void write_edge_list(const InputGraph& g, std::ostream& out);

// BFS distance from the nearest source; unreachable vertices get
// kUnreachable.
inline constexpr uint32_t kUnreachable = UINT32_MAX;
std::vector<uint32_t> multi_source_bfs_dist(const InputGraph& g,
                                            const std::vector<VertexId>& sources);

struct Components {
  std::vector<uint32_t> comp;  // component id per vertex
  uint32_t count = 0;
  std::vector<uint32_t> sizes;
};
Components connected_components(const InputGraph& g);

}  // namespace ripple
