#include "ripple/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace ripple {

InputGraph InputGraph::from_edges(VertexId n,
                                  const std::vector<std::pair<VertexId, VertexId>>& edges,
                                  std::vector<uint32_t> labels) {
  if (!labels.empty() && labels.size() != n)
    throw std::invalid_argument("labels size does not match vertex count");
  std::vector<std::pair<VertexId, VertexId>> dir;
  dir.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
    if (u == v) continue;
    dir.emplace_back(u, v);
    dir.emplace_back(v, u);
  }
  std::sort(dir.begin(), dir.end());
  dir.erase(std::unique(dir.begin(), dir.end()), dir.end());

  InputGraph g;
  g.n_ = n;
  g.labels_ = std::move(labels);
  g.offsets_.assign(n + 1, 0);
  for (auto& [u, v] : dir) g.offsets_[u + 1]++;
  for (VertexId u = 0; u < n; ++u) g.offsets_[u + 1] += g.offsets_[u];
  g.adj_.reserve(dir.size());
  for (auto& [u, v] : dir) g.adj_.push_back(v);
  g.m_ = dir.size() / 2;
  return g;
}

bool InputGraph::has_edge(VertexId u, VertexId v) const {
  if (u >= n_ || v >= n_) return false;
  if (degree(u) > degree(v)) std::swap(u, v);
  auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

LoadedGraph load_edge_list(const std::string& path, const std::string& labels_path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);

  std::vector<std::pair<uint64_t, uint64_t>> raw;
  std::map<uint64_t, VertexId> ids;  // ordered: dense ids follow ascending file ids
  std::string line;
  while (std::getline(in, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#' || line[pos] == '%') continue;
    std::istringstream ls(line);
    uint64_t a, b;
    if (!(ls >> a >> b)) throw std::runtime_error("malformed edge line: " + line);
    ids.emplace(a, 0);
    ids.emplace(b, 0);
    raw.emplace_back(a, b);
  }

  LoadedGraph out;
  out.original_id.reserve(ids.size());
  VertexId next = 0;
  for (auto& [orig, dense] : ids) {
    dense = next++;
    out.original_id.push_back(orig);
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw) edges.emplace_back(ids[a], ids[b]);

  std::vector<uint32_t> labels;
  if (!labels_path.empty()) {
    std::ifstream lin(labels_path);
    if (!lin) throw std::runtime_error("cannot open label file: " + labels_path);
    uint32_t val;
    while (lin >> val) labels.push_back(val);
    if (labels.size() != ids.size())
      throw std::runtime_error("label count does not match vertex count");
  }
  out.graph = InputGraph::from_edges(next, edges, std::move(labels));
  return out;
}

void write_edge_list(const InputGraph& g, std::ostream& out) {
  for (VertexId u = 0; u < g.num_vertices(); ++u)
    for (VertexId v : g.neighbors(u))
      if (u < v) out << u << ' ' << v << '\n';
}

std::vector<uint32_t> multi_source_bfs_dist(const InputGraph& g,
                                            const std::vector<VertexId>& sources) {
  std::vector<uint32_t> dist(g.num_vertices(), kUnreachable);
  std::queue<VertexId> q;
  for (VertexId s : sources) {
    if (s >= g.num_vertices()) throw std::out_of_range("bfs source out of range");
    if (dist[s] != 0) {
      dist[s] = 0;
      q.push(s);
    }
  }
  while (!q.empty()) {
    VertexId u = q.front();
    q.pop();
    for (VertexId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

Components connected_components(const InputGraph& g) {
  Components c;
  c.comp.assign(g.num_vertices(), UINT32_MAX);
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    if (c.comp[s] != UINT32_MAX) continue;
    uint32_t id = c.count++;
    c.sizes.push_back(0);
    std::queue<VertexId> q;
    c.comp[s] = id;
    q.push(s);
    while (!q.empty()) {
      VertexId u = q.front();
      q.pop();
      c.sizes[id]++;
      for (VertexId v : g.neighbors(u)) {
        if (c.comp[v] == UINT32_MAX) {
          c.comp[v] = id;
          q.push(v);
        }
      }
    }
  }
  return c;
}

}  // namespace ripple
