#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ripple/small_graph.hpp"

namespace ripple {

// Canonical form of a labeled small graph: order byte, labels in canonical
// vertex order, then the upper-triangle adjacency bits packed MSB-first.
// Two SmallGraphs get equal keys iff they are label-preserving isomorphic.
class PatternKey {
 public:
  PatternKey() = default;
  explicit PatternKey(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const { return bytes_; }
  std::string hex() const;

  int order() const { return bytes_.empty() ? 0 : static_cast<uint8_t>(bytes_[0]); }
  int num_edges() const;
  double density() const;
  bool is_star() const;
  std::vector<int> degree_sequence() const;  // descending

  bool operator==(const PatternKey& o) const { return bytes_ == o.bytes_; }
  bool operator<(const PatternKey& o) const { return bytes_ < o.bytes_; }

 private:
  bool edge_bit(int i, int j) const;
  std::string bytes_;
};

// Exact canonicalization: minimizes the encoding over vertex orderings,
// restricted to refinement-class blocks, with twin elimination and
// prefix pruning.  Orders above kMaxOrder throw std::length_error.
PatternKey pattern_key(const SmallGraph& sg);

struct PatternKeyHash {
  size_t operator()(const PatternKey& k) const { return std::hash<std::string>()(k.bytes()); }
};

// Estimate (or exact count) per pattern.  Ordered map: iteration order is
// the byte order of keys, which matches hex order, so serialized output is
// deterministic.
using CountVector = std::map<PatternKey, double>;

double total_sum(const CountVector& v);
double l2_distance(const CountVector& a, const CountVector& b);
double linf_distance(const CountVector& a, const CountVector& b);

// Memoizes canonical key and walk-pair bias by the raw (uncanonicalized)
// encoding of a SmallGraph, and interns patterns to dense ids so the walk
// hot path touches one hash lookup per step.  Not thread-safe; each worker
// owns one.
class PatternCache {
 public:
  struct Info {
    PatternKey key;
    uint32_t gamma = 0;
    double inv_gamma = 0.0;
  };

  // Requires a connected SmallGraph of order >= 2.
  uint32_t intern(const SmallGraph& sg);
  const Info& info(uint32_t id) const { return infos_[id]; }
  size_t distinct() const { return infos_.size(); }

 private:
  struct RawKey {
    uint64_t a = 0, b = 0, c = 0;
    bool operator==(const RawKey& o) const { return a == o.a && b == o.b && c == o.c; }
  };
  struct RawHash {
    size_t operator()(const RawKey& k) const {
      uint64_t h = splitmix64(k.a) ^ splitmix64(k.b * 0x9e3779b97f4a7c15ull) ^
                   splitmix64(k.c + 0xda942042e4dd58b5ull);
      return static_cast<size_t>(h);
    }
  };
  static RawKey raw_key(const SmallGraph& sg);

  std::unordered_map<RawKey, uint32_t, RawHash> raw_to_id_;
  std::unordered_map<PatternKey, uint32_t, PatternKeyHash> canon_to_id_;
  std::vector<Info> infos_;
};

}  // namespace ripple
