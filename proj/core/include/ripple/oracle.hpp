#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ripple/graph.hpp"
#include "ripple/pattern_key.hpp"
#include "ripple/types.hpp"

namespace ripple {

// Thrown when a brute-force enumeration would exceed its hard cap.
struct ResourceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr uint64_t kMaxCisEnumeration = 10'000'000;
inline constexpr uint64_t kMaxHonVertices = 1'000'000;

// Exhaustive enumeration of connected induced k-vertex subgraphs, each
// exactly once, via recursive extension with exclusive higher-numbered
// neighbors.  Calls visit for each; stops past cap with ResourceCapError.
void enumerate_cis(const InputGraph& g, int k, const std::function<void(const Cis&)>& visit,
                   uint64_t cap = kMaxCisEnumeration);

std::vector<Cis> enumerate_cis_list(const InputGraph& g, int k,
                                    uint64_t cap = kMaxCisEnumeration);

struct ExactCounts {
  std::map<PatternKey, uint64_t> counts;
  uint64_t total = 0;
};

// Ground-truth pattern counts by full enumeration.
ExactCounts exact_count_vector(const InputGraph& g, int k, uint64_t cap = kMaxCisEnumeration);

CountVector to_count_vector(const ExactCounts& e);

// Explicit higher-order network over the size-m states of g.
struct HonGraph {
  InputGraph graph;                               // states as vertices
  std::vector<Cis> states;                        // state of each vertex id
  std::unordered_map<Cis, uint32_t, CisHash> id;  // inverse map
};

HonGraph build_hon(const InputGraph& g, int m, uint64_t vertex_cap = kMaxHonVertices);

// Walk-pair bias by direct definition: unordered pairs {x, y} of vertices of
// the k-subgraph whose removal each leaves it connected.  Independent of the
// articulation-point route; tests pin the two against each other.
uint32_t gamma_bruteforce(const InputGraph& g, const Cis& s);

}  // namespace ripple
