#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>

namespace ripple {

using VertexId = uint32_t;

// Hard cap on subgraph order handled by the small-graph machinery
// (canonical forms, articulation points, bias factors).
inline constexpr int kMaxOrder = 12;

// A connected induced subgraph of the input graph, identified by its sorted
// vertex set.  Sized for walk states and merged states up to kMaxOrder.
struct Cis {
  std::array<VertexId, kMaxOrder> v{};
  uint8_t size = 0;

  Cis() = default;
  Cis(std::initializer_list<VertexId> init) {
    if (init.size() > kMaxOrder) throw std::length_error("Cis: too many vertices");
    for (VertexId x : init) v[size++] = x;
    normalize();
  }

  void push(VertexId x) {
    if (size >= kMaxOrder) throw std::length_error("Cis: too many vertices");
    v[size++] = x;
  }

  // Sorts the vertex list; a Cis is canonical when sorted ascending.
  void normalize() {
    for (int i = 1; i < size; ++i) {
      VertexId x = v[i];
      int j = i - 1;
      while (j >= 0 && v[j] > x) { v[j + 1] = v[j]; --j; }
      v[j + 1] = x;
    }
  }

  bool contains(VertexId x) const {
    for (int i = 0; i < size; ++i)
      if (v[i] == x) return true;
    return false;
  }

  const VertexId* begin() const { return v.data(); }
  const VertexId* end() const { return v.data() + size; }

  bool operator==(const Cis& o) const {
    if (size != o.size) return false;
    return std::memcmp(v.data(), o.v.data(), size * sizeof(VertexId)) == 0;
  }
  bool operator<(const Cis& o) const {
    int n = size < o.size ? size : o.size;
    for (int i = 0; i < n; ++i) {
      if (v[i] != o.v[i]) return v[i] < o.v[i];
    }
    return size < o.size;
  }
};

struct CisHash {
  size_t operator()(const Cis& s) const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ s.size;
    for (int i = 0; i < s.size; ++i) {
      h ^= s.v[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
  }
};

// SplitMix64 step; used to derive independent RNG stream seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Seed for the private stream of one worker in one stratum.  Mixing through
// SplitMix64 keeps streams distinct across (seed, worker, stratum) triples.
inline uint64_t stream_seed(uint64_t base, uint64_t worker, uint64_t stratum) {
  uint64_t h = splitmix64(base);
  h = splitmix64(h ^ (0x517cc1b727220a95ull * (worker + 1)));
  h = splitmix64(h ^ (0x2545f4914f6cdd1dull * (stratum + 1)));
  return h;
}

}  // namespace ripple
