#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <vector>

#include "ripple/types.hpp"

namespace ripple {

// Fixed-capacity uniform sample over an offer stream (Algorithm R), safe for
// concurrent offers.  The offer counter is a single atomic; retained slots
// carry the counter value of their writer and a slot collision keeps the
// larger value.  Reads (sample_uniform) are only valid once the writing
// phase for this reservoir has finished; the engine's stratum order
// guarantees that.
class Reservoir {
 public:
  Reservoir(uint32_t capacity, uint8_t width) : cap_(capacity), width_(width) {}

  void offer(const Cis& item, std::mt19937_64& rng);
  Cis sample_uniform(std::mt19937_64& rng) const;
  Cis item(uint32_t idx) const;

  uint64_t seen() const { return seen_.load(std::memory_order_relaxed); }
  uint32_t retained() const {
    uint64_t s = seen();
    return static_cast<uint32_t>(s < cap_ ? s : cap_);
  }
  uint32_t capacity() const { return cap_; }
  double pressure() const { return cap_ == 0 ? 0.0 : double(seen()) / double(cap_); }

 private:
  void store(uint32_t slot, const Cis& item, uint64_t tag);

  uint32_t cap_;
  uint8_t width_;
  std::atomic<uint64_t> seen_{0};
  mutable std::mutex mu_;  // guards slot writes and storage growth only
  std::vector<VertexId> slots_;
  std::vector<uint64_t> tag_;
};

// Upper-triangular grid of reservoirs: cell (q, r) with 1 <= q < r <= r_max
// holds the states of stratum r discovered by tours in stratum q (row 1 by
// the exact first-stratum pass).  Cells are written during stratum q and
// read afterwards, never both at once.
class ReservoirMatrix {
 public:
  ReservoirMatrix(uint32_t r_max, uint32_t capacity, uint8_t width);

  Reservoir& cell(uint32_t q, uint32_t r) { return *cells_[index(q, r)]; }
  const Reservoir& cell(uint32_t q, uint32_t r) const { return *cells_[index(q, r)]; }

  uint32_t r_max() const { return r_max_; }
  uint32_t capacity() const { return cap_; }

 private:
  size_t index(uint32_t q, uint32_t r) const;

  uint32_t r_max_;
  uint32_t cap_;
  std::vector<std::unique_ptr<Reservoir>> cells_;
};

}  // namespace ripple
