#include "ripple/reservoir.hpp"

#include <stdexcept>

namespace ripple {

void Reservoir::store(uint32_t slot, const Cis& item, uint64_t tag) {
  size_t need = size_t(slot + 1) * width_;
  if (slots_.size() < need) {
    size_t grown = std::max(need, std::min<size_t>(slots_.size() * 2, size_t(cap_) * width_));
    slots_.resize(grown, 0);
    tag_.resize(grown / width_, 0);
  }
  for (int i = 0; i < width_; ++i) slots_[size_t(slot) * width_ + i] = item.v[i];
  tag_[slot] = tag;
}

void Reservoir::offer(const Cis& item, std::mt19937_64& rng) {
  if (item.size != width_) throw std::invalid_argument("reservoir item width mismatch");
  uint64_t c = seen_.fetch_add(1, std::memory_order_relaxed) + 1;
  if (cap_ == 0) return;
  uint64_t j;
  if (c <= cap_) {
    j = c - 1;  // initial fill: counter values map to distinct slots
  } else {
    std::uniform_int_distribution<uint64_t> pick(0, c - 1);
    j = pick(rng);
    if (j >= cap_) return;
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (tag_.size() > j && tag_[j] >= c) return;  // a later offer already owns the slot
  store(static_cast<uint32_t>(j), item, c);
}

Cis Reservoir::sample_uniform(std::mt19937_64& rng) const {
  uint32_t n = retained();
  if (n == 0) throw std::out_of_range("sample_uniform on empty reservoir");
  std::uniform_int_distribution<uint32_t> pick(0, n - 1);
  return item(pick(rng));
}

Cis Reservoir::item(uint32_t idx) const {
  if (idx >= retained()) throw std::out_of_range("reservoir item index");
  Cis out;
  for (int i = 0; i < width_; ++i) out.push(slots_[size_t(idx) * width_ + i]);
  return out;
}

ReservoirMatrix::ReservoirMatrix(uint32_t r_max, uint32_t capacity, uint8_t width)
    : r_max_(r_max), cap_(capacity) {
  if (r_max_ < 1) r_max_ = 1;
  size_t n = size_t(r_max_) * (r_max_ - 1) / 2;
  cells_.reserve(n);
  for (size_t i = 0; i < n; ++i) cells_.push_back(std::make_unique<Reservoir>(capacity, width));
}

size_t ReservoirMatrix::index(uint32_t q, uint32_t r) const {
  if (q < 1 || q >= r || r > r_max_) throw std::out_of_range("reservoir cell index");
  // Row q starts after rows 1..q-1; row i holds r_max - i cells.
  size_t row_start = size_t(q - 1) * r_max_ - size_t(q - 1) * q / 2;
  return row_start + (r - q - 1);
}

}  // namespace ripple
