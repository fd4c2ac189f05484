#include "ripple/pattern_key.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ripple {

namespace {

int tri_index(int i, int j, int m) {
  // Upper-triangle rank of (i, j), i < j, row-major.
  return i * (2 * m - i - 1) / 2 + (j - i - 1);
}

// Iterative refinement of vertex classes by (label, degree, neighbor class
// multiset).  Returns per-vertex class ids numbered so that class order is an
// isomorphism invariant.
std::array<uint8_t, kMaxOrder> refine_classes(const SmallGraph& sg, int& num_classes) {
  int m = sg.order;
  std::array<uint8_t, kMaxOrder> cls{};
  {
    std::vector<std::pair<std::pair<int, int>, int>> sig(m);
    for (int v = 0; v < m; ++v) sig[v] = {{sg.label[v], sg.degree(v)}, v};
    std::sort(sig.begin(), sig.end());
    int c = -1;
    std::pair<int, int> prev{-1, -1};
    for (auto& [s, v] : sig) {
      if (s != prev) { ++c; prev = s; }
      cls[v] = static_cast<uint8_t>(c);
    }
    num_classes = c + 1;
  }
  for (;;) {
    // Signature: own class plus sorted neighbor classes.
    std::vector<std::pair<std::vector<int>, int>> sig(m);
    for (int v = 0; v < m; ++v) {
      std::vector<int> s{cls[v]};
      uint16_t nb = sg.row[v];
      while (nb) {
        int u = __builtin_ctz(nb);
        nb &= uint16_t(nb - 1);
        s.push_back(cls[u]);
      }
      std::sort(s.begin() + 1, s.end());
      sig[v] = {std::move(s), v};
    }
    std::vector<std::pair<std::vector<int>, int>> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    std::array<uint8_t, kMaxOrder> next{};
    int c = -1;
    const std::vector<int>* prev = nullptr;
    for (auto& [s, v] : sorted) {
      if (!prev || s != *prev) { ++c; prev = &s; }
      next[v] = static_cast<uint8_t>(c);
    }
    if (c + 1 == num_classes && std::equal(cls.begin(), cls.begin() + m, next.begin())) {
      return cls;
    }
    num_classes = c + 1;
    cls = next;
  }
}

// Branch and bound over class-block orderings.  The comparison key per depth
// is the candidate's adjacency column to the placed prefix with edge bits
// inverted, so orderings that pack edges early compare smaller.
struct CanonSearch {
  const SmallGraph* sg;
  int m;
  std::array<uint8_t, kMaxOrder> cls;
  std::array<uint8_t, kMaxOrder> depth_class{};  // class owning each position
  std::array<uint32_t, kMaxOrder> best_col{};
  std::array<int, kMaxOrder> placed{};
  std::array<int, kMaxOrder> best_perm{};
  uint16_t placed_mask = 0;
  bool have_leaf = false;

  void run() {
    best_col.fill(UINT32_MAX);
    dfs(0);
  }

  uint32_t column(int v, int depth) const {
    uint32_t col = 0;
    for (int i = 0; i < depth; ++i)
      if (!sg->has_edge(v, placed[i])) col |= 1u << (31 - i);
    return col;
  }

  // True if u and v are interchangeable by a transposition automorphism.
  bool twins(int u, int v) const {
    if (sg->label[u] != sg->label[v]) return false;
    uint16_t ru = sg->row[u] & uint16_t(~(1u << v));
    uint16_t rv = sg->row[v] & uint16_t(~(1u << u));
    return ru == rv;
  }

  void dfs(int depth) {
    if (depth == m) {
      have_leaf = true;
      std::copy(placed.begin(), placed.begin() + m, best_perm.begin());
      return;
    }
    int want = depth_class[depth];
    // Collect candidates of the scheduled class, one per twin group.
    std::array<int, kMaxOrder> cand{};
    std::array<uint32_t, kMaxOrder> col{};
    int nc = 0;
    for (int v = 0; v < m; ++v) {
      if ((placed_mask >> v) & 1u) continue;
      if (cls[v] != want) continue;
      bool dup = false;
      for (int i = 0; i < nc && !dup; ++i) dup = twins(cand[i], v);
      if (dup) continue;
      cand[nc] = v;
      col[nc] = column(v, depth);
      ++nc;
    }
    // Ascending column order finds the minimum early.
    std::array<int, kMaxOrder> idx{};
    for (int i = 0; i < nc; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.begin() + nc, [&](int a, int b) { return col[a] < col[b]; });

    for (int t = 0; t < nc; ++t) {
      int i = idx[t];
      if (col[i] > best_col[depth]) break;
      if (col[i] < best_col[depth]) {
        best_col[depth] = col[i];
        for (int d = depth + 1; d < m; ++d) best_col[d] = UINT32_MAX;
      }
      placed[depth] = cand[i];
      placed_mask |= uint16_t(1u << cand[i]);
      dfs(depth + 1);
      placed_mask &= uint16_t(~(1u << cand[i]));
    }
  }
};

}  // namespace

PatternKey pattern_key(const SmallGraph& sg) {
  int m = sg.order;
  if (m > kMaxOrder) throw std::length_error("pattern_key: order above cap");
  if (m == 0) return PatternKey(std::string(1, '\0'));

  int num_classes = 0;
  auto cls = refine_classes(sg, num_classes);

  CanonSearch search;
  search.sg = &sg;
  search.m = m;
  search.cls = cls;
  {
    // Positions are grouped by ascending class id; class ids are ordered by
    // invariant signatures, so the block layout is isomorphism invariant.
    int pos = 0;
    for (int c = 0; c < num_classes; ++c)
      for (int v = 0; v < m; ++v)
        if (cls[v] == c) search.depth_class[pos++] = static_cast<uint8_t>(c);
  }
  search.run();

  std::string bytes;
  int tri_bits = m * (m - 1) / 2;
  bytes.resize(1 + m + (tri_bits + 7) / 8, '\0');
  bytes[0] = static_cast<char>(m);
  for (int i = 0; i < m; ++i) bytes[1 + i] = static_cast<char>(sg.label[search.best_perm[i]]);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (sg.has_edge(search.best_perm[i], search.best_perm[j])) {
        int bit = tri_index(i, j, m);
        bytes[1 + m + bit / 8] |= static_cast<char>(0x80u >> (bit % 8));
      }
    }
  }
  return PatternKey(std::move(bytes));
}

bool PatternKey::edge_bit(int i, int j) const {
  int m = order();
  if (i > j) std::swap(i, j);
  int bit = tri_index(i, j, m);
  uint8_t byte = static_cast<uint8_t>(bytes_[1 + m + bit / 8]);
  return (byte >> (7 - bit % 8)) & 1u;
}

std::string PatternKey::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (unsigned char c : bytes_) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

int PatternKey::num_edges() const {
  int m = order();
  int e = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) e += edge_bit(i, j);
  return e;
}

double PatternKey::density() const {
  int m = order();
  if (m < 2) return 0.0;
  return 2.0 * num_edges() / (static_cast<double>(m) * (m - 1));
}

std::vector<int> PatternKey::degree_sequence() const {
  int m = order();
  std::vector<int> deg(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (edge_bit(i, j)) { deg[i]++; deg[j]++; }
  std::sort(deg.rbegin(), deg.rend());
  return deg;
}

bool PatternKey::is_star() const {
  int m = order();
  if (m < 2) return false;
  auto deg = degree_sequence();
  return num_edges() == m - 1 && deg[0] == m - 1;
}

double total_sum(const CountVector& v) {
  double s = 0;
  for (auto& [k, x] : v) s += x;
  return s;
}

double l2_distance(const CountVector& a, const CountVector& b) {
  double s = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    double d;
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      d = ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      d = ib->second;
      ++ib;
    } else {
      d = ia->second - ib->second;
      ++ia;
      ++ib;
    }
    s += d * d;
  }
  return std::sqrt(s);
}

double linf_distance(const CountVector& a, const CountVector& b) {
  double best = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    double d;
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      d = ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      d = ib->second;
      ++ib;
    } else {
      d = ia->second - ib->second;
      ++ia;
      ++ib;
    }
    best = std::max(best, std::fabs(d));
  }
  return best;
}

PatternCache::RawKey PatternCache::raw_key(const SmallGraph& sg) {
  RawKey k;
  int m = sg.order;
  uint64_t tri_lo = 0, tri_hi = 0;
  int bit = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j, ++bit) {
      if (sg.has_edge(i, j)) {
        if (bit < 64) tri_lo |= 1ull << bit;
        else tri_hi |= 1ull << (bit - 64);
      }
    }
  }
  k.a = tri_lo;
  k.b = tri_hi | (uint64_t(m) << 2);
  for (int i = 0; i < m && i < 7; ++i) k.b |= uint64_t(sg.label[i]) << (8 + 8 * i);
  for (int i = 7; i < m; ++i) k.c |= uint64_t(sg.label[i]) << (8 * (i - 7));
  return k;
}

uint32_t PatternCache::intern(const SmallGraph& sg) {
  RawKey rk = raw_key(sg);
  auto it = raw_to_id_.find(rk);
  if (it != raw_to_id_.end()) return it->second;

  PatternKey key = pattern_key(sg);
  uint32_t id;
  auto cit = canon_to_id_.find(key);
  if (cit != canon_to_id_.end()) {
    id = cit->second;
  } else {
    id = static_cast<uint32_t>(infos_.size());
    Info info;
    info.key = key;
    info.gamma = gamma(sg);
    info.inv_gamma = 1.0 / info.gamma;
    infos_.push_back(std::move(info));
    canon_to_id_.emplace(key, id);
  }
  raw_to_id_.emplace(rk, id);
  return id;
}

}  // namespace ripple
