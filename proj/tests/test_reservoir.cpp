#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <thread>
#include <vector>

#include "ripple/reservoir.hpp"

using namespace ripple;

namespace {

Cis item2(VertexId a, VertexId b) { return Cis{a, b}; }

}  // namespace

TEST_SUITE("reservoir") {

TEST_CASE("capacity one keeps a uniform pick over the stream") {
  const int stream_len = 8;
  const int trials = 100000;
  std::mt19937_64 rng(42);
  std::map<VertexId, int> hits;
  for (int t = 0; t < trials; ++t) {
    Reservoir res(1, 2);
    for (VertexId i = 0; i < stream_len; ++i) res.offer(item2(i, 100 + i), rng);
    CHECK(res.seen() == stream_len);
    CHECK(res.retained() == 1);
    ++hits[res.item(0).v[0]];
  }
  // Chi-square against uniform over the 8 stream positions, 7 dof.  The
  // 0.001 quantile is 24.3; the seed is fixed so this is deterministic.
  double expected = double(trials) / stream_len;
  double chi2 = 0;
  for (VertexId i = 0; i < stream_len; ++i) {
    double d = double(hits[i]) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 24.3);
}

TEST_CASE("capacity zero counts offers but retains nothing") {
  std::mt19937_64 rng(3);
  Reservoir res(0, 2);
  for (int i = 0; i < 10; ++i) res.offer(item2(1, 2), rng);
  CHECK(res.seen() == 10);
  CHECK(res.retained() == 0);
  CHECK_THROWS_AS(res.sample_uniform(rng), std::out_of_range);
}

TEST_CASE("retained is the smaller of seen and capacity") {
  std::mt19937_64 rng(4);
  Reservoir res(16, 2);
  for (VertexId i = 0; i < 5; ++i) res.offer(item2(i, i + 1), rng);
  CHECK(res.retained() == 5);
  CHECK(res.pressure() == doctest::Approx(5.0 / 16.0));
  for (VertexId i = 5; i < 100; ++i) res.offer(item2(i, i + 1), rng);
  CHECK(res.retained() == 16);
  CHECK(res.seen() == 100);
  // Retained slots hold items from the stream, each at most once per slot.
  std::set<VertexId> firsts;
  for (uint32_t j = 0; j < res.retained(); ++j) {
    Cis it = res.item(j);
    CHECK(it.size == 2);
    CHECK(it.v[1] == it.v[0] + 1);
    firsts.insert(it.v[0]);
  }
  CHECK(firsts.size() == res.retained());  // distinct offers stay distinct
}

TEST_CASE("retention is uniform over a long stream") {
  std::mt19937_64 rng(5);
  const uint64_t n = 100000;
  const uint32_t cap = 100;
  Reservoir res(cap, 2);
  for (uint64_t i = 0; i < n; ++i) res.offer(item2(VertexId(i), VertexId(i)), rng);
  double mean = 0;
  for (uint32_t j = 0; j < cap; ++j) mean += double(res.item(j).v[0]);
  mean /= cap;
  // Mean of 100 uniform draws from [0, n): sd = n/sqrt(12)/10 ~ 2887.
  CHECK(std::abs(mean - double(n) / 2) < 4 * 2887.0);
}

TEST_CASE("sample_uniform draws the retained slots evenly") {
  std::mt19937_64 rng(6);
  Reservoir res(4, 2);
  for (VertexId i = 0; i < 4; ++i) res.offer(item2(i, 9), rng);
  std::map<VertexId, int> hits;
  const int trials = 40000;
  for (int t = 0; t < trials; ++t) ++hits[res.sample_uniform(rng).v[0]];
  for (VertexId i = 0; i < 4; ++i) {
    CHECK(hits[i] > trials / 4 - 600);
    CHECK(hits[i] < trials / 4 + 600);
  }
}

TEST_CASE("width is enforced") {
  std::mt19937_64 rng(7);
  Reservoir res(4, 3);
  CHECK_THROWS_AS(res.offer(item2(0, 1), rng), std::invalid_argument);
}

TEST_CASE("concurrent offers lose nothing") {
  const int n_threads = 4;
  const uint64_t per_thread = 200000;
  Reservoir res(1024, 2);
  std::vector<std::thread> threads;
  for (int t = 0; t < n_threads; ++t) {
    threads.emplace_back([&res, t] {
      std::mt19937_64 rng(1000 + t);
      for (uint64_t i = 0; i < per_thread; ++i)
        res.offer(item2(VertexId(t), VertexId(i % 1000)), rng);
    });
  }
  for (auto& th : threads) th.join();
  CHECK(res.seen() == n_threads * per_thread);
  CHECK(res.retained() == 1024);
  for (uint32_t j = 0; j < res.retained(); ++j) {
    Cis it = res.item(j);
    CHECK(it.size == 2);
    CHECK(it.v[0] < VertexId(n_threads));
    CHECK(it.v[1] < 1000);
  }
}

TEST_CASE("matrix cells are distinct and bounds-checked") {
  ReservoirMatrix mat(5, 8, 2);
  CHECK(mat.r_max() == 5);
  std::mt19937_64 rng(8);
  mat.cell(1, 2).offer(item2(1, 2), rng);
  mat.cell(1, 5).offer(item2(3, 4), rng);
  mat.cell(4, 5).offer(item2(5, 6), rng);
  CHECK(mat.cell(1, 2).seen() == 1);
  CHECK(mat.cell(1, 5).seen() == 1);
  CHECK(mat.cell(4, 5).seen() == 1);
  CHECK(mat.cell(2, 3).seen() == 0);
  CHECK_THROWS_AS(mat.cell(0, 2), std::out_of_range);
  CHECK_THROWS_AS(mat.cell(2, 2), std::out_of_range);
  CHECK_THROWS_AS(mat.cell(2, 6), std::out_of_range);
}

}  // TEST_SUITE
