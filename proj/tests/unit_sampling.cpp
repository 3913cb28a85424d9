#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "pcd/errors.hpp"
#include "pcd/rng.hpp"
#include "pcd/solver.hpp"

TEST_CASE("subsets are sorted, distinct and in range") {
  pcd::SubsetSampler sampler(23, 7, pcd::Sampling::UniformSubset, 19);
  for (int draw = 0; draw < 500; ++draw) {
    const auto s = sampler.next();
    REQUIRE(s.size() == 7);
    for (std::size_t k = 0; k < s.size(); ++k) {
      CHECK(s[k] >= 0);
      CHECK(s[k] < 23);
      if (k > 0) CHECK(s[k] > s[k - 1]);
    }
  }
}

TEST_CASE("uniform subsets hit every coordinate at the expected rate") {
  const int d = 10, P = 3, draws = 30000;
  pcd::SubsetSampler sampler(d, P, pcd::Sampling::UniformSubset, 4);
  std::vector<int> hits(d, 0);
  std::map<std::vector<int>, int> seen;
  for (int k = 0; k < draws; ++k) {
    const auto s = sampler.next();
    ++seen[std::vector<int>(s.begin(), s.end())];
    for (int j : s) ++hits[static_cast<std::size_t>(j)];
  }
  const double expect = static_cast<double>(draws) * P / d;
  for (int j = 0; j < d; ++j) {
    CHECK(std::abs(hits[static_cast<std::size_t>(j)] - expect) < 0.06 * expect);
  }
  // All 120 possible 3-subsets of 10 coordinates show up.
  CHECK(seen.size() == 120);
}

TEST_CASE("block partition draws one coordinate per contiguous block") {
  pcd::SubsetSampler sampler(10, 5, pcd::Sampling::BlockPartition, 8);
  for (int draw = 0; draw < 200; ++draw) {
    const auto s = sampler.next();
    REQUIRE(s.size() == 5);
    for (int b = 0; b < 5; ++b) {
      CHECK(s[static_cast<std::size_t>(b)] >= 2 * b);
      CHECK(s[static_cast<std::size_t>(b)] < 2 * (b + 1));
    }
  }
}

TEST_CASE("full subsets enumerate every coordinate") {
  pcd::SubsetSampler uniform(6, 6, pcd::Sampling::UniformSubset, 1);
  pcd::SubsetSampler block(6, 6, pcd::Sampling::BlockPartition, 1);
  const std::vector<int> all{0, 1, 2, 3, 4, 5};
  for (int k = 0; k < 20; ++k) {
    auto u = uniform.next();
    auto b = block.next();
    CHECK(std::vector<int>(u.begin(), u.end()) == all);
    CHECK(std::vector<int>(b.begin(), b.end()) == all);
  }
}

TEST_CASE("sampler arguments are validated") {
  CHECK_THROWS_AS(pcd::SubsetSampler(10, 0, pcd::Sampling::UniformSubset, 0),
                  pcd::ValidationError);
  CHECK_THROWS_AS(pcd::SubsetSampler(10, 11, pcd::Sampling::UniformSubset, 0),
                  pcd::ValidationError);
  CHECK_THROWS_AS(pcd::SubsetSampler(10, 4, pcd::Sampling::BlockPartition, 0),
                  pcd::ValidationError);
  CHECK_NOTHROW(pcd::SubsetSampler(10, 5, pcd::Sampling::BlockPartition, 0));
}

TEST_CASE("the subset stream is reproducible per seed") {
  pcd::SubsetSampler a(40, 9, pcd::Sampling::UniformSubset, 123);
  pcd::SubsetSampler b(40, 9, pcd::Sampling::UniformSubset, 123);
  pcd::SubsetSampler c(40, 9, pcd::Sampling::UniformSubset, 124);
  bool any_differ = false;
  for (int k = 0; k < 100; ++k) {
    const auto sa = a.next();
    const auto sb = b.next();
    const auto sc = c.next();
    CHECK(std::vector<int>(sa.begin(), sa.end()) ==
          std::vector<int>(sb.begin(), sb.end()));
    if (!std::equal(sa.begin(), sa.end(), sc.begin(), sc.end())) {
      any_differ = true;
    }
  }
  CHECK(any_differ);
}

TEST_CASE("free-function draws follow the same distribution checks") {
  pcd::Rng rng(5, pcd::kStreamSubsets);
  for (int k = 0; k < 200; ++k) {
    const auto s =
        pcd::sample_subset(15, 4, pcd::Sampling::UniformSubset, rng);
    REQUIRE(s.size() == 4);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
  }
}
