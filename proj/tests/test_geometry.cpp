#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "modec/geometry.hpp"
#include "support.hpp"

using namespace modec;
using testsupport::brute_nondominated;
using testsupport::canonical;
using testsupport::random_points;

TEST_CASE("compare classifies the canonical pairs") {
  CHECK(compare({1, 2}, {1, 1}) == DominanceRelation::ParetoDominates);
  CHECK(compare({1, 1}, {1, 2}) == DominanceRelation::ParetoDominatedBy);
  CHECK(compare({1, 1}, {1, 1}) == DominanceRelation::Equal);
  CHECK(compare({2, 0}, {0, 2}) == DominanceRelation::Incomparable);
  CHECK(compare({2, 3}, {1, 1}) == DominanceRelation::StrictlyDominates);
  CHECK(compare({1, 1}, {2, 3}) == DominanceRelation::StrictlyDominatedBy);
}

TEST_CASE("compare rejects mismatched dimensions") {
  CHECK_THROWS_AS(compare({1, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(linf_dist({1, 2, 3}, {1, 2}), std::invalid_argument);
}

TEST_CASE("strict dominance implies Pareto dominance") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    auto pts = random_points(rng, 2, 3);
    if (strictly_dominates(pts[0], pts[1])) {
      CHECK(pareto_dominates(pts[0], pts[1]));
    }
  }
}

TEST_CASE("compare is antisymmetric on random pairs") {
  std::mt19937_64 rng(11);
  auto mirror = [](DominanceRelation r) {
    switch (r) {
      case DominanceRelation::StrictlyDominates:
        return DominanceRelation::StrictlyDominatedBy;
      case DominanceRelation::ParetoDominates:
        return DominanceRelation::ParetoDominatedBy;
      case DominanceRelation::StrictlyDominatedBy:
        return DominanceRelation::StrictlyDominates;
      case DominanceRelation::ParetoDominatedBy:
        return DominanceRelation::ParetoDominates;
      default:
        return r;
    }
  };
  for (int i = 0; i < 1000; ++i) {
    auto pts = random_points(rng, 2, 3, 0.0, 2.0);
    CHECK(compare(pts[0], pts[1]) == mirror(compare(pts[1], pts[0])));
  }
}

TEST_CASE("weak dominance is transitive on random triples") {
  std::mt19937_64 rng(13);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) {
    auto pts = random_points(rng, 3, 2, 0.0, 2.0);
    if (weakly_dominates(pts[0], pts[1]) && weakly_dominates(pts[1], pts[2])) {
      ++hits;
      CHECK(weakly_dominates(pts[0], pts[2]));
    }
  }
  CHECK(hits > 0);  // the premise fired at least sometimes
}

TEST_CASE("pprune keeps exactly the nondominated subset") {
  auto got = pprune({{1, 2}, {1, 1}, {2, 0}});
  CHECK(canonical(got) == canonical({{1, 2}, {2, 0}}));
}

TEST_CASE("pprune keeps a singleton") {
  CHECK(pprune({{3, 3}}) == std::vector<ValueVec>{{3, 3}});
}

TEST_CASE("pprune matches the pairwise brute-force oracle") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 30; ++round) {
    auto pts = random_points(rng, 50, 3);
    CHECK(canonical(pprune(pts)) == brute_nondominated(pts));
  }
}

TEST_CASE("pprune is idempotent and yields an antichain") {
  std::mt19937_64 rng(19);
  for (int round = 0; round < 20; ++round) {
    auto pts = random_points(rng, 30, 2, 0.0, 5.0);
    auto once = pprune(pts);
    CHECK(pprune(once) == once);
    for (const auto& a : once) {
      for (const auto& b : once) {
        CHECK_FALSE(pareto_dominates(a, b));
      }
    }
    // every removed point is dominated by a kept one
    for (const auto& p : pts) {
      bool kept = std::find(once.begin(), once.end(), p) != once.end();
      if (kept) continue;
      bool covered = false;
      for (const auto& q : once) {
        if (weakly_dominates(q, p)) covered = true;
      }
      CHECK(covered);
    }
  }
}

TEST_CASE("pprune collapses duplicates to the first occurrence") {
  auto got = pprune({{2, 0}, {1, 3}, {2, 0}});
  CHECK(got == std::vector<ValueVec>{{2, 0}, {1, 3}});
}

TEST_CASE("pprune rejects empty input") {
  CHECK_THROWS_AS(pprune({}), std::invalid_argument);
}

TEST_CASE("linf distance") {
  CHECK(linf_dist({1, -1}, {2, -3}) == 2.0);
  CHECK(linf_dist({4, 5}, {4, 5}) == 0.0);
  CHECK(linf_dist({0, 0, 0}, {1, 2, 3}) == 3.0);
}

TEST_CASE("linf is symmetric and zero only at equality") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    auto pts = random_points(rng, 2, 4);
    CHECK(linf_dist(pts[0], pts[1]) == linf_dist(pts[1], pts[0]));
    if (pts[0] != pts[1]) CHECK(linf_dist(pts[0], pts[1]) > 0.0);
  }
}

TEST_CASE("box membership is closed") {
  BoundingBox b({0, 0}, {4, 4});
  CHECK(box_contains(b, {2, 2}));
  CHECK_FALSE(box_contains(b, {5, 0}));
  CHECK(box_contains(b, {0, 0}));  // nadir on the boundary
  CHECK(box_contains(b, {4, 4}));
}

TEST_CASE("bounding box requires a strictly dominating ideal") {
  CHECK_THROWS_AS(BoundingBox({0, 0}, {4, 0}), std::invalid_argument);
  CHECK_THROWS_AS(BoundingBox({0, 0}, {0, 4}), std::invalid_argument);
}
