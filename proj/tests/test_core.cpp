#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "core.hpp"
#include "doctest.h"

using namespace dexp3m;

TEST_CASE("validate_simplex accepts uniform vectors") {
  for (int K : {1, 4, 10, 37}) {
    SimplexDistribution d(K, 1.0 / K);
    CHECK(validate_simplex(d));
  }
}

TEST_CASE("validate_simplex rejects bad vectors") {
  CHECK_FALSE(validate_simplex({0.51, 0.5, -0.01}));
  CHECK_FALSE(validate_simplex({0.75, 0.75}));  // sums to 1.5
  CHECK_FALSE(validate_simplex({}));
}

TEST_CASE("enqueue schedules at min(s+d, T)") {
  FeedbackQueue q;
  q.enqueue({}, 1, 2, 3);
  q.enqueue({}, 2, 0, 3);
  q.enqueue({}, 3, 5, 3);  // clamped to the horizon
  CHECK(q.deliver(1).empty());
  auto at2 = q.deliver(2);
  REQUIRE(at2.size() == 1);
  CHECK(at2[0].origin_round == 2);
  auto at3 = q.deliver(3);
  REQUIRE(at3.size() == 2);
  CHECK(q.empty());
}

TEST_CASE("enqueue rejects rounds past the horizon") {
  FeedbackQueue q;
  CHECK_THROWS_AS(q.enqueue({}, 4, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(q.enqueue({}, 0, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(q.enqueue({}, 1, -1, 3), std::invalid_argument);
}

TEST_CASE("reference schedule delivers s=3 before s=1 at t=3") {
  // d_1=2, d_2=0, d_3=0: round 3 receives the fresh round-3 feedback
  // ahead of the stale round-1 feedback.
  FeedbackQueue q;
  q.enqueue({}, 1, 2, 3);
  q.enqueue({}, 2, 0, 3);
  q.enqueue({}, 3, 0, 3);
  q.deliver(1);
  q.deliver(2);
  auto at3 = q.deliver(3);
  REQUIRE(at3.size() == 2);
  CHECK(at3[0].origin_round == 3);
  CHECK(at3[1].origin_round == 1);
}

TEST_CASE("conservation: everything enqueued is delivered exactly once") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int T = 1 + static_cast<int>(rng() % 60);
    std::uniform_int_distribution<int> delay(0, 10);
    FeedbackQueue q;
    for (int s = 1; s <= T; ++s) q.enqueue({}, s, delay(rng), T);
    std::size_t delivered = 0;
    for (int t = 1; t <= T; ++t) {
      for (const auto& item : q.deliver(t)) {
        (void)item;
        ++delivered;
      }
    }
    CHECK(delivered == static_cast<std::size_t>(T));
    CHECK(q.empty());
  }
}

TEST_CASE("kahan_sum matches exact sums") {
  std::vector<double> xs(1000, 0.1);
  CHECK(kahan_sum(xs) == doctest::Approx(100.0).epsilon(1e-13));
}
