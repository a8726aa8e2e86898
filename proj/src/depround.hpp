#pragma once

#include <random>

#include "core.hpp"

namespace dexp3m {

// Fractional arm weights summing to k, each in [0,1].
struct RoundingInput {
  std::vector<double> weights;
  int k = 0;

  bool valid(double tol = kSimplexSumTol) const;
};

// Scale a simplex distribution by k and cap entries at 1, redistributing
// excess mass proportionally over uncapped entries (water-filling).
RoundingInput scale_and_cap(const SimplexDistribution& p, int k);

// Dependent rounding: draws exactly k distinct arms with
// P(i in result) == q.weights[i]. O(K) time and space.
Action depround(const RoundingInput& q, std::mt19937_64& rng);

}  // namespace dexp3m
