#include "depround.hpp"

#include <algorithm>
#include <cmath>

namespace dexp3m {

namespace {

constexpr double kIntegralTol = 1e-9;

bool is_integral(double v) {
  return v <= kIntegralTol || v >= 1.0 - kIntegralTol;
}

// Snap values that drifted within tolerance of 0 or 1.
double snap(double v) {
  if (v <= kIntegralTol) return 0.0;
  if (v >= 1.0 - kIntegralTol) return 1.0;
  return v;
}

}  // namespace

bool RoundingInput::valid(double tol) const {
  if (k < 1 || static_cast<int>(weights.size()) < k) return false;
  for (double w : weights) {
    if (!std::isfinite(w) || w < -kSimplexEntryTol || w > 1.0 + kSimplexEntryTol) return false;
  }
  return std::abs(kahan_sum(weights) - k) <= tol;
}

RoundingInput scale_and_cap(const SimplexDistribution& p, int k) {
  const int K = static_cast<int>(p.size());
  if (k < 1 || k > K) throw std::invalid_argument("scale_and_cap: need 1 <= k <= K");
  if (!validate_simplex(p)) throw std::invalid_argument("scale_and_cap: invalid simplex");

  std::vector<double> q(p.size());
  for (int i = 0; i < K; ++i) q[i] = k * p[i];

  // Water-filling: cap overflowing entries at 1 and push the excess onto
  // the uncapped entries, proportionally to their current mass. Each pass
  // caps at least one entry, so this terminates within K passes.
  std::vector<bool> capped(p.size(), false);
  for (int pass = 0; pass < K; ++pass) {
    double excess = 0.0;
    double free_mass = 0.0;
    int free_count = 0;
    for (int i = 0; i < K; ++i) {
      if (capped[i]) continue;
      if (q[i] > 1.0) {
        excess += q[i] - 1.0;
        q[i] = 1.0;
        capped[i] = true;
      } else {
        free_mass += q[i];
        ++free_count;
      }
    }
    if (excess <= 0.0) break;
    if (free_count == 0) {
      // Everything is capped; any remaining excess is fp residue.
      if (excess > 1e-9) throw std::invalid_argument("scale_and_cap: infeasible input");
      break;
    }
    if (free_mass > 0.0) {
      const double scale = 1.0 + excess / free_mass;
      for (int i = 0; i < K; ++i) {
        if (!capped[i]) q[i] *= scale;
      }
    } else {
      // All uncapped mass is zero; spread the excess uniformly.
      const double share = excess / free_count;
      for (int i = 0; i < K; ++i) {
        if (!capped[i]) q[i] += share;
      }
    }
  }
  return RoundingInput{std::move(q), k};
}

Action depround(const RoundingInput& input, std::mt19937_64& rng) {
  if (!input.valid())
    throw std::invalid_argument("depround: weights must lie in [0,1] and sum to k");

  std::vector<double> q = input.weights;
  const int K = static_cast<int>(q.size());
  for (double& v : q) v = snap(v);

  // Pairwise rounding with two left-to-right cursors over the fractional
  // coordinates. Each step makes at least one of the pair integral while
  // preserving the sum and every marginal.
  auto next_fractional = [&](int from) {
    int i = from;
    while (i < K && is_integral(q[i])) ++i;
    return i;
  };

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int i = next_fractional(0);
  int j = (i < K) ? next_fractional(i + 1) : K;
  while (i < K && j < K) {
    const double alpha = std::min(1.0 - q[i], q[j]);
    const double beta = std::min(q[i], 1.0 - q[j]);
    if (unit(rng) < beta / (alpha + beta)) {
      q[i] += alpha;
      q[j] -= alpha;
    } else {
      q[i] -= beta;
      q[j] += beta;
    }
    q[i] = snap(q[i]);
    q[j] = snap(q[j]);
    if (is_integral(q[i])) {
      i = is_integral(q[j]) ? next_fractional(j + 1) : j;
    }
    j = (i < K) ? next_fractional(std::max(i, j) + 1) : K;
  }
  if (i < K) q[i] = snap(std::round(q[i]));  // lone fp residue

  Action a;
  a.arms.reserve(input.k);
  for (int idx = 0; idx < K; ++idx) {
    if (q[idx] > 0.5) a.arms.push_back(idx);
  }
  if (static_cast<int>(a.arms.size()) != input.k)
    throw std::runtime_error("depround: rounding lost cardinality");
  return a;
}

}  // namespace dexp3m
