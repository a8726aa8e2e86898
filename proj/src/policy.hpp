#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "core.hpp"
#include "depround.hpp"

namespace dexp3m {

struct PolicyParams {
  int K = 0;
  int k = 0;
  double gamma = 0.0;   // exploration mix, in (0,1]
  double delta1 = 0.0;  // loss-estimate clip inside the exponent
  double delta2 = 0.0;  // trim floor for normalized weights
  int d_bar = 1;
  std::int64_t T = 0;
  std::int64_t D = 0;

  // 1 - gamma - k*gamma*delta1/K - delta2; the ratio bound of the
  // probability-contraction lemma only applies when this is >= 0.
  double feasibility_margin() const;
  bool feasible() const { return feasibility_margin() >= 0.0; }
};

// Theorem schedule: delta2 = 1/(T+D), gamma = sqrt(K(1+lnK)/(k^3 d_bar (T+D)))
// clamped into (0,1], delta1 = 1/(2 gamma d_bar) + delta2/gamma.
PolicyParams params_from_horizon(int K, int k, int d_bar, std::int64_t T, std::int64_t D);

struct PolicyState {
  SimplexDistribution p;
  int round = 1;
  std::int64_t update_count = 0;  // virtual-slot index of the next update
};

PolicyState init_policy(int K);

// Step 1 of the round: depround over the scaled-and-capped distribution.
// Leaves the state untouched.
Action select_action(const PolicyState& state, const PolicyParams& params,
                     std::mt19937_64& rng);

// Importance-weighted estimate against the given distribution: loss/p(i)
// on the observed arms, 0 elsewhere. Unclipped.
std::vector<double> estimate_loss(std::span<const ArmLoss> observed,
                                  const SimplexDistribution& p_now,
                                  const PolicyParams& params);

// One exponential-weights update: exp step with the delta1 clip, trimmed
// normalization, then exploration mixing. Bumps update_count.
void apply_feedback_item(PolicyState& state, const std::vector<double>& est,
                         const PolicyParams& params);

enum class EstimationMode {
  VirtualSlot,  // estimate item n against the current (n-1 times updated) p
  Frozen,       // estimate every item against the round-start p
};

// Applies all of the round's feedback in list order and advances the round.
// slot_observer, when set, is called with the distribution after each
// single-item update.
void end_of_round(PolicyState& state, std::span<const FeedbackItem> items,
                  const PolicyParams& params,
                  EstimationMode mode = EstimationMode::VirtualSlot,
                  const std::function<void(const SimplexDistribution&)>& slot_observer = {});

}  // namespace dexp3m
