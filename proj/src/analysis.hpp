#pragma once

#include "environment.hpp"

namespace dexp3m {

struct VirtualSlotRow {
  int tau = 0;        // 1-based virtual slot
  int t_of_tau = 0;   // origin round of the tau-th delivered feedback
  std::int64_t l_before = 0;  // cumulative feedback count through round t(tau)-1
  std::int64_t s_tilde = 0;   // tau - 1 - l_before
};

struct VirtualSlotMap {
  std::vector<VirtualSlotRow> rows;

  bool origins_are_permutation() const;
  std::int64_t s_tilde_sum() const;
  std::int64_t s_tilde_max() const;
  std::int64_t s_tilde_min() const;
};

// Replays the delivery order implied by the schedule (same ordering
// convention as FeedbackQueue) and tabulates the staleness identities.
VirtualSlotMap virtual_slot_map(const DelaySchedule& schedule);

// The k arms with smallest cumulative loss (ties to the lower index) and
// the comparator value (1/k) * sum of their column sums. A linear
// objective over the action polytope is minimized at an extreme point,
// so this search is exact.
std::pair<Action, double> best_fixed_action(const std::vector<LossVector>& loss_matrix, int k);

struct RegretReport {
  std::vector<double> pseudo_cum;    // per round, cumulative
  std::vector<double> realized_cum;  // per round, cumulative
  std::vector<double> bound_curve;   // sqrt(d_bar k (t + D_t) K (1+lnK))
  Action best_fixed_arms;
  double comparator_avg_loss = 0.0;  // (1/k) sum of best column sums
  double final_pseudo() const { return pseudo_cum.empty() ? 0.0 : pseudo_cum.back(); }
  double final_realized() const { return realized_cum.empty() ? 0.0 : realized_cum.back(); }
  double final_bound() const { return bound_curve.empty() ? 0.0 : bound_curve.back(); }
};

RegretReport regret_report(const RunRecord& record);

struct RatioAudit {
  bool lemma1_applicable = false;  // feasibility margin >= 0
  double lemma1_max = 1.0;
  double lemma1_bound = 0.0;
  bool lemma1_pass = false;
  double lemma3_max = 1.0;
  double lemma3_bound = 0.0;
  bool lemma3_pass = false;
};

// Checks the consecutive virtual-slot probability ratios against the
// closed-form contraction bounds.
RatioAudit ratio_audit(const std::vector<SimplexDistribution>& slot_probs,
                       const PolicyParams& params, double tol = 1e-9);

}  // namespace dexp3m
