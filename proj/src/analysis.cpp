#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dexp3m {

bool VirtualSlotMap::origins_are_permutation() const {
  std::vector<bool> seen(rows.size(), false);
  for (const auto& r : rows) {
    if (r.t_of_tau < 1 || r.t_of_tau > static_cast<int>(rows.size())) return false;
    if (seen[r.t_of_tau - 1]) return false;
    seen[r.t_of_tau - 1] = true;
  }
  return true;
}

std::int64_t VirtualSlotMap::s_tilde_sum() const {
  std::int64_t s = 0;
  for (const auto& r : rows) s += r.s_tilde;
  return s;
}

std::int64_t VirtualSlotMap::s_tilde_max() const {
  std::int64_t m = 0;
  for (const auto& r : rows) m = std::max(m, r.s_tilde);
  return m;
}

std::int64_t VirtualSlotMap::s_tilde_min() const {
  std::int64_t m = 0;
  for (const auto& r : rows) m = std::min(m, r.s_tilde);
  return m;
}

VirtualSlotMap virtual_slot_map(const DelaySchedule& schedule) {
  const int T = static_cast<int>(schedule.delays.size());
  FeedbackQueue queue;
  for (int s = 1; s <= T; ++s) {
    FeedbackItem item;  // only the origin round matters here
    queue.enqueue(std::move(item), s, schedule.delays[s - 1], T);
  }

  // Cumulative delivered counts L_t, plus the delivery order.
  std::vector<std::int64_t> cum(T + 1, 0);
  std::vector<int> origins;
  origins.reserve(T);
  for (int t = 1; t <= T; ++t) {
    auto delivered = queue.deliver(t);
    cum[t] = cum[t - 1] + static_cast<std::int64_t>(delivered.size());
    for (const auto& item : delivered) origins.push_back(item.origin_round);
  }

  VirtualSlotMap map;
  map.rows.reserve(T);
  for (int tau = 1; tau <= static_cast<int>(origins.size()); ++tau) {
    VirtualSlotRow row;
    row.tau = tau;
    row.t_of_tau = origins[tau - 1];
    row.l_before = cum[row.t_of_tau - 1];
    row.s_tilde = tau - 1 - row.l_before;
    map.rows.push_back(row);
  }
  return map;
}

std::pair<Action, double> best_fixed_action(const std::vector<LossVector>& loss_matrix, int k) {
  if (loss_matrix.empty()) throw std::invalid_argument("best_fixed_action: empty matrix");
  const int K = static_cast<int>(loss_matrix.front().size());
  if (k < 1 || k > K) throw std::invalid_argument("best_fixed_action: need 1 <= k <= K");

  std::vector<double> col_sums(K, 0.0);
  for (const auto& row : loss_matrix) {
    for (int i = 0; i < K; ++i) col_sums[i] += row[i];
  }
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return col_sums[a] < col_sums[b]; });

  Action best;
  best.arms.assign(order.begin(), order.begin() + k);
  std::sort(best.arms.begin(), best.arms.end());
  double value = 0.0;
  for (int arm : best.arms) value += col_sums[arm];
  return {best, value / k};
}

RegretReport regret_report(const RunRecord& record) {
  const int T = static_cast<int>(record.losses.size());
  const int K = record.params.K;
  const int k = record.params.k;

  RegretReport rep;
  auto [best, comparator_avg] = best_fixed_action(record.losses, k);
  rep.best_fixed_arms = best;
  rep.comparator_avg_loss = comparator_avg;

  const double log_factor = K * (1.0 + std::log(K));
  rep.pseudo_cum.reserve(T);
  rep.realized_cum.reserve(T);
  rep.bound_curve.reserve(T);
  double pseudo = 0.0;
  double realized = 0.0;
  std::int64_t delay_so_far = 0;
  for (int t = 1; t <= T; ++t) {
    const LossVector& l = record.losses[t - 1];
    double comparator_loss = 0.0;
    for (int arm : best.arms) comparator_loss += l[arm];
    comparator_loss /= k;

    double policy_expected = 0.0;
    for (int i = 0; i < K; ++i) policy_expected += record.round_probs[t - 1][i] * l[i];
    pseudo += policy_expected - comparator_loss;

    double played = 0.0;
    for (int arm : record.actions[t - 1].arms) played += l[arm];
    realized += played / k - comparator_loss;

    delay_so_far += std::min(t + record.delays.delays[t - 1], T) - t;
    rep.pseudo_cum.push_back(pseudo);
    rep.realized_cum.push_back(realized);
    rep.bound_curve.push_back(std::sqrt(record.params.d_bar * k *
                                        static_cast<double>(t + delay_so_far) * log_factor));
  }
  return rep;
}

RatioAudit ratio_audit(const std::vector<SimplexDistribution>& slot_probs,
                       const PolicyParams& params, double tol) {
  RatioAudit audit;
  audit.lemma1_applicable = params.feasible();
  const double margin = params.feasibility_margin();
  audit.lemma1_bound = margin > 0.0 ? 1.0 / margin
                                    : std::numeric_limits<double>::infinity();
  const double shrink = 1.0 - params.k * params.gamma * params.delta1 / params.K;
  audit.lemma3_bound = std::max(
      params.delta2 * (1.0 + params.delta2) / (params.gamma + params.delta2),
      shrink > 0.0 ? 1.0 / shrink : std::numeric_limits<double>::infinity());

  for (std::size_t tau = 1; tau < slot_probs.size(); ++tau) {
    const auto& prev = slot_probs[tau - 1];
    const auto& cur = slot_probs[tau];
    for (std::size_t i = 0; i < cur.size(); ++i) {
      audit.lemma1_max = std::max(audit.lemma1_max, prev[i] / cur[i]);
      audit.lemma3_max = std::max(audit.lemma3_max, cur[i] / prev[i]);
    }
  }
  audit.lemma1_pass = !audit.lemma1_applicable || audit.lemma1_max <= audit.lemma1_bound + tol;
  audit.lemma3_pass = audit.lemma3_max <= audit.lemma3_bound + tol;
  return audit;
}

}  // namespace dexp3m
