#include "policy.hpp"

#include <algorithm>
#include <cmath>

namespace dexp3m {

double PolicyParams::feasibility_margin() const {
  return 1.0 - gamma - k * gamma * delta1 / K - delta2;
}

PolicyParams params_from_horizon(int K, int k, int d_bar, std::int64_t T, std::int64_t D) {
  if (K < 1 || k < 1 || k > K) throw std::invalid_argument("params: need 1 <= k <= K");
  if (d_bar < 1) throw std::invalid_argument("params: d_bar must be >= 1 (use 1 for no delay)");
  if (T < 1 || D < 0) throw std::invalid_argument("params: need T >= 1, D >= 0");

  PolicyParams pp;
  pp.K = K;
  pp.k = k;
  pp.d_bar = d_bar;
  pp.T = T;
  pp.D = D;
  pp.delta2 = 1.0 / static_cast<double>(T + D);
  const double k3 = static_cast<double>(k) * k * k;
  double gamma = std::sqrt(K * (1.0 + std::log(K)) / (k3 * d_bar * static_cast<double>(T + D)));
  pp.gamma = std::min(gamma, 1.0);
  pp.delta1 = 1.0 / (2.0 * pp.gamma * d_bar) + pp.delta2 / pp.gamma;
  return pp;
}

PolicyState init_policy(int K) {
  if (K < 1) throw std::invalid_argument("init: K must be >= 1");
  PolicyState s;
  s.p.assign(K, 1.0 / K);
  return s;
}

Action select_action(const PolicyState& state, const PolicyParams& params,
                     std::mt19937_64& rng) {
  return depround(scale_and_cap(state.p, params.k), rng);
}

std::vector<double> estimate_loss(std::span<const ArmLoss> observed,
                                  const SimplexDistribution& p_now,
                                  const PolicyParams& params) {
  const double floor = params.gamma / params.K - 1e-12;
  std::vector<double> est(p_now.size(), 0.0);
  for (const ArmLoss& al : observed) {
    if (al.arm < 0 || al.arm >= static_cast<int>(p_now.size()))
      throw std::invalid_argument("estimate_loss: arm out of range");
    if (al.loss < 0.0 || al.loss > 1.0)
      throw std::invalid_argument("estimate_loss: loss outside [0,1]");
    if (p_now[al.arm] < floor)
      throw std::runtime_error("estimate_loss: probability below gamma/K floor");
    est[al.arm] = al.loss / p_now[al.arm];
  }
  return est;
}

void apply_feedback_item(PolicyState& state, const std::vector<double>& est,
                         const PolicyParams& params) {
  const int K = params.K;
  if (static_cast<int>(state.p.size()) != K || static_cast<int>(est.size()) != K)
    throw std::invalid_argument("apply_feedback_item: dimension mismatch");

  const double eta = params.k * params.gamma / K;
  std::vector<double> w_tilde(K);
  for (int i = 0; i < K; ++i) {
    w_tilde[i] = state.p[i] * std::exp(-eta * std::min(params.delta1, est[i]));
  }
  const double w_tilde_sum = kahan_sum(w_tilde);
  if (w_tilde_sum <= 0.0)
    throw std::runtime_error("apply_feedback_item: weight sum underflow");

  std::vector<double> w(K);
  for (int i = 0; i < K; ++i) {
    w[i] = std::max(w_tilde[i] / w_tilde_sum, params.delta2 / K);
  }
  const double w_sum = kahan_sum(w);

  for (int i = 0; i < K; ++i) {
    state.p[i] = (1.0 - params.gamma) * w[i] / w_sum + params.gamma / K;
  }
  const double drift = kahan_sum(state.p) - 1.0;
  if (std::abs(drift) > 1e-12) {
    const double norm = 1.0 + drift;
    for (double& v : state.p) v /= norm;
  }
  ++state.update_count;
}

void end_of_round(PolicyState& state, std::span<const FeedbackItem> items,
                  const PolicyParams& params, EstimationMode mode,
                  const std::function<void(const SimplexDistribution&)>& slot_observer) {
  const SimplexDistribution round_start = state.p;
  for (const FeedbackItem& item : items) {
    const SimplexDistribution& ref =
        (mode == EstimationMode::Frozen) ? round_start : state.p;
    auto est = estimate_loss(item.arm_losses, ref, params);
    apply_feedback_item(state, est, params);
    if (slot_observer) slot_observer(state.p);
  }
  ++state.round;
}

}  // namespace dexp3m
