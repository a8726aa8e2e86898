#include "core.hpp"

#include <algorithm>
#include <cmath>

namespace dexp3m {

double kahan_sum(std::span<const double> xs) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : xs) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

bool validate_simplex(const SimplexDistribution& d, double sum_tol) {
  if (d.empty()) return false;
  for (double v : d) {
    if (!std::isfinite(v) || v < -kSimplexEntryTol) return false;
  }
  return std::abs(kahan_sum(d) - 1.0) <= sum_tol;
}

bool Action::valid(int num_arms, int plays) const {
  if (static_cast<int>(arms.size()) != plays) return false;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i] < 0 || arms[i] >= num_arms) return false;
    if (i > 0 && arms[i] <= arms[i - 1]) return false;
  }
  return true;
}

void FeedbackQueue::enqueue(FeedbackItem item, int s, int delay, int horizon) {
  if (s < 1) throw std::invalid_argument("enqueue: round must be >= 1");
  if (s > horizon) throw std::invalid_argument("enqueue: round exceeds horizon");
  if (delay < 0) throw std::invalid_argument("enqueue: negative delay");
  item.origin_round = s;
  const int due = std::min(s + delay, horizon);
  auto& slot = pending_[due];
  // Descending origin round within a delivery round.
  auto pos = std::upper_bound(slot.begin(), slot.end(), s,
                              [](int origin, const FeedbackItem& fi) {
                                return origin > fi.origin_round;
                              });
  slot.insert(pos, std::move(item));
  ++total_enqueued_;
}

std::vector<FeedbackItem> FeedbackQueue::deliver(int t) {
  auto it = pending_.find(t);
  if (it == pending_.end()) return {};
  std::vector<FeedbackItem> out = std::move(it->second);
  pending_.erase(it);
  total_delivered_ += out.size();
  return out;
}

}  // namespace dexp3m
