#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace dexp3m {

inline constexpr double kSimplexSumTol = 1e-9;
inline constexpr double kSimplexEntryTol = 1e-12;

// Compensated (Kahan) summation.
double kahan_sum(std::span<const double> xs);

// Probability vector over K arms; sums to 1.
using SimplexDistribution = std::vector<double>;

bool validate_simplex(const SimplexDistribution& d, double sum_tol = kSimplexSumTol);

// A set of k distinct arms played in one round, kept sorted ascending.
struct Action {
  std::vector<int> arms;

  bool valid(int num_arms, int plays) const;
};

// Full per-arm loss vector, environment side only; entries in [0,1].
using LossVector = std::vector<double>;

struct ArmLoss {
  int arm;
  double loss;
};

// Losses of one past action, delivered without an origin timestamp.
// origin_round is carried for analysis only; the policy never reads it
// (policy entry points take std::span<const ArmLoss>).
struct FeedbackItem {
  std::vector<ArmLoss> arm_losses;
  int origin_round = 0;
};

// Pending feedback keyed by delivery round. An item enqueued at round s
// with delay d is delivered at round min(s+d, T); within one delivery
// round items are ordered by descending origin round (freshest first),
// which reproduces the reference virtual-slot mapping.
class FeedbackQueue {
 public:
  void enqueue(FeedbackItem item, int s, int delay, int horizon);

  // Returns and removes all items scheduled for round t.
  std::vector<FeedbackItem> deliver(int t);

  bool empty() const { return pending_.empty(); }
  std::size_t total_enqueued() const { return total_enqueued_; }
  std::size_t total_delivered() const { return total_delivered_; }

 private:
  std::map<int, std::vector<FeedbackItem>> pending_;
  std::size_t total_enqueued_ = 0;
  std::size_t total_delivered_ = 0;
};

}  // namespace dexp3m
