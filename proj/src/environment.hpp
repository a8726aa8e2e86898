#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "policy.hpp"

namespace dexp3m {

enum class DelayKind { Fixed, UniformRandom, AdversarialFile };

struct DelaySchedule {
  std::vector<int> delays;  // one per round, each <= d_bar
  int d_bar = 0;

  std::int64_t total() const;            // sum of raw delays
  std::int64_t total_effective(int T) const;  // with delivery clamped to T
};

DelaySchedule make_delays(DelayKind kind, int d_bar, int T, std::mt19937_64& rng);
DelaySchedule load_delay_file(const std::string& path, int d_bar, int T);

enum class LossKind { StochasticBernoulli, FixedSequence, ShiftingAdversary };

struct LossGeneratorSpec {
  LossKind kind = LossKind::StochasticBernoulli;
  std::vector<double> means;               // bernoulli / first phase
  std::vector<double> means_alt;           // shifting adversary, second phase
  std::vector<LossVector> matrix;          // fixed sequence, T rows
  int period = 0;                          // shifting adversary
};

LossGeneratorSpec load_loss_matrix(const std::string& path, int T, int K);

// The adversary may observe past actions (never the learner's internal p).
LossVector next_losses(const LossGeneratorSpec& gen, int t,
                       std::span<const Action> action_history,
                       std::mt19937_64& rng);

struct RunConfig {
  int K = 0;
  int k = 0;
  int T = 0;
  DelaySchedule delays;
  LossGeneratorSpec gen;
  std::uint64_t seed = 0;
  EstimationMode mode = EstimationMode::VirtualSlot;
  std::optional<double> gamma_override;
  std::optional<double> delta1_override;
  std::optional<double> delta2_override;
};

struct RunRecord {
  PolicyParams params;
  std::uint64_t seed = 0;
  DelaySchedule delays;
  std::vector<Action> actions;                 // one per round
  std::vector<LossVector> losses;              // full oracle-side matrix
  std::vector<int> feedback_counts;            // |L_t| per round
  std::vector<SimplexDistribution> round_probs;  // p_t at selection time
  std::vector<SimplexDistribution> slot_probs;   // p after each virtual-slot update,
                                                 // index 0 = initial distribution
};

// Independent RNG streams so that changing one generator leaves the
// others' draws unchanged.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream_id);

RunRecord run_experiment(const RunConfig& config);

}  // namespace dexp3m
