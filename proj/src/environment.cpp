#include "environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dexp3m {

std::int64_t DelaySchedule::total() const {
  return std::accumulate(delays.begin(), delays.end(), std::int64_t{0});
}

std::int64_t DelaySchedule::total_effective(int T) const {
  std::int64_t sum = 0;
  for (int t = 1; t <= static_cast<int>(delays.size()); ++t) {
    sum += std::min(t + delays[t - 1], T) - t;
  }
  return sum;
}

DelaySchedule make_delays(DelayKind kind, int d_bar, int T, std::mt19937_64& rng) {
  if (d_bar < 0 || T < 1) throw std::invalid_argument("make_delays: need d_bar >= 0, T >= 1");
  DelaySchedule s;
  s.d_bar = d_bar;
  s.delays.resize(T);
  switch (kind) {
    case DelayKind::Fixed:
      std::fill(s.delays.begin(), s.delays.end(), d_bar);
      break;
    case DelayKind::UniformRandom: {
      std::uniform_int_distribution<int> dist(0, d_bar);
      for (int& d : s.delays) d = dist(rng);
      break;
    }
    case DelayKind::AdversarialFile:
      throw std::invalid_argument("make_delays: adversarial schedules come from load_delay_file");
  }
  return s;
}

DelaySchedule load_delay_file(const std::string& path, int d_bar, int T) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open delay file: " + path);
  DelaySchedule s;
  s.d_bar = d_bar;
  s.delays.reserve(T);
  long long v;
  while (in >> v) {
    if (v < 0 || v > d_bar)
      throw std::invalid_argument("delay file entry outside [0, d_bar]: " + std::to_string(v));
    s.delays.push_back(static_cast<int>(v));
  }
  if (static_cast<int>(s.delays.size()) != T)
    throw std::invalid_argument("delay file must hold exactly T entries");
  return s;
}

LossGeneratorSpec load_loss_matrix(const std::string& path, int T, int K) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open loss file: " + path);
  LossGeneratorSpec gen;
  gen.kind = LossKind::FixedSequence;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    LossVector l;
    double v;
    while (row >> v) {
      if (v < 0.0 || v > 1.0) throw std::invalid_argument("loss file entry outside [0,1]");
      l.push_back(v);
    }
    if (static_cast<int>(l.size()) != K)
      throw std::invalid_argument("loss file row must hold K entries");
    gen.matrix.push_back(std::move(l));
  }
  if (static_cast<int>(gen.matrix.size()) != T)
    throw std::invalid_argument("loss file must hold exactly T rows");
  return gen;
}

LossVector next_losses(const LossGeneratorSpec& gen, int t,
                       std::span<const Action> /*action_history*/,
                       std::mt19937_64& rng) {
  switch (gen.kind) {
    case LossKind::StochasticBernoulli: {
      LossVector l(gen.means.size());
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t i = 0; i < l.size(); ++i) {
        l[i] = unit(rng) < gen.means[i] ? 1.0 : 0.0;
      }
      return l;
    }
    case LossKind::FixedSequence:
      if (t < 1 || t > static_cast<int>(gen.matrix.size()))
        throw std::out_of_range("next_losses: round outside loss matrix");
      return gen.matrix[t - 1];
    case LossKind::ShiftingAdversary: {
      if (gen.period < 1) throw std::invalid_argument("shifting adversary needs period >= 1");
      const bool alt = ((t - 1) / gen.period) % 2 == 1;
      const auto& means = alt ? gen.means_alt : gen.means;
      LossVector l(means.size());
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t i = 0; i < l.size(); ++i) {
        l[i] = unit(rng) < means[i] ? 1.0 : 0.0;
      }
      return l;
    }
  }
  throw std::logic_error("next_losses: unknown generator kind");
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream_id};
  return std::mt19937_64(seq);
}

RunRecord run_experiment(const RunConfig& config) {
  if (config.K < 1 || config.k < 1 || config.k > config.K || config.T < 1)
    throw std::invalid_argument("run_experiment: invalid dimensions");
  if (static_cast<int>(config.delays.delays.size()) != config.T)
    throw std::invalid_argument("run_experiment: delay schedule length != T");

  // The theorem schedule needs the realized total delay up front;
  // clamped to the horizon, matching the forced delivery at T.
  const std::int64_t D = config.delays.total_effective(config.T);
  PolicyParams params = params_from_horizon(config.K, config.k,
                                            std::max(config.delays.d_bar, 1),
                                            config.T, D);
  if (config.gamma_override) params.gamma = *config.gamma_override;
  if (config.delta1_override) params.delta1 = *config.delta1_override;
  if (config.delta2_override) params.delta2 = *config.delta2_override;
  if (params.gamma <= 0.0 || params.gamma > 1.0)
    throw std::invalid_argument("run_experiment: gamma outside (0,1]");

  auto action_rng = make_stream(config.seed, 1);
  auto loss_rng = make_stream(config.seed, 2);

  RunRecord rec;
  rec.params = params;
  rec.seed = config.seed;
  rec.delays = config.delays;
  rec.actions.reserve(config.T);
  rec.losses.reserve(config.T);
  rec.feedback_counts.reserve(config.T);
  rec.round_probs.reserve(config.T);
  rec.slot_probs.reserve(config.T + 1);

  PolicyState state = init_policy(config.K);
  rec.slot_probs.push_back(state.p);
  FeedbackQueue queue;

  for (int t = 1; t <= config.T; ++t) {
    try {
      rec.round_probs.push_back(state.p);
      Action a = select_action(state, params, action_rng);
      LossVector l = next_losses(config.gen, t, rec.actions, loss_rng);

      FeedbackItem item;
      item.arm_losses.reserve(a.arms.size());
      for (int arm : a.arms) item.arm_losses.push_back({arm, l[arm]});
      queue.enqueue(std::move(item), t, config.delays.delays[t - 1], config.T);

      rec.actions.push_back(std::move(a));
      rec.losses.push_back(std::move(l));

      auto delivered = queue.deliver(t);
      rec.feedback_counts.push_back(static_cast<int>(delivered.size()));
      end_of_round(state, delivered, params, config.mode,
                   [&rec](const SimplexDistribution& p) { rec.slot_probs.push_back(p); });
    } catch (const std::exception& e) {
      throw std::runtime_error("round " + std::to_string(t) + ": " + e.what());
    }
  }
  if (!queue.empty())
    throw std::runtime_error("run_experiment: feedback left after the horizon");
  return rec;
}

}  // namespace dexp3m
