#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "environment.hpp"

using namespace dexp3m;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

RunConfig basic_config(int K, int k, int T, std::uint64_t seed) {
  RunConfig rc;
  rc.K = K;
  rc.k = k;
  rc.T = T;
  rc.seed = seed;
  rc.gen.kind = LossKind::StochasticBernoulli;
  rc.gen.means.assign(K, 0.5);
  rc.delays.d_bar = 0;
  rc.delays.delays.assign(T, 0);
  return rc;
}

}  // namespace

TEST_CASE("fixed schedule with d_bar=0 is all zeros") {
  std::mt19937_64 rng(1);
  auto s = make_delays(DelayKind::Fixed, 0, 5, rng);
  CHECK(s.delays == std::vector<int>(5, 0));
  CHECK(s.total() == 0);
}

TEST_CASE("delay file loads the reference schedule") {
  auto path = write_temp("dexp3m_delays.txt", "2\n0\n0\n");
  auto s = load_delay_file(path, 2, 3);
  CHECK(s.delays == std::vector<int>{2, 0, 0});
  CHECK(s.total_effective(3) == 2);
}

TEST_CASE("delay file entries above d_bar are rejected") {
  auto path = write_temp("dexp3m_delays_bad.txt", "2\n5\n0\n");
  CHECK_THROWS_AS(load_delay_file(path, 2, 3), std::invalid_argument);
}

TEST_CASE("uniform-random delays have the expected mean") {
  std::mt19937_64 rng(2024);
  auto s = make_delays(DelayKind::UniformRandom, 4, 10000, rng);
  double mean = double(s.total()) / 10000.0;
  CHECK(std::abs(mean - 2.0) < 0.1);
  for (int d : s.delays) {
    CHECK(d >= 0);
    CHECK(d <= 4);
  }
}

TEST_CASE("fixed-sequence generator replays its matrix") {
  LossGeneratorSpec gen;
  gen.kind = LossKind::FixedSequence;
  gen.matrix = {{0.0, 0.0}, {0.0, 0.0}};
  std::mt19937_64 rng(1);
  CHECK(next_losses(gen, 1, {}, rng) == LossVector{0.0, 0.0});
  CHECK(next_losses(gen, 2, {}, rng) == LossVector{0.0, 0.0});
  CHECK_THROWS_AS(next_losses(gen, 3, {}, rng), std::out_of_range);
}

TEST_CASE("loss matrix file rejects out-of-range entries") {
  auto path = write_temp("dexp3m_losses_bad.txt", "0.5 1.5\n0.1 0.2\n");
  CHECK_THROWS_AS(load_loss_matrix(path, 2, 2), std::invalid_argument);
}

TEST_CASE("bernoulli losses match their means") {
  LossGeneratorSpec gen;
  gen.kind = LossKind::StochasticBernoulli;
  gen.means = {0.1, 0.9};
  std::mt19937_64 rng(7);
  double sum0 = 0.0, sum1 = 0.0;
  const int T = 10000;
  for (int t = 1; t <= T; ++t) {
    auto l = next_losses(gen, t, {}, rng);
    sum0 += l[0];
    sum1 += l[1];
  }
  CHECK(std::abs(sum0 / T - 0.1) < 0.02);
  CHECK(std::abs(sum1 / T - 0.9) < 0.02);
}

TEST_CASE("shifting adversary swaps means every period") {
  LossGeneratorSpec gen;
  gen.kind = LossKind::ShiftingAdversary;
  gen.means = {0.0, 1.0};
  gen.means_alt = {1.0, 0.0};
  gen.period = 3;
  std::mt19937_64 rng(9);
  // Degenerate 0/1 means make the draws deterministic.
  for (int t = 1; t <= 12; ++t) {
    auto l = next_losses(gen, t, {}, rng);
    const bool alt = ((t - 1) / 3) % 2 == 1;
    CHECK(l[0] == (alt ? 1.0 : 0.0));
    CHECK(l[1] == (alt ? 0.0 : 1.0));
  }
}

TEST_CASE("reference delay schedule gives feedback counts 0,1,2") {
  auto rc = basic_config(3, 1, 3, 5);
  rc.delays.d_bar = 2;
  rc.delays.delays = {2, 0, 0};
  auto rec = run_experiment(rc);
  CHECK(rec.feedback_counts == std::vector<int>{0, 1, 2});
}

TEST_CASE("zero delays deliver one item per round") {
  auto rec = run_experiment(basic_config(4, 2, 50, 1));
  for (int c : rec.feedback_counts) CHECK(c == 1);
}

TEST_CASE("feedback counts always sum to T") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto rc = basic_config(5, 2, 80, seed);
    auto rng = make_stream(seed, 3);
    rc.delays = make_delays(DelayKind::UniformRandom, 6, 80, rng);
    auto rec = run_experiment(rc);
    CHECK(std::accumulate(rec.feedback_counts.begin(), rec.feedback_counts.end(), 0) == 80);
    CHECK(static_cast<int>(rec.slot_probs.size()) == 81);
  }
}

TEST_CASE("identical config and seed reproduce the full record") {
  auto rc = basic_config(6, 3, 120, 77);
  auto rng = make_stream(77, 3);
  rc.delays = make_delays(DelayKind::UniformRandom, 4, 120, rng);
  auto a = run_experiment(rc);
  auto b = run_experiment(rc);
  CHECK(a.losses == b.losses);
  CHECK(a.feedback_counts == b.feedback_counts);
  for (int t = 0; t < rc.T; ++t) {
    CHECK(a.actions[t].arms == b.actions[t].arms);
    CHECK(a.round_probs[t] == b.round_probs[t]);
  }
}

TEST_CASE("changing the loss stream leaves action draws unchanged") {
  // Stream separation: the first action is drawn from the uniform
  // distribution before any feedback, so it only depends on stream 1.
  auto rc1 = basic_config(8, 2, 1, 42);
  auto rc2 = basic_config(8, 2, 1, 42);
  rc2.gen.means.assign(8, 0.05);
  auto a = run_experiment(rc1);
  auto b = run_experiment(rc2);
  CHECK(a.actions[0].arms == b.actions[0].arms);
}

TEST_CASE("run_experiment validates its dimensions") {
  auto rc = basic_config(3, 1, 10, 1);
  rc.delays.delays.resize(5);
  CHECK_THROWS(run_experiment(rc));
}
