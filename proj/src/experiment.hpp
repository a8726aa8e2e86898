#pragma once

#include <string>

#include "analysis.hpp"

namespace dexp3m {

// Error categories mapped onto process exit codes by the callers.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int K = 0;
  int k = 0;
  int T = 0;
  std::vector<std::uint64_t> seeds;

  DelayKind delay_kind = DelayKind::Fixed;
  int d_bar = 0;
  std::string delay_file;

  LossKind loss_kind = LossKind::StochasticBernoulli;
  std::vector<double> means;
  std::vector<double> means_alt;
  int period = 0;
  std::string loss_file;

  EstimationMode mode = EstimationMode::VirtualSlot;
  std::optional<double> gamma_override;
  std::optional<double> delta1_override;
  std::optional<double> delta2_override;

  std::string out_dir = "out";

  std::string sweep_axis;  // one of T, d_bar, k, K; empty when not sweeping
  std::vector<std::int64_t> sweep_values;

  std::uint64_t config_hash = 0;
};

// Flat key = value text with [section] headers; see configs/example.ini.
ExperimentConfig load_config(const std::string& path);

// Validates without running; returns a one-line parameter summary.
std::string validate_config(const ExperimentConfig& config);

// Per-seed record + reports, written as regret.csv / diagnostics.csv /
// summary.csv plus a run_meta.txt sidecar under config.out_dir.
void run_command(const ExperimentConfig& config);

// One run_command per axis value (into subdirectories) plus scaling.csv.
void sweep_command(const ExperimentConfig& config);

std::string format_double(double v);  // 12 significant digits

}  // namespace dexp3m
