#include "experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace dexp3m {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": " + s);
  }
}

std::int64_t parse_int(const std::string& s, const std::string& key) {
  try {
    return std::stoll(s);
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": " + s);
  }
}

struct SeedResult {
  std::uint64_t seed = 0;
  PolicyParams params;
  RegretReport report;
  VirtualSlotMap vmap;
  RatioAudit audit;
};

DelaySchedule build_delays(const ExperimentConfig& cfg, std::uint64_t seed) {
  switch (cfg.delay_kind) {
    case DelayKind::Fixed: {
      auto rng = make_stream(seed, 3);
      return make_delays(DelayKind::Fixed, cfg.d_bar, cfg.T, rng);
    }
    case DelayKind::UniformRandom: {
      auto rng = make_stream(seed, 3);
      return make_delays(DelayKind::UniformRandom, cfg.d_bar, cfg.T, rng);
    }
    case DelayKind::AdversarialFile:
      return load_delay_file(cfg.delay_file, cfg.d_bar, cfg.T);
  }
  throw ConfigError("unknown delay kind");
}

LossGeneratorSpec build_generator(const ExperimentConfig& cfg) {
  LossGeneratorSpec gen;
  gen.kind = cfg.loss_kind;
  switch (cfg.loss_kind) {
    case LossKind::StochasticBernoulli:
      gen.means = cfg.means;
      break;
    case LossKind::FixedSequence:
      gen = load_loss_matrix(cfg.loss_file, cfg.T, cfg.K);
      break;
    case LossKind::ShiftingAdversary:
      gen.means = cfg.means;
      gen.means_alt = cfg.means_alt;
      gen.period = cfg.period;
      break;
  }
  return gen;
}

SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  RunConfig rc;
  rc.K = cfg.K;
  rc.k = cfg.k;
  rc.T = cfg.T;
  rc.delays = build_delays(cfg, seed);
  rc.gen = build_generator(cfg);
  rc.seed = seed;
  rc.mode = cfg.mode;
  rc.gamma_override = cfg.gamma_override;
  rc.delta1_override = cfg.delta1_override;
  rc.delta2_override = cfg.delta2_override;

  SeedResult res;
  res.seed = seed;
  RunRecord rec;
  try {
    rec = run_experiment(rc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::runtime_error& e) {
    throw InvariantError(e.what());
  }
  res.params = rec.params;
  res.report = regret_report(rec);
  res.vmap = virtual_slot_map(rec.delays);
  res.audit = ratio_audit(rec.slot_probs, rec.params);
  return res;
}

std::vector<SeedResult> run_all_seeds(const ExperimentConfig& cfg) {
  std::vector<std::future<SeedResult>> futs;
  futs.reserve(cfg.seeds.size());
  for (std::uint64_t seed : cfg.seeds) {
    futs.push_back(std::async(std::launch::async,
                              [&cfg, seed] { return run_seed(cfg, seed); }));
  }
  std::vector<SeedResult> results;
  results.reserve(futs.size());
  for (auto& f : futs) results.push_back(f.get());
  std::sort(results.begin(), results.end(),
            [](const SeedResult& a, const SeedResult& b) { return a.seed < b.seed; });
  return results;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = kahan_sum(xs) / xs.size();
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (xs.size() - 1) / xs.size())};
}

void write_outputs(const ExperimentConfig& cfg, const std::vector<SeedResult>& results,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  auto regret = open_out(dir / "regret.csv");
  regret << "seed,t,pseudo_regret_cumulative,realized_regret_cumulative,bound_value\n";
  for (const auto& r : results) {
    for (std::size_t t = 0; t < r.report.pseudo_cum.size(); ++t) {
      regret << r.seed << ',' << (t + 1) << ','
             << format_double(r.report.pseudo_cum[t]) << ','
             << format_double(r.report.realized_cum[t]) << ','
             << format_double(r.report.bound_curve[t]) << '\n';
    }
  }

  auto diag = open_out(dir / "diagnostics.csv");
  diag << "seed,kind,tau,t_of_tau,L_before,s_tilde,"
          "lemma1_max,lemma1_bound,lemma1_pass,lemma3_max,lemma3_bound,lemma3_pass\n";
  for (const auto& r : results) {
    for (const auto& row : r.vmap.rows) {
      diag << r.seed << ",vslot," << row.tau << ',' << row.t_of_tau << ','
           << row.l_before << ',' << row.s_tilde << ",,,,,,\n";
    }
    diag << r.seed << ",ratio_audit,,,,,"
         << format_double(r.audit.lemma1_max) << ','
         << format_double(r.audit.lemma1_bound) << ','
         << (r.audit.lemma1_pass ? 1 : 0) << ','
         << format_double(r.audit.lemma3_max) << ','
         << format_double(r.audit.lemma3_bound) << ','
         << (r.audit.lemma3_pass ? 1 : 0) << '\n';
  }

  auto summary = open_out(dir / "summary.csv");
  summary << "seed,final_pseudo_regret,final_realized_regret,bound_value\n";
  std::vector<double> pseudo, realized, bounds;
  for (const auto& r : results) {
    pseudo.push_back(r.report.final_pseudo());
    realized.push_back(r.report.final_realized());
    bounds.push_back(r.report.final_bound());
    summary << r.seed << ',' << format_double(r.report.final_pseudo()) << ','
            << format_double(r.report.final_realized()) << ','
            << format_double(r.report.final_bound()) << '\n';
  }
  auto [pm, pe] = mean_stderr(pseudo);
  auto [rm, re] = mean_stderr(realized);
  auto [bm, be] = mean_stderr(bounds);
  summary << "mean," << format_double(pm) << ',' << format_double(rm) << ','
          << format_double(bm) << '\n';
  summary << "stderr," << format_double(pe) << ',' << format_double(re) << ','
          << format_double(be) << '\n';

  auto meta = open_out(dir / "run_meta.txt");
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(cfg.config_hash));
  meta << "config_hash = " << hash_buf << '\n';
  meta << "feedback_order = descending-origin-within-round\n";
  meta << "estimation = "
       << (cfg.mode == EstimationMode::VirtualSlot ? "virtual-slot" : "frozen") << '\n';
  meta << "seeds =";
  for (auto s : cfg.seeds) meta << ' ' << s;
  meta << '\n';
  for (const auto& r : results) {
    meta << "seed " << r.seed << ": D = " << r.params.D
         << ", gamma = " << format_double(r.params.gamma)
         << ", delta1 = " << format_double(r.params.delta1)
         << ", delta2 = " << format_double(r.params.delta2)
         << ", feasible = " << (r.params.feasible() ? 1 : 0) << '\n';
  }
}

ExperimentConfig with_axis_value(const ExperimentConfig& base, const std::string& axis,
                                 std::int64_t value) {
  ExperimentConfig cfg = base;
  cfg.sweep_axis.clear();
  cfg.sweep_values.clear();
  if (axis == "T") {
    cfg.T = static_cast<int>(value);
  } else if (axis == "d_bar") {
    cfg.d_bar = static_cast<int>(value);
  } else if (axis == "k") {
    cfg.k = static_cast<int>(value);
  } else if (axis == "K") {
    cfg.K = static_cast<int>(value);
  } else {
    throw ConfigError("unknown sweep axis: " + axis);
  }
  return cfg;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  ExperimentConfig cfg;
  cfg.config_hash = fnv1a(content);

  std::map<std::string, std::string> kv;
  std::string section;
  std::istringstream lines(content);
  std::string line;
  while (std::getline(lines, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("bad config line: " + line);
    kv[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  auto has = [&](const std::string& key) { return kv.count(key) > 0; };
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  };

  cfg.K = static_cast<int>(parse_int(get("experiment.K"), "K"));
  cfg.k = static_cast<int>(parse_int(get("experiment.k"), "k"));
  cfg.T = static_cast<int>(parse_int(get("experiment.T"), "T"));
  for (const auto& s : split_csv(get("experiment.seeds")))
    cfg.seeds.push_back(static_cast<std::uint64_t>(parse_int(s, "seeds")));

  const std::string dkind = get("delays.kind");
  if (dkind == "fixed") {
    cfg.delay_kind = DelayKind::Fixed;
  } else if (dkind == "uniform-random") {
    cfg.delay_kind = DelayKind::UniformRandom;
  } else if (dkind == "adversarial-file") {
    cfg.delay_kind = DelayKind::AdversarialFile;
    cfg.delay_file = get("delays.file");
  } else {
    throw ConfigError("unknown delay kind: " + dkind);
  }
  cfg.d_bar = static_cast<int>(parse_int(get("delays.d_bar"), "d_bar"));

  const std::string lkind = get("losses.kind");
  if (lkind == "stochastic-bernoulli") {
    cfg.loss_kind = LossKind::StochasticBernoulli;
    for (const auto& s : split_csv(get("losses.means")))
      cfg.means.push_back(parse_double(s, "means"));
  } else if (lkind == "fixed-sequence") {
    cfg.loss_kind = LossKind::FixedSequence;
    cfg.loss_file = get("losses.file");
  } else if (lkind == "shifting-adversary") {
    cfg.loss_kind = LossKind::ShiftingAdversary;
    for (const auto& s : split_csv(get("losses.means")))
      cfg.means.push_back(parse_double(s, "means"));
    for (const auto& s : split_csv(get("losses.means_b")))
      cfg.means_alt.push_back(parse_double(s, "means_b"));
    cfg.period = static_cast<int>(parse_int(get("losses.period"), "period"));
  } else {
    throw ConfigError("unknown loss kind: " + lkind);
  }

  if (has("policy.estimation")) {
    const std::string& mode = get("policy.estimation");
    if (mode == "virtual-slot") {
      cfg.mode = EstimationMode::VirtualSlot;
    } else if (mode == "frozen") {
      cfg.mode = EstimationMode::Frozen;
    } else {
      throw ConfigError("unknown estimation mode: " + mode);
    }
  }
  if (has("policy.gamma")) cfg.gamma_override = parse_double(get("policy.gamma"), "gamma");
  if (has("policy.delta1")) cfg.delta1_override = parse_double(get("policy.delta1"), "delta1");
  if (has("policy.delta2")) cfg.delta2_override = parse_double(get("policy.delta2"), "delta2");

  if (has("output.dir")) cfg.out_dir = get("output.dir");

  if (has("sweep.axis")) {
    cfg.sweep_axis = get("sweep.axis");
    for (const auto& s : split_csv(get("sweep.values")))
      cfg.sweep_values.push_back(parse_int(s, "sweep.values"));
    if (cfg.sweep_values.empty()) throw ConfigError("sweep.values is empty");
  }

  if (cfg.K < 1 || cfg.k < 1 || cfg.k > cfg.K)
    throw ConfigError("need 1 <= k <= K");
  if (cfg.T < 1) throw ConfigError("need T >= 1");
  if (cfg.seeds.empty()) throw ConfigError("need at least one seed");
  if (cfg.d_bar < 0) throw ConfigError("need d_bar >= 0");
  if (cfg.loss_kind != LossKind::FixedSequence &&
      static_cast<int>(cfg.means.size()) != cfg.K)
    throw ConfigError("losses.means must hold K entries");
  if (cfg.loss_kind == LossKind::ShiftingAdversary &&
      (static_cast<int>(cfg.means_alt.size()) != cfg.K || cfg.period < 1))
    throw ConfigError("shifting adversary needs K means_b entries and period >= 1");
  for (double m : cfg.means)
    if (m < 0.0 || m > 1.0) throw ConfigError("mean outside [0,1]");
  for (double m : cfg.means_alt)
    if (m < 0.0 || m > 1.0) throw ConfigError("mean outside [0,1]");
  return cfg;
}

std::string validate_config(const ExperimentConfig& cfg) {
  // Dry-run the parameter schedule with a worst-case D = d_bar * T.
  const int d_bar = std::max(cfg.d_bar, 1);
  PolicyParams params = params_from_horizon(cfg.K, cfg.k, d_bar, cfg.T,
                                            static_cast<std::int64_t>(cfg.d_bar) * cfg.T);
  if (cfg.gamma_override) params.gamma = *cfg.gamma_override;
  if (cfg.delta1_override) params.delta1 = *cfg.delta1_override;
  if (cfg.delta2_override) params.delta2 = *cfg.delta2_override;
  if (params.gamma <= 0.0 || params.gamma > 1.0)
    throw ConfigError("gamma outside (0,1]");
  std::ostringstream os;
  os << "K=" << cfg.K << " k=" << cfg.k << " T=" << cfg.T
     << " seeds=" << cfg.seeds.size() << " gamma=" << format_double(params.gamma)
     << " delta1=" << format_double(params.delta1)
     << " delta2=" << format_double(params.delta2)
     << " feasible=" << (params.feasible() ? 1 : 0);
  return os.str();
}

void run_command(const ExperimentConfig& cfg) {
  auto results = run_all_seeds(cfg);
  write_outputs(cfg, results, cfg.out_dir);
}

void sweep_command(const ExperimentConfig& cfg) {
  if (cfg.sweep_axis.empty()) throw ConfigError("sweep requires a [sweep] section");
  std::filesystem::create_directories(cfg.out_dir);
  auto scaling = open_out(std::filesystem::path(cfg.out_dir) / "scaling.csv");
  scaling << "axis,value,mean_pseudo_regret,stderr_pseudo_regret,mean_bound_value\n";
  for (std::int64_t value : cfg.sweep_values) {
    ExperimentConfig point = with_axis_value(cfg, cfg.sweep_axis, value);
    point.out_dir = (std::filesystem::path(cfg.out_dir) /
                     (cfg.sweep_axis + "_" + std::to_string(value)))
                        .string();
    auto results = run_all_seeds(point);
    write_outputs(point, results, point.out_dir);
    std::vector<double> pseudo, bounds;
    for (const auto& r : results) {
      pseudo.push_back(r.report.final_pseudo());
      bounds.push_back(r.report.final_bound());
    }
    auto [pm, pe] = mean_stderr(pseudo);
    auto [bm, be] = mean_stderr(bounds);
    (void)be;
    scaling << cfg.sweep_axis << ',' << value << ',' << format_double(pm) << ','
            << format_double(pe) << ',' << format_double(bm) << '\n';
  }
}

}  // namespace dexp3m
