#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "experiment.hpp"

using namespace dexp3m;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string basic_config_text(const fs::path& out_dir) {
  std::ostringstream os;
  os << "[experiment]\nK = 4\nk = 2\nT = 50\nseeds = 1, 2\n"
     << "[delays]\nkind = uniform-random\nd_bar = 3\n"
     << "[losses]\nkind = stochastic-bernoulli\nmeans = 0.1, 0.4, 0.6, 0.9\n"
     << "[output]\ndir = " << out_dir.string() << "\n";
  return os.str();
}

}  // namespace

TEST_CASE("config round-trips through the parser") {
  auto dir = temp_dir("dexp3m_cfg");
  auto path = write_file(dir / "exp.ini", basic_config_text(dir / "out"));
  auto cfg = load_config(path);
  CHECK(cfg.K == 4);
  CHECK(cfg.k == 2);
  CHECK(cfg.T == 50);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(cfg.delay_kind == DelayKind::UniformRandom);
  CHECK(cfg.d_bar == 3);
  CHECK(cfg.means.size() == 4);
  CHECK(cfg.config_hash != 0);
  CHECK(validate_config(cfg).find("K=4") != std::string::npos);
}

TEST_CASE("config errors are reported as ConfigError") {
  auto dir = temp_dir("dexp3m_cfg_bad");
  CHECK_THROWS_AS(load_config((dir / "missing.ini").string()), IoError);
  auto bad = write_file(dir / "bad.ini", "[experiment]\nK = 2\nk = 5\nT = 10\nseeds = 1\n"
                                         "[delays]\nkind = fixed\nd_bar = 0\n"
                                         "[losses]\nkind = stochastic-bernoulli\nmeans = 0.5, 0.5\n");
  CHECK_THROWS_AS(load_config(bad), ConfigError);
}

TEST_CASE("run writes the expected artifacts") {
  auto dir = temp_dir("dexp3m_run");
  auto path = write_file(dir / "exp.ini", basic_config_text(dir / "out"));
  run_command(load_config(path));
  CHECK(fs::exists(dir / "out" / "regret.csv"));
  CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
  CHECK(fs::exists(dir / "out" / "summary.csv"));
  CHECK(fs::exists(dir / "out" / "run_meta.txt"));

  auto regret = slurp(dir / "out" / "regret.csv");
  CHECK(regret.rfind("seed,t,pseudo_regret_cumulative,realized_regret_cumulative,bound_value",
                     0) == 0);
  // 2 seeds x 50 rounds + header
  CHECK(std::count(regret.begin(), regret.end(), '\n') == 101);

  auto meta = slurp(dir / "out" / "run_meta.txt");
  CHECK(meta.find("estimation = virtual-slot") != std::string::npos);
  CHECK(meta.find("config_hash = ") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical CSVs") {
  auto dir = temp_dir("dexp3m_det");
  auto path = write_file(dir / "exp.ini", basic_config_text(dir / "out_a"));
  run_command(load_config(path));
  auto cfg = load_config(path);
  cfg.out_dir = (dir / "out_b").string();
  run_command(cfg);
  CHECK(slurp(dir / "out_a" / "regret.csv") == slurp(dir / "out_b" / "regret.csv"));
  CHECK(slurp(dir / "out_a" / "summary.csv") == slurp(dir / "out_b" / "summary.csv"));
  CHECK(slurp(dir / "out_a" / "diagnostics.csv") == slurp(dir / "out_b" / "diagnostics.csv"));
}

TEST_CASE("zero-loss environment reports zero final regret") {
  auto dir = temp_dir("dexp3m_zero");
  std::ostringstream losses;
  for (int t = 0; t < 20; ++t) losses << "0 0 0\n";
  auto loss_path = write_file(dir / "losses.txt", losses.str());
  std::ostringstream os;
  os << "[experiment]\nK = 3\nk = 1\nT = 20\nseeds = 7\n"
     << "[delays]\nkind = fixed\nd_bar = 0\n"
     << "[losses]\nkind = fixed-sequence\nfile = " << loss_path << "\n"
     << "[output]\ndir = " << (dir / "out").string() << "\n";
  auto path = write_file(dir / "exp.ini", os.str());
  run_command(load_config(path));
  auto summary = slurp(dir / "out" / "summary.csv");
  CHECK(summary.find("7,0,0,") != std::string::npos);
}

TEST_CASE("sweep writes one subdirectory per axis value plus scaling.csv") {
  auto dir = temp_dir("dexp3m_sweep");
  std::ostringstream os;
  os << basic_config_text(dir / "out")
     << "[sweep]\naxis = d_bar\nvalues = 1, 3\n";
  auto path = write_file(dir / "exp.ini", os.str());
  sweep_command(load_config(path));
  CHECK(fs::exists(dir / "out" / "scaling.csv"));
  CHECK(fs::exists(dir / "out" / "d_bar_1" / "summary.csv"));
  CHECK(fs::exists(dir / "out" / "d_bar_3" / "summary.csv"));
  auto scaling = slurp(dir / "out" / "scaling.csv");
  CHECK(scaling.rfind("axis,value,", 0) == 0);
  CHECK(std::count(scaling.begin(), scaling.end(), '\n') == 3);
}

TEST_CASE("single-value sweep matches a plain run") {
  auto dir = temp_dir("dexp3m_sweep_single");
  std::ostringstream os;
  os << basic_config_text(dir / "sweep_out") << "[sweep]\naxis = T\nvalues = 50\n";
  auto path = write_file(dir / "exp.ini", os.str());
  auto cfg = load_config(path);
  sweep_command(cfg);

  cfg.sweep_axis.clear();
  cfg.out_dir = (dir / "run_out").string();
  run_command(cfg);
  CHECK(slurp(dir / "sweep_out" / "T_50" / "regret.csv") ==
        slurp(dir / "run_out" / "regret.csv"));
}

TEST_CASE("bound column scales exactly as sqrt(k) across a k sweep") {
  auto dir = temp_dir("dexp3m_sweep_k");
  std::ostringstream os;
  os << "[experiment]\nK = 8\nk = 1\nT = 40\nseeds = 1\n"
     << "[delays]\nkind = fixed\nd_bar = 2\n"
     << "[losses]\nkind = stochastic-bernoulli\n"
     << "means = 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8\n"
     << "[output]\ndir = " << (dir / "out").string() << "\n"
     << "[sweep]\naxis = k\nvalues = 1, 2, 4\n";
  auto path = write_file(dir / "exp.ini", os.str());
  sweep_command(load_config(path));

  auto scaling = slurp(dir / "out" / "scaling.csv");
  std::istringstream lines(scaling);
  std::string line;
  std::getline(lines, line);  // header
  std::vector<double> bounds;
  while (std::getline(lines, line)) {
    auto pos = line.rfind(',');
    bounds.push_back(std::stod(line.substr(pos + 1)));
  }
  REQUIRE(bounds.size() == 3);
  CHECK(bounds[1] / bounds[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(bounds[2] / bounds[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("format_double uses 12 significant digits") {
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(0.0) == "0");
}
