#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "axon/errors.hpp"
#include "axon/model.hpp"
#include "axon/scenario.hpp"
#include "axon/trace_io.hpp"

namespace axon {
namespace {

ScenarioConfig short_run() {
  auto cfg = ScenarioConfig::reference();
  cfg.n = 32;
  cfg.dt = 2e-3;
  cfg.t_final = 20.0;
  cfg.kernel_grid = 65;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

TEST(Scenario, RunsAreDeterministic) {
  const auto cfg = short_run();
  const auto a = run_scenario(cfg), b = run_scenario(cfg);
  write_trace_csv(a, temp("axon_trace_a.csv").string());
  write_trace_csv(b, temp("axon_trace_b.csv").string());
  const std::string sa = slurp(temp("axon_trace_a.csv"));
  EXPECT_EQ(sa, slurp(temp("axon_trace_b.csv")));
  EXPECT_EQ(sa.substr(0, sa.find('\n')), trace_header());
  EXPECT_EQ(trace_header(), "t,l,c_c,y1,y2,U,q_s,h1_u,h1_uhat,h1_tilde,|X|,|X̂|,|X̃|");
  EXPECT_EQ(a.rows.size(), 41u);  // every 0.5 s including t = 0
  std::filesystem::remove(temp("axon_trace_a.csv"));
  std::filesystem::remove(temp("axon_trace_b.csv"));
}

TEST(Scenario, KernelCacheRoundTrip) {
  auto cfg = short_run();
  cfg.kernel_cache = temp("axon_cache_P.txt").string();
  std::filesystem::remove(cfg.kernel_cache);
  const auto solved = scenario_kernel(cfg);
  ASSERT_TRUE(std::filesystem::exists(cfg.kernel_cache));
  const auto loaded = scenario_kernel(cfg);
  EXPECT_EQ(solved->packed(), loaded->packed());
  cfg.gains.lambda = 0.07;  // stale cache
  EXPECT_THROW((void)scenario_kernel(cfg), ConfigError);
  std::filesystem::remove(cfg.kernel_cache);
}

TEST(Scenario, GainSubstitutionAndStrictMode) {
  auto cfg = short_run();
  const EquilibriumProfile eq(cfg.params, cfg.l_s);
  const LinearModel m = linearize(cfg.params, eq);
  std::vector<std::string> notes;
  const GainConfig g = resolve_gains(cfg, m, notes);
  EXPECT_EQ(g.K, place_controller_poles(m, cfg.substitute_rate));
  bool substituted = false;
  for (const auto& n : notes) substituted |= n.rfind("gain substitution", 0) == 0;
  EXPECT_TRUE(substituted);

  cfg.strict_gains = true;
  EXPECT_THROW((void)resolve_gains(cfg, m, notes), ConfigError);
  cfg.gains.K = place_controller_poles(m, 0.05);
  notes.clear();
  EXPECT_NO_THROW((void)resolve_gains(cfg, m, notes));
  EXPECT_TRUE(notes.empty());
}

TEST(Scenario, GrowthBeyondKernelDomainThrows) {
  auto cfg = short_run();
  cfg.l_bar = 5e-6;
  EXPECT_THROW((void)run_scenario(cfg), DomainError);
}

TEST(Scenario, PlotScriptAndProfilesWritten) {
  auto cfg = short_run();
  cfg.snapshot_every = 10.0;
  const auto trace = run_scenario(cfg);
  const auto dir = temp("axon_scenario_out");
  std::filesystem::create_directories(dir);
  write_profiles(trace, dir.string());
  write_plot_script(dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "profiles.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "profile_0.csv"));
  EXPECT_NE(slurp(dir / "plot_trace.py").find("trace.csv"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace axon
