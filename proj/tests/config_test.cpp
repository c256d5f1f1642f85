#include <cmath>

#include <gtest/gtest.h>

#include "axon/config.hpp"
#include "axon/errors.hpp"
#include "axon/scenario.hpp"

namespace axon {
namespace {

TEST(Units, ScalesAndDimensions) {
  const Unit d = parse_unit("um2/s");
  EXPECT_DOUBLE_EQ(d.scale, 1e-12);
  EXPECT_EQ(d.dim, dims::diffusivity);
  EXPECT_EQ(parse_unit("/s").dim, dims::rate);
  EXPECT_EQ(parse_unit("1/s").dim, dims::rate);
  EXPECT_DOUBLE_EQ(parse_unit("min").scale, 60.0);
  EXPECT_DOUBLE_EQ(parse_unit("ms").scale, 1e-3);
  EXPECT_EQ(parse_unit("mol/m3").dim, dims::concentration);
  EXPECT_EQ(parse_unit("m4/mol/s").dim, dims::growth);
  EXPECT_DOUBLE_EQ(parse_unit("um/s").scale, 1e-6);
  EXPECT_THROW((void)parse_unit("furlong"), ConfigError);
  EXPECT_THROW((void)parse_unit(""), ConfigError);
}

TEST(ConfigDocument, ValuesConvertToSi) {
  const auto doc = ConfigDocument::parse(
      "[a]\nx = 4 um\ny = 2 min  # comment\nflag = true\nname = \"hi\"\nv = [1, 2.5]\nbare = 0.5\n", "t");
  EXPECT_DOUBLE_EQ(*doc.number("a.x", dims::length), 4e-6);
  EXPECT_DOUBLE_EQ(*doc.number("a.y", dims::time), 120.0);
  EXPECT_EQ(*doc.boolean("a.flag"), true);
  EXPECT_EQ(*doc.string("a.name"), "hi");
  EXPECT_EQ(*doc.array("a.v", 2), (std::vector<double>{1, 2.5}));
  EXPECT_DOUBLE_EQ(*doc.number("a.bare", dims::time), 0.5);
  EXPECT_FALSE(doc.number("a.missing", dims::time).has_value());
}

// Each error message carries "source:line".
void expect_error_at(const std::string& text, const std::string& where, bool reject_unknown = false) {
  try {
    const auto doc = ConfigDocument::parse(text, "t");
    (void)doc.number("s.x", dims::length);
    (void)doc.array("s.v", 2);
    if (reject_unknown) doc.reject_unknown();
    FAIL() << "no error for: " << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
  }
}

TEST(ConfigDocument, ErrorsCarryLineNumbers) {
  expect_error_at("[s]\nx = 1 um\nx = 2 um\n", "t:3");
  expect_error_at("[s]\n\nx = 3 s\n", "t:3");
  expect_error_at("[s]\nv = [1, two]\n", "t:2");
  expect_error_at("[s]\nname = \"open\n", "t:2");
  expect_error_at("[s]\nx = 1 um\nzzz = 1\n", "t:3", true);
  expect_error_at("[s\n", "t:1");
  expect_error_at("[s]\nv = [1, 2, 3]\n", "t:2");
}

TEST(Scenario, ReferenceFileMatchesDefaults) {
  const auto cfg = load_scenario(std::string(AXON_SOURCE_DIR) + "/configs/reference.toml");
  const auto ref = ScenarioConfig::reference();
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::abs(b); };
  EXPECT_TRUE(close(cfg.params.D, ref.params.D));
  EXPECT_TRUE(close(cfg.params.a, ref.params.a));
  EXPECT_TRUE(close(cfg.params.g, ref.params.g));
  EXPECT_TRUE(close(cfg.params.r_g, ref.params.r_g));
  EXPECT_TRUE(close(cfg.params.r_g_tilde, ref.params.r_g_tilde));
  EXPECT_TRUE(close(cfg.params.l_c, ref.params.l_c));
  EXPECT_TRUE(close(cfg.params.c_inf, ref.params.c_inf));
  EXPECT_TRUE(close(cfg.l_s, ref.l_s));
  EXPECT_TRUE(close(cfg.l0, ref.l0));
  EXPECT_TRUE(close(cfg.gains.lambda, ref.gains.lambda));
  EXPECT_TRUE(close(cfg.gains.gamma1, ref.gains.gamma1));
  EXPECT_EQ(cfg.gains.L, ref.gains.L);
  EXPECT_EQ(cfg.gains.K, ref.gains.K);
  EXPECT_EQ(cfg.n, ref.n);
  EXPECT_TRUE(close(cfg.dt, ref.dt));
  EXPECT_DOUBLE_EQ(cfg.t_final, 240.0);
  EXPECT_EQ(cfg.mode, RunMode::closed_loop);
}

TEST(Scenario, RejectsWrongDimension) {
  EXPECT_THROW((void)load_scenario(std::string(AXON_SOURCE_DIR) + "/tests/data/bad_unit.toml"), ConfigError);
  EXPECT_THROW((void)load_scenario("/nonexistent/axon.toml"), ConfigError);
  EXPECT_THROW((void)scenario_from_document(ConfigDocument::parse("[run]\nmode = \"sideways\"\n")), ConfigError);
}

TEST(Scenario, ValidateRejectsBadGrid) {
  auto cfg = ScenarioConfig::reference();
  cfg.n = 2;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ScenarioConfig::reference();
  cfg.l0 = 30e-6;  // beyond the kernel domain
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.mode = RunMode::plant_only;
  EXPECT_NO_THROW(cfg.validate());
}

}  // namespace
}  // namespace axon
