#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "ephx/config.hpp"
#include "ephx/errors.hpp"
#include "ephx/scenarios.hpp"

using namespace ephx;

namespace {

ScenarioConfig parse(const std::string& text) { return parse_scenario_config(ConfigFile::parse(text)); }

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line;
  }
  return -1;
}

std::vector<double> bumps(const Grid& g, std::initializer_list<double> centres, double width) {
  std::vector<double> q(g.nx, 0.0);
  for (int i = 0; i < g.nx; ++i)
    for (double c : centres) q[i] += std::exp(-std::pow((g.x(i) - c) / width, 2));
  return q;
}

}  // namespace

TEST(ConfigFile, SectionsKeysAndComments) {
  auto f = ConfigFile::parse("# header\n[grid]\nnx = 512   # points\n\n[potential]\nkind=free\n");
  EXPECT_EQ(f.find("grid", "nx")->value, "512");
  EXPECT_EQ(f.find("grid", "nx")->line, 3);
  EXPECT_EQ(f.find("potential", "kind")->value, "free");
  EXPECT_EQ(f.section_line("potential"), 5);
  EXPECT_EQ(f.section_line("demo"), 0);
  EXPECT_FALSE(f.has("grid", "dx"));
  f.set("grid", "dx", "0.4");
  EXPECT_EQ(f.find("grid", "dx")->line, 0);
}

TEST(ConfigFile, SyntaxErrorsCarryLines) {
  auto line_of = [](const std::string& text) {
    try {
      ConfigFile::parse(text);
    } catch (const ConfigError& e) {
      return e.line;
    }
    return -1;
  };
  EXPECT_EQ(line_of("nx = 3\n"), 1);
  EXPECT_EQ(line_of("[grid]\nnx = 1\nnx = 2\n"), 3);
  EXPECT_EQ(line_of("[grid]\n[grid]\n"), 2);
  EXPECT_EQ(line_of("[grid]\n\nnx =\n"), 3);
  EXPECT_EQ(line_of("[grid]\njust words\n"), 2);
  EXPECT_EQ(line_of("[gr id]\n"), 1);
}

TEST(ScenarioConfig, DefaultsPerScenario) {
  auto c = parse("[scenario]\nid = barrier_absorb\n");
  EXPECT_EQ(c.id, ScenarioId::BarrierAbsorb);
  EXPECT_EQ(c.potential, PotentialKind::DoubleBarrier);
  EXPECT_EQ(c.packet_resonance, 1);
  EXPECT_EQ(c.sign, +1);
  EXPECT_EQ(c.n_steps, 40);
  EXPECT_DOUBLE_EQ(c.dwell, 6.0);
  EXPECT_DOUBLE_EQ(c.e_gamma, 0.073);
  EXPECT_EQ(c.accumulation, EnergyAccumulation::Sequential);
  EXPECT_EQ(c.axis, ShiftAxis::ByGaugeClass);
  EXPECT_FALSE(c.t_s.has_value());
  EXPECT_DOUBLE_EQ(c.edge_limit, 1e-6);

  auto e = parse("[scenario]\nid = barrier_emit\n");
  EXPECT_EQ(e.packet_resonance, 2);
  EXPECT_EQ(e.sign, -1);
  auto f = parse("[scenario]\nid = free_emit\n");
  EXPECT_EQ(f.potential, PotentialKind::Free);
  EXPECT_DOUBLE_EQ(f.packet_energy, 0.096);
  auto w = parse("[scenario]\nid = exact_rabi\n");
  EXPECT_EQ(w.axis, ShiftAxis::Merged);
  EXPECT_EQ(w.accumulation, EnergyAccumulation::Cumulative);
}

TEST(ScenarioConfig, ValuesOverrideDefaults) {
  auto c = parse(
      "[scenario]\nid = free_absorb\n[grid]\nnx = 2048\ndx = 0.4\n[collision]\nn_steps = 20\ndwell = 3\n"
      "t_s = 100\naccumulation = cumulative\naxis = merged\nmodel = energy\n[output]\nwigner = none\nstride = 400\n"
      "trajectory = true\n");
  EXPECT_EQ(c.nx, 2048);
  EXPECT_DOUBLE_EQ(c.dx, 0.4);
  EXPECT_EQ(c.n_steps, 20);
  EXPECT_DOUBLE_EQ(*c.t_s, 100.0);
  EXPECT_EQ(c.accumulation, EnergyAccumulation::Cumulative);
  EXPECT_EQ(c.axis, ShiftAxis::Merged);
  EXPECT_EQ(c.model, ModelChoice::Energy);
  EXPECT_EQ(c.wigner, WignerFormat::None);
  EXPECT_TRUE(c.trajectory);
  EXPECT_DOUBLE_EQ(c.snapshot_interval(), 400 * c.dt);
}

TEST(ScenarioConfig, ErrorsPointAtTheLine) {
  EXPECT_EQ(error_line("[scenario]\nid = free_absorb\n[grid]\nnx = 1000\n"), 4);  // not a power of two
  EXPECT_EQ(error_line("[scenario]\nid = free_absorb\n[grid]\ndx = -1\n"), 4);
  EXPECT_EQ(error_line("[scenario]\nid = free_absorb\n[collision]\ncolour = red\n"), 4);
  EXPECT_EQ(error_line("[scenario]\nid = free_absorb\n\n[photons]\nn = 1\n"), 4);
  EXPECT_EQ(error_line("[scenario]\nid = free_absorb\n[collision]\nn_steps = many\n"), 4);
  EXPECT_EQ(error_line("[scenario]\nid = free_absorb\n[collision]\ndirection = sideways\n"), 4);
  EXPECT_EQ(error_line("[scenario]\nid = warp_drive\n"), 2);
  EXPECT_EQ(error_line("[scenario]\nid = barrier_absorb\n[packet]\nenergy = resonance:0\n"), 4);
  EXPECT_THROW(parse("[grid]\nnx = 512\n"), ConfigError);  // no scenario id
}

TEST(ScenarioConfig, RejectsPacketThatDoesNotFit) {
  EXPECT_THROW(parse("[scenario]\nid = free_absorb\n[grid]\nnx = 256\ndx = 0.2\n[packet]\nsigma = 35\n"), ConfigError);
}

TEST(ScenarioConfig, PresetsLoad) {
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(EPHX_PRESET_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    ++n;
    EXPECT_NO_THROW(load_scenario_config(entry.path().string())) << entry.path();
  }
  EXPECT_EQ(n, 7);
}

TEST(Checks, Relations) {
  EXPECT_TRUE(make_check("a", 1.0, "<=", 1.0).pass);
  EXPECT_FALSE(make_check("a", 1.0, "<", 1.0).pass);
  EXPECT_TRUE(make_check("a", 2.0, ">", 1.0).pass);
  EXPECT_TRUE(make_check("a", 2.0, "==", 2.0).pass);
  EXPECT_FALSE(make_check("a", std::nan(""), ">=", 0.0).pass);
  EXPECT_THROW(make_check("a", 1.0, "~", 1.0), InvalidArgument);
  ScenarioResult r;
  r.checks = {make_check("a", 1.0, "<", 2.0)};
  EXPECT_TRUE(r.all_passed());
  r.checks.push_back(make_check("b", 3.0, "<", 2.0));
  EXPECT_FALSE(r.all_passed());
}

TEST(WellMaxima, CountsProfiles) {
  Grid g = Grid::centered(1024, 0.05);
  EXPECT_EQ(count_well_maxima(bumps(g, {0.0}, 3.0), g, -8.0, 8.0), 1);
  EXPECT_EQ(count_well_maxima(bumps(g, {-4.0, 4.0}, 2.0), g, -8.0, 8.0), 2);
  EXPECT_EQ(count_well_maxima(std::vector<double>(g.nx, 0.0), g, -8.0, 8.0), 0);
  // a ripple below 5% of the main peak is ignored
  auto q = bumps(g, {0.0}, 3.0);
  for (int i = 0; i < g.nx; ++i) q[i] += 0.02 * std::exp(-std::pow((g.x(i) - 7.0) / 0.5, 2));
  EXPECT_EQ(count_well_maxima(q, g, -8.0, 8.0), 1);
}

TEST(EnergyTraces, ComparisonAndInterpolation) {
  EnergyTrace a{{0.0, 10.0, 20.0}, {0.0, 1.0, 4.0}};
  EXPECT_DOUBLE_EQ(a.at(5.0), 0.5);
  EXPECT_DOUBLE_EQ(a.at(-3.0), 0.0);
  EXPECT_DOUBLE_EQ(a.at(99.0), 4.0);
  EXPECT_DOUBLE_EQ(energy_trace_comparison(a, a), 0.0);
  EnergyTrace b{{0.0, 20.0}, {0.0, 2.0}};
  EXPECT_NEAR(energy_trace_comparison(a, b), 2.0, 1e-12);
  EnergyTrace late{{30.0, 40.0}, {0.0, 0.0}};
  EXPECT_THROW(energy_trace_comparison(a, late), InvalidArgument);
}

TEST(Scenarios, ReconstructionDemoPassesAndRepeats) {
  auto cfg = parse("[scenario]\nid = reconstruction_demo\n[demo]\ncount = 20\n");
  auto r1 = run_scenario(cfg, {});
  EXPECT_TRUE(r1.all_passed());
  auto r2 = run_scenario(cfg, {});
  ASSERT_EQ(r1.metrics.size(), r2.metrics.size());
  for (const auto& [k, v] : r1.metrics) EXPECT_EQ(v, r2.metrics.at(k)) << k;
}

TEST(Scenarios, PositivityDemo) {
  auto r = run_scenario(parse("[scenario]\nid = positivity_demo\n"), {});
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << " = " << c.value;
  EXPECT_LT(r.metrics.at("blind_min_Q"), 0.0);
}

TEST(Scenarios, ResonancesNeedABarrier) {
  auto c = parse("[scenario]\nid = barrier_absorb\n");
  auto e = scenario_resonances(c);
  ASSERT_GE(e.size(), 2u);
  EXPECT_NEAR(e[0], 0.023, 0.003);
  EXPECT_NEAR(e[1], 0.096, 0.005);
  EXPECT_THROW(scenario_resonances(parse("[scenario]\nid = free_absorb\n")), InvalidArgument);
}

TEST(Selftest, AllPass) {
  for (const auto& c : run_selftest()) EXPECT_TRUE(c.pass) << c.name << " = " << c.value;
}
