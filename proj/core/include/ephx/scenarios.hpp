#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ephx/collisions.hpp"
#include "ephx/config.hpp"
#include "ephx/units.hpp"

namespace ephx {

enum class ScenarioId { ExactRabi, FreeAbsorb, FreeEmit, BarrierAbsorb, BarrierEmit, ReconstructionDemo, PositivityDemo };
enum class PotentialKind { Free, DoubleBarrier };
enum class ModelChoice { Energy, Momentum, Both };
enum class WignerFormat { None, Binary, Csv, Both };

const char* to_string(ScenarioId id);

struct ScenarioConfig {
  ScenarioId id = ScenarioId::FreeAbsorb;
  std::string label;

  // [grid]
  int nx = 4096;
  double dx = 0.2;  // nm

  // [potential]
  PotentialKind potential = PotentialKind::Free;
  double barrier_width = 2.0;  // nm
  double height = 0.3;         // eV
  double well_width = 16.0;    // nm
  double center = 0.0;         // nm

  // [packet]; energy = resonance:N picks the N-th transmission peak (1-based)
  double packet_energy = 0.023;  // eV
  int packet_resonance = 0;
  double sigma = 35.0;           // nm
  std::optional<double> packet_center;  // nm; default -4 sigma - 50 left of the structure

  // [collision]
  ModelChoice model = ModelChoice::Both;
  int sign = +1;  // absorb = +1, emit = -1
  double e_gamma = 0.073;  // eV
  int n_steps = 40;
  double dwell = 6.0;  // fs
  std::optional<double> t_s;  // fs; auto when empty
  EnergyAccumulation accumulation = EnergyAccumulation::Sequential;
  ShiftAxis axis = ShiftAxis::ByGaugeClass;

  // [run]
  std::optional<double> t_end;  // fs; schedule end when empty
  bool split_propagator = false;
  double dt = 0.005;           // fs, split-operator step and unit of the snapshot stride
  double edge_margin = 40.0;   // nm
  double edge_limit = 1e-6;
  double t_search = 2000.0;    // fs, horizon of the automatic t_s search

  // [exact]
  double hbar_omega = 0.073;  // eV
  double alpha = 2e-3;        // eV/nm
  double exact_dt = 0.0025;   // fs
  double exact_t_end = 300.0; // fs

  // [compare]
  bool compare = true;
  std::optional<double> compare_hbar_omega;  // eV; auto = E1 - E0 of the well
  int compare_steps = 40;
  double compare_sample = 0.5;  // fs between exact-run samples

  // [well]; defaults to the inter-barrier interval
  std::optional<double> well_x_min, well_x_max;

  // [output]
  long stride = 0;  // snapshot interval in units of dt; 0 = 10 fs
  WignerFormat wigner = WignerFormat::Binary;
  double out_x_min = -1e300, out_x_max = 1e300;
  double out_k_min = -1.0, out_k_max = 1.0;  // nm^-1
  int out_x_stride = 2, out_k_stride = 1;
  bool marginals = true;
  bool trajectory = false;  // psi CSV at every snapshot
  bool spectral = true;
  double out_e_max = 0.5;  // eV, top of the written spectral densities

  // [demo]
  int demo_count = 24;
  std::uint64_t seed = 20240601;

  double snapshot_interval() const;  // fs
  double well_lo() const;
  double well_hi() const;
};

// Validates section and key names; unknown keys raise ConfigError with the offending line.
ScenarioConfig parse_scenario_config(const ConfigFile& file);
ScenarioConfig load_scenario_config(const std::string& path);

struct Check {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "<", ">", "=="
  double threshold = 0.0;
  bool pass = false;
};

Check make_check(const std::string& name, double value, const std::string& relation, double threshold);

struct ScenarioResult {
  ScenarioId id = ScenarioId::FreeAbsorb;
  std::vector<Check> checks;
  std::map<std::string, double> metrics;
  bool all_passed() const;
};

struct RunOptions {
  std::string out_dir;     // empty = no files
  std::ostream* log = nullptr;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt);

// Local maxima (flat tops count once) of the 3-point moving average of Q inside [x_min, x_max], ignoring peaks
// below 5% of the largest smoothed value in that window.
int count_well_maxima(const std::vector<double>& Q, const Grid& g, double x_min, double x_max);

struct EnergyTrace {
  std::vector<double> t;  // fs, increasing
  std::vector<double> e;  // eV
  double at(double t_fs) const;  // linear interpolation, clamped
};

// max |E_approx(t) - E_exact(t)| over the exact samples inside the common time range; the
// approximate trace is linearly interpolated. Throws InvalidArgument when the ranges do not overlap.
double energy_trace_comparison(const EnergyTrace& exact, const EnergyTrace& approx);

// Resonances quoted by the `resonances` command (requires a double-barrier potential).
std::vector<double> scenario_resonances(const ScenarioConfig& cfg);

// Fast invariant checks for `ephx selftest`.
std::vector<Check> run_selftest();

}  // namespace ephx
