#include <cmath>
#include <cstdlib>
#include <set>

#include "ephx/errors.hpp"
#include "ephx/scenarios.hpp"

namespace ephx {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"scenario", {"id", "label"}},
      {"grid", {"nx", "dx"}},
      {"potential", {"kind", "barrier_width", "height", "well_width", "center"}},
      {"packet", {"energy", "sigma", "center"}},
      {"collision", {"model", "direction", "e_gamma", "n_steps", "dwell", "t_s", "accumulation", "axis"}},
      {"run", {"t_end", "propagator", "dt", "edge_margin", "edge_limit", "t_search"}},
      {"exact", {"hbar_omega", "alpha", "dt", "t_end"}},
      {"compare", {"enabled", "hbar_omega", "n_steps", "sample"}},
      {"well", {"x_min", "x_max"}},
      {"output", {"stride", "wigner", "x_min", "x_max", "k_min", "k_max", "x_stride", "k_stride", "marginals", "trajectory",
                  "spectral", "e_max"}},
      {"demo", {"count", "seed"}},
  };
  return s;
}

class Reader {
public:
  explicit Reader(const ConfigFile& f) : f_(f) {}

  const ConfigFile::Entry* get(const std::string& sec, const std::string& key) const { return f_.find(sec, key); }

  [[noreturn]] void fail(const std::string& sec, const std::string& key, const std::string& msg) const {
    const auto* e = get(sec, key);
    throw ConfigError("[" + sec + "] " + key + ": " + msg, e ? e->line : 0);
  }

  bool is_auto(const std::string& sec, const std::string& key) const {
    const auto* e = get(sec, key);
    return e && e->value == "auto";
  }

  double number(const std::string& sec, const std::string& key, double def) const {
    const auto* e = get(sec, key);
    if (!e) return def;
    return parse_number(sec, key, e->value);
  }

  std::optional<double> number_or_auto(const std::string& sec, const std::string& key,
                                       std::optional<double> def = std::nullopt) const {
    const auto* e = get(sec, key);
    if (!e) return def;
    if (e->value == "auto") return std::nullopt;
    return parse_number(sec, key, e->value);
  }

  long integer(const std::string& sec, const std::string& key, long def) const {
    const auto* e = get(sec, key);
    if (!e) return def;
    char* end = nullptr;
    long v = std::strtol(e->value.c_str(), &end, 10);
    if (end == e->value.c_str() || *end != '\0') fail(sec, key, "expected an integer, got '" + e->value + "'");
    return v;
  }

  bool flag(const std::string& sec, const std::string& key, bool def) const {
    const auto* e = get(sec, key);
    if (!e) return def;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    fail(sec, key, "expected true or false, got '" + e->value + "'");
  }

  std::string word(const std::string& sec, const std::string& key, const std::string& def,
                   const std::set<std::string>& allowed) const {
    const auto* e = get(sec, key);
    if (!e) return def;
    if (!allowed.count(e->value)) {
      std::string opts;
      for (const auto& a : allowed) opts += (opts.empty() ? "" : "|") + a;
      fail(sec, key, "expected one of " + opts + ", got '" + e->value + "'");
    }
    return e->value;
  }

  double parse_number(const std::string& sec, const std::string& key, const std::string& v) const {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(d)) fail(sec, key, "expected a number, got '" + v + "'");
    return d;
  }

private:
  const ConfigFile& f_;
};

ScenarioId parse_id(const Reader& r) {
  static const std::map<std::string, ScenarioId> ids = {
      {"exact_rabi", ScenarioId::ExactRabi},
      {"free_absorb", ScenarioId::FreeAbsorb},
      {"free_emit", ScenarioId::FreeEmit},
      {"barrier_absorb", ScenarioId::BarrierAbsorb},
      {"barrier_emit", ScenarioId::BarrierEmit},
      {"reconstruction_demo", ScenarioId::ReconstructionDemo},
      {"positivity_demo", ScenarioId::PositivityDemo},
  };
  const auto* e = r.get("scenario", "id");
  if (!e) throw ConfigError("missing [scenario] id");
  auto it = ids.find(e->value);
  if (it == ids.end()) r.fail("scenario", "id", "unknown scenario '" + e->value + "'");
  return it->second;
}

// Per-scenario defaults applied before reading the file.
void apply_defaults(ScenarioConfig& c) {
  switch (c.id) {
    case ScenarioId::FreeAbsorb:
      c.potential = PotentialKind::Free;
      c.dx = 0.4;
      c.packet_energy = 0.023;
      c.packet_center = -150.0;
      c.sign = +1;
      break;
    case ScenarioId::FreeEmit:
      c.potential = PotentialKind::Free;
      c.dx = 0.4;
      c.packet_energy = 0.096;
      c.packet_center = -150.0;
      c.sign = -1;
      break;
    case ScenarioId::BarrierAbsorb:
      c.potential = PotentialKind::DoubleBarrier;
      c.packet_resonance = 1;
      c.sign = +1;
      break;
    case ScenarioId::BarrierEmit:
      c.potential = PotentialKind::DoubleBarrier;
      c.packet_resonance = 2;
      c.sign = -1;
      break;
    case ScenarioId::ExactRabi:
      c.nx = 256;
      c.potential = PotentialKind::DoubleBarrier;
      c.barrier_width = 14.0;
      c.edge_margin = 2.0;
      c.edge_limit = 1e-3;
      c.out_x_stride = 1;
      break;
    case ScenarioId::ReconstructionDemo:
      c.nx = 512;
      c.potential = PotentialKind::DoubleBarrier;
      c.wigner = WignerFormat::None;
      break;
    case ScenarioId::PositivityDemo:
      c.nx = 1024;
      c.potential = PotentialKind::Free;
      c.out_x_stride = 1;
      break;
  }
}

bool power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::ExactRabi: return "exact_rabi";
    case ScenarioId::FreeAbsorb: return "free_absorb";
    case ScenarioId::FreeEmit: return "free_emit";
    case ScenarioId::BarrierAbsorb: return "barrier_absorb";
    case ScenarioId::BarrierEmit: return "barrier_emit";
    case ScenarioId::ReconstructionDemo: return "reconstruction_demo";
    case ScenarioId::PositivityDemo: return "positivity_demo";
  }
  return "?";
}

double ScenarioConfig::snapshot_interval() const { return stride > 0 ? stride * dt : 10.0; }
double ScenarioConfig::well_lo() const { return well_x_min ? *well_x_min : center - 0.5 * well_width; }
double ScenarioConfig::well_hi() const { return well_x_max ? *well_x_max : center + 0.5 * well_width; }

ScenarioConfig parse_scenario_config(const ConfigFile& file) {
  for (const auto& sec : file.sections()) {
    auto it = schema().find(sec);
    if (it == schema().end()) {
      throw ConfigError("unknown section [" + sec + "]", file.section_line(sec));
    }
    for (const auto& [key, e] : file.section(sec))
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + sec + "]", e.line);
  }

  Reader r(file);
  ScenarioConfig c;
  c.id = parse_id(r);
  apply_defaults(c);
  if (const auto* e = r.get("scenario", "label")) c.label = e->value;

  long nx = r.integer("grid", "nx", c.nx);
  if (!power_of_two(nx) || nx < 16) r.fail("grid", "nx", "must be a power of two >= 16");
  c.nx = static_cast<int>(nx);
  c.dx = r.number("grid", "dx", c.dx);
  if (!(c.dx > 0.0)) r.fail("grid", "dx", "must be positive");

  std::string kind = r.word("potential", "kind", c.potential == PotentialKind::Free ? "free" : "double_barrier",
                            {"free", "double_barrier"});
  c.potential = kind == "free" ? PotentialKind::Free : PotentialKind::DoubleBarrier;
  c.barrier_width = r.number("potential", "barrier_width", c.barrier_width);
  c.height = r.number("potential", "height", c.height);
  c.well_width = r.number("potential", "well_width", c.well_width);
  c.center = r.number("potential", "center", c.center);
  if (c.potential == PotentialKind::DoubleBarrier) {
    if (!(c.barrier_width > 0.0)) r.fail("potential", "barrier_width", "must be positive");
    if (!(c.well_width > 0.0)) r.fail("potential", "well_width", "must be positive");
    if (c.height < 0.0) r.fail("potential", "height", "must be >= 0");
    double half = c.well_width / 2 + c.barrier_width + c.dx;
    double edge = 0.5 * (c.nx - 1) * c.dx;
    if (std::abs(c.center) + half > edge) r.fail("potential", "well_width", "structure does not fit on the grid");
  }

  if (const auto* e = r.get("packet", "energy")) {
    const std::string pre = "resonance:";
    if (e->value.rfind(pre, 0) == 0) {
      char* end = nullptr;
      long n = std::strtol(e->value.c_str() + pre.size(), &end, 10);
      if (*end != '\0' || n < 1) r.fail("packet", "energy", "expected resonance:N with N >= 1");
      if (c.potential != PotentialKind::DoubleBarrier) r.fail("packet", "energy", "resonance:N needs a double barrier");
      c.packet_resonance = static_cast<int>(n);
    } else {
      c.packet_energy = r.parse_number("packet", "energy", e->value);
      c.packet_resonance = 0;
      if (!(c.packet_energy > 0.0)) r.fail("packet", "energy", "must be positive");
    }
  }
  c.sigma = r.number("packet", "sigma", c.sigma);
  if (!(c.sigma > 0.0)) r.fail("packet", "sigma", "must be positive");
  c.packet_center = r.number_or_auto("packet", "center", c.packet_center);
  if (c.packet_center) {
    double edge = 0.5 * (c.nx - 1) * c.dx;
    if (std::abs(*c.packet_center) + 5.0 * c.sigma > edge)
      r.fail("packet", "center", "packet does not fit on the grid with a 5 sigma margin");
  }

  std::string model = r.word("collision", "model", "both", {"energy", "momentum", "both"});
  c.model = model == "energy" ? ModelChoice::Energy : model == "momentum" ? ModelChoice::Momentum : ModelChoice::Both;
  std::string dir = r.word("collision", "direction", c.sign > 0 ? "absorb" : "emit", {"absorb", "emit"});
  c.sign = dir == "absorb" ? +1 : -1;
  c.e_gamma = r.number("collision", "e_gamma", c.e_gamma);
  if (!(c.e_gamma > 0.0)) r.fail("collision", "e_gamma", "must be positive");
  long n_steps = r.integer("collision", "n_steps", c.n_steps);
  if (n_steps < 1) r.fail("collision", "n_steps", "must be >= 1");
  c.n_steps = static_cast<int>(n_steps);
  c.dwell = r.number("collision", "dwell", c.dwell);
  if (!(c.dwell >= 0.0)) r.fail("collision", "dwell", "must be >= 0");
  c.t_s = r.number_or_auto("collision", "t_s");
  if (c.t_s && *c.t_s < 0.0) r.fail("collision", "t_s", "must be >= 0");
  // substeps on a sparse bound spectrum leak weight below the ground level, so the well takes one shift per sample
  const char* acc_default = c.id == ScenarioId::ExactRabi ? "cumulative" : "sequential";
  std::string acc = r.word("collision", "accumulation", acc_default, {"cumulative", "sequential"});
  c.accumulation = acc == "cumulative" ? EnergyAccumulation::Cumulative : EnergyAccumulation::Sequential;
  // a bound level has one parity and its neighbour the other, so the compact well shifts on the merged axis
  const char* axis_default = c.id == ScenarioId::ExactRabi ? "merged" : "by_class";
  std::string axis = r.word("collision", "axis", axis_default, {"by_class", "merged"});
  c.axis = axis == "merged" ? ShiftAxis::Merged : ShiftAxis::ByGaugeClass;

  c.t_end = r.number_or_auto("run", "t_end");
  c.split_propagator = r.word("run", "propagator", "spectral", {"spectral", "split"}) == "split";
  c.dt = r.number("run", "dt", c.dt);
  if (!(c.dt > 0.0)) r.fail("run", "dt", "must be positive");
  c.edge_margin = r.number("run", "edge_margin", c.edge_margin);
  if (!(c.edge_margin >= 0.0)) r.fail("run", "edge_margin", "must be >= 0");
  c.edge_limit = r.number("run", "edge_limit", c.edge_limit);
  if (!(c.edge_limit > 0.0)) r.fail("run", "edge_limit", "must be positive");
  c.t_search = r.number("run", "t_search", c.t_search);
  if (!(c.t_search > 0.0)) r.fail("run", "t_search", "must be positive");

  c.hbar_omega = r.number("exact", "hbar_omega", c.hbar_omega);
  if (!(c.hbar_omega > 0.0)) r.fail("exact", "hbar_omega", "must be positive");
  c.alpha = r.number("exact", "alpha", c.alpha);
  c.exact_dt = r.number("exact", "dt", c.exact_dt);
  if (!(c.exact_dt > 0.0)) r.fail("exact", "dt", "must be positive");
  c.exact_t_end = r.number("exact", "t_end", c.exact_t_end);
  if (!(c.exact_t_end > 0.0)) r.fail("exact", "t_end", "must be positive");

  c.compare = r.flag("compare", "enabled", c.compare);
  c.compare_hbar_omega = r.number_or_auto("compare", "hbar_omega");
  if (c.compare_hbar_omega && !(*c.compare_hbar_omega > 0.0)) r.fail("compare", "hbar_omega", "must be positive");
  long cs = r.integer("compare", "n_steps", c.compare_steps);
  if (cs < 1) r.fail("compare", "n_steps", "must be >= 1");
  c.compare_steps = static_cast<int>(cs);
  c.compare_sample = r.number("compare", "sample", c.compare_sample);
  if (!(c.compare_sample > 0.0)) r.fail("compare", "sample", "must be positive");

  if (r.get("well", "x_min")) c.well_x_min = r.number("well", "x_min", 0.0);
  if (r.get("well", "x_max")) c.well_x_max = r.number("well", "x_max", 0.0);
  if (!(c.well_lo() < c.well_hi())) r.fail("well", "x_max", "empty well window");
  if (std::max(std::abs(c.well_lo()), std::abs(c.well_hi())) > 0.5 * (c.nx - 1) * c.dx)
    r.fail("well", "x_max", "well window outside the grid");

  c.stride = r.integer("output", "stride", 0);
  if (c.stride < 0) r.fail("output", "stride", "must be >= 0");
  std::string wf = r.word("output", "wigner",
                          c.wigner == WignerFormat::None ? "none" : "binary", {"none", "binary", "csv", "both"});
  c.wigner = wf == "none" ? WignerFormat::None
             : wf == "binary" ? WignerFormat::Binary
             : wf == "csv" ? WignerFormat::Csv
                           : WignerFormat::Both;
  c.out_x_min = r.number("output", "x_min", c.out_x_min);
  c.out_x_max = r.number("output", "x_max", c.out_x_max);
  c.out_k_min = r.number("output", "k_min", c.out_k_min);
  c.out_k_max = r.number("output", "k_max", c.out_k_max);
  if (!(c.out_x_min < c.out_x_max)) r.fail("output", "x_max", "empty x window");
  if (!(c.out_k_min < c.out_k_max)) r.fail("output", "k_max", "empty k window");
  long xs = r.integer("output", "x_stride", c.out_x_stride), ks = r.integer("output", "k_stride", c.out_k_stride);
  if (xs < 1) r.fail("output", "x_stride", "must be >= 1");
  if (ks < 1) r.fail("output", "k_stride", "must be >= 1");
  c.out_x_stride = static_cast<int>(xs);
  c.out_k_stride = static_cast<int>(ks);
  c.marginals = r.flag("output", "marginals", c.marginals);
  c.trajectory = r.flag("output", "trajectory", c.trajectory);
  c.spectral = r.flag("output", "spectral", c.spectral);
  c.out_e_max = r.number("output", "e_max", c.out_e_max);
  if (!(c.out_e_max > 0.0)) r.fail("output", "e_max", "must be positive");

  long count = r.integer("demo", "count", c.demo_count);
  if (count < 1) r.fail("demo", "count", "must be >= 1");
  c.demo_count = static_cast<int>(count);
  long seed = r.integer("demo", "seed", static_cast<long>(c.seed));
  if (seed < 0) r.fail("demo", "seed", "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) { return parse_scenario_config(ConfigFile::load(path)); }

}  // namespace ephx
