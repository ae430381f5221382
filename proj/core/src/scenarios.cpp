#include "ephx/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <ostream>
#include <random>

#include "ephx/csv.hpp"
#include "ephx/ensemble.hpp"
#include "ephx/errors.hpp"
#include "ephx/potentials.hpp"
#include "ephx/propagator.hpp"
#include "ephx/spectral.hpp"
#include "ephx/wigner.hpp"

namespace fs = std::filesystem;

namespace ephx {

namespace {

constexpr double kTimeTol = 1e-6;  // fs

bool on_multiple(double t, double step) {
  double r = std::fmod(t + kTimeTol, step);
  return r < 2.0 * kTimeTol;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%08.2f", t);
  return buf;
}

void say(const RunOptions& opt, const std::string& msg) {
  if (opt.log) *opt.log << msg << '\n';
}

std::string fmt(double v) { return format_double(v); }

bool writing(const RunOptions& opt) { return !opt.out_dir.empty(); }

std::string path_in(const RunOptions& opt, const std::string& rel) {
  fs::path p = fs::path(opt.out_dir) / rel;
  fs::create_directories(p.parent_path());
  return p.string();
}

PotentialProfile build_potential(const ScenarioConfig& c, const Grid& g) {
  if (c.potential == PotentialKind::Free) return free_space(g);
  return double_barrier(g, c.barrier_width, c.height, c.well_width, c.center);
}

std::string describe(const ScenarioConfig& c) {
  std::string s = "scenario=" + std::string(to_string(c.id));
  if (!c.label.empty()) s += " label=" + c.label;
  s += " nx=" + std::to_string(c.nx) + " dx_nm=" + fmt(c.dx);
  if (c.potential == PotentialKind::DoubleBarrier)
    s += " barrier_nm=" + fmt(c.barrier_width) + " height_eV=" + fmt(c.height) + " well_nm=" + fmt(c.well_width);
  else
    s += " potential=free";
  return s;
}

void write_checks(const RunOptions& opt, const ScenarioResult& res) {
  if (!writing(opt)) return;
  CsvWriter w(path_in(opt, "checks.csv"));
  w.header({"check", "value", "relation", "threshold", "pass"});
  for (const auto& c : res.checks) w.row(c.name, c.value, c.relation, c.threshold, c.pass);
  CsvWriter m(path_in(opt, "metrics.csv"));
  m.header({"metric", "value"});
  for (const auto& [k, v] : res.metrics) m.row(k, v);
}

struct SnapshotWriter {
  const ScenarioConfig& cfg;
  const RunOptions& opt;

  void wigner(const std::string& stem, const WignerFunction& W) const {
    if (!writing(opt) || cfg.wigner == WignerFormat::None) return;
    auto v = crop(W, cfg.out_x_min, cfg.out_x_max, cfg.out_k_min, cfg.out_k_max, cfg.out_x_stride, cfg.out_k_stride);
    if (cfg.wigner == WignerFormat::Binary || cfg.wigner == WignerFormat::Both)
      write_wigner_binary(path_in(opt, "wigner/" + stem + ".bin"), v);
    if (cfg.wigner == WignerFormat::Csv || cfg.wigner == WignerFormat::Both)
      write_wigner_csv(path_in(opt, "wigner/" + stem + ".csv"), v);
  }

  void marginals(const std::string& stem, const WignerFunction& W) const {
    if (!writing(opt) || !cfg.marginals) return;
    write_marginals_csv(path_in(opt, "marginals/" + stem + "_x.csv"), path_in(opt, "marginals/" + stem + "_k.csv"), W,
                        cfg.out_x_min, cfg.out_x_max, cfg.out_k_min, cfg.out_k_max);
  }

  void spectral(const std::string& stem, const WaveFunction& psi, const EnergyBasis& basis) const {
    if (!writing(opt) || !cfg.spectral) return;
    write_spectral_density_csv(path_in(opt, "spectral/" + stem + ".csv"), energy_spectrum_density(psi, basis), cfg.out_e_max);
  }

  bool wants_wigner() const { return writing(opt) && (cfg.wigner != WignerFormat::None || cfg.marginals); }
};

struct SummaryRow {
  double t, e, k, norm, min_q;
  bool flag;
  double residual;
};

void write_summary(const std::string& path, const std::vector<std::string>& comments,
                   const std::vector<SummaryRow>& rows) {
  CsvWriter w(path);
  for (const auto& c : comments) w.comment(c);
  w.header({"t_fs", "mean_E_eV", "mean_k", "norm", "min_Q", "positivity_flag", "energy_residual_eV"});
  for (const auto& r : rows) w.row(r.t, r.e, r.k, r.norm, r.min_q, r.flag, r.residual);
}

double min_of(const std::vector<double>& q) { return *std::min_element(q.begin(), q.end()); }

int grid_index_at_or_above(const Grid& g, double x) {
  return std::clamp(static_cast<int>(std::ceil((x - g.x0) / g.dx - 1e-9)), 0, g.nx);
}

// ---------------------------------------------------------------- collision scenarios

struct ModelRun {
  CollisionModel model;
  std::vector<CollisionSample> samples;
  const CollisionSample* at_ts = nullptr;
  const CollisionSample* at_end = nullptr;
};

double auto_ts_free(const ScenarioConfig& c, double x_c, double E0) {
  // packet centre reaches -(duration / 2) v0 when the exchanges start
  double v0 = Constants::hbar * energy_to_wavevector(E0) / Constants::m_eff;
  double t = (-0.5 * c.n_steps * c.dwell * v0 - x_c) / v0;
  return std::max(0.0, std::round(t));
}

double auto_ts_well(const ScenarioConfig& c, const WaveFunction& psi0, const EnergyBasis& basis) {
  // time of maximal probability between the barriers, on a 2 fs grid
  const Grid& g = psi0.grid;
  int lo = grid_index_at_or_above(g, c.well_lo()), hi = grid_index_at_or_above(g, c.well_hi());
  auto c0 = project(psi0, basis);
  double best_t = 0.0, best_p = -1.0;
  for (double t = 0.0; t <= c.t_search + kTimeTol; t += 2.0) {
    auto rows = synthesize_rows(evolve(c0, basis, t), basis, lo, hi);
    double p = 0.0;
    for (const auto& a : rows) p += std::norm(a);
    p *= g.dx;
    if (p > best_p) {
      best_p = p;
      best_t = t;
    }
  }
  return best_t;
}

ScenarioResult run_collision_scenario(const ScenarioConfig& c, const RunOptions& opt) {
  ScenarioResult res;
  res.id = c.id;
  const double m = Constants::m_eff;
  const bool barrier = c.potential == PotentialKind::DoubleBarrier;
  Grid g = Grid::centered(c.nx, c.dx);
  PotentialProfile V = build_potential(c, g);

  double E0 = c.packet_energy;
  if (c.packet_resonance > 0) {
    auto res_e = find_resonances(V, m, 0.005, 0.999 * std::max(c.height, 0.01));
    if (static_cast<int>(res_e.size()) < c.packet_resonance)
      throw InvalidArgument("packet energy: resonance " + std::to_string(c.packet_resonance) + " not found");
    E0 = res_e[c.packet_resonance - 1];
  }
  double x_c = c.packet_center ? *c.packet_center : c.center - 4.0 * c.sigma - 50.0;
  const double k0 = energy_to_wavevector(E0, m);
  WaveFunction psi0 = gaussian_packet(g, x_c, c.sigma, k0);
  const double target = E0 + c.sign * c.e_gamma;
  if (!(target > 0.0)) throw InvalidArgument("collision: emission below the band bottom");

  say(opt, "diagonalizing H0 (" + std::to_string(c.nx) + " points)");
  EnergyBasis basis = diagonalize(V, m);
  const double E_init = expect_h0(psi0, V, m);

  double t_s = c.t_s ? *c.t_s : (barrier ? auto_ts_well(c, psi0, basis) : auto_ts_free(c, x_c, E0));
  CollisionSchedule sched{t_s, c.n_steps, c.dwell, 0.0, c.sign};
  double t_end = c.t_end ? *c.t_end : sched.t_end();
  if (t_end + kTimeTol < sched.t_end()) throw InvalidArgument("[run] t_end precedes the end of the collision schedule");
  say(opt, "E0 = " + fmt(E0) + " eV, x_c = " + fmt(x_c) + " nm, t_s = " + fmt(t_s) + " fs, t_end = " + fmt(t_end) +
               " fs");

  std::unique_ptr<Propagator> split;
  if (c.split_propagator) split = std::make_unique<SplitPropagator>(V, m, c.dt);

  res.metrics["E0_eV"] = E0;
  res.metrics["E_init_eV"] = E_init;
  res.metrics["target_eV"] = target;
  res.metrics["t_s_fs"] = t_s;
  res.metrics["x_c_nm"] = x_c;
  res.metrics["sigma_nm"] = c.sigma;

  if (writing(opt)) {
    write_potential_csv(path_in(opt, "potential.csv"), V);
    write_spectrum_csv(path_in(opt, "spectrum.csv"), basis);
    if (barrier) write_transmission_csv(path_in(opt, "transmission.csv"), V, m, 0.001, 0.3, 1200);
  }

  std::vector<CollisionModel> models;
  if (c.model != ModelChoice::Momentum) models.push_back(CollisionModel::Energy);
  if (c.model != ModelChoice::Energy) models.push_back(CollisionModel::Momentum);

  const double snap = c.snapshot_interval();
  SnapshotWriter out{c, opt};
  std::vector<ModelRun> runs;
  for (auto model : models) {
    const std::string name = to_string(model);
    sched.quantum = model == CollisionModel::Energy ? c.e_gamma : c.sign * momentum_quantum(E0, target, m);
    CollisionOptions co;
    co.t_end = t_end;
    co.sample_every = snap;
    co.accumulation = c.accumulation;
    co.axis = c.axis;
    co.propagator = split.get();
    co.monitor = EdgeMonitor{c.edge_margin, c.edge_limit};
    say(opt, "running " + name + " model");
    ModelRun run{model, run_collision(psi0, model, sched, V, m, basis, co)};
    for (const auto& s : run.samples) {
      if (std::abs(s.t_fs - t_s) < kTimeTol && !run.at_ts) run.at_ts = &s;
      if (std::abs(s.t_fs - sched.t_end()) < kTimeTol) run.at_end = &s;
    }

    std::unique_ptr<TrajectoryWriter> traj;
    if (writing(opt) && c.trajectory)
      traj = std::make_unique<TrajectoryWriter>(path_in(opt, "trajectory_" + name + ".csv"), false, c.out_x_stride);
    std::vector<SummaryRow> rows;
    double worst_norm = 0.0, worst_edge = 0.0;
    int flags = 0;
    for (const auto& s : run.samples) {
      auto q = density(s.psi);
      worst_edge = std::max(worst_edge, edge_probability(s.psi, c.edge_margin));
      double e = expect_h0(s.psi, V, m);
      SummaryRow r{s.t_fs, e, mean_k(s.psi), norm2(s.psi), min_of(q), false, 0.0};
      r.flag = r.min_q < -kPositivityEps;
      r.residual = e - (E_init + s.substeps * c.sign * c.e_gamma / c.n_steps);
      worst_norm = std::max(worst_norm, std::abs(r.norm - 1.0));
      flags += r.flag;
      rows.push_back(r);

      bool snapshot = on_multiple(s.t_fs, snap) || &s == run.at_ts || &s == run.at_end;
      if (snapshot && out.wants_wigner()) {
        auto W = wigner_transform(s.psi);
        std::string stem = name + "/" + time_tag(s.t_fs);
        out.wigner(stem, W);
        out.marginals(stem, W);
      }
      if (snapshot) out.spectral(name + "/" + time_tag(s.t_fs), s.psi, basis);
      if (snapshot && traj) traj->write(s.t_fs, s.psi);
    }
    if (writing(opt)) {
      write_summary(path_in(opt, "summary_" + name + ".csv"),
                    {describe(c), "model=" + name + " sigma_nm=" + fmt(c.sigma) + " x_c_nm=" + fmt(x_c) +
                                      " E0_eV=" + fmt(E0) + " e_gamma_eV=" + fmt(c.e_gamma) +
                                      " n_steps=" + std::to_string(c.n_steps) + " dwell_fs=" + fmt(c.dwell) +
                                      " t_s_fs=" + fmt(t_s)},
                    rows);
    }

    const auto& fin = run.at_end->psi;
    double E_fin = expect_h0(fin, V, m);
    res.metrics["E_final_" + name + "_eV"] = E_fin;
    res.metrics["residual_" + name + "_egamma"] = (E_fin - (E_init + c.sign * c.e_gamma)) / c.e_gamma;
    res.metrics["norm_drift_" + name] = worst_norm;
    res.metrics["max_edge_probability_" + name] = worst_edge;
    res.checks.push_back(make_check("norm_" + name, worst_norm, "<", 1e-6));
    res.checks.push_back(make_check("positivity_flags_" + name, flags, "==", 0));
    if (barrier) {
      int pre = count_well_maxima(density(run.at_ts->psi), g, c.well_lo(), c.well_hi());
      int post = count_well_maxima(density(fin), g, c.well_lo(), c.well_hi());
      res.metrics["maxima_pre_" + name] = pre;
      res.metrics["maxima_post_" + name] = post;
    }
    runs.push_back(std::move(run));
  }

  const int expect_pre = c.sign > 0 ? 1 : 2, expect_post = c.sign > 0 ? 2 : 1;
  for (const auto& run : runs) {
    const std::string name = to_string(run.model);
    double E_fin = res.metrics["E_final_" + name + "_eV"];
    if (!barrier) {
      res.checks.push_back(make_check("final_energy_rel_error_" + name, std::abs(E_fin - target) / target, "<=", 0.02));
      continue;
    }
    double miss = std::abs(res.metrics["residual_" + name + "_egamma"]);
    double pre = res.metrics["maxima_pre_" + name], post = res.metrics["maxima_post_" + name];
    if (run.model == CollisionModel::Energy) {
      res.checks.push_back(make_check("energy_target_error_egamma_energy", miss, "<=", 0.02));
      res.checks.push_back(make_check("maxima_pre_energy", pre, "==", expect_pre));
      res.checks.push_back(make_check("maxima_post_energy", post, "==", expect_post));
    } else {
      res.checks.push_back(make_check("energy_target_miss_egamma_momentum", miss, ">", 0.2));
      res.checks.push_back(make_check("maxima_unchanged_momentum", std::abs(post - pre), "==", 0));
    }
  }
  if (runs.size() == 2) {
    double F = fidelity(runs[0].at_end->psi, runs[1].at_end->psi);
    res.metrics["model_fidelity"] = F;
    if (!barrier) res.checks.push_back(make_check("model_fidelity", F, ">=", 0.95));
  }
  write_checks(opt, res);
  return res;
}

// ---------------------------------------------------------------- exact model

struct CoupledRecord {
  double t, p_a, p_b, e_total, e_electron, norm;
};

WignerFunction coupled_wigner(const CoupledState& s) {
  double pa = norm2(s.psi_a), pb = norm2(s.psi_b), n = pa + pb;
  std::vector<Member> mem;
  auto add = [&](const WaveFunction& w, double p) {
    if (p < 1e-14) return;
    WaveFunction u = w;
    normalize(u);
    mem.push_back({u, p / n});
  };
  add(s.psi_a, pa);
  add(s.psi_b, pb);
  return wigner_of_ensemble(Ensemble(mem));
}

double coupled_mean_k(const CoupledState& s) {
  double pa = norm2(s.psi_a), pb = norm2(s.psi_b), k = 0.0;
  if (pa > 1e-14) k += pa * mean_k(s.psi_a);
  if (pb > 1e-14) k += pb * mean_k(s.psi_b);
  return k / (pa + pb);
}

ScenarioResult run_exact_scenario(const ScenarioConfig& c, const RunOptions& opt) {
  ScenarioResult res;
  res.id = c.id;
  const double m = Constants::m_eff;
  Grid g = Grid::centered(c.nx, c.dx);
  PotentialProfile V = build_potential(c, g);
  EnergyBasis basis = diagonalize(V, m);
  if (basis.size() < 3) throw InvalidArgument("exact model: basis too small");
  const double E0 = basis.energies[0], E1 = basis.energies[1];
  res.metrics["level0_eV"] = E0;
  res.metrics["level1_eV"] = E1;
  EdgeMonitor mon{c.edge_margin, c.edge_limit};
  SnapshotWriter out{c, opt};
  if (writing(opt)) {
    write_potential_csv(path_in(opt, "potential.csv"), V);
    write_spectrum_csv(path_in(opt, "spectrum.csv"), basis);
  }

  // Rabi run: electron in the upper level, no photon
  {
    ExactModelConfig ec{c.hbar_omega, c.alpha, V, c.exact_dt};
    CoupledStepper st(ec, m);
    CoupledState s{basis.state(1), WaveFunction(g)};
    const long n_total = std::lround(c.exact_t_end / c.exact_dt);
    const long every = std::max(1L, std::lround(c.compare_sample / c.exact_dt));
    const long snap_every = std::max(1L, std::lround(c.snapshot_interval() / c.exact_dt));
    const double e_ref = coupled_total_energy(s, ec, m);
    double drift_e = 0.0, drift_n = 0.0, pb_max = 0.0, t_pb_max = 0.0;
    std::vector<CoupledRecord> rec;
    std::vector<SummaryRow> rows;
    std::unique_ptr<TrajectoryWriter> traj;
    if (writing(opt) && c.trajectory)
      traj = std::make_unique<TrajectoryWriter>(path_in(opt, "trajectory_rabi.csv"), true, c.out_x_stride);
    say(opt, "exact model: " + std::to_string(n_total) + " coupled steps, hbar_omega = " + fmt(c.hbar_omega) + " eV");
    for (long n = 0; n <= n_total; ++n) {
      if (n > 0) st.step(s);
      if (n % every != 0 && n != n_total) continue;
      double t = n * c.exact_dt;
      mon.check(s, t);
      double et = coupled_total_energy(s, ec, m), norm = coupled_norm(s);
      double pa = norm2(s.psi_a), pb = norm2(s.psi_b);
      drift_e = std::max(drift_e, std::abs(et - e_ref) / std::abs(e_ref));
      drift_n = std::max(drift_n, std::abs(norm - 1.0));
      if (pb > pb_max) {
        pb_max = pb;
        t_pb_max = t;
      }
      double ee = coupled_electron_energy(s, V, m);
      rec.push_back({t, pa, pb, et, ee, norm});
      auto qa = density(s.psi_a), qb = density(s.psi_b);
      for (int i = 0; i < g.nx; ++i) qa[i] += qb[i];
      double mq = min_of(qa);
      rows.push_back({t, ee, coupled_mean_k(s), norm, mq, mq < -kPositivityEps, et - e_ref});
      if (n % snap_every == 0 && traj) traj->write(t, s);
      if (n % snap_every == 0 && out.wants_wigner()) {
        auto W = coupled_wigner(s);
        out.wigner("rabi/" + time_tag(t), W);
        out.marginals("rabi/" + time_tag(t), W);
      }
    }
    res.metrics["rabi_steps"] = n_total;
    res.metrics["rabi_norm_drift"] = drift_n;
    res.metrics["rabi_energy_drift_rel"] = drift_e;
    res.metrics["rabi_pb_max"] = pb_max;
    res.metrics["rabi_t_pb_max_fs"] = t_pb_max;
    res.checks.push_back(make_check("coupled_steps", n_total, ">=", 1e4));
    res.checks.push_back(make_check("norm_drift", drift_n, "<", 1e-8));
    res.checks.push_back(make_check("energy_drift_rel", drift_e, "<", 1e-6));
    res.checks.push_back(make_check("rabi_pb_max", pb_max, ">=", 0.5));
    if (writing(opt)) {
      CsvWriter w(path_in(opt, "rabi.csv"));
      w.comment(describe(c) + " hbar_omega_eV=" + fmt(c.hbar_omega) + " alpha_eV_per_nm=" + fmt(c.alpha) +
                " dt_fs=" + fmt(c.exact_dt));
      w.header({"t_fs", "P_A", "P_B", "E_total_eV", "E_electron_eV", "norm"});
      for (const auto& r : rec) w.row(r.t, r.p_a, r.p_b, r.e_total, r.e_electron, r.norm);
      write_summary(path_in(opt, "summary.csv"),
                    {describe(c), "model=exact hbar_omega_eV=" + fmt(c.hbar_omega) + " initial=level1"}, rows);
    }
  }

  if (!c.compare) {
    write_checks(opt, res);
    return res;
  }

  // paired exact / energy-model runs between the two lowest levels
  const double hw = c.compare_hbar_omega ? *c.compare_hbar_omega : E1 - E0;
  res.metrics["compare_hbar_omega_eV"] = hw;
  for (int sign : {+1, -1}) {
    const std::string dir = sign > 0 ? "absorb" : "emit";
    ExactModelConfig ec{hw, c.alpha, V, c.exact_dt};
    CoupledStepper st(ec, m);
    // absorption: one photon with the electron in level 0; emission: level 1, no photon
    CoupledState s = sign > 0 ? CoupledState{WaveFunction(g), basis.state(0)}
                              : CoupledState{basis.state(1), WaveFunction(g)};
    auto transferred = [&](const CoupledState& x) { return sign > 0 ? norm2(x.psi_a) : norm2(x.psi_b); };
    const long every = std::max(1L, std::lround(c.compare_sample / c.exact_dt));
    EnergyTrace exact;
    double prev = -1.0;
    long n = 0;
    const long n_max = std::lround(c.t_search / c.exact_dt);
    for (;; ++n) {
      if (n > 0) st.step(s);
      if (n % every != 0) continue;
      double t = n * c.exact_dt;
      double p = transferred(s);
      if (p < prev && prev > 0.05) break;  // first maximum passed
      mon.check(s, t);
      exact.t.push_back(t);
      exact.e.push_back(coupled_electron_energy(s, V, m));
      prev = p;
      if (n >= n_max) throw InvalidArgument("exact model: no population maximum before t_search");
    }
    const double t_half = exact.t.back();
    res.metrics["t_half_" + dir + "_fs"] = t_half;
    res.metrics["transfer_max_" + dir] = prev;

    WaveFunction psi0 = basis.state(sign > 0 ? 0 : 1);
    CollisionSchedule sched{0.0, c.compare_steps, t_half / c.compare_steps, hw, sign};
    CollisionOptions co;
    co.t_end = t_half;
    co.sample_every = 0.0;
    co.accumulation = c.accumulation;
    co.axis = c.axis;
    co.monitor = mon;
    auto samples = run_collision(psi0, CollisionModel::Energy, sched, V, m, basis, co);
    EnergyTrace approx;
    for (const auto& x : samples) {
      approx.t.push_back(x.t_fs);
      approx.e.push_back(expect_h0(x.psi, V, m));
    }
    double dev = energy_trace_comparison(exact, approx);
    res.metrics["trace_deviation_" + dir + "_egamma"] = dev / hw;
    res.checks.push_back(make_check("tracking_" + dir + "_egamma", dev / hw, "<=", 0.1));
    if (writing(opt)) {
      CsvWriter w(path_in(opt, "traces_" + dir + ".csv"));
      w.comment(describe(c) + " hbar_omega_eV=" + fmt(hw) + " alpha_eV_per_nm=" + fmt(c.alpha) +
                " t_half_fs=" + fmt(t_half) + " n_steps=" + std::to_string(c.compare_steps));
      w.header({"t_fs", "E_exact_eV", "E_approx_eV"});
      for (std::size_t i = 0; i < exact.t.size(); ++i) w.row(exact.t[i], exact.e[i], approx.at(exact.t[i]));
    }
  }
  write_checks(opt, res);
  return res;
}

// ---------------------------------------------------------------- Wigner demos

WaveFunction random_packet(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uc(-15.0, 15.0), us(2.5, 5.0), uk(-1.2, 1.2), uphi(0.0, 2.0 * M_PI),
      ua(0.2, 1.0);
  WaveFunction psi = gaussian_packet(g, uc(rng), us(rng), uk(rng));
  if (rng() % 2) {
    // two-component superposition
    cplx w = std::polar(ua(rng), uphi(rng));
    auto extra = gaussian_packet(g, uc(rng), us(rng), uk(rng));
    for (int i = 0; i < g.nx; ++i) psi.amp[i] += w * extra.amp[i];
    normalize(psi);
  }
  return psi;
}

ScenarioResult run_reconstruction_scenario(const ScenarioConfig& c, const RunOptions& opt) {
  ScenarioResult res;
  res.id = c.id;
  const double m = Constants::m_eff;
  Grid g = Grid::centered(c.nx, c.dx);
  PotentialProfile V = build_potential(c, g);
  EnergyBasis basis = diagonalize(V, m);

  std::mt19937_64 rng(c.seed);
  struct Case {
    std::string kind;
    WaveFunction psi;
  };
  std::vector<Case> cases;
  for (int i = 0; i < c.demo_count; ++i) cases.push_back({"random", random_packet(g, rng)});
  // post-collision states
  auto base = gaussian_packet(g, -6.0, 4.0, energy_to_wavevector(0.05, m));
  cases.push_back({"energy_absorb", energy_exchange(base, basis, c.e_gamma)});
  cases.push_back({"energy_emit", energy_exchange(gaussian_packet(g, 0.0, 7.0, energy_to_wavevector(0.35, m)), basis,
                                                  -c.e_gamma)});
  cases.push_back({"momentum_kick", momentum_exchange(base, energy_to_wavevector(0.05 + c.e_gamma, m) -
                                                                energy_to_wavevector(0.05, m))});
  {
    CollisionSchedule sched{0.0, c.n_steps, 0.5, c.e_gamma, +1};
    CollisionOptions co;
    co.sample_every = 0.0;
    co.check_edges = false;
    auto s = run_collision(base, CollisionModel::Energy, sched, V, m, basis, co);
    cases.push_back({"energy_ramp", s.back().psi});
  }

  double worst_infid = 0.0, worst_sup = 0.0;
  CsvWriter* log = nullptr;
  std::unique_ptr<CsvWriter> w;
  if (writing(opt)) {
    w = std::make_unique<CsvWriter>(path_in(opt, "reconstruction.csv"));
    w->comment(describe(c) + " seed=" + std::to_string(c.seed));
    w->header({"case", "kind", "fidelity", "sup_norm_roundtrip"});
    log = w.get();
  }
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto W = wigner_transform(cases[i].psi);
    auto rec = reconstruct_pure_state(W);
    double F = fidelity(rec, cases[i].psi);
    double sup = sup_norm_difference(wigner_transform(rec), W);
    worst_infid = std::max(worst_infid, 1.0 - F);
    worst_sup = std::max(worst_sup, sup);
    if (log) log->row(static_cast<int>(i), cases[i].kind, F, sup);
  }
  res.metrics["cases"] = static_cast<double>(cases.size());
  res.metrics["worst_infidelity"] = worst_infid;
  res.metrics["worst_sup_norm"] = worst_sup;
  res.checks.push_back(make_check("cases", static_cast<double>(cases.size()), ">=", 20));
  res.checks.push_back(make_check("min_fidelity", 1.0 - worst_infid, ">=", 1.0 - 1e-8));
  res.checks.push_back(make_check("roundtrip_sup_norm", worst_sup, "<=", 1e-8));

  // a 50/50 mixture of two separated packets has purity 1/2
  Ensemble mix({{gaussian_packet(g, -15.0, 4.0, 0.4), 0.5}, {gaussian_packet(g, 15.0, 4.0, -0.4), 0.5}});
  auto Wm = wigner_of_ensemble(mix);
  res.metrics["mixture_purity"] = wigner_purity(Wm);
  bool rejected = false;
  try {
    reconstruct_pure_state(Wm);
  } catch (const PurityError&) {
    rejected = true;
  }
  res.checks.push_back(make_check("mixture_rejected", rejected, "==", 1));
  write_checks(opt, res);
  return res;
}

ScenarioResult run_positivity_scenario(const ScenarioConfig& c, const RunOptions& opt) {
  ScenarioResult res;
  res.id = c.id;
  const double m = Constants::m_eff;
  Grid g = Grid::centered(c.nx, c.dx);
  PotentialProfile V = build_potential(c, g);
  EnergyBasis basis = diagonalize(V, m);
  SnapshotWriter out{c, opt};

  auto a = gaussian_packet(g, -50.0, 8.0, 0.3);
  auto b = gaussian_packet(g, 50.0, 8.0, -0.3);
  Ensemble ens({{a, 0.5}, {b, 0.5}});
  // the collision acts on a state that is not in the ensemble
  auto stranger = gaussian_packet(g, 0.0, 6.0, energy_to_wavevector(0.023, m));
  auto shifted = energy_exchange(stranger, basis, c.e_gamma);
  auto delta = make_delta(stranger, shifted, 0.25);

  double worst_pure = 0.0;
  for (const auto* psi : {&a, &b, &stranger, &shifted}) {
    auto rep = check_positivity(wigner_transform(*psi));
    worst_pure = std::min(worst_pure, rep.min_Q);
  }
  res.metrics["pure_min_Q"] = worst_pure;
  res.checks.push_back(make_check("pure_min_Q", worst_pure, ">=", -kPositivityEps));

  auto blind = apply_collision_blind(ens, delta);
  auto Wb = wigner_of_ensemble(blind);
  auto rep = check_positivity(Wb);
  auto q_direct = presence_density(blind);
  res.metrics["blind_min_Q"] = rep.min_Q;
  res.metrics["blind_argmin_x_nm"] = rep.argmin_x;
  res.metrics["blind_min_Q_direct"] = min_of(q_direct);
  res.checks.push_back(make_check("blind_min_Q", rep.min_Q, "<", 0.0));

  bool strict_raised = false;
  try {
    apply_collision_strict(ens, delta);
  } catch (const MemberNotFound&) {
    strict_raised = true;
  }
  res.checks.push_back(make_check("strict_raises_member_not_found", strict_raised, "==", 1));

  auto before = wigner_of_ensemble(ens);
  Ensemble member_hit = apply_collision_strict(ens, make_delta(a, energy_exchange(a, basis, c.e_gamma), 0.5));
  auto after = wigner_of_ensemble(member_hit);
  auto member_rep = check_positivity(after);
  auto econd = check_energy_condition(wigner_of_ensemble(Ensemble::pure(a)),
                                      wigner_of_ensemble(Ensemble::pure(member_hit.members.back().psi)), c.e_gamma, V,
                                      m);
  res.metrics["member_collision_min_Q"] = member_rep.min_Q;
  res.metrics["member_collision_energy_residual_eV"] = econd.residual;
  res.checks.push_back(make_check("member_collision_min_Q", member_rep.min_Q, ">=", -kPositivityEps));

  if (writing(opt)) {
    auto q_before = position_marginal(before), q_blind = position_marginal(Wb), q_strict = position_marginal(after);
    CsvWriter w(path_in(opt, "positivity.csv"));
    w.comment(describe(c) + " members=2 weight_delta=0.25 e_gamma_eV=" + fmt(c.e_gamma));
    w.header({"x_nm", "Q_before", "Q_blind", "Q_strict_member"});
    for (int i = 0; i < g.nx; ++i) w.row(g.x(i), q_before[i], q_blind[i], q_strict[i]);
    out.wigner("ensemble_before", before);
    out.wigner("blind_after", Wb);
    out.wigner("strict_member_after", after);
    fs::path dir = fs::path(opt.out_dir) / "ensemble_before";
    fs::create_directories(dir);
    write_ensemble(dir.string(), ens);
  }
  write_checks(opt, res);
  return res;
}

}  // namespace

Check make_check(const std::string& name, double value, const std::string& relation, double threshold) {
  bool pass = false;
  if (relation == "<=") pass = value <= threshold;
  else if (relation == ">=") pass = value >= threshold;
  else if (relation == "<") pass = value < threshold;
  else if (relation == ">") pass = value > threshold;
  else if (relation == "==") pass = value == threshold;
  else throw InvalidArgument("make_check: unknown relation '" + relation + "'");
  if (std::isnan(value)) pass = false;
  return {name, value, relation, threshold, pass};
}

bool ScenarioResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (writing(opt)) fs::create_directories(opt.out_dir);
  switch (cfg.id) {
    case ScenarioId::FreeAbsorb:
    case ScenarioId::FreeEmit:
    case ScenarioId::BarrierAbsorb:
    case ScenarioId::BarrierEmit: return run_collision_scenario(cfg, opt);
    case ScenarioId::ExactRabi: return run_exact_scenario(cfg, opt);
    case ScenarioId::ReconstructionDemo: return run_reconstruction_scenario(cfg, opt);
    case ScenarioId::PositivityDemo: return run_positivity_scenario(cfg, opt);
  }
  throw InvalidArgument("run_scenario: unknown scenario");
}

int count_well_maxima(const std::vector<double>& Q, const Grid& g, double x_min, double x_max) {
  if (static_cast<int>(Q.size()) != g.nx) throw InvalidArgument("count_well_maxima: density size != grid size");
  if (!(x_min < x_max) || x_min < g.x(0) || x_max > g.x(g.nx - 1))
    throw InvalidArgument("count_well_maxima: well bounds outside the grid");
  int lo = grid_index_at_or_above(g, x_min), hi = grid_index_at_or_above(g, x_max + 1e-9 * g.dx);
  int n = hi - lo;
  if (n < 3) return 0;
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) {
    int j = lo + i;
    double l = Q[std::max(j - 1, 0)], r = Q[std::min(j + 1, g.nx - 1)];
    s[i] = (l + Q[j] + r) / 3.0;
  }
  double top = *std::max_element(s.begin(), s.end());
  if (!(top > 0.0)) return 0;
  // a run of equal samples counts once: a symmetric peak on a centred grid has two top points
  const double tie = 1e-12 * top;
  int count = 0;
  for (int i = 1; i + 1 < n; ++i) {
    if (!(s[i] > s[i - 1] + tie)) continue;
    int j = i;
    while (j + 1 < n && std::abs(s[j + 1] - s[i]) <= tie) ++j;
    if (j + 1 < n && s[j + 1] < s[i] - tie && s[i] >= 0.05 * top) ++count;
    i = j;
  }
  return count;
}

double EnergyTrace::at(double t_fs) const {
  if (t.empty()) throw InvalidArgument("EnergyTrace: empty trace");
  if (t_fs <= t.front()) return e.front();
  if (t_fs >= t.back()) return e.back();
  auto it = std::upper_bound(t.begin(), t.end(), t_fs);
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  double u = (t_fs - t[i - 1]) / (t[i] - t[i - 1]);
  return (1.0 - u) * e[i - 1] + u * e[i];
}

double energy_trace_comparison(const EnergyTrace& exact, const EnergyTrace& approx) {
  if (exact.t.empty() || approx.t.empty() || exact.t.size() != exact.e.size() || approx.t.size() != approx.e.size())
    throw InvalidArgument("energy_trace_comparison: empty or ragged trace");
  double lo = std::max(exact.t.front(), approx.t.front()), hi = std::min(exact.t.back(), approx.t.back());
  if (lo > hi + kTimeTol) throw InvalidArgument("energy_trace_comparison: time ranges do not overlap");
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.t.size(); ++i) {
    if (exact.t[i] < lo - kTimeTol || exact.t[i] > hi + kTimeTol) continue;
    worst = std::max(worst, std::abs(approx.at(exact.t[i]) - exact.e[i]));
  }
  return worst;
}

std::vector<double> scenario_resonances(const ScenarioConfig& cfg) {
  if (cfg.potential != PotentialKind::DoubleBarrier)
    throw InvalidArgument("resonances: the configured potential is not a double barrier");
  Grid g = Grid::centered(cfg.nx, cfg.dx);
  return find_resonances(build_potential(cfg, g), Constants::m_eff, 0.005, 0.999 * std::max(cfg.height, 0.01));
}

}  // namespace ephx
