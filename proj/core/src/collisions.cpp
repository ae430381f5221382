#include "ephx/collisions.hpp"

#include <algorithm>
#include <cmath>

#include "ephx/csv.hpp"
#include "ephx/errors.hpp"

namespace ephx {

namespace {
constexpr double kAxisTol = 1e-9;  // eV
constexpr double kMaxLost = 0.01;
}  // namespace

const char* to_string(CollisionModel m) { return m == CollisionModel::Energy ? "energy" : "momentum"; }

void CollisionSchedule::validate() const {
  if (n_steps < 1) throw InvalidArgument("collision schedule: n_steps must be >= 1");
  if (!(dwell >= 0.0)) throw InvalidArgument("collision schedule: dwell must be >= 0");
  if (!(t_s >= 0.0)) throw InvalidArgument("collision schedule: t_s must be >= 0");
  if (sign != 1 && sign != -1) throw InvalidArgument("collision schedule: sign must be +1 or -1");
  if (!std::isfinite(quantum)) throw InvalidArgument("collision schedule: non-finite quantum");
}

namespace {

// Shifts the modes listed in idx (ascending energy) along their own sub-axis.
void shift_on_axis(const EnergySpectrumCoeffs& c, const std::vector<double>& E_all, const std::vector<int>& idx,
                   double dE, EnergySpectrumCoeffs& out) {
  int n = static_cast<int>(idx.size());
  if (n == 0) return;
  std::vector<double> E(n), w(n, 1.0);
  for (int i = 0; i < n; ++i) E[i] = E_all[idx[i]];
  if (n >= 2) {
    w[0] = E[1] - E[0];
    w[n - 1] = E[n - 1] - E[n - 2];
    for (int i = 1; i < n - 1; ++i) w[i] = 0.5 * (E[i + 1] - E[i - 1]);
  }
  for (auto& x : w) x = std::max(x, 1e-300);
  // padded axis: node -1 and node n carry zero density
  double lo = E.front() - w.front(), hi = E.back() + w.back();
  auto node_e = [&](int k) { return k < 0 ? lo : (k >= n ? hi : E[k]); };
  auto node_d = [&](int k) {
    return (k < 0 || k >= n) ? cplx(0.0, 0.0) : c.coeffs[idx[k]] / std::sqrt(w[k]);
  };
  int k = -1;  // left node of the current interval, monotone because targets increase with m
  for (int m = 0; m < n; ++m) {
    double e = E[m] - dE;
    if (e <= lo || e >= hi) continue;
    while (k + 1 <= n && node_e(k + 1) <= e) ++k;
    double e0 = node_e(k), e1 = node_e(k + 1);
    double t = (e - e0) / (e1 - e0);
    out.coeffs[idx[m]] = ((1.0 - t) * node_d(k) + t * node_d(k + 1)) * std::sqrt(w[m]);
  }
}

}  // namespace

EnergySpectrumCoeffs shift_coefficients(const EnergySpectrumCoeffs& c, const EnergyBasis& b, double dE,
                                        double* lost_probability, ShiftAxis axis) {
  int n = b.size();
  if (c.size() != n) throw InvalidArgument("energy shift: coefficient count != basis size");
  const auto& E = b.energies;
  double norm_in = 0.0, lost = 0.0;
  for (int i = 0; i < n; ++i) {
    double p = std::norm(c.coeffs[i]);
    norm_in += p;
    double e = E[i] + dE;
    if (e < E.front() - kAxisTol || e > E.back() + kAxisTol) lost += p;
  }
  if (lost_probability) *lost_probability = norm_in > 0.0 ? lost / norm_in : 0.0;
  if (dE == 0.0) return c;
  EnergySpectrumCoeffs out;
  out.coeffs.assign(n, cplx(0.0, 0.0));
  if (axis == ShiftAxis::Merged) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    shift_on_axis(c, E, all, dE, out);
  } else {
    std::vector<int> cos_like, sin_like;
    for (int i = 0; i < n; ++i) (b.phase[i].imag() == 0.0 ? cos_like : sin_like).push_back(i);
    shift_on_axis(c, E, cos_like, dE, out);
    shift_on_axis(c, E, sin_like, dE, out);
  }
  double norm_out = 0.0;
  for (const auto& a : out.coeffs) norm_out += std::norm(a);
  if (!(norm_out > 0.0)) throw SpectrumEdgeError("energy shift: no probability left on the spectrum");
  double s = std::sqrt(norm_in / norm_out);
  for (auto& a : out.coeffs) a *= s;
  return out;
}

WaveFunction energy_exchange(const WaveFunction& psi, const EnergyBasis& basis, double dE, ShiftAxis axis) {
  if (dE == 0.0) return psi;
  auto c = project(psi, basis);
  double lost = 0.0;
  auto shifted = shift_coefficients(c, basis, dE, &lost, axis);
  if (lost > kMaxLost)
    throw SpectrumEdgeError("energy_exchange: shift pushes " + std::to_string(100.0 * lost) +
                            "% of the probability off the spectrum");
  WaveFunction out = synthesize(shifted, basis);
  normalize(out);
  return out;
}

WaveFunction momentum_exchange(const WaveFunction& psi, double dk) {
  if (dk == 0.0) return psi;
  double kn = psi.grid.k_nyquist();
  double kt = mean_k(psi) + dk;
  if (std::abs(kt) >= 0.8 * kn) throw NyquistError("momentum_exchange: |<k> + dk| >= 0.8 k_Nyquist");
  WaveFunction out = psi;
  for (int i = 0; i < psi.grid.nx; ++i) out.amp[i] *= std::polar(1.0, dk * psi.grid.x(i));
  return out;
}

double momentum_quantum(double E_from, double E_to, double m) {
  return Constants::hbar * (energy_to_wavevector(E_to, m) - energy_to_wavevector(E_from, m));
}

std::vector<CollisionSample> run_collision(const WaveFunction& psi0, CollisionModel model,
                                           const CollisionSchedule& sched, const PotentialProfile& V, double m,
                                           const EnergyBasis& basis, const CollisionOptions& opt) {
  sched.validate();
  if (!(m > 0.0)) throw InvalidArgument("run_collision: mass must be positive");
  require_same_grid(psi0.grid, V.grid);
  require_same_grid(psi0.grid, basis.grid);
  double t_end = std::max(opt.t_end, sched.t_end());
  if (opt.t_end > 0.0 && opt.t_end + 1e-9 < sched.t_end())
    throw InvalidArgument("run_collision: schedule does not fit inside the simulation window");
  SpectralPropagator spectral(basis);
  const Propagator& prop = opt.propagator ? *opt.propagator : spectral;

  // events at one instant run in rank order: plain samples, then exchange j (rank 2j - 1), then the
  // sample closing it (rank 2j), so a zero dwell still records the state after every exchange
  struct Event {
    double t;
    int rank;
    int exchange;  // 0 = sample, j >= 1 = exchange number j
  };
  const int last = 2 * sched.n_steps + 1;
  std::vector<Event> ev;
  ev.push_back({0.0, 0, 0});
  if (opt.sample_every > 0.0)
    for (double t = opt.sample_every; t < t_end - 1e-9; t += opt.sample_every) ev.push_back({t, 0, 0});
  ev.push_back({sched.t_s, 0, 0});
  for (int j = 1; j <= sched.n_steps; ++j) {
    ev.push_back({sched.t_s + (j - 1) * sched.dwell, 2 * j - 1, j});
    ev.push_back({sched.t_s + j * sched.dwell, 2 * j, 0});
  }
  ev.push_back({t_end, last, 0});
  std::stable_sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    if (std::abs(a.t - b.t) > 1e-9) return a.t < b.t;
    return a.rank < b.rank;
  });

  const double step_quantum = sched.sign * sched.quantum / sched.n_steps;
  std::vector<CollisionSample> out;
  WaveFunction psi = psi0;
  double t = 0.0;
  int done = 0;
  EnergySpectrumCoeffs ref;
  double t_ref = 0.0;
  for (const auto& e : ev) {
    if (e.t > t + 1e-12) {
      prop.advance(psi, e.t - t);
      t = e.t;
      if (opt.check_edges) opt.monitor.check(psi, t);
    }
    if (e.exchange == 0) {
      if (!out.empty() && std::abs(out.back().t_fs - t) < 1e-9 && out.back().substeps == done) continue;
      out.push_back({t, done, psi});
      continue;
    }
    if (model == CollisionModel::Momentum) {
      psi = momentum_exchange(psi, step_quantum / Constants::hbar);
    } else if (opt.accumulation == EnergyAccumulation::Sequential) {
      psi = energy_exchange(psi, basis, step_quantum, opt.axis);
    } else {
      if (e.exchange == 1) {
        ref = project(psi, basis);
        t_ref = t;
      }
      double lost = 0.0;
      auto c = shift_coefficients(ref, basis, e.exchange * step_quantum, &lost, opt.axis);
      if (lost > kMaxLost)
        throw SpectrumEdgeError("energy exchange: shift pushes " + std::to_string(100.0 * lost) +
                                "% of the probability off the spectrum");
      psi = synthesize(evolve(c, basis, t - t_ref), basis);
      normalize(psi);
    }
    done = e.exchange;
  }
  return out;
}

void write_collision_scalars(const std::string& path, const std::vector<CollisionSample>& samples,
                             const PotentialProfile& V, double m) {
  CsvWriter w(path);
  w.header({"t_fs", "substeps", "mean_E_eV", "mean_k_inv_nm", "norm"});
  for (const auto& s : samples) w.row(s.t_fs, s.substeps, expect_h0(s.psi, V, m), mean_k(s.psi), norm2(s.psi));
}

}  // namespace ephx
