#include "ephx/propagator.hpp"

#include <cmath>

#include "ephx/csv.hpp"
#include "ephx/errors.hpp"
#include "ephx/fft.hpp"

namespace ephx {

namespace {
const cplx I(0.0, 1.0);

void require_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
}
}  // namespace

SplitStepper::SplitStepper(const PotentialProfile& V, double m, double dt) : grid_(V.grid), dt_(dt) {
  require_dt(dt);
  const double hb = Constants::hbar;
  int n = grid_.nx;
  half_v_.resize(n);
  kin_.resize(n);
  for (int i = 0; i < n; ++i) half_v_[i] = std::polar(1.0, -V.v[i] * dt / (2.0 * hb));
  for (int j = 0; j < n; ++j) {
    double k = grid_.k(j);
    // 1/n restores the unnormalized inverse transform
    kin_[j] = std::polar(1.0 / n, -hb * k * k * dt / (2.0 * m));
  }
}

void SplitStepper::step(WaveFunction& psi) const {
  require_same_grid(psi.grid, grid_);
  int n = grid_.nx;
  cplx* a = psi.amp.data();
  for (int i = 0; i < n; ++i) a[i] *= half_v_[i];
  fft_forward(a, n);
  for (int j = 0; j < n; ++j) a[j] *= kin_[j];
  fft_backward(a, n);
  for (int i = 0; i < n; ++i) a[i] *= half_v_[i];
}

void SplitStepper::run(WaveFunction& psi, long n_steps) const {
  for (long s = 0; s < n_steps; ++s) step(psi);
}

CoupledStepper::CoupledStepper(const ExactModelConfig& cfg, double m) : grid_(cfg.v.grid) {
  require_dt(cfg.dt);
  if (!(cfg.hbar_omega > 0.0)) throw InvalidArgument("exact model: hbar_omega must be positive");
  const double hb = Constants::hbar, dt = cfg.dt, hw = cfg.hbar_omega;
  int n = grid_.nx;
  kin_.resize(n);
  for (int j = 0; j < n; ++j) {
    double k = grid_.k(j);
    kin_[j] = std::polar(1.0 / n, -hb * k * k * dt / (2.0 * m));
  }
  u_aa_.resize(n);
  u_bb_.resize(n);
  u_ab_.resize(n);
  // [[V + hw/2, ax], [ax, V + 3hw/2]] = (V + hw) 1 + (-hw/2) sz + (ax) sx
  for (int i = 0; i < n; ++i) {
    double c = cfg.alpha * grid_.x(i);
    double r = std::sqrt(0.25 * hw * hw + c * c);
    double th = r * dt / (2.0 * hb);
    cplx g = std::polar(1.0, -(cfg.v.v[i] + hw) * dt / (2.0 * hb));
    double cs = std::cos(th), sn = std::sin(th) / r;
    u_aa_[i] = g * cplx(cs, sn * 0.5 * hw);
    u_bb_[i] = g * cplx(cs, -sn * 0.5 * hw);
    u_ab_[i] = g * cplx(0.0, -sn * c);
  }
}

void CoupledStepper::step(CoupledState& s) const {
  int n = grid_.nx;
  cplx* a = s.psi_a.amp.data();
  cplx* b = s.psi_b.amp.data();
  auto local = [&] {
    for (int i = 0; i < n; ++i) {
      cplx ai = a[i], bi = b[i];
      a[i] = u_aa_[i] * ai + u_ab_[i] * bi;
      b[i] = u_ab_[i] * ai + u_bb_[i] * bi;
    }
  };
  auto kinetic = [&](cplx* p) {
    fft_forward(p, n);
    for (int j = 0; j < n; ++j) p[j] *= kin_[j];
    fft_backward(p, n);
  };
  local();
  kinetic(a);
  kinetic(b);
  local();
}

void CoupledStepper::run(CoupledState& s, long n_steps) const {
  require_same_grid(s.psi_a.grid, grid_);
  require_same_grid(s.psi_b.grid, grid_);
  for (long k = 0; k < n_steps; ++k) step(s);
}

WaveFunction step_single(const WaveFunction& psi, const PotentialProfile& V, double m, double dt) {
  WaveFunction out = psi;
  SplitStepper(V, m, dt).step(out);
  return out;
}

CoupledState step_coupled(const CoupledState& s, const ExactModelConfig& cfg, double m) {
  CoupledState out = s;
  CoupledStepper(cfg, m).run(out, 1);
  return out;
}

WaveFunction time_reverse(const WaveFunction& psi) {
  WaveFunction out = psi;
  for (auto& a : out.amp) a = std::conj(a);
  return out;
}

CoupledState time_reverse(const CoupledState& s) { return {time_reverse(s.psi_a), time_reverse(s.psi_b)}; }

double expect_h0(const WaveFunction& psi, const PotentialProfile& V, double m) {
  require_same_grid(psi.grid, V.grid);
  const Grid& g = psi.grid;
  auto phi = momentum_amplitudes(psi);
  double kin = 0.0;
  for (int j = 0; j < g.nx; ++j) kin += std::norm(phi[j]) * wavevector_to_energy(g.k(j), m);
  kin *= g.dk();
  double pot = 0.0;
  for (int i = 0; i < g.nx; ++i) pot += std::norm(psi.amp[i]) * V.v[i];
  pot *= g.dx;
  return kin + pot;
}

double coupled_norm(const CoupledState& s) { return norm2(s.psi_a) + norm2(s.psi_b); }

double coupled_fidelity(const CoupledState& x, const CoupledState& y) {
  cplx ov = inner(x.psi_a, y.psi_a) + inner(x.psi_b, y.psi_b);
  return std::norm(ov) / (coupled_norm(x) * coupled_norm(y));
}

double coupled_total_energy(const CoupledState& s, const ExactModelConfig& cfg, double m) {
  const double hw = cfg.hbar_omega;
  double na = norm2(s.psi_a), nb = norm2(s.psi_b);
  double e = expect_h0(s.psi_a, cfg.v, m) + 0.5 * hw * na;
  e += expect_h0(s.psi_b, cfg.v, m) + 1.5 * hw * nb;
  const Grid& g = s.psi_a.grid;
  cplx c = 0.0;
  for (int i = 0; i < g.nx; ++i) c += std::conj(s.psi_a.amp[i]) * g.x(i) * s.psi_b.amp[i];
  e += 2.0 * cfg.alpha * (c * g.dx).real();
  return e;
}

double coupled_electron_energy(const CoupledState& s, const PotentialProfile& V, double m) {
  return expect_h0(s.psi_a, V, m) + expect_h0(s.psi_b, V, m);
}

void EdgeMonitor::check(const WaveFunction& psi, double t_fs) const {
  double p = edge_probability(psi, margin_nm);
  if (p > limit) throw EdgeAbort(t_fs, p);
}

void EdgeMonitor::check(const CoupledState& s, double t_fs) const {
  double p = edge_probability(s.psi_a, margin_nm) + edge_probability(s.psi_b, margin_nm);
  if (p > limit) throw EdgeAbort(t_fs, p);
}

void SpectralPropagator::advance(WaveFunction& psi, double t_fs) const {
  if (t_fs == 0.0) return;
  psi = synthesize(evolve(project(psi, basis_), basis_, t_fs), basis_);
}

void SplitPropagator::advance(WaveFunction& psi, double t_fs) const {
  if (t_fs == 0.0) return;
  if (t_fs < 0.0) throw InvalidArgument("split propagator: negative duration");
  double dt = full_.dt();
  long n = static_cast<long>(std::floor(t_fs / dt + 1e-9));
  full_.run(psi, n);
  double rest = t_fs - n * dt;
  if (rest > 1e-12 * dt) SplitStepper(V_, m_, rest).step(psi);
}

struct TrajectoryWriter::Impl {
  explicit Impl(const std::string& path) : csv(path) {}
  CsvWriter csv;
};

TrajectoryWriter::TrajectoryWriter(const std::string& path, bool coupled, int x_stride)
    : impl_(std::make_unique<Impl>(path)), coupled_(coupled), x_stride_(std::max(1, x_stride)) {
  if (coupled)
    impl_->csv.header({"t_fs", "x_nm", "re_psi_a", "im_psi_a", "re_psi_b", "im_psi_b"});
  else
    impl_->csv.header({"t_fs", "x_nm", "re_psi", "im_psi"});
}

TrajectoryWriter::~TrajectoryWriter() = default;

void TrajectoryWriter::write(double t_fs, const WaveFunction& psi) {
  if (coupled_) throw InvalidArgument("trajectory writer opened for coupled states");
  for (int i = 0; i < psi.grid.nx; i += x_stride_)
    impl_->csv.row(t_fs, psi.grid.x(i), psi.amp[i].real(), psi.amp[i].imag());
}

void TrajectoryWriter::write(double t_fs, const CoupledState& s) {
  if (!coupled_) throw InvalidArgument("trajectory writer opened for single states");
  const Grid& g = s.psi_a.grid;
  for (int i = 0; i < g.nx; i += x_stride_)
    impl_->csv.row(t_fs, g.x(i), s.psi_a.amp[i].real(), s.psi_a.amp[i].imag(), s.psi_b.amp[i].real(),
                   s.psi_b.amp[i].imag());
}

}  // namespace ephx
