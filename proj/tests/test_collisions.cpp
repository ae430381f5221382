#include <gtest/gtest.h>

#include <cmath>

#include "ephx/collisions.hpp"
#include "ephx/errors.hpp"
#include "ephx/scenarios.hpp"
#include "support.hpp"

using namespace ephx;
using fixtures::default_grid;
using fixtures::free_basis;
using fixtures::lab_barrier;
using fixtures::lab_basis;

namespace {

const double kM = Constants::m_eff;

double sup_distance(const WaveFunction& a, const WaveFunction& b) {
  double s = 0.0;
  for (int i = 0; i < a.grid.nx; ++i) s = std::max(s, std::abs(a.amp[i] - b.amp[i]));
  return s;
}

double spectral_mean(const EnergySpectrumCoeffs& c, const EnergyBasis& b) {
  double s = 0.0, n = 0.0;
  for (int i = 0; i < b.size(); ++i) {
    s += std::norm(c.coeffs[i]) * b.energies[i];
    n += std::norm(c.coeffs[i]);
  }
  return s / n;
}

// resonant packet sitting in the well (same start as the barrier presets)
WaveFunction loaded_well() {
  double E0 = find_resonances(lab_barrier(), kM, 0.005, 0.299).at(0);
  auto psi = gaussian_packet(default_grid(), -190.0, 35.0, energy_to_wavevector(E0));
  return synthesize(evolve(project(psi, lab_basis()), lab_basis(), 604.0), lab_basis());
}

}  // namespace

TEST(EnergyExchange, ZeroShiftIsIdentity) {
  auto psi = gaussian_packet(default_grid(), 0.0, 25.0, 0.15);
  EXPECT_LT(sup_distance(energy_exchange(psi, free_basis(), 0.0), psi), 1e-10);
  auto c = project(psi, free_basis());
  auto s = shift_coefficients(c, free_basis(), 0.0);
  for (int i = 0; i < c.size(); ++i) ASSERT_EQ(s.coeffs[i], c.coeffs[i]);
}

TEST(EnergyExchange, FreeAbsorptionReachesTarget) {
  auto psi = gaussian_packet(default_grid(), 0.0, 35.0, energy_to_wavevector(0.023));
  auto out = energy_exchange(psi, free_basis(), 0.073);
  EXPECT_NEAR(norm2(out), 1.0, 1e-9);
  EXPECT_NEAR(expect_h0(out, free_space(default_grid()), kM) / 0.096, 1.0, 0.02);
}

TEST(EnergyExchange, SpectralMeanMovesByTheShift) {
  // level-spacing tolerance: a packet near the centre has slowly varying phases
  auto psi = gaussian_packet(default_grid(), 0.0, 35.0, energy_to_wavevector(0.05));
  auto c = project(psi, free_basis());
  for (int axis = 0; axis < 2; ++axis) {
    auto s = shift_coefficients(c, free_basis(), 0.01, nullptr, axis ? ShiftAxis::Merged : ShiftAxis::ByGaugeClass);
    EXPECT_NEAR(spectral_mean(s, free_basis()) - spectral_mean(c, free_basis()), 0.01, 2e-4) << axis;
  }
}

TEST(EnergyExchange, EmissionUndoesAbsorption) {
  auto psi = gaussian_packet(default_grid(), 0.0, 30.0, energy_to_wavevector(0.03));
  auto back = energy_exchange(energy_exchange(psi, free_basis(), 0.073), free_basis(), -0.073);
  EXPECT_GT(fidelity(back, psi), 1.0 - 1e-3);
}

TEST(EnergyExchange, RejectsShiftOffTheSpectrum) {
  auto psi = gaussian_packet(default_grid(), 0.0, 35.0, energy_to_wavevector(0.023));
  EXPECT_THROW(energy_exchange(psi, free_basis(), -0.03), SpectrumEdgeError);
  double lost = 0.0;
  shift_coefficients(project(psi, free_basis()), free_basis(), -0.03, &lost);
  EXPECT_GT(lost, 0.5);
}

TEST(EnergyExchange, RejectsForeignBasis) {
  EnergySpectrumCoeffs c;
  c.coeffs.assign(10, cplx(1.0, 0.0));
  EXPECT_THROW(shift_coefficients(c, free_basis(), 0.01), InvalidArgument);
}

TEST(EnergyExchange, BarrierFirstToSecondLevel) {
  auto psi = loaded_well();
  EXPECT_EQ(count_well_maxima(density(psi), default_grid(), -8.0, 8.0), 1);
  auto out = energy_exchange(psi, lab_basis(), 0.073);
  EXPECT_EQ(count_well_maxima(density(out), default_grid(), -8.0, 8.0), 2);
}

TEST(EnergyExchange, ClassAxisKeepsResonantShiftLocal) {
  // opposite-parity box levels pair up near a resonance; a merged axis mixes them
  auto psi = loaded_well();
  auto far = [](const WaveFunction& w) { return 1.0 - probability_in(w, -300.0, 300.0); };
  double by_class = far(energy_exchange(psi, lab_basis(), 0.073 / 40, ShiftAxis::ByGaugeClass));
  double merged = far(energy_exchange(psi, lab_basis(), 0.073 / 40, ShiftAxis::Merged));
  EXPECT_LT(by_class, 5e-3);
  EXPECT_GT(merged, 2.0 * by_class);
}

TEST(MomentumExchange, ZeroKickIsIdentity) {
  auto psi = gaussian_packet(default_grid(), 10.0, 20.0, 0.2);
  EXPECT_EQ(sup_distance(momentum_exchange(psi, 0.0), psi), 0.0);
}

TEST(MomentumExchange, FreeAbsorptionWavevectors) {
  auto psi = gaussian_packet(default_grid(), 0.0, 35.0, 0.15733);
  auto out = momentum_exchange(psi, 0.16407);
  EXPECT_NEAR(mean_k(out), mean_k(psi) + 0.16407, 1e-9);
  EXPECT_NEAR(mean_k(out), 0.3214, 5e-4);
  EXPECT_NEAR(expect_h0(out, free_space(default_grid()), kM) / 0.096, 1.0, 0.02);
}

TEST(MomentumExchange, PositionMarginalUnchanged) {
  auto psi = gaussian_packet(default_grid(), -40.0, 20.0, 0.1);
  auto q0 = density(psi), q1 = density(momentum_exchange(psi, 0.5));
  double d = 0.0;
  for (size_t i = 0; i < q0.size(); ++i) d = std::max(d, std::abs(q1[i] - q0[i]));
  EXPECT_LT(d, 1e-15);
}

TEST(MomentumExchange, RejectsNyquist) {
  const Grid& g = default_grid();
  auto psi = gaussian_packet(g, 0.0, 20.0, 0.0);
  EXPECT_THROW(momentum_exchange(psi, 0.85 * g.k_nyquist()), NyquistError);
  EXPECT_NO_THROW(momentum_exchange(psi, 0.75 * g.k_nyquist()));
}

TEST(MomentumExchange, QuantumMatchesWavevectorGap) {
  double p = momentum_quantum(0.023, 0.096);
  EXPECT_NEAR(p / Constants::hbar, energy_to_wavevector(0.096) - energy_to_wavevector(0.023), 1e-14);
  EXPECT_NEAR(p / Constants::hbar, 0.3214 - 0.1573, 5e-4);
  EXPECT_NEAR(momentum_quantum(0.096, 0.023), -p, 1e-15);
}

TEST(Schedule, Validation) {
  CollisionSchedule s;
  s.quantum = 0.073;
  EXPECT_NO_THROW(s.validate());
  EXPECT_DOUBLE_EQ(s.duration(), 240.0);
  auto bad = s;
  bad.n_steps = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = s;
  bad.dwell = -1.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = s;
  bad.sign = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(RunCollision, DegenerateScheduleIsOneKick) {
  const auto& V = lab_barrier();
  auto psi = gaussian_packet(default_grid(), -150.0, 25.0, 0.15);
  CollisionSchedule s;
  s.t_s = 50.0;
  s.n_steps = 1;
  s.dwell = 0.0;
  CollisionOptions o;
  o.t_end = 50.0;
  SpectralPropagator prop(lab_basis());
  auto at_ts = psi;
  prop.advance(at_ts, 50.0);

  s.quantum = 0.02;
  auto tr = run_collision(psi, CollisionModel::Energy, s, V, kM, lab_basis(), o);
  EXPECT_EQ(tr.back().substeps, 1);
  EXPECT_GT(fidelity(tr.back().psi, energy_exchange(at_ts, lab_basis(), 0.02)), 1.0 - 1e-10);

  s.quantum = 0.05 * Constants::hbar;
  tr = run_collision(psi, CollisionModel::Momentum, s, V, kM, lab_basis(), o);
  EXPECT_GT(fidelity(tr.back().psi, momentum_exchange(at_ts, 0.05)), 1.0 - 1e-10);
}

TEST(RunCollision, EnergyRampTotalsTheQuantum) {
  const Grid& g = default_grid();
  auto psi = gaussian_packet(g, -60.0, 35.0, energy_to_wavevector(0.023));
  CollisionSchedule s;
  s.quantum = 0.073;
  CollisionOptions o;
  auto tr = run_collision(psi, CollisionModel::Energy, s, free_space(g), kM, free_basis(), o);
  double E0 = expect_h0(psi, free_space(g), kM);
  for (const auto& x : tr) {
    EXPECT_NEAR(norm2(x.psi), 1.0, 1e-9);
    if (x.t_fs > 0.0 && x.t_fs <= s.t_end() + 1e-9)
      EXPECT_NEAR(expect_h0(x.psi, free_space(g), kM) - E0, x.substeps * 0.073 / 40, 0.02 * 0.073) << x.t_fs;
  }
  EXPECT_EQ(tr.back().substeps, 40);
  EXPECT_NEAR((expect_h0(tr.back().psi, free_space(g), kM) - E0) / 0.073, 1.0, 0.02);
}

TEST(RunCollision, SchedulePastWindowRejected) {
  auto psi = gaussian_packet(default_grid(), 0.0, 25.0, 0.1);
  CollisionSchedule s;
  s.quantum = 0.01;
  CollisionOptions o;
  o.t_end = 100.0;
  EXPECT_THROW(run_collision(psi, CollisionModel::Energy, s, lab_barrier(), kM, lab_basis(), o), InvalidArgument);
}

TEST(RunCollision, EdgeAbortPassesThrough) {
  auto psi = gaussian_packet(default_grid(), 200.0, 20.0, 0.3);
  CollisionSchedule s;
  s.quantum = 0.3 * Constants::hbar;
  CollisionOptions o;
  o.t_end = 1000.0;
  EXPECT_THROW(run_collision(psi, CollisionModel::Momentum, s, lab_barrier(), kM, lab_basis(), o), EdgeAbort);
}
