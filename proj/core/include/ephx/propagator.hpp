#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ephx/potentials.hpp"
#include "ephx/spectral.hpp"
#include "ephx/units.hpp"

namespace ephx {

// Two-mode electron-photon state: psi_a has no photon, psi_b one photon.
struct CoupledState {
  WaveFunction psi_a;
  WaveFunction psi_b;
};

struct ExactModelConfig {
  double hbar_omega = 0.073;  // eV
  double alpha = 5e-4;        // eV/nm
  PotentialProfile v;
  double dt = 0.005;          // fs

  double omega() const { return hbar_omega / Constants::hbar; }  // fs^-1
};

// Strang split-operator stepper for H0 = p^2/2m + V with cached phase arrays.
class SplitStepper {
public:
  SplitStepper(const PotentialProfile& V, double m, double dt);
  void step(WaveFunction& psi) const;
  void run(WaveFunction& psi, long n_steps) const;
  double dt() const { return dt_; }

private:
  Grid grid_;
  double dt_;
  std::vector<cplx> half_v_;
  std::vector<cplx> kin_;
};

class CoupledStepper {
public:
  CoupledStepper(const ExactModelConfig& cfg, double m);
  void step(CoupledState& s) const;
  void run(CoupledState& s, long n_steps) const;

private:
  Grid grid_;
  std::vector<cplx> kin_;  // full step; the 2x2 local factors are half steps
  std::vector<cplx> u_aa_, u_bb_, u_ab_;
};

WaveFunction step_single(const WaveFunction& psi, const PotentialProfile& V, double m, double dt);
CoupledState step_coupled(const CoupledState& s, const ExactModelConfig& cfg, double m);

WaveFunction time_reverse(const WaveFunction& psi);
CoupledState time_reverse(const CoupledState& s);

// <psi|H0|psi> with the spectral (FFT) kinetic energy.
double expect_h0(const WaveFunction& psi, const PotentialProfile& V, double m);
double coupled_norm(const CoupledState& s);
double coupled_fidelity(const CoupledState& x, const CoupledState& y);
// <A|H0 + hw/2|A> + <B|H0 + 3hw/2|B> + 2 Re <A|alpha x|B>
double coupled_total_energy(const CoupledState& s, const ExactModelConfig& cfg, double m);
// <A|H0|A> + <B|H0|B>
double coupled_electron_energy(const CoupledState& s, const PotentialProfile& V, double m);

// Aborts a run once the probability within margin_nm of a wall exceeds limit.
struct EdgeMonitor {
  double margin_nm = 40.0;
  double limit = 1e-6;
  void check(const WaveFunction& psi, double t_fs) const;
  void check(const CoupledState& s, double t_fs) const;
};

// Advances a state by an arbitrary time.
class Propagator {
public:
  virtual ~Propagator() = default;
  virtual void advance(WaveFunction& psi, double t_fs) const = 0;
};

// Exact evolution in the box eigenbasis.
class SpectralPropagator : public Propagator {
public:
  explicit SpectralPropagator(const EnergyBasis& basis) : basis_(basis) {}
  void advance(WaveFunction& psi, double t_fs) const override;

private:
  const EnergyBasis& basis_;
};

class SplitPropagator : public Propagator {
public:
  SplitPropagator(const PotentialProfile& V, double m, double dt) : V_(V), m_(m), full_(V, m, dt) {}
  void advance(WaveFunction& psi, double t_fs) const override;

private:
  PotentialProfile V_;
  double m_;
  SplitStepper full_;
};

// Snapshot rows (t_fs, x_nm, Re, Im) per channel, every x_stride-th grid point.
class TrajectoryWriter {
public:
  TrajectoryWriter(const std::string& path, bool coupled, int x_stride = 1);
  ~TrajectoryWriter();
  TrajectoryWriter(const TrajectoryWriter&) = delete;
  TrajectoryWriter& operator=(const TrajectoryWriter&) = delete;
  void write(double t_fs, const WaveFunction& psi);
  void write(double t_fs, const CoupledState& s);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  bool coupled_;
  int x_stride_;
};

}  // namespace ephx
