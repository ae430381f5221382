#pragma once

#include <string>
#include <vector>

#include "ephx/potentials.hpp"
#include "ephx/propagator.hpp"
#include "ephx/spectral.hpp"
#include "ephx/units.hpp"

namespace ephx {

enum class CollisionModel { Energy, Momentum };

const char* to_string(CollisionModel m);

struct CollisionSchedule {
  double t_s = 0.0;     // fs, first exchange
  int n_steps = 40;
  double dwell = 6.0;   // fs between exchanges
  double quantum = 0.0; // eV (energy model) or eV fs / nm (momentum model, hbar * dk)
  int sign = +1;        // +1 absorption, -1 emission

  double duration() const { return n_steps * dwell; }
  double t_end() const { return t_s + duration(); }
  void validate() const;
};

enum class ShiftAxis {
  // cosine-like and sine-like modes (gauge phase 1 and i) are shifted along separate axes.
  // Box levels alternate between the two classes and near-degenerate pairs of opposite class
  // make the merged sequence jump, so mixing them smears probability over the whole box.
  ByGaugeClass,
  Merged,  // one axis through all eigenvalues
};

// Coefficient shift a'(E_n) = a(E_n - dE). The density a(E) / sqrt(local spacing) is
// interpolated linearly in Re and Im against the eigenvalue axis; the axis is padded with a zero
// node one spacing beyond each end. Result renormalized to the input norm.
// lost_probability receives the weight whose shifted energy falls off the spectrum.
EnergySpectrumCoeffs shift_coefficients(const EnergySpectrumCoeffs& c, const EnergyBasis& basis, double dE,
                                        double* lost_probability = nullptr,
                                        ShiftAxis axis = ShiftAxis::ByGaugeClass);

WaveFunction energy_exchange(const WaveFunction& psi, const EnergyBasis& basis, double dE,
                             ShiftAxis axis = ShiftAxis::ByGaugeClass);
WaveFunction momentum_exchange(const WaveFunction& psi, double dk);

// hbar (k(E_to) - k(E_from)), the momentum transfer that moves a free packet between energies.
double momentum_quantum(double E_from, double E_to, double m = Constants::m_eff);

enum class EnergyAccumulation {
  // literal alternation: re-project and shift by dE at every substep
  Sequential,
  // substep j rebuilds the state from the coefficients taken at t_s shifted by j * dE and
  // evolved to the current time. Avoids compounding interpolation error, but the evolved
  // interpolation residue refocuses at the box walls after long runs.
  Cumulative,
};

struct CollisionSample {
  double t_fs;
  int substeps;  // exchanges applied so far
  WaveFunction psi;
};

struct CollisionOptions {
  double t_end = 0.0;         // fs; at least the schedule end
  double sample_every = 10.0; // fs between regular samples
  EnergyAccumulation accumulation = EnergyAccumulation::Sequential;
  ShiftAxis axis = ShiftAxis::ByGaugeClass;
  const Propagator* propagator = nullptr;  // spectral propagation in the given basis when null
  bool check_edges = true;
  EdgeMonitor monitor{};
};

// Propagates to t_s, then alternates [exchange quantum / n_steps, propagate dwell] n_steps times,
// then propagates to t_end. Samples at t = 0, every sample_every fs, at t_s before the first
// exchange, at the end of every dwell and at t_end.
std::vector<CollisionSample> run_collision(const WaveFunction& psi0, CollisionModel model,
                                           const CollisionSchedule& sched, const PotentialProfile& V, double m,
                                           const EnergyBasis& basis, const CollisionOptions& opt);

// Scalar columns (t_fs, substeps, mean_E_eV, mean_k_inv_nm, norm) for a collision trajectory.
void write_collision_scalars(const std::string& path, const std::vector<CollisionSample>& samples,
                             const PotentialProfile& V, double m);

}  // namespace ephx
