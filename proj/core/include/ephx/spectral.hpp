#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ephx/potentials.hpp"
#include "ephx/units.hpp"

namespace ephx {

// Eigenpairs of the 3-point finite-difference H0 with Dirichlet walls.
//
// modes holds real standing waves, column-major (mode n at modes[n*nx]), normalized so that
// sum_i mode_n(i)^2 dx = 1. Each mode carries a unit phase factor so the basis function is
// phi_n = phase[n] * mode_n. The phase fixes the otherwise arbitrary LAPACK sign: modes that are
// cosine-like at the grid centre get a real positive value there, sine-like modes get phase i
// with a positive slope. With that convention cos + i sin pairs build right-moving waves, which
// keeps the complex coefficient a(E) smooth along the energy axis.
struct EnergyBasis {
  Grid grid;
  double mass = 0.0;
  std::vector<double> energies;
  std::vector<double> modes;
  std::vector<cplx> phase;

  int size() const { return static_cast<int>(energies.size()); }
  const double* mode(int n) const { return modes.data() + static_cast<std::size_t>(n) * grid.nx; }
  WaveFunction state(int n) const;
  // Local level spacing (E_{n+1} - E_{n-1}) / 2, one-sided at the ends.
  std::vector<double> spacing() const;
};

struct EnergySpectrumCoeffs {
  std::vector<cplx> coeffs;
  int size() const { return static_cast<int>(coeffs.size()); }
};

EnergyBasis diagonalize(const PotentialProfile& V, double m = Constants::m_eff);

// Largest relative residual ||H0 v - E v|| / (|E| ||v||) over all pairs (for checks and tests).
double max_eigen_residual(const EnergyBasis& basis, const PotentialProfile& V);

EnergySpectrumCoeffs project(const WaveFunction& psi, const EnergyBasis& basis);
WaveFunction synthesize(const EnergySpectrumCoeffs& c, const EnergyBasis& basis);
// Amplitudes at grid points [i_lo, i_hi) only.
std::vector<cplx> synthesize_rows(const EnergySpectrumCoeffs& c, const EnergyBasis& basis, int i_lo, int i_hi);

// a_n -> a_n e^{-i E_n t / hbar}
EnergySpectrumCoeffs evolve(const EnergySpectrumCoeffs& c, const EnergyBasis& basis, double t_fs);
double mean_energy(const EnergySpectrumCoeffs& c, const EnergyBasis& basis);

std::vector<std::pair<double, double>> energy_spectrum_density(const WaveFunction& psi, const EnergyBasis& basis);

// Left-incident plane-wave transmission through the piecewise-constant rendered profile.
double transmission_coefficient(double E, const PotentialProfile& V, double m = Constants::m_eff);

struct ResonanceScan {
  double step = 2.5e-4;  // eV, scan resolution
  double tol = 1e-6;     // eV, golden-section bracket width
};

std::vector<double> find_resonances(const PotentialProfile& V, double m, double e_min, double e_max,
                                    const ResonanceScan& scan = {});

void write_spectrum_csv(const std::string& path, const EnergyBasis& basis);
void write_transmission_csv(const std::string& path, const PotentialProfile& V, double m, double e_min,
                            double e_max, int n_points);
// Rows above e_max are skipped.
void write_spectral_density_csv(const std::string& path, const std::vector<std::pair<double, double>>& rho,
                                double e_max = HUGE_VAL);

}  // namespace ephx
