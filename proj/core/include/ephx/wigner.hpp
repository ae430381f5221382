#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ephx/ensemble.hpp"
#include "ephx/potentials.hpp"
#include "ephx/units.hpp"

namespace ephx {

// w(x_i, k_j), row-major with rows at fixed x. k_j = k0 + j dk, dk = pi / (nx dx),
// k0 = -pi / (2 dx), nk = nx.
struct WignerFunction {
  Grid grid;
  int nk = 0;
  double dk = 0.0;
  double k0 = 0.0;
  std::vector<double> w;

  double k(int j) const { return k0 + j * dk; }
  double& at(int i, int j) { return w[static_cast<std::size_t>(i) * nk + j]; }
  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * nk + j]; }
};

// w(x_i, k_j) = (dx / pi) sum_m psi(x_i + m dx) psi*(x_i - m dx) e^{-2 i k_j m dx}, psi = 0 off the
// grid, m in [-nx/2, nx/2). One FFT per row.
WignerFunction wigner_transform(const WaveFunction& psi);
WignerFunction wigner_of_ensemble(const Ensemble& ens);
WignerFunction wigner_of_ensemble(const SignedEnsemble& ens);

std::vector<double> position_marginal(const WignerFunction& W);
std::vector<double> momentum_marginal(const WignerFunction& W);
double wigner_integral(const WignerFunction& W);
// 2 pi sum w^2 dx dk, one for a pure state.
double wigner_purity(const WignerFunction& W);
double sup_norm_difference(const WignerFunction& a, const WignerFunction& b);

struct PositivityReport {
  double min_Q = 0.0;
  double argmin_x = 0.0;
  bool violated = false;
};
constexpr double kPositivityEps = 1e-10;
PositivityReport check_positivity(const WignerFunction& W);
PositivityReport check_positivity(const std::vector<double>& Q, const Grid& grid);

// sum w (hbar^2 k^2 / 2m + V) dx dk
double mean_energy(const WignerFunction& W, const PotentialProfile& V, double m = Constants::m_eff);

struct EnergyCondition {
  double residual = 0.0;  // eV, <E_after> - <E_before> - E_gamma
  bool satisfied = false;
};
constexpr double kEnergyConditionTol = 0.02;
EnergyCondition check_energy_condition(const WignerFunction& before, const WignerFunction& after, double E_gamma,
                                       const PotentialProfile& V, double m = Constants::m_eff);

// Inverts the transform of a pure state, referenced to the row of maximal density. Output is
// normalized with psi(x_ref) real and positive. Throws PurityError if |purity - 1| > 5%.
WaveFunction reconstruct_pure_state(const WignerFunction& W);

// Rectangular window of a Wigner function for output.
struct WignerView {
  int nx = 0, nk = 0;
  double dx = 0.0, dk = 0.0, x0 = 0.0, k0 = 0.0;
  std::vector<double> w;
};
WignerView crop(const WignerFunction& W, double x_min, double x_max, double k_min, double k_max, int x_stride = 1,
                int k_stride = 1);
WignerView full_view(const WignerFunction& W);

// CSV rows (x_nm, k_inv_nm, w).
void write_wigner_csv(const std::string& path, const WignerView& v);
// One ASCII header line "ephx-wigner 1 nx nk dx dk x0 k0\n", then nx*nk little-endian float64, row-major by x.
void write_wigner_binary(const std::string& path, const WignerView& v);
WignerView read_wigner_binary(const std::string& path);
// Rows outside [x_min, x_max] and [k_min, k_max] are skipped; the sums still run over the full grid.
void write_marginals_csv(const std::string& path_x, const std::string& path_k, const WignerFunction& W,
                         double x_min = -HUGE_VAL, double x_max = HUGE_VAL, double k_min = -HUGE_VAL,
                         double k_max = HUGE_VAL);

}  // namespace ephx
