#include <algorithm>
#include <cmath>

#include "ephx/collisions.hpp"
#include "ephx/ensemble.hpp"
#include "ephx/fft.hpp"
#include "ephx/propagator.hpp"
#include "ephx/scenarios.hpp"
#include "ephx/wigner.hpp"

namespace ephx {

std::vector<Check> run_selftest() {
  std::vector<Check> out;
  const double m = Constants::m_eff;
  Grid g = Grid::centered(256, 0.2);
  auto V = double_barrier(g, 2.0, 0.3, 16.0);
  auto psi = gaussian_packet(g, -6.0, 3.0, 0.4);

  out.push_back(make_check("gaussian_norm_error", std::abs(norm2(psi) - 1.0), "<", 1e-10));

  WaveFunction f = psi;
  fft_forward(f.amp.data(), g.nx);
  double parseval = std::abs(norm2(f) / g.nx - 1.0);
  out.push_back(make_check("fft_parseval_error", parseval, "<", 1e-12));

  auto W = wigner_transform(psi);
  auto qx = position_marginal(W);
  auto q = density(psi);
  double marg = 0.0;
  for (int i = 0; i < g.nx; ++i) marg = std::max(marg, std::abs(qx[i] - q[i]));
  out.push_back(make_check("wigner_x_marginal_error", marg, "<", 1e-9));
  out.push_back(make_check("wigner_purity_error", std::abs(wigner_purity(W) - 1.0), "<", 1e-8));
  out.push_back(make_check("reconstruction_infidelity", 1.0 - fidelity(reconstruct_pure_state(W), psi), "<", 1e-8));

  SplitStepper st(V, m, 0.01);
  WaveFunction p = psi;
  st.run(p, 500);
  out.push_back(make_check("split_norm_drift", std::abs(norm2(p) - 1.0), "<", 1e-10));
  p = time_reverse(p);
  st.run(p, 500);
  p = time_reverse(p);
  out.push_back(make_check("reversal_infidelity", 1.0 - fidelity(p, psi), "<", 1e-6));

  auto basis = diagonalize(V, m);
  auto c = project(psi, basis);
  double recon = 1.0 - fidelity(synthesize(c, basis), psi);
  out.push_back(make_check("basis_completeness_infidelity", recon, "<", 1e-10));

  Grid wide = Grid::centered(4096, 0.2);  // default resolution; the shift error falls with box length
  auto fb = diagonalize(free_space(wide), m);
  auto packet = gaussian_packet(wide, -10.0, 12.0, energy_to_wavevector(0.03, m));
  auto there = energy_exchange(packet, fb, 0.073);
  auto home = energy_exchange(there, fb, -0.073);
  out.push_back(make_check("shift_roundtrip_infidelity", 1.0 - fidelity(home, packet), "<", 1e-3));

  auto blind = apply_collision_blind(Ensemble::pure(psi), make_delta(gaussian_packet(g, 10.0, 2.0, 0.0), psi, 0.1));
  auto qb = presence_density(blind);
  out.push_back(make_check("blind_min_Q", *std::min_element(qb.begin(), qb.end()), "<", 0.0));
  return out;
}

}  // namespace ephx
