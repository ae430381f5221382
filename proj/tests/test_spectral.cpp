#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ephx/errors.hpp"
#include "ephx/spectral.hpp"
#include "support.hpp"

using namespace ephx;
using fixtures::default_grid;
using fixtures::free_basis;
using fixtures::lab_barrier;
using fixtures::lab_basis;

TEST(Diagonalize, FreeBoxLevels) {
  const auto& b = free_basis();
  const double hb = Constants::hbar, m = Constants::m_eff;
  // Dirichlet nodes sit one cell beyond the first and last grid point
  double L = (default_grid().nx + 1) * default_grid().dx;
  for (int n = 1; n <= 10; ++n) {
    double analytic = hb * hb * std::numbers::pi * std::numbers::pi * n * n / (2.0 * m * L * L);
    EXPECT_NEAR(b.energies[n - 1] / analytic, 1.0, 5e-3) << "level " << n;
  }
}

TEST(Diagonalize, SortedOrthonormalAndResidual) {
  const auto& b = lab_basis();
  for (int n = 1; n < b.size(); ++n) EXPECT_GE(b.energies[n], b.energies[n - 1]);
  int nx = b.grid.nx;
  for (int p : {0, 1, 7, 200, 1500, 4095})
    for (int q : {0, 1, 7, 200, 1500, 4095}) {
      double s = 0.0;
      for (int i = 0; i < nx; ++i) s += b.mode(p)[i] * b.mode(q)[i];
      EXPECT_NEAR(s * b.grid.dx, p == q ? 1.0 : 0.0, 1e-9) << p << "," << q;
    }
  EXPECT_LT(max_eigen_residual(b, lab_barrier()), 1e-8);
}

TEST(Diagonalize, ConstantShiftShiftsSpectrum) {
  Grid g = Grid::centered(512, 0.2);
  auto v = double_barrier(g, 2.0, 0.3, 16.0);
  auto a = diagonalize(v);
  auto b = diagonalize(shifted(v, 0.125));
  for (int n = 0; n < a.size(); ++n) EXPECT_NEAR(b.energies[n] - a.energies[n], 0.125, 1e-10);
}

TEST(Diagonalize, RejectsNonFinite) {
  Grid g = Grid::centered(64, 0.2);
  PotentialProfile p(g);
  p.v[3] = std::nan("");
  EXPECT_THROW(diagonalize(p), InvalidArgument);
}

TEST(Diagonalize, ResonantClustersHaveInteriorWeight) {
  const auto& b = lab_basis();
  double uniform = 16.0 / (b.grid.nx * b.grid.dx);
  auto interior = [&](int n) {
    double s = 0.0;
    for (int i = 0; i < b.grid.nx; ++i)
      if (std::abs(b.grid.x(i)) < 8.0) s += b.mode(n)[i] * b.mode(n)[i];
    return s * b.grid.dx;
  };
  for (auto [lo, hi, target, tol] : {std::tuple{0.01, 0.04, 0.023, 0.003}, std::tuple{0.06, 0.14, 0.096, 0.005}}) {
    int best = -1;
    double bw = 0.0;
    for (int n = 0; n < b.size(); ++n)
      if (b.energies[n] > lo && b.energies[n] < hi && interior(n) > bw) {
        bw = interior(n);
        best = n;
      }
    ASSERT_GE(best, 0);
    EXPECT_NEAR(b.energies[best], target, tol);
    EXPECT_GT(bw, 5.0 * uniform);
  }
}

TEST(Gauge, CentreValueAndSlopeConvention) {
  const auto& b = lab_basis();
  int i1 = b.grid.nx / 2, i0 = i1 - 1;
  for (int n = 0; n < 50; ++n) {
    const double* v = b.mode(n);
    if (b.phase[n] == cplx(1.0, 0.0))
      EXPECT_GT(v[i0] + v[i1], 0.0);
    else {
      EXPECT_EQ(b.phase[n], cplx(0.0, 1.0));
      EXPECT_GT(v[i1] - v[i0], 0.0);
    }
  }
}

TEST(Projection, EigenstatesAndSuperpositions) {
  const auto& b = lab_basis();
  auto c = project(b.state(5), b);
  for (int n = 0; n < b.size(); ++n) EXPECT_NEAR(std::abs(c.coeffs[n]), n == 5 ? 1.0 : 0.0, 1e-9);
  WaveFunction s(b.grid);
  for (int i = 0; i < b.grid.nx; ++i) s.amp[i] = (b.state(1).amp[i] + b.state(2).amp[i]) / std::sqrt(2.0);
  auto d = project(s, b);
  EXPECT_NEAR(std::norm(d.coeffs[1]), 0.5, 1e-9);
  EXPECT_NEAR(std::norm(d.coeffs[2]), 0.5, 1e-9);
}

TEST(Projection, CompletenessAndInnerProducts) {
  const auto& b = lab_basis();
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  WaveFunction psi(b.grid), phi(b.grid);
  for (int i = 0; i < b.grid.nx; ++i) {
    psi.amp[i] = cplx(nd(rng), nd(rng));
    phi.amp[i] = cplx(nd(rng), nd(rng));
  }
  normalize(psi);
  normalize(phi);
  auto a = project(psi, b), c = project(phi, b);
  double s = 0.0;
  cplx ov = 0.0;
  for (int n = 0; n < b.size(); ++n) {
    s += std::norm(a.coeffs[n]);
    ov += std::conj(a.coeffs[n]) * c.coeffs[n];
  }
  EXPECT_NEAR(s, 1.0, 1e-9);
  EXPECT_NEAR(std::abs(ov - inner(psi, phi)), 0.0, 1e-9);
  auto back = synthesize(a, b);
  double err = 0.0;
  for (int i = 0; i < b.grid.nx; ++i) err += std::norm(back.amp[i] - psi.amp[i]);
  EXPECT_LT(std::sqrt(err * b.grid.dx), 1e-9);
}

TEST(Projection, GridMismatchRejected) {
  auto psi = gaussian_packet(Grid::centered(1024, 0.2), 0.0, 10.0, 0.0);
  EXPECT_THROW(project(psi, lab_basis()), GridMismatch);
}

TEST(SpectralDensity, EigenstateIsSpike) {
  const auto& b = lab_basis();
  auto rho = energy_spectrum_density(b.state(40), b);
  for (int n = 0; n < b.size(); ++n) EXPECT_NEAR(rho[n].second, n == 40 ? 1.0 : 0.0, 1e-9);
}

TEST(SpectralDensity, GaussianPeaksAtItsEnergy) {
  const auto& b = free_basis();
  auto psi = gaussian_packet(b.grid, -150.0, 25.0, energy_to_wavevector(0.096));
  auto rho = energy_spectrum_density(psi, b);
  int best = 0;
  for (int n = 0; n < b.size(); ++n)
    if (rho[n].second > rho[best].second) best = n;
  double spacing = b.spacing()[best];
  EXPECT_NEAR(rho[best].first, 0.096, spacing);
}

TEST(Transmission, FreeSpaceIsTransparent) {
  auto p = free_space(default_grid());
  for (double E : {1e-3, 0.05, 0.2, 1.0}) EXPECT_DOUBLE_EQ(transmission_coefficient(E, p), 1.0);
  EXPECT_THROW(transmission_coefficient(0.0, p), InvalidArgument);
}

TEST(Transmission, SingleBarrierMatchesAnalytic) {
  auto p = rectangular_barrier(default_grid(), -1.0, 1.0, 0.3);
  const double E = 0.15, V = 0.3, a = 2.0, hb = Constants::hbar, m = Constants::m_eff;
  double kap = std::sqrt(2.0 * m * (V - E)) / hb;
  double analytic = 1.0 / (1.0 + V * V * std::pow(std::sinh(kap * a), 2) / (4.0 * E * (V - E)));
  EXPECT_NEAR(analytic, 0.5564310547, 1e-9);
  EXPECT_NEAR(transmission_coefficient(E, p), analytic, 1e-10);
}

TEST(Resonances, LabDoubleBarrier) {
  auto r = find_resonances(lab_barrier(), Constants::m_eff, 0.005, 0.25);
  // a third well level sits near 0.21 eV, inside the scan window
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], 0.023, 0.003);
  EXPECT_NEAR(r[1], 0.096, 0.005);
  EXPECT_NEAR(r[2], 0.2105, 0.002);
  for (double E : r) {
    EXPECT_GT(transmission_coefficient(E, lab_barrier()), 0.99);
    EXPECT_GT(transmission_coefficient(E, lab_barrier()), transmission_coefficient(E + 1e-3, lab_barrier()));
    EXPECT_GT(transmission_coefficient(E, lab_barrier()), transmission_coefficient(E - 1e-3, lab_barrier()));
  }
}

TEST(Resonances, FreeSpaceHasNone) {
  EXPECT_TRUE(find_resonances(free_space(default_grid()), Constants::m_eff, 0.005, 0.25).empty());
  EXPECT_THROW(find_resonances(free_space(default_grid()), Constants::m_eff, 0.2, 0.1), InvalidArgument);
}

TEST(Resonances, WideWellHasMore) {
  auto p = double_barrier(default_grid(), 2.0, 0.3, 32.0);
  EXPECT_GT(find_resonances(p, Constants::m_eff, 0.005, 0.25).size(), 3u);
}
