#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ephx/errors.hpp"
#include "ephx/fft.hpp"
#include "ephx/units.hpp"
#include "support.hpp"

using namespace ephx;

TEST(Constants, MassesInNmFsEv) {
  EXPECT_NEAR(Constants::m0, 5.685630, 5e-6);
  EXPECT_NEAR(Constants::m_eff, 0.041 * 5.685630, 1e-6);
  EXPECT_DOUBLE_EQ(Constants::hbar, 0.6582119569);
}

TEST(Grid, RejectsNonPowerOfTwo) {
  EXPECT_THROW(Grid(1000, 0.2, 0.0), InvalidArgument);
  EXPECT_THROW(Grid(1, 0.2, 0.0), InvalidArgument);
  EXPECT_THROW(Grid(64, 0.0, 0.0), InvalidArgument);
  EXPECT_NO_THROW(Grid(64, 0.2, 0.0));
}

TEST(Grid, CenteredIsMirrorSymmetric) {
  Grid g = Grid::centered(4096, 0.2);
  for (int i = 0; i < g.nx; ++i) EXPECT_NEAR(g.x(i), -g.x(g.nx - 1 - i), 1e-12);
  EXPECT_NEAR(g.x(g.nx / 2), 0.1, 1e-12);
}

TEST(Wavevector, ReferenceMomenta) {
  EXPECT_NEAR(energy_to_wavevector(0.023), 0.1573237819, 1e-9);
  EXPECT_NEAR(energy_to_wavevector(0.096), 0.3214149523, 1e-9);
  EXPECT_EQ(energy_to_wavevector(0.0), 0.0);
  EXPECT_THROW(energy_to_wavevector(-1e-3), InvalidArgument);
}

TEST(Wavevector, RoundTrip) {
  for (double E = 1e-4; E <= 1.0; E *= 1.37) {
    double k = energy_to_wavevector(E);
    EXPECT_NEAR(wavevector_to_energy(k) / E, 1.0, 1e-12);
  }
}

TEST(Gaussian, NormAndMoments) {
  const Grid& g = fixtures::default_grid();
  auto psi = gaussian_packet(g, -150.0, 25.0, 0.15733);
  EXPECT_NEAR(norm2(psi), 1.0, 1e-12);
  EXPECT_NEAR(mean_x(psi), -150.0, g.dx);
  EXPECT_NEAR(mean_k(psi), 0.15733, std::numbers::pi / (g.nx * g.dx));
  EXPECT_NEAR(mean_k(psi), 0.15733, 1e-10);
}

TEST(Gaussian, ZeroMomentumIsReal) {
  const Grid& g = fixtures::default_grid();
  auto psi = gaussian_packet(g, 20.0, 25.0, 0.0);
  for (const auto& a : psi.amp) EXPECT_EQ(a.imag(), 0.0);
  EXPECT_NEAR(mean_k(psi), 0.0, 1e-12);
}

TEST(Gaussian, MirrorImage) {
  const Grid& g = fixtures::default_grid();
  auto a = gaussian_packet(g, -150.0, 25.0, 0.15733);
  auto b = gaussian_packet(g, 150.0, 25.0, -0.15733);
  for (int i = 0; i < g.nx; ++i) EXPECT_NEAR(std::abs(a.amp[i] - b.amp[g.nx - 1 - i]), 0.0, 1e-12);
}

TEST(Gaussian, Rejections) {
  const Grid& g = fixtures::default_grid();
  EXPECT_THROW(gaussian_packet(g, 0.0, 0.0, 0.1), InvalidArgument);
  EXPECT_THROW(gaussian_packet(g, -390.0, 25.0, 0.1), InvalidArgument);
  EXPECT_THROW(gaussian_packet(g, 500.0, 25.0, 0.1), InvalidArgument);
}

TEST(Inner, PhaseLinearityAndOverlap) {
  const Grid& g = fixtures::default_grid();
  auto psi = gaussian_packet(g, -50.0, 5.0, 0.2);
  WaveFunction phi = psi;
  const double th = 0.7;
  for (auto& a : phi.amp) a *= std::polar(1.0, th);
  cplx v = inner(psi, phi);
  EXPECT_NEAR(v.real(), std::cos(th), 1e-12);
  EXPECT_NEAR(v.imag(), std::sin(th), 1e-12);
  EXPECT_NEAR(norm2(psi), inner(psi, psi).real(), 1e-15);
  // 40 sigma apart: analytic overlap e^{-200}
  auto far = gaussian_packet(g, 150.0, 5.0, 0.2);
  EXPECT_LT(std::abs(inner(psi, far)), 1e-12);
}

TEST(Inner, GridMismatch) {
  auto a = gaussian_packet(Grid::centered(1024, 0.2), 0.0, 5.0, 0.0);
  auto b = gaussian_packet(Grid::centered(1024, 0.1), 0.0, 5.0, 0.0);
  EXPECT_THROW(inner(a, b), GridMismatch);
}

TEST(Fft, Parseval) {
  const Grid& g = fixtures::default_grid();
  auto psi = gaussian_packet(g, 30.0, 12.0, -0.4);
  auto phi = momentum_amplitudes(psi);
  double s = 0.0;
  for (const auto& p : phi) s += std::norm(p);
  EXPECT_NEAR(s * g.dk(), norm2(psi), 1e-10);
  auto back = from_momentum_amplitudes(g, phi);
  for (int i = 0; i < g.nx; ++i) EXPECT_NEAR(std::abs(back.amp[i] - psi.amp[i]), 0.0, 1e-12);
}

TEST(Fft, SynthesisSignConvention) {
  // a plane wave e^{+ik x} lands in the bin of +k
  Grid g = Grid::centered(256, 0.5);
  int jb = 5;
  WaveFunction psi(g);
  for (int i = 0; i < g.nx; ++i) psi.amp[i] = std::polar(1.0, g.k(jb) * g.x(i));
  auto phi = momentum_amplitudes(psi);
  int best = 0;
  for (int j = 0; j < g.nx; ++j)
    if (std::abs(phi[j]) > std::abs(phi[best])) best = j;
  EXPECT_EQ(best, jb);
  EXPECT_GT(g.k(best), 0.0);
}
