#pragma once

#include <complex>
#include <vector>

namespace ephx {

using cplx = std::complex<double>;

// Units throughout: nm, fs, eV.
struct Constants {
  static constexpr double hbar = 0.6582119569;           // eV fs
  static constexpr double c = 299.792458;                // nm/fs
  static constexpr double mc2 = 0.51099895e6;            // eV
  static constexpr double m0 = mc2 / (c * c);            // eV fs^2 / nm^2
  static constexpr double m_ratio = 0.041;
  static constexpr double m_eff = m_ratio * m0;
};

// Uniform grid x_i = x0 + i dx, i in [0, nx).
struct Grid {
  int nx = 0;
  double dx = 0.0;
  double x0 = 0.0;

  Grid() = default;
  Grid(int nx, double dx, double x0);

  // Grid centred on x = 0 (mirror symmetric, no point at the origin for even nx).
  static Grid centered(int nx, double dx);

  double x(int i) const { return x0 + i * dx; }
  double length() const { return nx * dx; }
  // FFT wavenumber of bin j in standard (0, +, ..., -) order.
  double k(int j) const;
  double dk() const;
  double k_nyquist() const;
  std::vector<double> xs() const;
  std::vector<double> ks() const;

  bool operator==(const Grid& o) const { return nx == o.nx && dx == o.dx && x0 == o.x0; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

struct WaveFunction {
  Grid grid;
  std::vector<cplx> amp;

  WaveFunction() = default;
  explicit WaveFunction(const Grid& g) : grid(g), amp(g.nx, cplx(0.0, 0.0)) {}
  WaveFunction(const Grid& g, std::vector<cplx> a);

  int size() const { return grid.nx; }
  cplx& operator[](int i) { return amp[i]; }
  const cplx& operator[](int i) const { return amp[i]; }
};

double energy_to_wavevector(double E, double m = Constants::m_eff);
double wavevector_to_energy(double k, double m = Constants::m_eff);

WaveFunction gaussian_packet(const Grid& grid, double x_c, double sigma, double k0);

double norm2(const WaveFunction& psi);
cplx inner(const WaveFunction& psi, const WaveFunction& phi);
double fidelity(const WaveFunction& a, const WaveFunction& b);
void normalize(WaveFunction& psi);
void require_same_grid(const Grid& a, const Grid& b);

std::vector<double> density(const WaveFunction& psi);
double mean_x(const WaveFunction& psi);
double mean_k(const WaveFunction& psi);
// Probability within margin_nm of either wall.
double edge_probability(const WaveFunction& psi, double margin_nm);
// Probability in [a, b].
double probability_in(const WaveFunction& psi, double a, double b);

}  // namespace ephx
