#include <cmath>
#include <numbers>

#include "ephx/errors.hpp"
#include "ephx/fft.hpp"
#include "ephx/units.hpp"

namespace ephx {

namespace {
bool is_pow2(int n) { return n >= 2 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(int nx_, double dx_, double x0_) : nx(nx_), dx(dx_), x0(x0_) {
  if (!is_pow2(nx)) throw InvalidArgument("grid: nx must be a power of two >= 2, got " + std::to_string(nx));
  if (!(dx > 0.0) || !std::isfinite(dx)) throw InvalidArgument("grid: dx must be positive");
  if (!std::isfinite(x0)) throw InvalidArgument("grid: x0 must be finite");
}

Grid Grid::centered(int nx, double dx) { return Grid(nx, dx, -0.5 * (nx - 1) * dx); }

double Grid::dk() const { return 2.0 * std::numbers::pi / (nx * dx); }

double Grid::k(int j) const {
  int jj = j < nx / 2 ? j : j - nx;
  return jj * dk();
}

double Grid::k_nyquist() const { return std::numbers::pi / dx; }

std::vector<double> Grid::xs() const {
  std::vector<double> out(nx);
  for (int i = 0; i < nx; ++i) out[i] = x(i);
  return out;
}

std::vector<double> Grid::ks() const {
  std::vector<double> out(nx);
  for (int j = 0; j < nx; ++j) out[j] = k(j);
  return out;
}

WaveFunction::WaveFunction(const Grid& g, std::vector<cplx> a) : grid(g), amp(std::move(a)) {
  if (static_cast<int>(amp.size()) != grid.nx) throw InvalidArgument("wavefunction: amplitude length != nx");
}

double energy_to_wavevector(double E, double m) {
  if (!(E >= 0.0)) throw InvalidArgument("energy_to_wavevector: negative energy");
  if (!(m > 0.0)) throw InvalidArgument("energy_to_wavevector: mass must be positive");
  return std::sqrt(2.0 * m * E) / Constants::hbar;
}

double wavevector_to_energy(double k, double m) {
  return Constants::hbar * Constants::hbar * k * k / (2.0 * m);
}

WaveFunction gaussian_packet(const Grid& grid, double x_c, double sigma, double k0) {
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian_packet: sigma must be positive");
  double xl = grid.x(0), xr = grid.x(grid.nx - 1);
  if (x_c < xl || x_c > xr) throw InvalidArgument("gaussian_packet: centre outside the grid");
  if (x_c - 5.0 * sigma < xl || x_c + 5.0 * sigma > xr)
    throw InvalidArgument("gaussian_packet: packet closer than 5 sigma to a domain edge");
  WaveFunction psi(grid);
  double sum = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    double u = grid.x(i) - x_c;
    double env = std::exp(-u * u / (4.0 * sigma * sigma));
    // phase referenced to x_c keeps the carrier well conditioned far from the origin
    psi.amp[i] = env * std::polar(1.0, k0 * u) * std::polar(1.0, k0 * x_c);
    sum += env * env;
  }
  sum *= grid.dx;
  double analytic = std::sqrt(2.0 * std::numbers::pi) * sigma;
  if (1.0 - sum / analytic > 1e-8) throw InvalidArgument("gaussian_packet: packet clipped by the domain");
  double s = 1.0 / std::sqrt(sum);
  for (auto& a : psi.amp) a *= s;
  return psi;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw GridMismatch("grid mismatch between operands");
}

double norm2(const WaveFunction& psi) {
  double s = 0.0;
  for (const auto& a : psi.amp) s += std::norm(a);
  return s * psi.grid.dx;
}

cplx inner(const WaveFunction& psi, const WaveFunction& phi) {
  require_same_grid(psi.grid, phi.grid);
  cplx s = 0.0;
  for (int i = 0; i < psi.grid.nx; ++i) s += std::conj(psi.amp[i]) * phi.amp[i];
  return s * psi.grid.dx;
}

double fidelity(const WaveFunction& a, const WaveFunction& b) {
  return std::norm(inner(a, b)) / (norm2(a) * norm2(b));
}

void normalize(WaveFunction& psi) {
  double n = norm2(psi);
  if (!(n > 0.0)) throw InvalidArgument("normalize: zero state");
  double s = 1.0 / std::sqrt(n);
  for (auto& a : psi.amp) a *= s;
}

std::vector<double> density(const WaveFunction& psi) {
  std::vector<double> q(psi.grid.nx);
  for (int i = 0; i < psi.grid.nx; ++i) q[i] = std::norm(psi.amp[i]);
  return q;
}

double mean_x(const WaveFunction& psi) {
  double s = 0.0, n = 0.0;
  for (int i = 0; i < psi.grid.nx; ++i) {
    double p = std::norm(psi.amp[i]);
    s += p * psi.grid.x(i);
    n += p;
  }
  return s / n;
}

double mean_k(const WaveFunction& psi) {
  auto phi = momentum_amplitudes(psi);
  double s = 0.0, n = 0.0;
  for (int j = 0; j < psi.grid.nx; ++j) {
    double p = std::norm(phi[j]);
    s += p * psi.grid.k(j);
    n += p;
  }
  return s / n;
}

double edge_probability(const WaveFunction& psi, double margin_nm) {
  double xl = psi.grid.x(0) + margin_nm, xr = psi.grid.x(psi.grid.nx - 1) - margin_nm;
  double s = 0.0;
  for (int i = 0; i < psi.grid.nx; ++i) {
    double x = psi.grid.x(i);
    if (x < xl || x > xr) s += std::norm(psi.amp[i]);
  }
  return s * psi.grid.dx;
}

double probability_in(const WaveFunction& psi, double a, double b) {
  double s = 0.0;
  for (int i = 0; i < psi.grid.nx; ++i) {
    double x = psi.grid.x(i);
    if (x >= a && x <= b) s += std::norm(psi.amp[i]);
  }
  return s * psi.grid.dx;
}

}  // namespace ephx
