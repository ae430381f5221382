#include "ephx/spectral.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "ephx/csv.hpp"
#include "ephx/errors.hpp"

namespace ephx {

namespace {

double kinetic_coupling(double m, double dx) { return Constants::hbar * Constants::hbar / (2.0 * m * dx * dx); }

void fix_gauge(EnergyBasis& b, const PotentialProfile& V) {
  const Grid& g = b.grid;
  int nx = g.nx;
  int i1 = nx / 2, i0 = i1 - 1;
  double vmid = 0.5 * (V.v[i0] + V.v[i1]);
  double kfloor = 1.0 / g.length();
  b.phase.assign(b.size(), cplx(1.0, 0.0));
  for (int n = 0; n < b.size(); ++n) {
    double* v = b.modes.data() + static_cast<std::size_t>(n) * nx;
    double value = 0.5 * (v[i0] + v[i1]);
    double slope = (v[i1] - v[i0]) / g.dx;
    double kl = std::max(std::sqrt(2.0 * b.mass * std::abs(b.energies[n] - vmid)) / Constants::hbar, kfloor);
    double sine = slope / kl;
    bool cosine_like = std::abs(value) >= std::abs(sine);
    double s = cosine_like ? value : sine;
    if (s < 0.0)
      for (int i = 0; i < nx; ++i) v[i] = -v[i];
    if (!cosine_like) b.phase[n] = cplx(0.0, 1.0);
  }
}

}  // namespace

WaveFunction EnergyBasis::state(int n) const {
  WaveFunction psi(grid);
  const double* v = mode(n);
  for (int i = 0; i < grid.nx; ++i) psi.amp[i] = phase[n] * v[i];
  return psi;
}

std::vector<double> EnergyBasis::spacing() const {
  int n = size();
  std::vector<double> d(n, 1.0);
  if (n < 2) return d;
  d[0] = energies[1] - energies[0];
  d[n - 1] = energies[n - 1] - energies[n - 2];
  for (int i = 1; i < n - 1; ++i) d[i] = 0.5 * (energies[i + 1] - energies[i - 1]);
  for (auto& x : d) x = std::max(x, 1e-300);
  return d;
}

EnergyBasis diagonalize(const PotentialProfile& V, double m) {
  const Grid& g = V.grid;
  int n = g.nx;
  if (n > 16384) throw InvalidArgument("diagonalize: nx > 16384");
  for (double x : V.v)
    if (!std::isfinite(x)) throw InvalidArgument("diagonalize: non-finite potential");
  double c = kinetic_coupling(m, g.dx);
  std::vector<double> d(n), e(n, -c);
  for (int i = 0; i < n; ++i) d[i] = 2.0 * c + V.v[i];
  EnergyBasis b;
  b.grid = g;
  b.mass = m;
  b.energies.resize(n);
  b.modes.resize(static_cast<std::size_t>(n) * n);
  std::vector<lapack_int> isuppz(2 * n);
  lapack_int found = 0;
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, 0.0, &found,
                                   b.energies.data(), b.modes.data(), n, isuppz.data());
  if (info != 0 || found != n) throw Error("diagonalize: dstevr failed, info = " + std::to_string(info));
  double s = 1.0 / std::sqrt(g.dx);
  for (auto& x : b.modes) x *= s;
  fix_gauge(b, V);
  return b;
}

double max_eigen_residual(const EnergyBasis& b, const PotentialProfile& V) {
  int nx = b.grid.nx;
  double c = kinetic_coupling(b.mass, b.grid.dx);
  double worst = 0.0;
  for (int n = 0; n < b.size(); ++n) {
    const double* v = b.mode(n);
    double r2 = 0.0, v2 = 0.0;
    for (int i = 0; i < nx; ++i) {
      double hv = (2.0 * c + V.v[i]) * v[i];
      if (i > 0) hv -= c * v[i - 1];
      if (i < nx - 1) hv -= c * v[i + 1];
      double r = hv - b.energies[n] * v[i];
      r2 += r * r;
      v2 += v[i] * v[i];
    }
    double scale = std::max(std::abs(b.energies[n]), 1e-12);
    worst = std::max(worst, std::sqrt(r2 / v2) / scale);
  }
  return worst;
}

EnergySpectrumCoeffs project(const WaveFunction& psi, const EnergyBasis& b) {
  require_same_grid(psi.grid, b.grid);
  int nx = b.grid.nx, nb = b.size();
  EnergySpectrumCoeffs out;
  out.coeffs.assign(nb, cplx(0.0, 0.0));
  // interleaved complex storage is a column-major 2 x nx real matrix
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, 2, nb, nx, b.grid.dx,
              reinterpret_cast<const double*>(psi.amp.data()), 2, b.modes.data(), nx, 0.0,
              reinterpret_cast<double*>(out.coeffs.data()), 2);
  for (int n = 0; n < nb; ++n) out.coeffs[n] *= std::conj(b.phase[n]);
  return out;
}

std::vector<cplx> synthesize_rows(const EnergySpectrumCoeffs& c, const EnergyBasis& b, int i_lo, int i_hi) {
  int nx = b.grid.nx, nb = b.size();
  if (c.size() != nb) throw InvalidArgument("synthesize: coefficient count != basis size");
  if (i_lo < 0 || i_hi > nx || i_lo >= i_hi) throw InvalidArgument("synthesize_rows: bad row range");
  std::vector<cplx> w(nb);
  for (int n = 0; n < nb; ++n) w[n] = b.phase[n] * c.coeffs[n];
  int rows = i_hi - i_lo;
  std::vector<cplx> out(rows);
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasTrans, 2, rows, nb, 1.0, reinterpret_cast<const double*>(w.data()),
              2, b.modes.data() + i_lo, nx, 0.0, reinterpret_cast<double*>(out.data()), 2);
  return out;
}

WaveFunction synthesize(const EnergySpectrumCoeffs& c, const EnergyBasis& b) {
  return WaveFunction(b.grid, synthesize_rows(c, b, 0, b.grid.nx));
}

EnergySpectrumCoeffs evolve(const EnergySpectrumCoeffs& c, const EnergyBasis& b, double t_fs) {
  EnergySpectrumCoeffs out = c;
  for (int n = 0; n < c.size(); ++n) out.coeffs[n] *= std::polar(1.0, -b.energies[n] * t_fs / Constants::hbar);
  return out;
}

double mean_energy(const EnergySpectrumCoeffs& c, const EnergyBasis& b) {
  double s = 0.0, w = 0.0;
  for (int n = 0; n < c.size(); ++n) {
    double p = std::norm(c.coeffs[n]);
    s += p * b.energies[n];
    w += p;
  }
  return s / w;
}

std::vector<std::pair<double, double>> energy_spectrum_density(const WaveFunction& psi, const EnergyBasis& b) {
  auto c = project(psi, b);
  std::vector<std::pair<double, double>> out(b.size());
  for (int n = 0; n < b.size(); ++n) out[n] = {b.energies[n], std::norm(c.coeffs[n])};
  return out;
}

double transmission_coefficient(double E, const PotentialProfile& V, double m) {
  if (!(E > 0.0)) throw InvalidArgument("transmission_coefficient: E must be positive");
  const Grid& g = V.grid;
  // regions of constant potential: value and left edge
  std::vector<double> val{V.v[0]}, left{g.x(0) - 0.5 * g.dx};
  for (int i = 1; i < g.nx; ++i)
    if (V.v[i] != V.v[i - 1]) {
      val.push_back(V.v[i]);
      left.push_back(g.x(i) - 0.5 * g.dx);
    }
  int nr = static_cast<int>(val.size());
  if (nr == 1) return 1.0;
  auto wavevector = [&](double v) {
    cplx k = std::sqrt(cplx(2.0 * m * (E - v), 0.0)) / Constants::hbar;
    if (std::abs(k) < 1e-12) k = 1e-12;
    return k;
  };
  // region j: A e^{ik(x - x_j)} + B e^{-ik(x - x_j)}, x_j its left edge; the first region is
  // referenced to the first interface. Start from a pure outgoing wave and march leftwards.
  cplx A = 1.0, B = 0.0;
  const cplx I(0.0, 1.0);
  for (int j = nr - 2; j >= 0; --j) {
    cplx kj = wavevector(val[j]), kn = wavevector(val[j + 1]);
    double L = (j == 0) ? 0.0 : left[j + 1] - left[j];
    cplx S = A + B, D = A - B;
    cplx r = kn / kj;
    cplx P = 0.5 * (S + r * D), Q = 0.5 * (S - r * D);
    A = P * std::exp(-I * kj * L);
    B = Q * std::exp(I * kj * L);
  }
  cplx k_in = wavevector(val.front()), k_out = wavevector(val.back());
  double T = (k_out.real() / k_in.real()) / std::norm(A);
  return std::clamp(T, 0.0, 1.0);
}

std::vector<double> find_resonances(const PotentialProfile& V, double m, double e_min, double e_max,
                                    const ResonanceScan& scan) {
  if (!(e_min < e_max) || !(e_min > 0.0)) throw InvalidArgument("find_resonances: empty or non-positive scan range");
  int n = std::max(3, static_cast<int>(std::ceil((e_max - e_min) / scan.step)) + 1);
  std::vector<double> E(n), T(n);
  for (int i = 0; i < n; ++i) {
    E[i] = e_min + (e_max - e_min) * i / (n - 1);
    T[i] = transmission_coefficient(E[i], V, m);
  }
  std::vector<double> out;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 1; i < n - 1; ++i) {
    if (!(T[i] > T[i - 1] && T[i] >= T[i + 1])) continue;
    double a = E[i - 1], b = E[i + 1];
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = transmission_coefficient(c, V, m), fd = transmission_coefficient(d, V, m);
    while (b - a > scan.tol) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = transmission_coefficient(c, V, m);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = transmission_coefficient(d, V, m);
      }
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

void write_spectrum_csv(const std::string& path, const EnergyBasis& b) {
  CsvWriter w(path);
  w.header({"n", "E_eV"});
  for (int n = 0; n < b.size(); ++n) w.row(n, b.energies[n]);
}

void write_transmission_csv(const std::string& path, const PotentialProfile& V, double m, double e_min, double e_max,
                            int n_points) {
  CsvWriter w(path);
  w.header({"E_eV", "T"});
  for (int i = 0; i < n_points; ++i) {
    double E = e_min + (e_max - e_min) * i / std::max(1, n_points - 1);
    w.row(E, transmission_coefficient(E, V, m));
  }
}

void write_spectral_density_csv(const std::string& path, const std::vector<std::pair<double, double>>& rho,
                                double e_max) {
  CsvWriter w(path);
  w.header({"E_eV", "prob"});
  for (const auto& [E, p] : rho)
    if (E <= e_max) w.row(E, p);
}

}  // namespace ephx
