#include "ephx/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>

#include "ephx/csv.hpp"
#include "ephx/errors.hpp"
#include "ephx/fft.hpp"

namespace ephx {

namespace {

constexpr double kPi = std::numbers::pi;

WignerFunction empty_like(const Grid& g) {
  WignerFunction W;
  W.grid = g;
  W.nk = g.nx;
  W.dk = kPi / (g.nx * g.dx);
  W.k0 = -kPi / (2.0 * g.dx);
  W.w.assign(static_cast<std::size_t>(g.nx) * g.nx, 0.0);
  return W;
}

// Adds weight * transform(psi) into W.
void accumulate(WignerFunction& W, const WaveFunction& psi, double weight) {
  const Grid& g = psi.grid;
  int n = g.nx, half = n / 2;
  std::vector<cplx> buf(n);
  const double scale = weight * g.dx / kPi;
  for (int i = 0; i < n; ++i) {
    std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
    int mmax = std::min({half - 1, n - 1 - i, i});
    bool any = false;
    for (int m = -std::min(half, i); m <= mmax; ++m) {
      int p = i + m, q = i - m;
      if (p < 0 || p >= n || q < 0 || q >= n) continue;
      cplx c = psi.amp[p] * std::conj(psi.amp[q]);
      if (m & 1) c = -c;
      buf[(m + n) % n] = c;
      any = any || c != cplx(0.0, 0.0);
    }
    if (!any) continue;
    fft_forward(buf);
    double* row = W.w.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) row[j] += scale * buf[j].real();
  }
}

void require_normalized(const WaveFunction& psi) {
  if (std::abs(norm2(psi) - 1.0) > 1e-8) throw InvalidArgument("wigner_transform: state is not normalized");
}

template <typename Members>
WignerFunction from_members(const Members& members) {
  if (members.empty()) throw InvalidArgument("wigner_of_ensemble: empty ensemble");
  double tw = 0.0;
  for (const auto& mb : members) tw += mb.weight;
  if (std::abs(tw - 1.0) > 1e-9) throw InvalidArgument("wigner_of_ensemble: weights do not sum to one");
  WignerFunction W = empty_like(members.front().psi.grid);
  for (const auto& mb : members) {
    require_same_grid(mb.psi.grid, W.grid);
    require_normalized(mb.psi);
    accumulate(W, mb.psi, mb.weight);
  }
  return W;
}

}  // namespace

WignerFunction wigner_transform(const WaveFunction& psi) {
  require_normalized(psi);
  WignerFunction W = empty_like(psi.grid);
  accumulate(W, psi, 1.0);
  return W;
}

WignerFunction wigner_of_ensemble(const Ensemble& ens) { return from_members(ens.members); }
WignerFunction wigner_of_ensemble(const SignedEnsemble& ens) { return from_members(ens.members); }

std::vector<double> position_marginal(const WignerFunction& W) {
  int nx = W.grid.nx;
  std::vector<double> q(nx, 0.0);
  for (int i = 0; i < nx; ++i) {
    double s = 0.0;
    for (int j = 0; j < W.nk; ++j) s += W.at(i, j);
    q[i] = s * W.dk;
  }
  return q;
}

std::vector<double> momentum_marginal(const WignerFunction& W) {
  std::vector<double> p(W.nk, 0.0);
  for (int i = 0; i < W.grid.nx; ++i)
    for (int j = 0; j < W.nk; ++j) p[j] += W.at(i, j);
  for (auto& x : p) x *= W.grid.dx;
  return p;
}

double wigner_integral(const WignerFunction& W) {
  double s = 0.0;
  for (double x : W.w) s += x;
  return s * W.grid.dx * W.dk;
}

double wigner_purity(const WignerFunction& W) {
  double s = 0.0;
  for (double x : W.w) s += x * x;
  return 2.0 * kPi * s * W.grid.dx * W.dk;
}

double sup_norm_difference(const WignerFunction& a, const WignerFunction& b) {
  require_same_grid(a.grid, b.grid);
  if (a.nk != b.nk) throw GridMismatch("wigner: k grids differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.w.size(); ++i) d = std::max(d, std::abs(a.w[i] - b.w[i]));
  return d;
}

PositivityReport check_positivity(const std::vector<double>& Q, const Grid& grid) {
  PositivityReport r;
  auto it = std::min_element(Q.begin(), Q.end());
  r.min_Q = *it;
  r.argmin_x = grid.x(static_cast<int>(it - Q.begin()));
  r.violated = r.min_Q < -kPositivityEps;
  return r;
}

PositivityReport check_positivity(const WignerFunction& W) { return check_positivity(position_marginal(W), W.grid); }

double mean_energy(const WignerFunction& W, const PotentialProfile& V, double m) {
  require_same_grid(W.grid, V.grid);
  std::vector<double> kin(W.nk);
  for (int j = 0; j < W.nk; ++j) kin[j] = wavevector_to_energy(W.k(j), m);
  double s = 0.0;
  for (int i = 0; i < W.grid.nx; ++i) {
    double row = 0.0;
    for (int j = 0; j < W.nk; ++j) row += W.at(i, j) * (kin[j] + V.v[i]);
    s += row;
  }
  return s * W.grid.dx * W.dk;
}

EnergyCondition check_energy_condition(const WignerFunction& before, const WignerFunction& after, double E_gamma,
                                       const PotentialProfile& V, double m) {
  require_same_grid(before.grid, after.grid);
  EnergyCondition c;
  c.residual = mean_energy(after, V, m) - mean_energy(before, V, m) - E_gamma;
  c.satisfied = std::abs(c.residual) <= kEnergyConditionTol * std::abs(E_gamma);
  return c;
}

WaveFunction reconstruct_pure_state(const WignerFunction& W) {
  double purity = wigner_purity(W);
  if (std::abs(purity - 1.0) > 0.05)
    throw PurityError("reconstruct_pure_state: purity " + std::to_string(purity) + " is not that of a pure state");
  const Grid& g = W.grid;
  int n = g.nx;
  auto Q = position_marginal(W);
  int r = static_cast<int>(std::max_element(Q.begin(), Q.end()) - Q.begin());
  int r2 = (r + 1 < n) ? r + 1 : r - 1;

  // rho(i + m, i - m) from row i; the transform only pairs sites of equal index parity
  std::vector<std::vector<cplx>> rows(n);
  auto row = [&](int i) -> const std::vector<cplx>& {
    auto& b = rows[i];
    if (b.empty()) {
      b.resize(n);
      for (int j = 0; j < n; ++j) b[j] = W.at(i, j);
      fft_backward(b);
      double s = kPi / (g.dx * n);
      for (int m = 0; m < n; ++m) b[m] *= ((m & 1) ? -s : s);  // (-1)^m is the same for m and m - n
    }
    return b;
  };
  auto rho = [&](int a, int b) {  // psi(a) psi*(b), a - b even
    int i = (a + b) / 2, m = (a - b) / 2;
    return row(i)[(m + n) % n];
  };

  WaveFunction psi(g);
  double qr = std::max(row(r)[0].real(), 1e-300), qr2 = std::max(row(r2)[0].real(), 1e-300);
  double sr = std::sqrt(qr), sr2 = std::sqrt(qr2);
  for (int a = 0; a < n; ++a) {
    if (((a - r) & 1) == 0)
      psi.amp[a] = rho(a, r) / sr;
    else
      psi.amp[a] = rho(a, r2) / sr2;  // still missing the phase of psi(r2)
  }
  // the second sublattice is fixed up to one phase; pick the one that makes it continue the
  // first sublattice smoothly
  cplx acc = 0.0;
  for (int a = 0; a < n; ++a) {
    if (((a - r) & 1) == 0) continue;
    cplx nb = 0.0;
    if (a > 0) nb += psi.amp[a - 1];
    if (a < n - 1) nb += psi.amp[a + 1];
    acc += std::conj(psi.amp[a]) * nb;
  }
  cplx ph = std::abs(acc) > 0.0 ? acc / std::abs(acc) : cplx(1.0, 0.0);
  for (int a = 0; a < n; ++a)
    if (((a - r) & 1) != 0) psi.amp[a] *= ph;
  normalize(psi);
  cplx ref = psi.amp[r];
  if (std::abs(ref) > 0.0) {
    cplx fix = std::conj(ref) / std::abs(ref);
    for (auto& a : psi.amp) a *= fix;
  }
  return psi;
}

WignerView crop(const WignerFunction& W, double x_min, double x_max, double k_min, double k_max, int x_stride,
                int k_stride) {
  x_stride = std::max(1, x_stride);
  k_stride = std::max(1, k_stride);
  std::vector<int> is, js;
  for (int i = 0; i < W.grid.nx; i += x_stride)
    if (W.grid.x(i) >= x_min && W.grid.x(i) <= x_max) is.push_back(i);
  for (int j = 0; j < W.nk; j += k_stride)
    if (W.k(j) >= k_min && W.k(j) <= k_max) js.push_back(j);
  WignerView v;
  if (is.empty() || js.empty()) return v;
  v.nx = static_cast<int>(is.size());
  v.nk = static_cast<int>(js.size());
  v.dx = W.grid.dx * x_stride;
  v.dk = W.dk * k_stride;
  v.x0 = W.grid.x(is.front());
  v.k0 = W.k(js.front());
  v.w.reserve(static_cast<std::size_t>(v.nx) * v.nk);
  for (int i : is)
    for (int j : js) v.w.push_back(W.at(i, j));
  return v;
}

WignerView full_view(const WignerFunction& W) {
  WignerView v;
  v.nx = W.grid.nx;
  v.nk = W.nk;
  v.dx = W.grid.dx;
  v.dk = W.dk;
  v.x0 = W.grid.x0;
  v.k0 = W.k0;
  v.w = W.w;
  return v;
}

void write_wigner_csv(const std::string& path, const WignerView& v) {
  CsvWriter w(path);
  w.header({"x_nm", "k_inv_nm", "w"});
  for (int i = 0; i < v.nx; ++i)
    for (int j = 0; j < v.nk; ++j) w.row(v.x0 + i * v.dx, v.k0 + j * v.dk, v.w[static_cast<std::size_t>(i) * v.nk + j]);
}

void write_wigner_binary(const std::string& path, const WignerView& v) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw Error("cannot open " + path + " for writing");
  std::fprintf(f, "ephx-wigner 1 %d %d %.17g %.17g %.17g %.17g\n", v.nx, v.nk, v.dx, v.dk, v.x0, v.k0);
  // host order; every supported target is little-endian
  std::fwrite(v.w.data(), sizeof(double), v.w.size(), f);
  std::fclose(f);
}

WignerView read_wigner_binary(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw Error("cannot open " + path);
  WignerView v;
  int version = 0;
  if (std::fscanf(f, "ephx-wigner %d %d %d %lg %lg %lg %lg", &version, &v.nx, &v.nk, &v.dx, &v.dk, &v.x0, &v.k0) != 7 ||
      version != 1 || std::fgetc(f) != '\n') {
    std::fclose(f);
    throw Error(path + ": not an ephx wigner dump");
  }
  v.w.resize(static_cast<std::size_t>(v.nx) * v.nk);
  std::size_t got = std::fread(v.w.data(), sizeof(double), v.w.size(), f);
  std::fclose(f);
  if (got != v.w.size()) throw Error(path + ": truncated wigner dump");
  return v;
}

void write_marginals_csv(const std::string& path_x, const std::string& path_k, const WignerFunction& W, double x_min,
                         double x_max, double k_min, double k_max) {
  auto Q = position_marginal(W);
  auto P = momentum_marginal(W);
  {
    CsvWriter w(path_x);
    w.header({"x_nm", "Q"});
    for (int i = 0; i < W.grid.nx; ++i)
      if (W.grid.x(i) >= x_min && W.grid.x(i) <= x_max) w.row(W.grid.x(i), Q[i]);
  }
  CsvWriter w(path_k);
  w.header({"k_inv_nm", "P"});
  for (int j = 0; j < W.nk; ++j)
    if (W.k(j) >= k_min && W.k(j) <= k_max) w.row(W.k(j), P[j]);
}

}  // namespace ephx
