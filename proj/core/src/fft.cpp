#include "ephx/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace ephx {

namespace {

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

std::mutex g_plan_mutex;

const Plans& plans_for(int n) {
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto p = std::make_unique<Plans>();
  fftw_complex* buf = fftw_alloc_complex(n);
  // ESTIMATE keeps plans (and so results) deterministic run to run.
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p->fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
  p->bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
  fftw_free(buf);
  auto& ref = *p;
  cache.emplace(n, std::move(p));
  return ref;
}

}  // namespace

void fft_forward(cplx* data, int n) {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_for(n).fwd, d, d);
}

void fft_backward(cplx* data, int n) {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_for(n).bwd, d, d);
}

std::vector<cplx> momentum_amplitudes(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  std::vector<cplx> phi = psi.amp;
  fft_forward(phi);
  // the DFT is referenced to x_0; restore the absolute phase e^{-i k x0}
  double s = g.dx / std::sqrt(2.0 * std::numbers::pi);
  for (int j = 0; j < g.nx; ++j) phi[j] *= s * std::polar(1.0, -g.k(j) * g.x0);
  return phi;
}

WaveFunction from_momentum_amplitudes(const Grid& g, const std::vector<cplx>& phi) {
  WaveFunction psi(g, phi);
  double s = std::sqrt(2.0 * std::numbers::pi) / (g.dx * g.nx);
  for (int j = 0; j < g.nx; ++j) psi.amp[j] *= s * std::polar(1.0, g.k(j) * g.x0);
  fft_backward(psi.amp);
  return psi;
}

}  // namespace ephx
