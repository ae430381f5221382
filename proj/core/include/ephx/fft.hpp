#pragma once

#include <vector>

#include "ephx/units.hpp"

namespace ephx {

// Unnormalized in-place DFTs of length n.
//   forward:  X_j = sum_n x_n e^{-2 pi i j n / N}
//   backward: x_n = sum_j X_j e^{+2 pi i j n / N}
// Plans are cached per length and shared.
void fft_forward(cplx* data, int n);
void fft_backward(cplx* data, int n);
inline void fft_forward(std::vector<cplx>& v) { fft_forward(v.data(), static_cast<int>(v.size())); }
inline void fft_backward(std::vector<cplx>& v) { fft_backward(v.data(), static_cast<int>(v.size())); }

// Continuum-normalized momentum amplitudes phi(k_j) = dx/sqrt(2 pi) sum_n psi_n e^{-i k_j x_n},
// in FFT bin order, so that sum |phi|^2 dk = sum |psi|^2 dx. Synthesis uses e^{+ikx}.
std::vector<cplx> momentum_amplitudes(const WaveFunction& psi);
WaveFunction from_momentum_amplitudes(const Grid& grid, const std::vector<cplx>& phi);

}  // namespace ephx
