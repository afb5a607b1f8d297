#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace gevlab::detail {

// In-place, unnormalized DFTs of length data.size():
//   forward:  X_k = sum_j x_j e^{-2 pi i jk/n}
//   backward: x_j = sum_k X_k e^{+2 pi i jk/n}
void fft_forward_inplace(std::span<std::complex<double>> data);
void fft_backward_inplace(std::span<std::complex<double>> data);

}  // namespace gevlab::detail
