#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mcsa {

/// Forward DFT X[j] = sum_i x[i] exp(-2 pi i ij / N) for any N >= 1.
/// Powers of two use an iterative radix-2 transform; every other length is
/// mapped onto one via Bluestein's chirp-z convolution.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x);

/// Inverse DFT including the 1/N factor.
std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> x);

/// Real input, zero-padded to n_fft (n_fft >= x.size()).
std::vector<std::complex<double>> fft_real(std::span<const double> x, std::size_t n_fft);

}  // namespace mcsa
