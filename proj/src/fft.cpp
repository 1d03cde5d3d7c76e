#include "mcsa/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "mcsa/error.hpp"

namespace mcsa {

namespace {

using cd = std::complex<double>;

// In-place radix-2 decimation-in-time; n must be a power of two.
void radix2(std::vector<cd>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles computed directly per index; accumulating w *= w_len drifts.
    std::vector<cd> tw(half);
    for (std::size_t k = 0; k < half; ++k) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      tw[k] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cd u = a[i + k];
        const cd v = a[i + k + half] * tw[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

// exp(sign * i * pi * k^2 / n), with k^2 reduced mod 2n to keep the
// argument small for long transforms.
cd chirp(std::size_t k, std::size_t n, double sign) {
  const auto two_n = 2 * static_cast<unsigned long long>(n);
  const auto kk = static_cast<unsigned long long>(k) * k % two_n;
  const double ang = sign * std::numbers::pi * static_cast<double>(kk) / static_cast<double>(n);
  return {std::cos(ang), std::sin(ang)};
}

std::vector<cd> bluestein(std::span<const cd> x, bool inverse) {
  const std::size_t n = x.size();
  const std::size_t m = std::bit_ceil(2 * n - 1);
  const double sign = inverse ? 1.0 : -1.0;

  std::vector<cd> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = chirp(k, n, sign);

  std::vector<cd> a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * w[k];
  b[0] = std::conj(w[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(w[k]);

  radix2(a, false);
  radix2(b, false);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  radix2(a, true);

  std::vector<cd> out(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * w[k];
  return out;
}

std::vector<cd> transform(std::span<const cd> x, bool inverse) {
  if (x.empty()) throw DomainError("cannot transform an empty sequence");
  if (std::has_single_bit(x.size())) {
    std::vector<cd> a(x.begin(), x.end());
    radix2(a, inverse);
    return a;
  }
  return bluestein(x, inverse);
}

}  // namespace

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> x) {
  return transform(x, false);
}

std::vector<std::complex<double>> ifft(std::span<const std::complex<double>> x) {
  auto out = transform(x, true);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<std::complex<double>> fft_real(std::span<const double> x, std::size_t n_fft) {
  if (n_fft < x.size()) throw DomainError("n_fft is shorter than the input");
  std::vector<cd> buf(n_fft);
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
  return fft(buf);
}

}  // namespace mcsa
