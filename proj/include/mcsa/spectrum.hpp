#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcsa/motor.hpp"

namespace mcsa {

enum class Window { rectangular, hann };

std::string_view to_string(Window w);
Window parse_window(std::string_view name);

/// Periodic window of length n (Hann: 0.5 - 0.5 cos(2 pi i / n)).
std::vector<double> window_coefficients(Window w, std::size_t n);

/// Factor that divides out the window's coherent gain: 1 for rectangular,
/// 2 for Hann.
double coherent_gain_correction(Window w);

/// One-sided amplitude spectrum.
///
/// `phasors[j]` is the scaled complex DFT bin and `amplitudes[j]` its
/// magnitude. Bins 0 and n_fft/2 are scaled by corr/N, every other bin by
/// 2 corr/N, where N is the number of signal samples (zero padding adds
/// none), so a sinusoid of amplitude A centred on a bin reads A.
struct Spectrum {
  double sample_rate_hz = 0.0;
  double bin_hz = 0.0;
  std::size_t n_fft = 0;
  std::size_t n_samples = 0;
  Window window = Window::rectangular;
  std::vector<double> amplitudes;
  std::vector<std::complex<double>> phasors;

  double nyquist_hz() const noexcept { return sample_rate_hz / 2.0; }
  double freq_of(std::size_t bin) const noexcept { return static_cast<double>(bin) * bin_hz; }
};

/// Windowed DFT of any length. n_fft defaults to the sample count and must
/// not be shorter than it.
Spectrum transform(const Waveform& w, Window window = Window::hann,
                   std::optional<std::size_t> n_fft = std::nullopt);

struct SamplingPlan {
  std::size_t n_samples = 0;
  double sample_rate_hz = 0.0;
  double sample_time_s = 0.0;
};

/// n = cycles * samples_per_cycle, Ts = period / samples_per_cycle, Fs = 1/Ts.
SamplingPlan sampling_plan(int cycles, int samples_per_cycle, double cycle_period_s);

struct PeakMeasurement {
  double target_hz = 0.0;
  /// Centre of the winning bin; no interpolation.
  double found_hz = 0.0;
  double amplitude = 0.0;
  int bin_offset = 0;
};

/// Largest bin within +-half_width_bins of round(target / bin_hz). Ties go
/// to the bin closest to the target bin.
///
/// Without zero padding the amplitude also undoes scalloping: the tone's
/// fractional offset is estimated from the larger neighbour bin and the
/// window's main-lobe response divided out. found_hz stays the bin centre.
PeakMeasurement measure_peak(const Spectrum& s, double target_hz, int half_width_bins = 2);

/// Least-squares amplitudes of sinusoids at known frequencies.
///
/// Models the spectrum bins within +-half_width_bins of every target as a
/// sum of windowed tones (plus a DC term) and solves for each tone's cosine
/// and sine coefficient jointly, so tones closer than the main-lobe width
/// are still separated. Targets closer than half a resolution cell
/// (fs / n_samples) are merged and share one amplitude. Throws DomainError
/// for targets at or above Nyquist.
std::vector<double> fit_amplitudes(const Spectrum& s, std::span<const double> target_hz,
                                   int half_width_bins = 2);

/// `bin_index,freq_hz,amplitude` preceded by `# bin_hz=<decimal>`.
void write_spectrum(std::ostream& out, const Spectrum& s);

}  // namespace mcsa
