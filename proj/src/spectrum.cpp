#include "mcsa/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>

#include "mcsa/error.hpp"
#include "mcsa/fft.hpp"
#include "mcsa/text.hpp"

namespace mcsa {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

// Main-lobe response of the Hann window at fractional bin offset d, unity at 0.
double hann_lobe(double d) {
  if (std::abs(d) < 1e-12) return 1.0;
  return sinc(d) / (1.0 - d * d);
}

void check_target(const Spectrum& s, double target_hz) {
  if (!(target_hz >= 0.0)) throw DomainError("target frequency must be >= 0");
  if (target_hz >= s.nyquist_hz()) {
    throw DomainError("target " + text::format_shortest(target_hz) + " Hz is not below Nyquist " +
                      text::format_shortest(s.nyquist_hz()) + " Hz");
  }
}

}  // namespace

std::string_view to_string(Window w) { return w == Window::hann ? "hann" : "rectangular"; }

Window parse_window(std::string_view name) {
  if (name == "hann") return Window::hann;
  if (name == "rectangular" || name == "rect") return Window::rectangular;
  throw ParseError("unknown window '" + std::string(name) + "'", 0);
}

std::vector<double> window_coefficients(Window w, std::size_t n) {
  std::vector<double> c(n, 1.0);
  if (w == Window::hann) {
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    }
  }
  return c;
}

double coherent_gain_correction(Window w) { return w == Window::hann ? 2.0 : 1.0; }

Spectrum transform(const Waveform& w, Window window, std::optional<std::size_t> n_fft) {
  const std::size_t n = w.size();
  const std::size_t nfft = n_fft.value_or(n);
  if (nfft < n) {
    throw DomainError("n_fft " + std::to_string(nfft) + " is shorter than the waveform (" +
                      std::to_string(n) + " samples)");
  }
  // A single sample has no period for the Hann window to span.
  if (n == 1) window = Window::rectangular;
  const auto coeffs = window_coefficients(window, n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = w.samples()[i] * coeffs[i];
  const auto X = fft_real(x, nfft);

  Spectrum s;
  s.sample_rate_hz = w.sample_rate_hz();
  s.n_fft = nfft;
  s.n_samples = n;
  s.window = window;
  s.bin_hz = w.sample_rate_hz() / static_cast<double>(nfft);
  const std::size_t bins = nfft / 2 + 1;
  s.phasors.resize(bins);
  s.amplitudes.resize(bins);
  const double corr = coherent_gain_correction(window);
  const double edge = corr / static_cast<double>(n);
  for (std::size_t j = 0; j < bins; ++j) {
    const bool single = j == 0 || (nfft % 2 == 0 && j == nfft / 2);
    s.phasors[j] = X[j] * (single ? edge : 2.0 * edge);
    s.amplitudes[j] = std::abs(s.phasors[j]);
  }
  return s;
}

SamplingPlan sampling_plan(int cycles, int samples_per_cycle, double cycle_period_s) {
  if (cycles < 1 || samples_per_cycle < 1 || !(cycle_period_s > 0.0)) {
    throw DomainError("sampling plan inputs must all be positive");
  }
  SamplingPlan p;
  p.n_samples = static_cast<std::size_t>(cycles) * static_cast<std::size_t>(samples_per_cycle);
  p.sample_time_s = cycle_period_s / samples_per_cycle;
  p.sample_rate_hz = 1.0 / p.sample_time_s;
  return p;
}

PeakMeasurement measure_peak(const Spectrum& s, double target_hz, int half_width_bins) {
  check_target(s, target_hz);
  if (half_width_bins < 1) throw DomainError("half width must be at least one bin");

  const auto last = static_cast<long>(s.amplitudes.size()) - 1;
  const long target_bin = std::min(std::lround(target_hz / s.bin_hz), last);
  long best = target_bin;
  // Visit 0, -1, +1, -2, +2, ... so equal amplitudes resolve toward the target.
  for (int d = 1; d <= half_width_bins; ++d) {
    for (long cand : {target_bin - d, target_bin + d}) {
      if (cand < 0 || cand > last) continue;
      if (s.amplitudes[static_cast<std::size_t>(cand)] > s.amplitudes[static_cast<std::size_t>(best)]) {
        best = cand;
      }
    }
  }

  PeakMeasurement m;
  m.target_hz = target_hz;
  m.found_hz = s.freq_of(static_cast<std::size_t>(best));
  m.bin_offset = static_cast<int>(best - target_bin);
  m.amplitude = s.amplitudes[static_cast<std::size_t>(best)];

  if (s.window == Window::hann && s.n_fft == s.n_samples && m.amplitude > 0.0) {
    const double a = m.amplitude;
    const double left = best > 0 ? s.amplitudes[static_cast<std::size_t>(best - 1)] : 0.0;
    const double right = best < last ? s.amplitudes[static_cast<std::size_t>(best + 1)] : 0.0;
    const double b = std::max(left, right);
    // For a lone Hann-windowed tone, b/a = (1+d)/(2-d).
    const double d = std::clamp((2.0 * b - a) / (a + b), 0.0, 0.5);
    m.amplitude = a / hann_lobe(d);
  }
  return m;
}

std::vector<double> fit_amplitudes(const Spectrum& s, std::span<const double> target_hz,
                                   int half_width_bins) {
  if (half_width_bins < 1) throw DomainError("half width must be at least one bin");
  for (double f : target_hz) check_target(s, f);
  if (target_hz.empty()) return {};

  // Cluster targets that the record length cannot resolve.
  const double resolution = s.sample_rate_hz / static_cast<double>(s.n_samples);
  std::vector<std::size_t> order(target_hz.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return target_hz[a] < target_hz[b]; });

  std::vector<double> tone_hz;
  std::vector<std::size_t> tone_of(target_hz.size());
  {
    double sum = 0.0;
    std::size_t count = 0;
    double prev = 0.0;
    for (std::size_t idx : order) {
      const double f = target_hz[idx];
      if (count > 0 && f - prev >= 0.5 * resolution) {
        tone_hz.push_back(sum / static_cast<double>(count));
        sum = 0.0;
        count = 0;
      }
      sum += f;
      ++count;
      prev = f;
      tone_of[idx] = tone_hz.size();
    }
    tone_hz.push_back(sum / static_cast<double>(count));
  }
  // DC is always part of the model so offsets do not bleed into low tones.
  const bool add_dc = tone_hz.front() >= 0.5 * resolution;
  std::vector<double> model_hz = tone_hz;
  if (add_dc) model_hz.push_back(0.0);

  const long last = static_cast<long>(s.amplitudes.size()) - 1;
  std::set<long> bin_set;
  for (double f : model_hz) {
    const long c = std::lround(f / s.bin_hz);
    for (long b = c - half_width_bins; b <= c + half_width_bins; ++b) {
      if (b >= 0 && b <= last) bin_set.insert(b);
    }
  }
  const std::vector<long> bins(bin_set.begin(), bin_set.end());
  const auto rows = static_cast<Eigen::Index>(2 * bins.size());

  // Column spectra: the exact windowed response of unit cosine and sine
  // tones, produced by the same transform as the measured spectrum.
  struct Column {
    std::size_t tone;
    bool is_sine;
    Eigen::VectorXd values;
  };
  std::vector<Column> cols;
  const double fs = s.sample_rate_hz;
  for (std::size_t t = 0; t < model_hz.size(); ++t) {
    for (bool sine : {false, true}) {
      std::vector<double> x(s.n_samples);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double ph = 2.0 * kPi * model_hz[t] * static_cast<double>(i) / fs;
        x[i] = sine ? std::sin(ph) : std::cos(ph);
      }
      const Spectrum cs = transform(Waveform(fs, std::move(x)), s.window, s.n_fft);
      Eigen::VectorXd v(rows);
      for (std::size_t r = 0; r < bins.size(); ++r) {
        const auto& p = cs.phasors[static_cast<std::size_t>(bins[r])];
        v(static_cast<Eigen::Index>(2 * r)) = p.real();
        v(static_cast<Eigen::Index>(2 * r + 1)) = p.imag();
      }
      // sin at DC (and near-degenerate columns) carries no information.
      if (v.norm() < 1e-9 * std::sqrt(static_cast<double>(rows))) continue;
      cols.push_back({t, sine, std::move(v)});
    }
  }

  Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) A.col(static_cast<Eigen::Index>(c)) = cols[c].values;
  Eigen::VectorXd y(rows);
  for (std::size_t r = 0; r < bins.size(); ++r) {
    const auto& p = s.phasors[static_cast<std::size_t>(bins[r])];
    y(static_cast<Eigen::Index>(2 * r)) = p.real();
    y(static_cast<Eigen::Index>(2 * r + 1)) = p.imag();
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);

  std::vector<double> cos_part(model_hz.size(), 0.0), sin_part(model_hz.size(), 0.0);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    auto& dst = cols[c].is_sine ? sin_part : cos_part;
    dst[cols[c].tone] = coef(static_cast<Eigen::Index>(c));
  }

  std::vector<double> out(target_hz.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t t = tone_of[i];
    out[i] = std::hypot(cos_part[t], sin_part[t]);
  }
  return out;
}

void write_spectrum(std::ostream& out, const Spectrum& s) {
  out << "# bin_hz=" << text::format_exact(s.bin_hz) << '\n';
  out << "bin_index,freq_hz,amplitude\n";
  for (std::size_t j = 0; j < s.amplitudes.size(); ++j) {
    out << j << ',' << text::format_exact(s.freq_of(j)) << ',' << text::format_exact(s.amplitudes[j])
        << '\n';
  }
}

}  // namespace mcsa
