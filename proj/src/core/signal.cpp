#include "core/signal.hpp"

#include "core/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

namespace pehfd {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t sample_count(double fs_hz, double duration_s) {
  if (!(fs_hz > 0.0) || !std::isfinite(fs_hz)) {
    throw InvalidArgument("sampling rate must be positive");
  }
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidArgument("duration must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration_s * fs_hz));
  if (n == 0) throw InvalidArgument("duration shorter than one sample");
  return n;
}

void check_below_nyquist(double f_hz, double fs_hz) {
  if (!(f_hz > 0.0) || !(f_hz < fs_hz / 2.0)) {
    throw InvalidArgument("tone frequency " + std::to_string(f_hz) +
                          " Hz must lie in (0, fs/2) for fs = " + std::to_string(fs_hz) +
                          " Hz");
  }
}

}  // namespace

const char* unit_name(Unit u) {
  return u == Unit::volts ? "volts" : "acceleration_g";
}

TimeSeries::TimeSeries(std::vector<double> samples, double fs_hz, Unit unit)
    : samples_(std::move(samples)), fs_(fs_hz), unit_(unit) {
  if (!(fs_ > 0.0) || !std::isfinite(fs_)) {
    throw InvalidArgument("sampling rate must be positive");
  }
}

double TimeSeries::energy() const {
  double acc = 0.0;
  for (double x : samples_) acc += x * x;
  return acc / fs_;
}

double Spectrum::parseval_sum() const {
  if (n_points == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < magnitudes.size(); ++k) {
    const bool unpaired = k == 0 || (n_points % 2 == 0 && k == n_points / 2);
    acc += (unpaired ? 1.0 : 2.0) * magnitudes[k] * magnitudes[k];
  }
  return acc / static_cast<double>(n_points);
}

TimeSeries synth_sine(double f_hz, double amplitude, double phase_rad, double fs_hz,
                      double duration_s, Unit unit) {
  const auto n = sample_count(fs_hz, duration_s);
  check_below_nyquist(f_hz, fs_hz);
  std::vector<double> x(n);
  const double w = 2.0 * std::numbers::pi * f_hz / fs_hz;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(w * static_cast<double>(i) + phase_rad);
  }
  return TimeSeries(std::move(x), fs_hz, unit);
}

TimeSeries synth_composite(std::span<const Tone> tones, double noise_sigma, double fs_hz,
                           double duration_s, std::uint64_t seed, Unit unit) {
  const auto n = sample_count(fs_hz, duration_s);
  for (const auto& t : tones) check_below_nyquist(t.frequency_hz, fs_hz);
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("noise sigma must be non-negative");

  std::vector<double> x(n, 0.0);
  for (const auto& t : tones) {
    const double w = 2.0 * std::numbers::pi * t.frequency_hz / fs_hz;
    for (std::size_t i = 0; i < n; ++i) x[i] += t.amplitude * std::sin(w * static_cast<double>(i));
  }
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise_sigma);
    for (auto& v : x) v += gauss(rng);
  }
  return TimeSeries(std::move(x), fs_hz, unit);
}

Spectrum fft_magnitude(const TimeSeries& ts) {
  if (ts.empty()) throw InvalidArgument("fft_magnitude: empty series");
  const std::size_t n = ts.size();
  const std::size_t bins = n / 2 + 1;

  std::vector<double> in(ts.samples().begin(), ts.samples().end());
  std::vector<std::complex<double>> out(bins);
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error("fft_magnitude: FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  Spectrum s;
  s.n_points = n;
  s.fs_origin = ts.fs();
  s.df = ts.fs() / static_cast<double>(n);
  s.magnitudes.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) s.magnitudes[k] = std::abs(out[k]);
  return s;
}

double band_energy_digital(const TimeSeries& ts, double f_lo, double f_hi, double r_ohm) {
  if (!(f_lo >= 0.0) || !(f_lo < f_hi) || !(f_hi <= ts.fs() / 2.0)) {
    throw InvalidArgument("band_energy_digital: need 0 <= f_lo < f_hi <= fs/2");
  }
  if (!(r_ohm > 0.0)) throw InvalidArgument("band_energy_digital: R must be positive");
  const Spectrum s = fft_magnitude(ts);
  const std::size_t n = s.n_points;

  double acc = 0.0;
  for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
    const double f = s.bin_frequency(k);
    if (f < f_lo || f > f_hi) continue;
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    acc += (unpaired ? 1.0 : 2.0) * s.magnitudes[k] * s.magnitudes[k];
  }
  return acc / (static_cast<double>(n) * r_ohm * ts.fs());
}

std::vector<TimeSeries> segment(const TimeSeries& ts, double window_s, std::size_t count) {
  if (!(window_s > 0.0)) throw InvalidArgument("segment: window must be positive");
  if (count == 0) throw InvalidArgument("segment: count must be at least 1");
  const auto len = static_cast<std::size_t>(std::llround(window_s * ts.fs()));
  if (len == 0) throw InvalidArgument("segment: window shorter than one sample");
  if (len * count > ts.size()) {
    throw DataError("segment: " + std::to_string(count) + " windows of " +
                    std::to_string(window_s) + " s need " + std::to_string(len * count) +
                    " samples, series has " + std::to_string(ts.size()));
  }
  std::vector<TimeSeries> out;
  out.reserve(count);
  const auto src = ts.samples();
  for (std::size_t i = 0; i < count; ++i) {
    const auto part = src.subspan(i * len, len);
    out.emplace_back(std::vector<double>(part.begin(), part.end()), ts.fs(), ts.unit());
  }
  return out;
}

}  // namespace pehfd
