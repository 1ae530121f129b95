#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pehfd {

enum class Unit { acceleration_g, volts };

const char* unit_name(Unit u);

// Uniformly sampled real signal. Immutable after construction.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> samples, double fs_hz, Unit unit);

  std::span<const double> samples() const { return samples_; }
  double fs() const { return fs_; }
  Unit unit() const { return unit_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration() const { return static_cast<double>(samples_.size()) / fs_; }

  // Sum of x^2 / fs.
  double energy() const;

 private:
  std::vector<double> samples_;
  double fs_;
  Unit unit_;
};

// One-sided magnitude spectrum: bins 0..n/2 of an n-point transform.
struct Spectrum {
  std::vector<double> magnitudes;
  double df = 0.0;
  double fs_origin = 0.0;
  std::size_t n_points = 0;

  double bin_frequency(std::size_t k) const { return static_cast<double>(k) * df; }

  // (1/N) * sum over all N two-sided bins of |X_k|^2, i.e. the Parseval
  // counterpart of sum x[n]^2.
  double parseval_sum() const;
};

struct Tone {
  double frequency_hz;
  double amplitude;
};

TimeSeries synth_sine(double f_hz, double amplitude, double phase_rad, double fs_hz,
                      double duration_s, Unit unit = Unit::acceleration_g);

// Sum of zero-phase sinusoids plus seeded white Gaussian noise.
TimeSeries synth_composite(std::span<const Tone> tones, double noise_sigma, double fs_hz,
                           double duration_s, std::uint64_t seed,
                           Unit unit = Unit::acceleration_g);

Spectrum fft_magnitude(const TimeSeries& ts);

// Energy in [f_lo, f_hi] computed from the spectrum, in Joules into r_ohm:
// sum over selected bins of w_k |X_k|^2 / (N * R * fs).
double band_energy_digital(const TimeSeries& ts, double f_lo, double f_hi, double r_ohm);

// `count` contiguous windows of round(window_s * fs) samples from t = 0.
std::vector<TimeSeries> segment(const TimeSeries& ts, double window_s, std::size_t count);

}  // namespace pehfd
