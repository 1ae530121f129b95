#pragma once

#include "core/signal.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pehfd {

// A piezoelectric harvester modelled as a second-order band-pass filter
//   H(s) = peak_gain * (s w0/Q) / (s^2 + s w0/Q + w0^2),  Q = f0 / bw3db
// from acceleration (g) to open-circuit voltage (V).
struct PehDesign {
  std::string name;
  double thickness_mm = 0.0;
  double f0_hz = 0.0;
  double bw3db_hz = 0.0;
  double peak_gain_v_per_g = 1.0;
  double r_ohm = 1.0;

  double q() const { return f0_hz / bw3db_hz; }

  // Throws InvalidArgument unless f0 > 0, 0 < bw < f0, gain > 0, R > 0.
  void validate() const;
};

// Transposed direct form II biquad obtained by the bilinear transform of a
// PehDesign, prewarped so the discrete resonance sits exactly at f0.
class BandpassBiquad {
 public:
  BandpassBiquad(const PehDesign& design, double fs_hz);

  double process(double x) {
    const double y = b0_ * x + s1_;
    s1_ = b1_ * x - a1_ * y + s2_;
    s2_ = b2_ * x - a2_ * y;
    return y;
  }
  void reset() { s1_ = s2_ = 0.0; }

  // Largest pole magnitude; < 1 for a stable realization.
  double pole_radius() const;
  double fs() const { return fs_; }

 private:
  double fs_;
  double b0_, b1_, b2_, a1_, a2_;
  double s1_ = 0.0, s2_ = 0.0;
};

// Ordered set of designs; loaded from a sectioned key-value file or the
// built-in four-design table.
class DesignTable {
 public:
  DesignTable() = default;
  explicit DesignTable(std::vector<PehDesign> designs);

  static DesignTable defaults();
  static DesignTable load(const std::string& path);

  const std::vector<PehDesign>& designs() const { return designs_; }
  const PehDesign& by_thickness(double thickness_mm) const;
  const PehDesign& by_name(const std::string& name) const;
  // Accepts a design name or a thickness in mm.
  const PehDesign& lookup(const std::string& key) const;

 private:
  std::vector<PehDesign> designs_;
};

// Thickness (mm) -> built-in design: 0.35/0.40/0.45/0.50 mm map to
// 125/150/175/200 Hz, 10 Hz 3-dB bandwidth, 1 V/g, 1 ohm.
PehDesign design_from_thickness(double thickness_mm);

double frf_magnitude(const PehDesign& design, double f_hz);

// v = h * u with zero initial state, same fs and length as the input.
// Requires acceleration input sampled at >= 20 f0.
TimeSeries simulate_voltage(const PehDesign& design, const TimeSeries& accel);

// Steady-state amplitude of the simulated response to a unit sine at f_hz.
double measure_sine_gain(const PehDesign& design, double fs_hz, double f_hz);

// Worst relative error between measured steady-state gain and frf_magnitude
// over the probe frequencies.
double verify_discretization(const PehDesign& design, double fs_hz,
                             std::span<const double> probes_hz);

}  // namespace pehfd
