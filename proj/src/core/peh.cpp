#include "core/peh.hpp"

#include "core/errors.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace pehfd {

namespace {

constexpr double kMinOversampling = 20.0;

void check_rate(const PehDesign& d, double fs_hz) {
  if (!(fs_hz >= kMinOversampling * d.f0_hz)) {
    throw InvalidArgument("sampling rate " + format_double(fs_hz) + " Hz is below " +
                          format_double(kMinOversampling) + " x f0 for design '" + d.name +
                          "' (f0 = " + format_double(d.f0_hz) + " Hz)");
  }
}

}  // namespace

void PehDesign::validate() const {
  if (!(f0_hz > 0.0)) throw InvalidArgument("design '" + name + "': f0 must be positive");
  if (!(bw3db_hz > 0.0) || !(bw3db_hz < f0_hz)) {
    throw InvalidArgument("design '" + name + "': need 0 < bw3db < f0");
  }
  if (!(peak_gain_v_per_g > 0.0)) {
    throw InvalidArgument("design '" + name + "': peak gain must be positive");
  }
  if (!(r_ohm > 0.0)) throw InvalidArgument("design '" + name + "': R must be positive");
}

BandpassBiquad::BandpassBiquad(const PehDesign& design, double fs_hz) : fs_(fs_hz) {
  design.validate();
  if (!(fs_hz > 2.0 * design.f0_hz)) {
    throw InvalidArgument("biquad: f0 must be below fs/2");
  }
  const double w0 = 2.0 * std::numbers::pi * design.f0_hz;
  const double k = w0 / std::tan(w0 / (2.0 * fs_hz));  // prewarp at f0
  const double bw = w0 / design.q();
  const double g = design.peak_gain_v_per_g;

  const double a0 = k * k + k * bw + w0 * w0;
  b0_ = g * k * bw / a0;
  b1_ = 0.0;
  b2_ = -b0_;
  a1_ = 2.0 * (w0 * w0 - k * k) / a0;
  a2_ = (k * k - k * bw + w0 * w0) / a0;
}

double BandpassBiquad::pole_radius() const {
  const std::complex<double> disc = std::sqrt(std::complex<double>(a1_ * a1_ - 4.0 * a2_));
  const auto p1 = (-a1_ + disc) / 2.0;
  const auto p2 = (-a1_ - disc) / 2.0;
  return std::max(std::abs(p1), std::abs(p2));
}

DesignTable::DesignTable(std::vector<PehDesign> designs) : designs_(std::move(designs)) {
  for (const auto& d : designs_) d.validate();
}

DesignTable DesignTable::defaults() {
  std::vector<PehDesign> d;
  const double thickness[] = {0.35, 0.40, 0.45, 0.50};
  const double f0[] = {125.0, 150.0, 175.0, 200.0};
  const char* names[] = {"peh_0.35mm", "peh_0.40mm", "peh_0.45mm", "peh_0.50mm"};
  for (int i = 0; i < 4; ++i) {
    d.push_back(PehDesign{names[i], thickness[i], f0[i], 10.0, 1.0, 1.0});
  }
  return DesignTable(std::move(d));
}

DesignTable DesignTable::load(const std::string& path) {
  std::vector<PehDesign> designs;
  for (const auto& sec : load_key_value_file(path)) {
    if (sec.values.empty()) continue;
    const auto get = [&](const char* key) -> const std::string& {
      const auto it = sec.values.find(key);
      if (it == sec.values.end()) {
        throw ConfigError(path + ": design section [" + sec.name + "] is missing '" + key + "'");
      }
      return it->second;
    };
    const auto opt = [&](const char* key, double fallback) {
      const auto it = sec.values.find(key);
      return it == sec.values.end() ? fallback : parse_double(it->second, path + ": " + key);
    };
    PehDesign d;
    const auto nit = sec.values.find("name");
    d.name = nit != sec.values.end() ? nit->second : sec.name;
    if (d.name.empty()) throw ConfigError(path + ": design without a name");
    d.thickness_mm = parse_double(get("thickness_mm"), path + ": thickness_mm");
    d.f0_hz = parse_double(get("f0_hz"), path + ": f0_hz");
    d.bw3db_hz = opt("bw3db_hz", 10.0);
    d.peak_gain_v_per_g = opt("peak_gain_v_per_g", 1.0);
    d.r_ohm = opt("r_ohm", 1.0);
    try {
      d.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(path + ": " + e.what());
    }
    for (const auto& prev : designs) {
      if (prev.name == d.name) throw ConfigError(path + ": duplicate design '" + d.name + "'");
    }
    designs.push_back(std::move(d));
  }
  if (designs.empty()) throw ConfigError(path + ": no designs defined");
  return DesignTable(std::move(designs));
}

const PehDesign& DesignTable::by_thickness(double thickness_mm) const {
  for (const auto& d : designs_) {
    if (std::abs(d.thickness_mm - thickness_mm) < 1e-9) return d;
  }
  throw InvalidArgument("unknown design: no PEH with thickness " + format_double(thickness_mm) +
                        " mm");
}

const PehDesign& DesignTable::by_name(const std::string& name) const {
  for (const auto& d : designs_) {
    if (d.name == name) return d;
  }
  throw InvalidArgument("unknown design: '" + name + "'");
}

const PehDesign& DesignTable::lookup(const std::string& key) const {
  for (const auto& d : designs_) {
    if (d.name == key) return d;
  }
  double mm = 0.0;
  try {
    mm = parse_double(key, "design");
  } catch (const ConfigError&) {
    throw InvalidArgument("unknown design: '" + key + "'");
  }
  return by_thickness(mm);
}

PehDesign design_from_thickness(double thickness_mm) {
  static const DesignTable table = DesignTable::defaults();
  return table.by_thickness(thickness_mm);
}

double frf_magnitude(const PehDesign& design, double f_hz) {
  if (!(f_hz >= 0.0)) throw InvalidArgument("frf_magnitude: frequency must be non-negative");
  if (f_hz == 0.0) return 0.0;
  const double detune = f_hz / design.f0_hz - design.f0_hz / f_hz;
  const double q = design.q();
  return design.peak_gain_v_per_g / std::sqrt(1.0 + q * q * detune * detune);
}

TimeSeries simulate_voltage(const PehDesign& design, const TimeSeries& accel) {
  if (accel.unit() != Unit::acceleration_g) {
    throw InvalidArgument("simulate_voltage: input must be acceleration in g");
  }
  design.validate();
  check_rate(design, accel.fs());
  BandpassBiquad filter(design, accel.fs());
  std::vector<double> v;
  v.reserve(accel.size());
  for (double u : accel.samples()) v.push_back(filter.process(u));
  return TimeSeries(std::move(v), accel.fs(), Unit::volts);
}

double measure_sine_gain(const PehDesign& design, double fs_hz, double f_hz) {
  design.validate();
  check_rate(design, fs_hz);
  if (!(f_hz > 0.0) || !(f_hz < fs_hz / 2.0)) {
    throw InvalidArgument("probe frequency must lie in (0, fs/2)");
  }
  // Settle for many time constants (tau = 1/(pi bw)), then take the RMS over
  // a whole number of cycles.
  const double settle_s = std::max(1.0, 40.0 / (std::numbers::pi * design.bw3db_hz));
  const double cycles = std::max(50.0, std::ceil(0.5 * f_hz));
  const auto settle_n = static_cast<std::size_t>(std::llround(settle_s * fs_hz));
  const auto window_n = static_cast<std::size_t>(std::llround(cycles * fs_hz / f_hz));

  BandpassBiquad filter(design, fs_hz);
  const double w = 2.0 * std::numbers::pi * f_hz / fs_hz;
  for (std::size_t i = 0; i < settle_n; ++i) filter.process(std::sin(w * static_cast<double>(i)));
  double acc = 0.0;
  for (std::size_t i = settle_n; i < settle_n + window_n; ++i) {
    const double y = filter.process(std::sin(w * static_cast<double>(i)));
    acc += y * y;
  }
  return std::sqrt(2.0 * acc / static_cast<double>(window_n));
}

double verify_discretization(const PehDesign& design, double fs_hz,
                             std::span<const double> probes_hz) {
  design.validate();
  check_rate(design, fs_hz);
  double worst = 0.0;
  for (double f : probes_hz) {
    const double expected = frf_magnitude(design, f);
    const double measured = measure_sine_gain(design, fs_hz, f);
    worst = std::max(worst, std::abs(measured - expected) / expected);
  }
  return worst;
}

}  // namespace pehfd
