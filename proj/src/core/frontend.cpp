#include "core/frontend.hpp"

#include "core/errors.hpp"
#include "core/text.hpp"

#include <cmath>

namespace pehfd {

EnergySamples integrate_energy(const TimeSeries& volts, double period_s, double r_ohm) {
  if (!(period_s > 0.0)) throw InvalidArgument("integrate_energy: T must be positive");
  if (!(r_ohm > 0.0)) throw InvalidArgument("integrate_energy: R must be positive");
  if (volts.empty()) throw InvalidArgument("integrate_energy: empty voltage trace");
  const auto interval = static_cast<std::size_t>(std::llround(period_s * volts.fs()));
  if (interval == 0) {
    throw InvalidArgument("integrate_energy: T shorter than one sample at fs = " +
                          format_double(volts.fs()) + " Hz");
  }

  EnergySamples out;
  out.period_s = period_s;
  out.r_ohm = r_ohm;
  const auto v = volts.samples();
  const std::size_t count = v.size() / interval;
  const double scale = 1.0 / (r_ohm * volts.fs());
  out.y.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double acc = 0.0;
    for (std::size_t n = k * interval; n < (k + 1) * interval; ++n) acc += v[n] * v[n];
    out.y.push_back(acc * scale);
  }
  return out;
}

FeatureVector make_feature(const TimeSeries& volts, double period_s, double r_ohm,
                           std::string design_name) {
  auto e = integrate_energy(volts, period_s, r_ohm);
  if (e.y.empty()) {
    throw DataError("make_feature: trace of " + format_double(volts.duration()) +
                    " s is shorter than T = " + format_double(period_s) + " s");
  }
  return FeatureVector{std::move(e.y), std::move(design_name), period_s};
}

}  // namespace pehfd
