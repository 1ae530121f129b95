#pragma once

#include "core/signal.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pehfd {

// Low-rate samples of harvested energy: y[k] = integral over
// [(k-1)T, kT] of v(t)^2 / R dt.
struct EnergySamples {
  std::vector<double> y;  // Joules
  double period_s = 0.0;
  double r_ohm = 0.0;

  double feature_rate_hz() const { return 1.0 / period_s; }
};

struct FeatureVector {
  std::vector<double> values;  // Joules
  std::string design_name;
  double period_s = 0.0;

  std::size_t dimension() const { return values.size(); }
};

// Ideal rectifier + integrator + sampler. Intervals hold round(T fs) samples
// and each contributes sum v^2 / (R fs); the trailing partial interval is
// dropped.
EnergySamples integrate_energy(const TimeSeries& volts, double period_s, double r_ohm);

// Feature of dimension floor(duration / T); throws DataError when that is 0.
FeatureVector make_feature(const TimeSeries& volts, double period_s, double r_ohm,
                           std::string design_name = {});

// Mean over every component of every feature, grouped by label.
template <typename Label>
std::map<Label, double> mean_state_energy(
    const std::vector<std::pair<FeatureVector, Label>>& features);

}  // namespace pehfd

#include "core/errors.hpp"

namespace pehfd {

template <typename Label>
std::map<Label, double> mean_state_energy(
    const std::vector<std::pair<FeatureVector, Label>>& features) {
  if (features.empty()) throw DataError("mean_state_energy: no features");
  std::map<Label, std::pair<double, std::size_t>> acc;
  for (const auto& [f, label] : features) {
    auto& [sum, n] = acc[label];
    for (double v : f.values) sum += v;
    n += f.values.size();
  }
  std::map<Label, double> out;
  for (const auto& [label, sn] : acc) {
    if (sn.second == 0) throw DataError("mean_state_energy: empty feature vector");
    out[label] = sn.first / static_cast<double>(sn.second);
  }
  return out;
}

}  // namespace pehfd
