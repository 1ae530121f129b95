#pragma once

#include "core/dataset.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pehfd {

enum class Distance { euclidean, log_euclidean };

struct LabeledPoint {
  std::vector<double> values;
  MachineState label = MachineState::healthy;
};

// Lazy learner: stores the training points verbatim.
class KnnModel {
 public:
  KnnModel(std::vector<LabeledPoint> points, int k, Distance distance = Distance::euclidean);

  int k() const { return k_; }
  Distance distance() const { return distance_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<LabeledPoint>& points() const { return points_; }

  // Majority label among the k nearest points. Equal distances are ordered
  // by training index; a vote tie goes to the tied label whose best-ranked
  // neighbour is nearest.
  MachineState predict(const std::vector<double>& query) const;

 private:
  std::vector<LabeledPoint> points_;  // already transformed for the metric
  int k_;
  Distance distance_;
  std::size_t dimension_;
};

KnnModel knn_fit(const std::vector<LabeledFeature>& train, int k,
                 Distance distance = Distance::euclidean);
MachineState knn_predict(const KnnModel& model, const FeatureVector& feature);

struct SplitConfig {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct Split {
  std::vector<LabeledFeature> train;
  std::vector<LabeledFeature> validation;
};

// Per class: seeded shuffle, then round(train_fraction * n) to train, kept
// within [1, n - 1] so both sides see every class.
Split split(const std::vector<LabeledFeature>& features, const SplitConfig& cfg);

struct EvalReport {
  double accuracy = 0.0;
  std::vector<MachineState> labels;             // row/column order
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::string design;
  double period_s = 0.0;
  int k = 0;
  std::uint64_t seed = 0;

  std::size_t total() const;
  std::size_t correct() const;
};

EvalReport evaluate(const KnnModel& model, const std::vector<LabeledFeature>& validation);

struct SweepConfig {
  FeatureSetConfig features;  // segment length/count and R; period is swept
  SplitConfig split;
  int k = 3;
  Distance distance = Distance::euclidean;
  std::size_t repeats = 20;
  // When set, each T uses segments of length T and as many of them as fit
  // in segment_s * segments_per_recording seconds (scalar features).
  // Otherwise the segment length stays fixed and features get
  // floor(segment_s / T) components.
  bool segment_equals_period = false;
};

struct SweepRow {
  std::string design;
  double thickness_mm = 0.0;
  double period_s = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::size_t repeats = 0;
  std::uint64_t seed0 = 0;
};

struct RepeatedEval {
  std::vector<EvalReport> reports;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population standard deviation
};

// Split / fit / evaluate `repeats` times with seeds seed, seed+1, ...
RepeatedEval repeated_holdout(const std::vector<LabeledFeature>& features,
                              const SweepConfig& cfg);

std::vector<SweepRow> accuracy_sweep(const Manifest& manifest,
                                     const std::vector<PehDesign>& designs,
                                     const std::vector<double>& periods_s,
                                     const SweepConfig& cfg);

inline constexpr std::string_view kSweepHeader =
    "design,thickness_mm,T_s,mean_accuracy,std_accuracy,n_repeats,seed0";
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace pehfd
