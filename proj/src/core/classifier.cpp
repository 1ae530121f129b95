#include "core/classifier.hpp"

#include "core/errors.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace pehfd {

namespace {

std::vector<double> transform(std::vector<double> v, Distance d) {
  if (d == Distance::log_euclidean) {
    for (auto& x : v) x = std::log(std::max(x, 1e-300));
  }
  return v;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

std::vector<MachineState> labels_in_order(const std::vector<LabeledFeature>& a,
                                          const std::vector<LabeledFeature>& b = {}) {
  std::vector<MachineState> out;
  for (const auto* set : {&a, &b}) {
    for (const auto& f : *set) {
      if (std::find(out.begin(), out.end(), f.label) == out.end()) out.push_back(f.label);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

KnnModel::KnnModel(std::vector<LabeledPoint> points, int k, Distance distance)
    : points_(std::move(points)), k_(k), distance_(distance), dimension_(0) {
  if (k_ < 1) throw InvalidArgument("knn: k must be at least 1");
  if (static_cast<std::size_t>(k_) > points_.size()) {
    throw InvalidArgument("knn: k = " + std::to_string(k_) + " exceeds " +
                          std::to_string(points_.size()) + " training points");
  }
  dimension_ = points_.front().values.size();
  if (dimension_ == 0) throw InvalidArgument("knn: zero-dimensional features");
  for (auto& p : points_) {
    if (p.values.size() != dimension_) {
      throw InvalidArgument("knn: mixed feature dimensions (" + std::to_string(dimension_) +
                            " and " + std::to_string(p.values.size()) + ")");
    }
    p.values = transform(std::move(p.values), distance_);
  }
}

MachineState KnnModel::predict(const std::vector<double>& query) const {
  if (query.size() != dimension_) {
    throw InvalidArgument("knn: query has dimension " + std::to_string(query.size()) +
                          ", model expects " + std::to_string(dimension_));
  }
  const auto q = transform(query, distance_);
  std::vector<std::pair<double, std::size_t>> ranked(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    ranked[i] = {squared_distance(points_[i].values, q), i};
  }
  const auto kth = ranked.begin() + k_;
  std::partial_sort(ranked.begin(), kth, ranked.end());

  // votes[label] = (count, rank of its nearest member)
  std::map<MachineState, std::pair<int, int>> votes;
  for (int r = 0; r < k_; ++r) {
    const auto label = points_[ranked[r].second].label;
    auto [it, fresh] = votes.try_emplace(label, 0, r);
    ++it->second.first;
  }
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it) {
    const auto [count, rank] = it->second;
    if (count > best->second.first ||
        (count == best->second.first && rank < best->second.second)) {
      best = it;
    }
  }
  return best->first;
}

KnnModel knn_fit(const std::vector<LabeledFeature>& train, int k, Distance distance) {
  if (train.empty()) throw InvalidArgument("knn: empty training set");
  std::vector<LabeledPoint> points;
  points.reserve(train.size());
  for (const auto& f : train) points.push_back(LabeledPoint{f.feature.values, f.label});
  return KnnModel(std::move(points), k, distance);
}

MachineState knn_predict(const KnnModel& model, const FeatureVector& feature) {
  return model.predict(feature.values);
}

Split split(const std::vector<LabeledFeature>& features, const SplitConfig& cfg) {
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw InvalidArgument("split: train_fraction must lie in (0, 1)");
  }
  if (features.size() < 2) throw DataError("split: need at least 2 samples");
  std::mt19937_64 rng(cfg.seed);
  Split out;

  const auto take = [&](std::vector<std::size_t> idx) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n = idx.size();
    auto n_train = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      (i < n_train ? out.train : out.validation).push_back(features[idx[i]]);
    }
  };

  if (cfg.stratified) {
    for (const auto label : labels_in_order(features)) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].label == label) idx.push_back(i);
      }
      if (idx.size() < 2) {
        throw DataError(std::string("split: class '") + state_name(label) + "' has " +
                        std::to_string(idx.size()) + " sample(s); stratification needs 2");
      }
      take(std::move(idx));
    }
  } else {
    std::vector<std::size_t> idx(features.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    take(std::move(idx));
  }
  return out;
}

std::size_t EvalReport::total() const {
  std::size_t n = 0;
  for (const auto& row : confusion) n = std::accumulate(row.begin(), row.end(), n);
  return n;
}

std::size_t EvalReport::correct() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < confusion.size(); ++i) n += confusion[i][i];
  return n;
}

EvalReport evaluate(const KnnModel& model, const std::vector<LabeledFeature>& validation) {
  if (validation.empty()) throw DataError("evaluate: empty validation set");
  EvalReport r;
  r.labels = labels_in_order(validation);
  for (const auto& p : model.points()) {
    if (std::find(r.labels.begin(), r.labels.end(), p.label) == r.labels.end()) {
      r.labels.push_back(p.label);
    }
  }
  std::sort(r.labels.begin(), r.labels.end());
  const auto index_of = [&](MachineState s) {
    return static_cast<std::size_t>(std::find(r.labels.begin(), r.labels.end(), s) -
                                    r.labels.begin());
  };
  r.confusion.assign(r.labels.size(), std::vector<std::size_t>(r.labels.size(), 0));
  for (const auto& f : validation) {
    ++r.confusion[index_of(f.label)][index_of(knn_predict(model, f.feature))];
  }
  r.accuracy = static_cast<double>(r.correct()) / static_cast<double>(r.total());
  r.k = model.k();
  r.design = validation.front().feature.design_name;
  r.period_s = validation.front().feature.period_s;
  return r;
}

RepeatedEval repeated_holdout(const std::vector<LabeledFeature>& features,
                              const SweepConfig& cfg) {
  if (cfg.repeats == 0) throw InvalidArgument("repeats must be at least 1");
  RepeatedEval out;
  for (std::size_t i = 0; i < cfg.repeats; ++i) {
    SplitConfig sc = cfg.split;
    sc.seed = cfg.split.seed + i;
    const auto parts = split(features, sc);
    const auto model = knn_fit(parts.train, cfg.k, cfg.distance);
    auto report = evaluate(model, parts.validation);
    report.seed = sc.seed;
    out.reports.push_back(std::move(report));
  }
  double sum = 0.0;
  for (const auto& r : out.reports) sum += r.accuracy;
  out.mean_accuracy = sum / static_cast<double>(cfg.repeats);
  double var = 0.0;
  for (const auto& r : out.reports) {
    var += (r.accuracy - out.mean_accuracy) * (r.accuracy - out.mean_accuracy);
  }
  out.std_accuracy = std::sqrt(var / static_cast<double>(cfg.repeats));
  return out;
}

std::vector<SweepRow> accuracy_sweep(const Manifest& manifest,
                                     const std::vector<PehDesign>& designs,
                                     const std::vector<double>& periods_s,
                                     const SweepConfig& cfg) {
  if (designs.empty()) throw ConfigError("sweep: no designs");
  if (periods_s.empty()) throw ConfigError("sweep: no T values");
  std::vector<SweepRow> rows;
  for (const auto& design : designs) {
    for (const double period : periods_s) {
      FeatureSetConfig fc = cfg.features;
      fc.period_s = period;
      if (cfg.segment_equals_period) {
        const double usable = fc.segment_s * static_cast<double>(fc.segments_per_recording);
        fc.segment_s = period;
        fc.segments_per_recording =
            static_cast<std::size_t>(std::floor(usable / period + 1e-9));
        if (fc.segments_per_recording == 0) {
          throw ConfigError("sweep: T = " + format_double(period) + " s exceeds the usable " +
                            format_double(usable) + " s per recording");
        }
      }
      const auto features = build_feature_set(manifest, design, fc);
      const auto eval = repeated_holdout(features, cfg);
      rows.push_back(SweepRow{design.name, design.thickness_mm, period, eval.mean_accuracy,
                              eval.std_accuracy, cfg.repeats, cfg.split.seed});
    }
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out(kSweepHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.design + ',' + format_double(r.thickness_mm) + ',' + format_double(r.period_s) +
           ',' + format_double(r.mean_accuracy) + ',' + format_double(r.std_accuracy) + ',' +
           std::to_string(r.repeats) + ',' + std::to_string(r.seed0) + '\n';
  }
  return out;
}

}  // namespace pehfd
