#include <catch2/catch_amalgamated.hpp>

#include "core/classifier.hpp"
#include "core/errors.hpp"
#include "test_support.hpp"

#include <random>
#include <set>

using namespace pehfd;
using Catch::Approx;

namespace {

LabeledFeature make_lf(std::vector<double> values, MachineState label, std::string id,
                       std::size_t seg = 0) {
  LabeledFeature lf;
  lf.feature.values = std::move(values);
  lf.feature.design_name = "peh_test";
  lf.feature.period_s = 3.0;
  lf.label = label;
  lf.recording_id = std::move(id);
  lf.segment_index = seg;
  return lf;
}

std::vector<LabeledFeature> two_class_set(std::size_t per_class) {
  std::vector<LabeledFeature> out;
  for (std::size_t i = 0; i < per_class; ++i) {
    out.push_back(make_lf({1.0 + 0.01 * static_cast<double>(i)}, MachineState::healthy,
                          "h" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < per_class; ++i) {
    out.push_back(make_lf({5.0 + 0.01 * static_cast<double>(i)}, MachineState::ball_crack,
                          "b" + std::to_string(i)));
  }
  return out;
}

std::size_t count_label(const std::vector<LabeledFeature>& v, MachineState s) {
  std::size_t n = 0;
  for (const auto& f : v) n += f.label == s;
  return n;
}

std::multiset<std::string> ids(const std::vector<LabeledFeature>& v) {
  std::multiset<std::string> out;
  for (const auto& f : v) out.insert(f.recording_id);
  return out;
}

}  // namespace

TEST_CASE("split: 21 + 21 features at 0.8 gives 17 / 4 per class", "[classifier_eval]") {
  const auto data = two_class_set(21);
  const auto s = split(data, SplitConfig{0.8, 7, true});
  CHECK(s.train.size() == 34);
  CHECK(s.validation.size() == 8);
  CHECK(count_label(s.train, MachineState::healthy) == 17);
  CHECK(count_label(s.train, MachineState::ball_crack) == 17);
  CHECK(count_label(s.validation, MachineState::healthy) == 4);
  CHECK(count_label(s.validation, MachineState::ball_crack) == 4);
}

TEST_CASE("split: two per class at 0.5 gives one and one", "[classifier_eval]") {
  const auto s = split(two_class_set(2), SplitConfig{0.5, 0, true});
  CHECK(count_label(s.train, MachineState::healthy) == 1);
  CHECK(count_label(s.validation, MachineState::healthy) == 1);
  CHECK(count_label(s.train, MachineState::ball_crack) == 1);
  CHECK(count_label(s.validation, MachineState::ball_crack) == 1);
}

TEST_CASE("split: a class with fewer than two samples is rejected", "[classifier_eval]") {
  auto data = two_class_set(3);
  data.push_back(make_lf({9.0}, MachineState::outer_crack, "o0"));
  CHECK_THROWS_AS(split(data, SplitConfig{}), DataError);
  CHECK_THROWS_AS(split({}, SplitConfig{}), DataError);
  CHECK_THROWS_AS(split(two_class_set(3), SplitConfig{1.5, 0, true}), InvalidArgument);
}

TEST_CASE("split: partition and determinism properties", "[classifier_eval]") {
  const auto data = two_class_set(13);
  for (std::uint64_t seed : {0ull, 1ull, 99ull, 123456789ull}) {
    for (double frac : {0.3, 0.5, 0.8}) {
      for (bool strat : {true, false}) {
        const SplitConfig cfg{frac, seed, strat};
        const auto a = split(data, cfg);
        const auto b = split(data, cfg);
        CHECK(a.train.size() + a.validation.size() == data.size());
        CHECK(ids(a.train) == ids(b.train));
        auto all = ids(a.train);
        for (const auto& id : ids(a.validation)) {
          CHECK(all.count(id) == 0);
          all.insert(id);
        }
        CHECK(all == ids(data));
        if (strat) {
          CHECK(count_label(a.train, MachineState::healthy) ==
                count_label(a.train, MachineState::ball_crack));
        }
      }
    }
  }
  const auto s1 = split(data, SplitConfig{0.5, 1, true});
  const auto s2 = split(data, SplitConfig{0.5, 2, true});
  CHECK(ids(s1.train) != ids(s2.train));
}

TEST_CASE("knn_fit: argument validation", "[classifier_eval]") {
  const auto data = two_class_set(3);
  CHECK_THROWS_AS(knn_fit(data, 0), InvalidArgument);
  CHECK_THROWS_AS(knn_fit(data, 7), InvalidArgument);
  CHECK_THROWS_AS(knn_fit({}, 1), InvalidArgument);
  auto mixed = data;
  mixed.push_back(make_lf({1.0, 2.0}, MachineState::healthy, "x"));
  CHECK_THROWS_AS(knn_fit(mixed, 1), InvalidArgument);
  const auto model = knn_fit(data, 1);
  CHECK_THROWS_AS(model.predict({1.0, 2.0}), InvalidArgument);
}

TEST_CASE("knn: small worked examples", "[classifier_eval]") {
  std::vector<LabeledFeature> train = {
      make_lf({0.0}, MachineState::healthy, "a"), make_lf({1.0}, MachineState::healthy, "b"),
      make_lf({10.0}, MachineState::ball_crack, "c"), make_lf({11.0}, MachineState::ball_crack, "d"),
      make_lf({12.0}, MachineState::ball_crack, "e")};
  const auto m1 = knn_fit(train, 1);
  CHECK(m1.predict({0.4}) == MachineState::healthy);
  CHECK(m1.predict({9.0}) == MachineState::ball_crack);
  const auto m3 = knn_fit(train, 3);
  CHECK(m3.predict({2.0}) == MachineState::healthy);
  CHECK(m3.predict({6.0}) == MachineState::ball_crack);
  const auto m5 = knn_fit(train, 5);
  CHECK(m5.predict({0.0}) == MachineState::ball_crack);

  // 2-vs-2 tie goes to the label of the single nearest neighbour
  std::vector<LabeledFeature> tie = {
      make_lf({0.0}, MachineState::healthy, "a"), make_lf({3.0}, MachineState::healthy, "b"),
      make_lf({1.0}, MachineState::ball_crack, "c"), make_lf({2.5}, MachineState::ball_crack, "d")};
  CHECK(knn_fit(tie, 4).predict({0.1}) == MachineState::healthy);
  CHECK(knn_fit(tie, 4).predict({2.9}) == MachineState::healthy);
  CHECK(knn_fit(tie, 4).predict({1.1}) == MachineState::ball_crack);
  // equal distances are resolved by training order
  std::vector<LabeledFeature> eq = {make_lf({-1.0}, MachineState::ball_crack, "a"),
                                    make_lf({1.0}, MachineState::healthy, "b")};
  CHECK(knn_fit(eq, 1).predict({0.0}) == MachineState::ball_crack);
}

TEST_CASE("knn: agrees with a brute force oracle", "[classifier_eval]") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> lab(0, 2);
  const MachineState states[] = {MachineState::healthy, MachineState::ball_crack,
                                 MachineState::outer_crack};
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(trial % 3);
    std::vector<std::vector<double>> xs;
    std::vector<MachineState> ys;
    std::vector<LabeledFeature> train;
    for (int i = 0; i < 25; ++i) {
      std::vector<double> x(dim);
      for (auto& v : x) v = u(rng);
      xs.push_back(x);
      ys.push_back(states[lab(rng)]);
      train.push_back(make_lf(x, ys.back(), std::to_string(i)));
    }
    for (int k : {1, 3, 5, 7}) {
      const auto model = knn_fit(train, k);
      for (int q = 0; q < 10; ++q) {
        std::vector<double> query(dim);
        for (auto& v : query) v = u(rng);
        REQUIRE(model.predict(query) == test_support::brute_force_knn(xs, ys, query, k));
      }
    }
  }
}

TEST_CASE("knn: log distance is invariant to a common positive gain", "[classifier_eval]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-6, 1e-2);
  std::vector<LabeledFeature> train, scaled;
  for (int i = 0; i < 30; ++i) {
    const double v = u(rng) * (i % 2 ? 10.0 : 1.0);
    const auto s = i % 2 ? MachineState::ball_crack : MachineState::healthy;
    train.push_back(make_lf({v}, s, std::to_string(i)));
    scaled.push_back(make_lf({v * 6.25}, s, std::to_string(i)));
  }
  const auto a = knn_fit(train, 3, Distance::log_euclidean);
  const auto b = knn_fit(scaled, 3, Distance::log_euclidean);
  const auto c = knn_fit(train, 3, Distance::euclidean);
  const auto d = knn_fit(scaled, 3, Distance::euclidean);
  for (int q = 0; q < 50; ++q) {
    const double v = u(rng) * 3.0;
    CHECK(a.predict({v}) == b.predict({v * 6.25}));
    CHECK(c.predict({v}) == d.predict({v * 6.25}));
  }
  // zeros are clamped rather than producing -inf
  const auto z = knn_fit({make_lf({0.0}, MachineState::healthy, "z"),
                          make_lf({1.0}, MachineState::ball_crack, "o")},
                         1, Distance::log_euclidean);
  CHECK(z.predict({0.0}) == MachineState::healthy);
}

TEST_CASE("evaluate: confusion matrix and accuracy", "[classifier_eval]") {
  const auto data = two_class_set(5);
  const auto model = knn_fit(data, 1);
  const auto self = evaluate(model, data);
  CHECK(self.accuracy == 1.0);
  CHECK(self.total() == 10);
  CHECK(self.correct() == 10);
  REQUIRE(self.labels.size() == 2);
  CHECK(self.confusion[0][0] + self.confusion[1][1] == 10);

  std::vector<LabeledFeature> wrong = {make_lf({1.0}, MachineState::ball_crack, "w"),
                                       make_lf({5.0}, MachineState::ball_crack, "r")};
  const auto r = evaluate(model, wrong);
  CHECK(r.accuracy == Approx(0.5));
  CHECK(r.total() == 2);
  CHECK_THROWS_AS(evaluate(model, {}), DataError);
}

TEST_CASE("repeated_holdout: mean and population std", "[classifier_eval]") {
  SweepConfig cfg;
  cfg.repeats = 1;
  cfg.k = 1;
  const auto one = repeated_holdout(two_class_set(10), cfg);
  CHECK(one.reports.size() == 1);
  CHECK(one.std_accuracy == 0.0);
  CHECK(one.mean_accuracy == 1.0);

  cfg.repeats = 5;
  cfg.split.seed = 40;
  const auto five = repeated_holdout(two_class_set(10), cfg);
  REQUIRE(five.reports.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(five.reports[i].seed == 40 + i);
  CHECK(five.std_accuracy == 0.0);
  cfg.repeats = 0;
  CHECK_THROWS_AS(repeated_holdout(two_class_set(10), cfg), InvalidArgument);
}

TEST_CASE("surrogate corpus: holdout accuracy with the 0.45 mm harvester", "[classifier_eval]") {
  test_support::TempDir dir;
  const auto m = synth_surrogate_corpus(SurrogateSpec::defaults(), dir.str());
  const auto features = build_feature_set(m, design_from_thickness(0.45), FeatureSetConfig{});
  REQUIRE(features.size() == 42);
  const auto s = split(features, SplitConfig{0.8, 0, true});
  const auto report = evaluate(knn_fit(s.train, 3), s.validation);
  CHECK(report.accuracy >= 0.85);
}

TEST_CASE("accuracy_sweep: one row per design and period", "[classifier_eval]") {
  test_support::TempDir dir;
  auto spec = SurrogateSpec::defaults();
  spec.duration_s = 4.0;
  spec.count_per_class = 4;
  const auto m = synth_surrogate_corpus(spec, dir.str());
  SweepConfig cfg;
  cfg.features.segment_s = 3.0;
  cfg.features.segments_per_recording = 1;
  cfg.repeats = 3;
  cfg.split.train_fraction = 0.5;
  cfg.k = 1;
  const auto designs = DesignTable::defaults().designs();
  const auto rows = accuracy_sweep(m, designs, {3.0}, cfg);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].design == designs[i].name);
    CHECK(rows[i].period_s == 3.0);
    CHECK(rows[i].repeats == 3);
    CHECK(rows[i].mean_accuracy >= 0.0);
    CHECK(rows[i].mean_accuracy <= 1.0);
    CHECK(rows[i].std_accuracy >= 0.0);
  }
  const auto csv = sweep_to_csv(rows);
  CHECK(csv.rfind(std::string(kSweepHeader), 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  const auto multi = accuracy_sweep(m, {designs[0]}, {1.0, 1.5, 3.0}, cfg);
  CHECK(multi.size() == 3);
  cfg.segment_equals_period = true;
  const auto eq = accuracy_sweep(m, {designs[0]}, {1.0, 1.5, 3.0}, cfg);
  CHECK(eq.size() == 3);
}

TEST_CASE("energy features: gain scaling keeps the nearest-neighbour decision", "[classifier_eval]") {
  // Every feature is quadratic in the harvester gain, so multiplying it by g
  // scales all features by g^2 and leaves log-distance rankings unchanged.
  test_support::TempDir dir;
  auto spec = SurrogateSpec::defaults();
  spec.duration_s = 3.0;
  spec.count_per_class = 3;
  const auto m = synth_surrogate_corpus(spec, dir.str());
  FeatureSetConfig fc;
  fc.segments_per_recording = 1;
  auto d1 = design_from_thickness(0.45);
  auto d2 = d1;
  d2.peak_gain_v_per_g = 3.0;
  const auto f1 = build_feature_set(m, d1, fc);
  const auto f2 = build_feature_set(m, d2, fc);
  REQUIRE(f1.size() == f2.size());
  for (std::size_t i = 0; i < f1.size(); ++i) {
    CHECK(f2[i].feature.values[0] == Approx(9.0 * f1[i].feature.values[0]).epsilon(1e-9));
  }
  const auto s1 = split(f1, SplitConfig{0.5, 3, true});
  const auto s2 = split(f2, SplitConfig{0.5, 3, true});
  const auto m1 = knn_fit(s1.train, 1, Distance::log_euclidean);
  const auto m2 = knn_fit(s2.train, 1, Distance::log_euclidean);
  for (std::size_t i = 0; i < s1.validation.size(); ++i) {
    CHECK(knn_predict(m1, s1.validation[i].feature) == knn_predict(m2, s2.validation[i].feature));
  }
}
