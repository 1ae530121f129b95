#include <catch2/catch_amalgamated.hpp>

#include "core/errors.hpp"
#include "core/report.hpp"
#include "test_support.hpp"

#include <algorithm>

using namespace pehfd;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using test_support::read_file;
using test_support::TempDir;
using test_support::write_file;

namespace {

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

RunConfig surrogate_config(const TempDir& dir, const SurrogateSpec& spec) {
  synth_surrogate_corpus(spec, dir.str("corpus"));
  RunConfig cfg;
  cfg.manifest = dir.str("corpus/manifest.csv");
  cfg.out_dir = dir.str("out");
  return cfg;
}

}  // namespace

TEST_CASE("thought experiment: each harvester wins on its own frequency", "[cli_report]") {
  TempDir dir;
  RunConfig cfg;
  cfg.out_dir = dir.str();
  const auto res = cmd_thought_experiment(cfg);
  const auto& m = res.metrics;
  CHECK(m.at("healthy_peh1_J") > m.at("healthy_peh2_J"));
  CHECK(m.at("faulty_peh2_J") > m.at("faulty_peh1_J"));
  CHECK(m.at("healthy_ratio") >= 20.0);
  CHECK(m.at("faulty_ratio") >= 20.0);
  // steady-state |H|^2 ratios are 77.56 and 137.1; the start-up transient
  // inside the 3 s window pulls the simulated ratios a few percent lower
  CHECK(m.at("healthy_ratio") == Approx(77.56).epsilon(0.05));
  CHECK(m.at("faulty_ratio") == Approx(137.1).epsilon(0.05));
  // a unit-gain sine at resonance delivers A^2 T / (2 R) = 1.5 J
  CHECK(m.at("healthy_peh1_J") == Approx(1.5).epsilon(0.02));
  REQUIRE(res.files.size() == 1);
  CHECK(line_count(read_file(res.files[0])) == 5);
  CHECK_THAT(res.text, ContainsSubstring("healthy") && ContainsSubstring("faulty"));
}

TEST_CASE("thought experiment: equal input frequencies give identical rows", "[cli_report]") {
  const auto table = DesignTable::defaults();
  const auto te = thought_experiment(180.0, 180.0, table.lookup("0.50"), table.lookup("0.40"), 3.0,
                                     1.0);
  CHECK(te.energy[0] == te.energy[1]);
}

TEST_CASE("energy report: 51.2 kHz against T = 3 s", "[cli_report]") {
  const auto r = energy_report(51200.0, 3.0, EnergyCostModel{});
  CHECK(r.reduction_ratio == 153600.0);
  CHECK(r.log10_ratio == Approx(5.186).margin(5e-4));
  CHECK(r.feature_rate_hz == Approx(1.0 / 3.0));
  CHECK(r.raw_j_per_s / r.feature_j_per_s == Approx(153600.0));
  const auto text = energy_report_text(r, 3.0);
  CHECK_THAT(text, ContainsSubstring("0.33 Hz") && ContainsSubstring("153600") &&
                       ContainsSubstring("5.19"));

  const auto one = energy_report(1.0, 1.0, EnergyCostModel{});
  CHECK(one.reduction_ratio == 1.0);
  CHECK(one.log10_ratio == 0.0);
  CHECK_THAT(energy_report_text(one, 1.0), ContainsSubstring("no sampling reduction"));

  const auto free = energy_report(51200.0, 3.0, EnergyCostModel{0.0, 0.0, 16});
  CHECK(free.raw_j_per_s == 0.0);
  CHECK(free.feature_j_per_s == 0.0);
  CHECK(free.reduction_ratio == 153600.0);

  CHECK_THROWS_AS(energy_report(0.0, 3.0, EnergyCostModel{}), InvalidArgument);
  CHECK_THROWS_AS(energy_report(51200.0, -1.0, EnergyCostModel{}), InvalidArgument);
  CHECK_THROWS_AS(energy_report(51200.0, 3.0, EnergyCostModel{-1.0, 0.0, 16}), ConfigError);
}

TEST_CASE("energy report: ratio grows linearly in fs and T", "[cli_report]") {
  for (double fs : {1000.0, 8000.0, 51200.0}) {
    for (double t : {0.5, 1.0, 3.0, 10.0}) {
      const auto r = energy_report(fs, t, EnergyCostModel{});
      CHECK(r.reduction_ratio == Approx(fs * t));
      CHECK(energy_report(2.0 * fs, t, EnergyCostModel{}).reduction_ratio ==
            Approx(2.0 * r.reduction_ratio));
    }
  }
}

TEST_CASE("extract: row counts and byte-identical reruns", "[cli_report]") {
  TempDir dir;
  auto cfg = surrogate_config(dir, SurrogateSpec::defaults());
  const auto res = cmd_extract(cfg);
  REQUIRE(res.files.size() == 1);
  const auto first = read_file(res.files[0]);
  CHECK(line_count(first) == 43);
  CHECK(first.rfind("recording_id,segment_index,label,design,T_s,feature_0\n", 0) == 0);
  CHECK(res.metrics.at("rows") == 42.0);
  cmd_extract(cfg);
  CHECK(read_file(res.files[0]) == first);

  cfg.period_s = 1.0;
  const auto wide = read_file(cmd_extract(cfg).files[0]);
  CHECK_THAT(wide, ContainsSubstring("feature_2\n"));
  cfg.period_s = 4.0;
  CHECK_THROWS_AS(cmd_extract(cfg), ConfigError);
}

TEST_CASE("extract: empty manifest writes a header-only file", "[cli_report]") {
  TempDir dir;
  write_file(dir.str("m.csv"), "path,label,bearing_type,load_w,fs_hz\n");
  RunConfig cfg;
  cfg.manifest = dir.str("m.csv");
  cfg.out_dir = dir.str("out");
  CHECK_THROWS_AS(cmd_extract(cfg), EmptyManifestError);
  CHECK(read_file(dir.str("out/features.csv")) ==
        "recording_id,segment_index,label,design,T_s,feature_0\n");
}

TEST_CASE("extract: filters leaving nothing behave like an empty manifest", "[cli_report]") {
  TempDir dir;
  auto spec = SurrogateSpec::defaults();
  spec.count_per_class = 2;
  spec.duration_s = 3.0;
  auto cfg = surrogate_config(dir, spec);
  cfg.segments_per_recording = 1;
  cfg.load_w = 400;
  CHECK_THROWS_AS(cmd_extract(cfg), EmptyManifestError);
  cfg.load_w.reset();
  cfg.classes = {MachineState::healthy};
  CHECK(cmd_extract(cfg).metrics.at("rows") == 2.0);
}

TEST_CASE("classify: surrogate accuracy and artifacts", "[cli_report]") {
  TempDir dir;
  auto cfg = surrogate_config(dir, SurrogateSpec::defaults());
  cfg.repeats = 5;
  const auto res = cmd_classify(cfg);
  CHECK(res.metrics.at("mean_accuracy") >= 0.85);
  REQUIRE(res.files.size() == 2);
  CHECK(line_count(read_file(res.files[0])) == 6);
  CHECK(line_count(read_file(res.files[1])) == 5);
  const auto again = cmd_classify(cfg);
  CHECK(read_file(again.files[0]) == read_file(res.files[0]));
  cfg.design = "0.33";
  CHECK_THROWS_AS(cmd_classify(cfg), ConfigError);
}

TEST_CASE("scatter: the 0.50 mm harvester lies farthest from the diagonal", "[cli_report]") {
  TempDir dir;
  auto cfg = surrogate_config(dir, SurrogateSpec::defaults());
  const auto res = cmd_scatter(cfg);
  CHECK(res.metrics.at("points") == 4.0);
  CHECK(res.metrics.at("best_thickness_mm") == 0.5);
  const auto csv = read_file(res.files[0]);
  CHECK(line_count(csv) == 5);
  const auto svg = read_file(res.files[1]);
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t circles = 0;
  for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) {
    ++circles;
  }
  CHECK(circles == 4);
  CHECK_THAT(svg, ContainsSubstring("stroke-dasharray"));
}

TEST_CASE("scatter: identical class statistics sit on the diagonal", "[cli_report]") {
  TempDir dir;
  auto spec = SurrogateSpec::defaults();
  spec.count_per_class = 2;
  spec.duration_s = 3.0;
  spec.classes[1].tones = spec.classes[0].tones;
  spec.classes[1].noise_sigma = spec.classes[0].noise_sigma;
  auto cfg = surrogate_config(dir, spec);
  cfg.segments_per_recording = 1;
  const auto res = cmd_scatter(cfg);
  CHECK(res.metrics.at("max_distance") <= 1e-9);
}

TEST_CASE("distance_to_diagonal: closed form", "[cli_report]") {
  CHECK(distance_to_diagonal(1.0, 1.0) == 0.0);
  CHECK(distance_to_diagonal(0.0, 1.0) == Approx(1.0 / std::sqrt(2.0)));
  CHECK(distance_to_diagonal(3.0, 1.0) == distance_to_diagonal(1.0, 3.0));
}

TEST_CASE("sweep: table of designs and periods", "[cli_report]") {
  TempDir dir;
  auto spec = SurrogateSpec::defaults();
  spec.count_per_class = 4;
  spec.duration_s = 3.0;
  auto cfg = surrogate_config(dir, spec);
  cfg.segments_per_recording = 1;
  cfg.repeats = 2;
  cfg.train_fraction = 0.5;
  cfg.k = 1;
  const auto res = cmd_sweep(cfg);
  CHECK(res.metrics.at("rows") == 12.0);
  CHECK(line_count(read_file(res.files[0])) == 13);
  cfg.set("sweep_mode", "segment_equals_T");
  CHECK(cmd_sweep(cfg).metrics.at("rows") == 12.0);
}

TEST_CASE("surrogate-gen: seed override and spec file", "[cli_report]") {
  TempDir dir;
  RunConfig cfg;
  cfg.out_dir = dir.str("a");
  cfg.seed = 5;
  write_file(dir.str("spec.cfg"), "count_per_class = 1\nduration_s = 1\n");
  cfg.surrogate_spec = dir.str("spec.cfg");
  const auto res = cmd_surrogate_gen(cfg);
  CHECK(res.metrics.at("recordings") == 2.0);
  CHECK_THAT(res.text, ContainsSubstring("seed 5"));
  cfg.out_dir = dir.str("b");
  cmd_surrogate_gen(cfg);
  CHECK(read_file(dir.str("a/healthy_00.f32")) == read_file(dir.str("b/healthy_00.f32")));
  cfg.out_dir = dir.str("c");
  cfg.seed = 6;
  cmd_surrogate_gen(cfg);
  CHECK(read_file(dir.str("a/healthy_00.f32")) != read_file(dir.str("c/healthy_00.f32")));
}

TEST_CASE("RunConfig: parsing and validation", "[cli_report]") {
  TempDir dir;
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.set("no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(cfg.set("T_s", "three"), ConfigError);
  CHECK_THROWS_AS(cfg.set("distance", "manhattan"), ConfigError);
  CHECK_THROWS_AS(cfg.set("classes", "healthy,ballcrak"), ConfigError);
  CHECK_THROWS_AS(cfg.set("seed", "-1"), ConfigError);
  cfg.set("T_s", "0");
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(cmd_energy_report(cfg), ConfigError);

  write_file(dir.str("run.cfg"),
             "# run\nmanifest = data/manifest.csv\nT_s = 1.5\nT_values = 1, 3\nk = 5\n"
             "distance = log\nseed = 9\nclasses = healthy, ball_crack\nR_ohm = 2\n");
  RunConfig loaded;
  loaded.load(dir.str("run.cfg"));
  CHECK(loaded.manifest == (dir.path() / "data/manifest.csv").string());
  CHECK(loaded.period_s == 1.5);
  CHECK(loaded.periods_s == std::vector<double>{1.0, 3.0});
  CHECK(loaded.k == 5);
  CHECK(loaded.distance == Distance::log_euclidean);
  CHECK(loaded.split_seed() == 9);
  CHECK(loaded.classes.size() == 2);
  CHECK(loaded.r_ohm == 2.0);
  CHECK_NOTHROW(loaded.validate());

  write_file(dir.str("bad.cfg"), "k = 3\nbogus = 1\n");
  RunConfig bad;
  CHECK_THROWS_WITH(bad.load(dir.str("bad.cfg")), ContainsSubstring(":2:"));
  CHECK_THROWS_AS(bad.load(dir.str("missing.cfg")), Error);

  RunConfig no_manifest;
  no_manifest.out_dir = dir.str("o");
  CHECK_THROWS_AS(cmd_classify(no_manifest), ConfigError);
}
