#pragma once

#include "core/classifier.hpp"
#include "core/dataset.hpp"
#include "core/peh.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pehfd {

// Linear per-sample cost of digitising and transmitting. The defaults are
// illustrative placeholders, not measured figures.
struct EnergyCostModel {
  double e_adc_per_sample_j = 5e-9;
  double e_tx_per_sample_j = 2e-7;
  int bits_per_sample = 16;

  void validate() const;
};

struct RunConfig {
  std::string manifest;
  std::string design_table;  // empty: built-in table
  std::string design = "0.45";       // extract / classify
  std::vector<std::string> designs;  // sweep / scatter; empty: whole table
  double period_s = 3.0;
  std::vector<double> periods_s = {1.0, 1.5, 3.0};
  std::optional<double> r_ohm;  // empty: the design's own R
  double segment_s = 3.0;
  std::size_t segments_per_recording = 3;
  double train_fraction = 0.8;
  bool stratified = true;
  std::optional<std::uint64_t> seed;  // split seed 0 and surrogate spec seed when unset
  int k = 3;
  std::size_t repeats = 20;
  Distance distance = Distance::euclidean;
  bool segment_equals_period = false;
  std::string out_dir = ".";
  std::vector<MachineState> classes;  // empty: every class in the manifest
  std::optional<std::string> bearing_type;
  std::optional<int> load_w;
  MachineState healthy_label = MachineState::healthy;
  MachineState faulty_label = MachineState::ball_crack;

  double f_healthy_hz = 200.0;
  double f_faulty_hz = 150.0;
  double synth_fs_hz = 51200.0;
  std::vector<std::string> thought_designs = {"0.50", "0.40"};

  double fs_raw_hz = 51200.0;
  EnergyCostModel cost;

  std::string surrogate_spec;  // empty: built-in defaults

  // Applies one `key = value` setting; unknown keys are ConfigErrors.
  void set(const std::string& key, const std::string& value);
  // Applies every key of a flat key-value file. Relative paths are resolved
  // against the file's directory.
  void load(const std::string& path);
  // Checks values against module preconditions; throws ConfigError.
  void validate() const;

  std::uint64_t split_seed() const { return seed.value_or(0); }
  DesignTable design_table_or_default() const;
  std::vector<PehDesign> selected_designs() const;
  FeatureSetConfig feature_config(const PehDesign& design) const;
  SweepConfig sweep_config(const PehDesign& design) const;
};

struct CommandResult {
  std::string text;                       // human-readable summary
  std::vector<std::string> files;         // artifacts written
  std::map<std::string, double> metrics;  // named scalar outcomes
};

struct ThoughtExperiment {
  std::vector<PehDesign> designs;         // [PEH 1, PEH 2]
  std::vector<double> inputs_hz;          // [healthy, faulty]
  std::vector<std::vector<double>> energy;  // [input][design], Joules
};

ThoughtExperiment thought_experiment(double f_healthy_hz, double f_faulty_hz,
                                     const PehDesign& peh1, const PehDesign& peh2,
                                     double period_s, double r_ohm, double fs_hz = 51200.0);

struct EnergyReport {
  double raw_rate_hz = 0.0;
  double feature_rate_hz = 0.0;
  double reduction_ratio = 0.0;
  double log10_ratio = 0.0;
  double raw_bits_per_s = 0.0;
  double feature_bits_per_s = 0.0;
  double raw_j_per_s = 0.0;
  double feature_j_per_s = 0.0;
};

EnergyReport energy_report(double fs_raw_hz, double period_s, const EnergyCostModel& cost);
std::string energy_report_text(const EnergyReport& r, double period_s);

struct ScatterPoint {
  std::string design;
  double thickness_mm = 0.0;
  double mean_healthy_j = 0.0;
  double mean_faulty_j = 0.0;
  double distance = 0.0;  // perpendicular distance to the 45 degree line
};

double distance_to_diagonal(double x, double y);
std::string scatter_to_csv(const std::vector<ScatterPoint>& points);
std::string scatter_to_svg(const std::vector<ScatterPoint>& points);

inline constexpr std::string_view kFeatureHeaderPrefix =
    "recording_id,segment_index,label,design,T_s";
std::string features_to_csv(const std::vector<LabeledFeature>& features, std::size_t dimension);

CommandResult cmd_thought_experiment(const RunConfig& cfg);
CommandResult cmd_energy_report(const RunConfig& cfg);
// On an empty manifest a header-only CSV is still written before the
// DataError propagates.
CommandResult cmd_extract(const RunConfig& cfg);
CommandResult cmd_classify(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);
CommandResult cmd_scatter(const RunConfig& cfg);
CommandResult cmd_surrogate_gen(const RunConfig& cfg);

}  // namespace pehfd
