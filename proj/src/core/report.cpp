#include "core/report.hpp"

#include "core/errors.hpp"
#include "core/frontend.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

namespace fs = std::filesystem;

namespace pehfd {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec || !fs::is_directory(cfg.out_dir)) {
    throw IoError("cannot create output directory '" + cfg.out_dir + "'");
  }
  return (fs::path(cfg.out_dir) / name).string();
}

MachineState state_or_throw(const std::string& token, const std::string& key) {
  const auto s = parse_state(token);
  if (!s) throw ConfigError(key + ": unknown label token '" + token + "'");
  return *s;
}

std::vector<std::string> list_value(const std::string& value) {
  std::vector<std::string> out;
  for (auto& item : split(value, ',')) {
    if (!item.empty()) out.push_back(std::move(item));
  }
  return out;
}

Manifest selected_manifest(const RunConfig& cfg) {
  if (cfg.manifest.empty()) throw ConfigError("no manifest configured (key 'manifest')");
  const auto m = load_manifest(cfg.manifest);
  auto filtered = filter_manifest(m, cfg.classes, cfg.bearing_type, cfg.load_w);
  if (filtered.empty()) {
    throw EmptyManifestError(cfg.manifest + ": no recordings left after class/bearing/load filters");
  }
  return filtered;
}

std::size_t feature_dimension(const RunConfig& cfg) {
  return static_cast<std::size_t>(std::floor(cfg.segment_s / cfg.period_s + 1e-9));
}

}  // namespace

void EnergyCostModel::validate() const {
  if (!(e_adc_per_sample_j >= 0.0) || !(e_tx_per_sample_j >= 0.0) || bits_per_sample < 0) {
    throw ConfigError("energy cost model values must be non-negative");
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto num = [&] { return parse_double(value, key); };
  const auto integer = [&] { return parse_int(value, key); };
  const auto non_negative = [&](std::int64_t v) {
    if (v < 0) throw ConfigError(key + ": must be non-negative");
    return v;
  };

  if (key == "manifest") {
    manifest = value;
  } else if (key == "design_table") {
    design_table = value;
  } else if (key == "design") {
    design = value;
  } else if (key == "designs") {
    designs = list_value(value);
  } else if (key == "T_s") {
    period_s = num();
  } else if (key == "T_values") {
    periods_s = parse_double_list(value, key);
  } else if (key == "R_ohm") {
    if (value.empty() || value == "design") {
      r_ohm.reset();
    } else {
      r_ohm = num();
    }
  } else if (key == "segment_s") {
    segment_s = num();
  } else if (key == "segments_per_recording") {
    segments_per_recording = static_cast<std::size_t>(non_negative(integer()));
  } else if (key == "train_fraction") {
    train_fraction = num();
  } else if (key == "stratified") {
    stratified = parse_bool(value, key);
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(non_negative(integer()));
  } else if (key == "k") {
    k = static_cast<int>(integer());
  } else if (key == "repeats") {
    repeats = static_cast<std::size_t>(non_negative(integer()));
  } else if (key == "distance") {
    if (value == "euclidean") {
      distance = Distance::euclidean;
    } else if (value == "log") {
      distance = Distance::log_euclidean;
    } else {
      throw ConfigError(key + ": expected 'euclidean' or 'log'");
    }
  } else if (key == "sweep_mode") {
    if (value == "fixed_segment") {
      segment_equals_period = false;
    } else if (value == "segment_equals_T") {
      segment_equals_period = true;
    } else {
      throw ConfigError(key + ": expected 'fixed_segment' or 'segment_equals_T'");
    }
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "classes") {
    classes.clear();
    for (const auto& t : list_value(value)) classes.push_back(state_or_throw(t, key));
  } else if (key == "bearing_type") {
    bearing_type = value.empty() ? std::nullopt : std::optional<std::string>(value);
  } else if (key == "load_w") {
    load_w = value.empty() ? std::nullopt : std::optional<int>(static_cast<int>(integer()));
  } else if (key == "healthy_label") {
    healthy_label = state_or_throw(value, key);
  } else if (key == "faulty_label") {
    faulty_label = state_or_throw(value, key);
  } else if (key == "f_healthy_hz") {
    f_healthy_hz = num();
  } else if (key == "f_faulty_hz") {
    f_faulty_hz = num();
  } else if (key == "synth_fs_hz") {
    synth_fs_hz = num();
  } else if (key == "thought_designs") {
    thought_designs = list_value(value);
  } else if (key == "fs_raw_hz") {
    fs_raw_hz = num();
  } else if (key == "e_adc_per_sample_j") {
    cost.e_adc_per_sample_j = num();
  } else if (key == "e_tx_per_sample_j") {
    cost.e_tx_per_sample_j = num();
  } else if (key == "bits_per_sample") {
    cost.bits_per_sample = static_cast<int>(integer());
  } else if (key == "surrogate_spec") {
    surrogate_spec = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void RunConfig::load(const std::string& path) {
  const auto sections = load_key_value_file(path);
  if (sections.size() > 1) throw ConfigError(path + ": run configs do not take [sections]");
  const auto base = fs::path(path).parent_path();
  const auto& sec = sections.front();
  for (const auto& [key, value] : sec.values) {
    std::string v = value;
    const bool is_path = key == "manifest" || key == "design_table" || key == "surrogate_spec" ||
                         key == "out_dir";
    if (is_path && !v.empty() && fs::path(v).is_relative()) v = (base / v).string();
    try {
      set(key, v);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(sec.lines.at(key)) + ": " + e.what());
    }
  }
}

void RunConfig::validate() const {
  if (!(period_s > 0.0)) throw ConfigError("T_s must be positive");
  for (double t : periods_s) {
    if (!(t > 0.0)) throw ConfigError("T_values must all be positive");
  }
  if (r_ohm && !(*r_ohm > 0.0)) throw ConfigError("R_ohm must be positive");
  if (!(segment_s > 0.0)) throw ConfigError("segment_s must be positive");
  if (segments_per_recording == 0) throw ConfigError("segments_per_recording must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (k < 1) throw ConfigError("k must be at least 1");
  if (repeats == 0) throw ConfigError("repeats must be at least 1");
  if (!(synth_fs_hz > 0.0)) throw ConfigError("synth_fs_hz must be positive");
  if (!(fs_raw_hz > 0.0)) throw ConfigError("fs_raw_hz must be positive");
  if (thought_designs.size() != 2) throw ConfigError("thought_designs needs exactly two designs");
  if (healthy_label == faulty_label) throw ConfigError("healthy_label and faulty_label coincide");
  cost.validate();
}

DesignTable RunConfig::design_table_or_default() const {
  return design_table.empty() ? DesignTable::defaults() : DesignTable::load(design_table);
}

std::vector<PehDesign> RunConfig::selected_designs() const {
  const auto table = design_table_or_default();
  if (designs.empty()) return table.designs();
  std::vector<PehDesign> out;
  for (const auto& key : designs) {
    try {
      out.push_back(table.lookup(key));
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("designs: ") + e.what());
    }
  }
  return out;
}

FeatureSetConfig RunConfig::feature_config(const PehDesign& d) const {
  return FeatureSetConfig{segment_s, segments_per_recording, period_s, r_ohm.value_or(d.r_ohm)};
}

SweepConfig RunConfig::sweep_config(const PehDesign& d) const {
  SweepConfig sc;
  sc.features = feature_config(d);
  sc.split = SplitConfig{train_fraction, split_seed(), stratified};
  sc.k = k;
  sc.distance = distance;
  sc.repeats = repeats;
  sc.segment_equals_period = segment_equals_period;
  return sc;
}

ThoughtExperiment thought_experiment(double f_healthy_hz, double f_faulty_hz,
                                     const PehDesign& peh1, const PehDesign& peh2,
                                     double period_s, double r_ohm, double fs_hz) {
  ThoughtExperiment te;
  te.designs = {peh1, peh2};
  te.inputs_hz = {f_healthy_hz, f_faulty_hz};
  for (const double f : te.inputs_hz) {
    const auto u = synth_sine(f, 1.0, 0.0, fs_hz, period_s);
    std::vector<double> row;
    for (const auto& d : te.designs) {
      const auto v = simulate_voltage(d, u);
      row.push_back(integrate_energy(v, period_s, r_ohm).y.at(0));
    }
    te.energy.push_back(std::move(row));
  }
  return te;
}

EnergyReport energy_report(double fs_raw_hz, double period_s, const EnergyCostModel& cost) {
  if (!(fs_raw_hz > 0.0)) throw InvalidArgument("energy_report: fs_raw must be positive");
  if (!(period_s > 0.0)) throw InvalidArgument("energy_report: T must be positive");
  cost.validate();
  EnergyReport r;
  r.raw_rate_hz = fs_raw_hz;
  r.feature_rate_hz = 1.0 / period_s;
  r.reduction_ratio = fs_raw_hz * period_s;
  r.log10_ratio = std::log10(r.reduction_ratio);
  const double per_sample = cost.e_adc_per_sample_j + cost.e_tx_per_sample_j;
  r.raw_bits_per_s = r.raw_rate_hz * cost.bits_per_sample;
  r.feature_bits_per_s = r.feature_rate_hz * cost.bits_per_sample;
  r.raw_j_per_s = r.raw_rate_hz * per_sample;
  r.feature_j_per_s = r.feature_rate_hz * per_sample;
  return r;
}

std::string energy_report_text(const EnergyReport& r, double period_s) {
  std::string s;
  s += "raw sampling rate      : " + format_double(r.raw_rate_hz) + " samples/s\n";
  s += "feature sampling rate  : " + format_fixed(r.feature_rate_hz, 2) + " Hz (1/T, T = " +
       format_double(period_s) + " s)\n";
  s += "reduction ratio        : " + format_double(r.reduction_ratio) + " (fs_raw * T)\n";
  s += "log10(reduction ratio) : " + format_fixed(r.log10_ratio, 2) + "\n";
  s += "raw bit rate           : " + format_double(r.raw_bits_per_s) + " bit/s\n";
  s += "feature bit rate       : " + format_double(r.feature_bits_per_s) + " bit/s\n";
  s += "ADC+TX power, raw      : " + format_double(r.raw_j_per_s) + " J/s\n";
  s += "ADC+TX power, feature  : " + format_double(r.feature_j_per_s) + " J/s\n";
  if (r.reduction_ratio > 1.0) {
    const auto orders = static_cast<int>(std::floor(r.log10_ratio));
    if (orders >= 1 && r.log10_ratio - orders > 0.05) {
      s += "note: the exact ratio is 10^" + format_fixed(r.log10_ratio, 2) +
           "; quoting it as " + std::to_string(orders) +
           " orders of magnitude rounds it down\n";
    }
  } else {
    s += "note: no sampling reduction at this T\n";
  }
  return s;
}

double distance_to_diagonal(double x, double y) {
  return std::abs(y - x) / std::numbers::sqrt2;
}

std::string scatter_to_csv(const std::vector<ScatterPoint>& points) {
  std::string out = "design,thickness_mm,mean_healthy_J,mean_faulty_J,distance_to_diagonal\n";
  for (const auto& p : points) {
    out += p.design + ',' + format_double(p.thickness_mm) + ',' + format_double(p.mean_healthy_j) +
           ',' + format_double(p.mean_faulty_j) + ',' + format_double(p.distance) + '\n';
  }
  return out;
}

std::string scatter_to_svg(const std::vector<ScatterPoint>& points) {
  constexpr double size = 480.0, margin = 60.0, plot = size - 2.0 * margin;
  double max_v = 0.0;
  for (const auto& p : points) max_v = std::max({max_v, p.mean_healthy_j, p.mean_faulty_j});
  if (!(max_v > 0.0)) max_v = 1.0;
  max_v *= 1.1;
  const auto px = [&](double v) { return format_fixed(margin + plot * v / max_v, 2); };
  const auto py = [&](double v) { return format_fixed(size - margin - plot * v / max_v, 2); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
       "viewBox=\"0 0 480 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"480\" height=\"480\" fill=\"white\"/>\n";
  s += "<line x1=\"" + px(0) + "\" y1=\"" + py(0) + "\" x2=\"" + px(max_v) + "\" y2=\"" + py(0) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + px(0) + "\" y1=\"" + py(0) + "\" x2=\"" + px(0) + "\" y2=\"" + py(max_v) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + px(0) + "\" y1=\"" + py(0) + "\" x2=\"" + px(max_v) + "\" y2=\"" +
       py(max_v) + "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = max_v * t / 4.0;
    s += "<text x=\"" + px(v) + "\" y=\"" + format_fixed(size - margin + 16.0, 2) +
         "\" text-anchor=\"middle\">" + format_double(std::round(v * 1e4) / 1e4) + "</text>\n";
    s += "<text x=\"" + format_fixed(margin - 6.0, 2) + "\" y=\"" + py(v) +
         "\" text-anchor=\"end\">" + format_double(std::round(v * 1e4) / 1e4) + "</text>\n";
  }
  s += "<text x=\"240\" y=\"470\" text-anchor=\"middle\">mean energy, healthy (J)</text>\n";
  s += "<text x=\"14\" y=\"240\" text-anchor=\"middle\" transform=\"rotate(-90 14 240)\">"
       "mean energy, faulty (J)</text>\n";
  for (const auto& p : points) {
    s += "<circle cx=\"" + px(p.mean_healthy_j) + "\" cy=\"" + py(p.mean_faulty_j) +
         "\" r=\"5\" fill=\"steelblue\"/>\n";
    s += "<text x=\"" + format_fixed(margin + plot * p.mean_healthy_j / max_v + 8.0, 2) +
         "\" y=\"" + py(p.mean_faulty_j) + "\">" + p.design + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string features_to_csv(const std::vector<LabeledFeature>& features, std::size_t dimension) {
  std::string out(kFeatureHeaderPrefix);
  for (std::size_t i = 0; i < dimension; ++i) out += ",feature_" + std::to_string(i);
  out += '\n';
  for (const auto& f : features) {
    if (f.feature.dimension() != dimension) {
      throw DataError("features_to_csv: mixed feature dimensions");
    }
    out += f.recording_id + ',' + std::to_string(f.segment_index) + ',' + state_name(f.label) +
           ',' + f.feature.design_name + ',' + format_double(f.feature.period_s);
    for (double v : f.feature.values) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

CommandResult cmd_thought_experiment(const RunConfig& cfg) {
  cfg.validate();
  const auto table = cfg.design_table_or_default();
  const auto& peh1 = table.lookup(cfg.thought_designs[0]);
  const auto& peh2 = table.lookup(cfg.thought_designs[1]);
  const double r = cfg.r_ohm.value_or(1.0);
  const auto te = thought_experiment(cfg.f_healthy_hz, cfg.f_faulty_hz, peh1, peh2, cfg.period_s,
                                     r, cfg.synth_fs_hz);

  CommandResult res;
  std::string csv = "input,input_hz,design,f0_hz,energy_J\n";
  const char* input_names[] = {"healthy", "faulty"};
  std::string& t = res.text;
  t += "energy y = sum v^2/(R fs) over T = " + format_double(cfg.period_s) + " s, R = " +
       format_double(r) + " ohm\n";
  t += "input | PEH1 " + peh1.name + " (" + format_double(peh1.f0_hz) +
       " Hz) | PEH2 " + peh2.name + " (" + format_double(peh2.f0_hz) + " Hz) | decision\n";
  for (std::size_t i = 0; i < 2; ++i) {
    const double y1 = te.energy[i][0];
    const double y2 = te.energy[i][1];
    const char* decision = y1 > y2 ? "healthy" : "faulty";
    t += std::string(input_names[i]) + " (" + format_double(te.inputs_hz[i]) + " Hz) | " +
         format_double(y1) + " J | " + format_double(y2) + " J | " + decision + "\n";
    for (std::size_t j = 0; j < 2; ++j) {
      csv += std::string(input_names[i]) + ',' + format_double(te.inputs_hz[i]) + ',' +
             te.designs[j].name + ',' + format_double(te.designs[j].f0_hz) + ',' +
             format_double(te.energy[i][j]) + '\n';
    }
  }
  res.metrics["healthy_peh1_J"] = te.energy[0][0];
  res.metrics["healthy_peh2_J"] = te.energy[0][1];
  res.metrics["faulty_peh1_J"] = te.energy[1][0];
  res.metrics["faulty_peh2_J"] = te.energy[1][1];
  res.metrics["healthy_ratio"] = te.energy[0][0] / te.energy[0][1];
  res.metrics["faulty_ratio"] = te.energy[1][1] / te.energy[1][0];
  const auto path = out_path(cfg, "thought_experiment.csv");
  write_text_file(path, csv);
  res.files.push_back(path);
  return res;
}

CommandResult cmd_energy_report(const RunConfig& cfg) {
  cfg.validate();
  const auto r = energy_report(cfg.fs_raw_hz, cfg.period_s, cfg.cost);
  CommandResult res;
  res.text = energy_report_text(r, cfg.period_s);
  res.metrics["reduction_ratio"] = r.reduction_ratio;
  res.metrics["log10_ratio"] = r.log10_ratio;
  res.metrics["feature_rate_hz"] = r.feature_rate_hz;
  res.metrics["raw_j_per_s"] = r.raw_j_per_s;
  res.metrics["feature_j_per_s"] = r.feature_j_per_s;
  std::string csv = "architecture,samples_per_s,bits_per_s,joules_per_s\n";
  csv += "digital," + format_double(r.raw_rate_hz) + ',' + format_double(r.raw_bits_per_s) + ',' +
         format_double(r.raw_j_per_s) + '\n';
  csv += "harvester," + format_double(r.feature_rate_hz) + ',' +
         format_double(r.feature_bits_per_s) + ',' + format_double(r.feature_j_per_s) + '\n';
  const auto path = out_path(cfg, "energy_report.csv");
  write_text_file(path, csv);
  res.files.push_back(path);
  return res;
}

CommandResult cmd_extract(const RunConfig& cfg) {
  cfg.validate();
  const auto table = cfg.design_table_or_default();
  PehDesign design;
  try {
    design = table.lookup(cfg.design);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("design: ") + e.what());
  }
  const auto path = out_path(cfg, "features.csv");
  if (feature_dimension(cfg) == 0) {
    throw ConfigError("segment_s = " + format_double(cfg.segment_s) + " s is shorter than T = " +
                      format_double(cfg.period_s) + " s");
  }
  Manifest manifest;
  try {
    manifest = selected_manifest(cfg);
  } catch (const EmptyManifestError&) {
    write_text_file(path, features_to_csv({}, feature_dimension(cfg)));
    throw;
  }
  const auto features = build_feature_set(manifest, design, cfg.feature_config(design));
  write_text_file(path, features_to_csv(features, feature_dimension(cfg)));

  CommandResult res;
  res.files.push_back(path);
  res.metrics["rows"] = static_cast<double>(features.size());
  res.metrics["recordings"] = static_cast<double>(manifest.size());
  res.text = "wrote " + std::to_string(features.size()) + " feature rows (" +
             std::to_string(manifest.size()) + " recordings x " +
             std::to_string(cfg.segments_per_recording) + " segments, design " + design.name +
             ", T = " + format_double(cfg.period_s) + " s) to " + path + "\n";
  return res;
}

CommandResult cmd_classify(const RunConfig& cfg) {
  cfg.validate();
  const auto table = cfg.design_table_or_default();
  PehDesign design;
  try {
    design = table.lookup(cfg.design);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("design: ") + e.what());
  }
  const auto manifest = selected_manifest(cfg);
  const auto features = build_feature_set(manifest, design, cfg.feature_config(design));
  const auto eval = repeated_holdout(features, cfg.sweep_config(design));

  std::string csv = "design,thickness_mm,T_s,k,repeat,seed,n_validation,n_correct,accuracy\n";
  const auto& labels = eval.reports.front().labels;
  std::vector<std::vector<std::size_t>> confusion(labels.size(),
                                                  std::vector<std::size_t>(labels.size(), 0));
  for (std::size_t i = 0; i < eval.reports.size(); ++i) {
    const auto& r = eval.reports[i];
    csv += design.name + ',' + format_double(design.thickness_mm) + ',' +
           format_double(cfg.period_s) + ',' + std::to_string(cfg.k) + ',' + std::to_string(i) +
           ',' + std::to_string(r.seed) + ',' + std::to_string(r.total()) + ',' +
           std::to_string(r.correct()) + ',' + format_double(r.accuracy) + '\n';
    for (std::size_t a = 0; a < labels.size(); ++a) {
      for (std::size_t b = 0; b < labels.size(); ++b) confusion[a][b] += r.confusion[a][b];
    }
  }
  std::string conf_csv = "true_label,predicted_label,count\n";
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = 0; b < labels.size(); ++b) {
      conf_csv += std::string(state_name(labels[a])) + ',' + state_name(labels[b]) + ',' +
                  std::to_string(confusion[a][b]) + '\n';
    }
  }

  CommandResult res;
  const auto report_path = out_path(cfg, "classify.csv");
  const auto confusion_path = out_path(cfg, "confusion.csv");
  write_text_file(report_path, csv);
  write_text_file(confusion_path, conf_csv);
  res.files = {report_path, confusion_path};
  res.metrics["mean_accuracy"] = eval.mean_accuracy;
  res.metrics["std_accuracy"] = eval.std_accuracy;
  res.metrics["samples"] = static_cast<double>(features.size());

  std::string& t = res.text;
  t += "design " + design.name + " (" + format_double(design.f0_hz) + " Hz), T = " +
       format_double(cfg.period_s) + " s, k = " + std::to_string(cfg.k) + ", " +
       std::to_string(features.size()) + " samples, " + std::to_string(cfg.repeats) +
       " split(s) from seed " + std::to_string(cfg.split_seed()) + "\n";
  t += "accuracy: mean " + format_fixed(eval.mean_accuracy, 4) + ", std " +
       format_fixed(eval.std_accuracy, 4) + "\n";
  t += "confusion (rows true, columns predicted, summed over splits):\n";
  for (std::size_t a = 0; a < labels.size(); ++a) {
    t += "  " + std::string(state_name(labels[a])) + ":";
    for (std::size_t b = 0; b < labels.size(); ++b) t += " " + std::to_string(confusion[a][b]);
    t += "\n";
  }
  return res;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
  cfg.validate();
  const auto designs = cfg.selected_designs();
  const auto manifest = selected_manifest(cfg);
  std::vector<SweepRow> rows;
  for (const auto& d : designs) {
    auto part = accuracy_sweep(manifest, {d}, cfg.periods_s, cfg.sweep_config(d));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  CommandResult res;
  const auto path = out_path(cfg, "sweep.csv");
  write_text_file(path, sweep_to_csv(rows));
  res.files.push_back(path);
  for (const auto& r : rows) {
    res.text += r.design + " T=" + format_double(r.period_s) + " s: " +
                format_fixed(r.mean_accuracy, 4) + " +/- " + format_fixed(r.std_accuracy, 4) +
                "\n";
  }
  res.metrics["rows"] = static_cast<double>(rows.size());
  return res;
}

CommandResult cmd_scatter(const RunConfig& cfg) {
  cfg.validate();
  const auto designs = cfg.selected_designs();
  auto filtered = cfg;
  filtered.classes = {cfg.healthy_label, cfg.faulty_label};
  const auto manifest = selected_manifest(filtered);

  std::vector<ScatterPoint> points;
  for (const auto& d : designs) {
    const auto features = build_feature_set(manifest, d, cfg.feature_config(d));
    std::vector<std::pair<FeatureVector, MachineState>> pairs;
    for (const auto& f : features) pairs.emplace_back(f.feature, f.label);
    const auto means = mean_state_energy(pairs);
    const auto h = means.find(cfg.healthy_label);
    const auto f = means.find(cfg.faulty_label);
    if (h == means.end() || f == means.end()) {
      throw DataError("scatter: manifest needs both '" + std::string(state_name(cfg.healthy_label)) +
                      "' and '" + state_name(cfg.faulty_label) + "' recordings");
    }
    points.push_back(ScatterPoint{d.name, d.thickness_mm, h->second, f->second,
                                  distance_to_diagonal(h->second, f->second)});
  }

  CommandResult res;
  const auto csv_path = out_path(cfg, "scatter.csv");
  const auto svg_path = out_path(cfg, "scatter.svg");
  write_text_file(csv_path, scatter_to_csv(points));
  write_text_file(svg_path, scatter_to_svg(points));
  res.files = {csv_path, svg_path};
  const auto best = std::max_element(points.begin(), points.end(),
                                     [](const auto& a, const auto& b) { return a.distance < b.distance; });
  for (const auto& p : points) {
    res.text += p.design + ": healthy " + format_double(p.mean_healthy_j) + " J, faulty " +
                format_double(p.mean_faulty_j) + " J, distance " + format_double(p.distance) +
                "\n";
  }
  res.text += "farthest from the 45 degree line: " + best->design + "\n";
  res.metrics["points"] = static_cast<double>(points.size());
  res.metrics["max_distance"] = best->distance;
  res.metrics["best_thickness_mm"] = best->thickness_mm;
  return res;
}

CommandResult cmd_surrogate_gen(const RunConfig& cfg) {
  auto spec = cfg.surrogate_spec.empty() ? SurrogateSpec::defaults()
                                         : SurrogateSpec::load(cfg.surrogate_spec);
  if (cfg.seed) spec.seed = *cfg.seed;
  const auto manifest = synth_surrogate_corpus(spec, cfg.out_dir);
  CommandResult res;
  for (const auto& e : manifest.entries) res.files.push_back(e.path);
  const auto manifest_path = (fs::path(cfg.out_dir) / "manifest.csv").string();
  res.files.push_back(manifest_path);
  res.metrics["recordings"] = static_cast<double>(manifest.size());
  res.text = "wrote " + std::to_string(manifest.size()) + " recordings and " + manifest_path +
             " (seed " + std::to_string(spec.seed) + ")\n";
  return res;
}

}  // namespace pehfd
