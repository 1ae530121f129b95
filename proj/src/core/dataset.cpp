#include "core/dataset.hpp"

#include "core/errors.hpp"
#include "core/text.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace pehfd {

namespace {

constexpr std::array<const char*, 7> kStateNames = {
    "healthy", "inner_crack", "outer_crack", "ball_crack",
    "inner_outer", "inner_ball", "outer_ball",
};

// Re-throws `e` as the same error category with `context` prefixed.
[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(context + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  }
}

bool is_raw_f32(const std::string& path) {
  return fs::path(path).extension() == ".f32";
}

TimeSeries load_text_recording(const RecordingMeta& meta) {
  const std::string text = read_text_file(meta.path);
  std::vector<double> samples;
  samples.reserve(text.size() / 8);
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    ++lineno;
    const auto line = trim(std::string_view(text).substr(start, nl - start));
    start = nl + 1;
    if (line.empty()) continue;
    double v = 0.0;
    auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || end != line.data() + line.size()) {
      throw DataError(meta.path + ": row " + std::to_string(lineno) + ": not a number: '" +
                      std::string(line) + "'");
    }
    if (!std::isfinite(v)) {
      throw DataError(meta.path + ": row " + std::to_string(lineno) + ": non-finite sample '" +
                      std::string(line) + "'");
    }
    samples.push_back(v);
  }
  return TimeSeries(std::move(samples), meta.fs_hz, Unit::acceleration_g);
}

TimeSeries load_f32_recording(const RecordingMeta& meta) {
  const std::string header_path = meta.path + ".hdr";
  std::vector<KeyValueSection> header;
  try {
    header = load_key_value_file(header_path);
  } catch (const IoError&) {
    throw DataError(meta.path + ": missing sidecar header '" + header_path + "'");
  }
  const auto& kv = header.front().values;
  const auto fs_it = kv.find("fs_hz");
  const auto n_it = kv.find("n_samples");
  if (fs_it == kv.end() || n_it == kv.end()) {
    throw DataError(header_path + ": needs 'fs_hz' and 'n_samples'");
  }
  const double fs_hdr = parse_double(fs_it->second, header_path + ": fs_hz");
  const auto n = parse_int(n_it->second, header_path + ": n_samples");
  if (std::abs(fs_hdr - meta.fs_hz) > 1e-9 * meta.fs_hz) {
    throw DataError(meta.path + ": sidecar fs_hz " + format_double(fs_hdr) +
                    " disagrees with manifest fs_hz " + format_double(meta.fs_hz));
  }

  std::ifstream in(meta.path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + meta.path + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0) {
    throw DataError(meta.path + ": size " + std::to_string(bytes.size()) +
                    " is not a multiple of 4 bytes");
  }
  const std::size_t count = bytes.size() / 4;
  if (n < 0 || static_cast<std::size_t>(n) != count) {
    throw DataError(meta.path + ": sidecar declares " + std::to_string(n) + " samples, file has " +
                    std::to_string(count));
  }
  std::vector<double> samples(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, bytes.data() + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    float f = 0.0f;
    std::memcpy(&f, &bits, 4);
    if (!std::isfinite(f)) {
      throw DataError(meta.path + ": sample " + std::to_string(i) + " is not finite");
    }
    samples[i] = f;
  }
  return TimeSeries(std::move(samples), meta.fs_hz, Unit::acceleration_g);
}

void write_f32(const std::string& path, std::span<const double> x) {
  std::string bytes(x.size() * 4, '\0');
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto f = static_cast<float>(x[i]);
    std::uint32_t bits = 0;
    std::memcpy(&bits, &f, 4);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    std::memcpy(bytes.data() + 4 * i, &bits, 4);
  }
  write_text_file(path, bytes);
}

std::vector<Tone> parse_tones(std::string_view s, const std::string& what) {
  std::vector<Tone> tones;
  if (trim(s).empty()) return tones;
  for (const auto& item : split(s, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError(what + ": tone '" + item + "' must be 'freq_hz:amplitude'");
    }
    tones.push_back(Tone{parse_double(item.substr(0, colon), what),
                         parse_double(item.substr(colon + 1), what)});
  }
  return tones;
}

}  // namespace

const char* state_name(MachineState s) {
  return kStateNames[static_cast<std::size_t>(s)];
}

std::optional<MachineState> parse_state(std::string_view token) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (token == kStateNames[i]) return static_cast<MachineState>(i);
  }
  return std::nullopt;
}

std::map<std::tuple<MachineState, std::string, int>, std::size_t> Manifest::condition_counts()
    const {
  std::map<std::tuple<MachineState, std::string, int>, std::size_t> out;
  for (const auto& e : entries) ++out[{e.label, e.bearing_type, e.load_w}];
  return out;
}

Manifest load_manifest(const std::string& path) {
  if (!fs::exists(path)) throw ConfigError("manifest not found: '" + path + "'");
  const std::string text = read_text_file(path);

  Manifest m;
  m.root = fs::path(path).parent_path().string();
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool header_seen = false;
  bool has_duration = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = split(line, ',');
    const auto where = path + ":" + std::to_string(lineno);
    if (!header_seen) {
      header_seen = true;
      const std::string joined(line);
      if (joined == kManifestHeader) continue;
      if (joined == std::string(kManifestHeader) + ",duration_s") {
        has_duration = true;
        continue;
      }
      throw ConfigError(where + ": expected header '" + std::string(kManifestHeader) + "'");
    }
    const std::size_t expected = has_duration ? 6 : 5;
    if (cols.size() != expected) {
      throw ConfigError(where + ": expected " + std::to_string(expected) + " columns, found " +
                        std::to_string(cols.size()));
    }
    RecordingMeta r;
    r.id = cols[0];
    if (r.id.empty()) throw ConfigError(where + ": empty path");
    const fs::path p(r.id);
    r.path = p.is_absolute() ? p.string() : (fs::path(m.root) / p).string();
    const auto label = parse_state(cols[1]);
    if (!label) throw ConfigError(where + ": unknown label token '" + cols[1] + "'");
    r.label = *label;
    r.bearing_type = cols[2];
    const auto load = parse_int(cols[3], where + ": load_w");
    if (load != 0 && load != 200 && load != 400) {
      throw ConfigError(where + ": load_w must be 0, 200 or 400, got " + cols[3]);
    }
    r.load_w = static_cast<int>(load);
    r.fs_hz = parse_double(cols[4], where + ": fs_hz");
    if (!(r.fs_hz > 0.0)) throw ConfigError(where + ": fs_hz must be positive");
    if (has_duration && !cols[5].empty()) {
      r.duration_s = parse_double(cols[5], where + ": duration_s");
    }
    if (!seen.insert(r.path).second) throw ConfigError(where + ": duplicate path '" + r.id + "'");
    m.entries.push_back(std::move(r));
  }
  if (m.entries.empty()) throw EmptyManifestError(path + ": empty manifest");
  return m;
}

void write_manifest(const Manifest& manifest, const std::string& path) {
  std::string out(kManifestHeader);
  out += '\n';
  for (const auto& e : manifest.entries) {
    out += e.id + ',' + state_name(e.label) + ',' + e.bearing_type + ',' +
           std::to_string(e.load_w) + ',' + format_double(e.fs_hz) + '\n';
  }
  write_text_file(path, out);
}

Manifest filter_manifest(const Manifest& manifest, const std::vector<MachineState>& states,
                         const std::optional<std::string>& bearing_type,
                         const std::optional<int>& load_w) {
  Manifest out;
  out.root = manifest.root;
  for (const auto& e : manifest.entries) {
    if (!states.empty() && std::find(states.begin(), states.end(), e.label) == states.end()) {
      continue;
    }
    if (bearing_type && e.bearing_type != *bearing_type) continue;
    if (load_w && e.load_w != *load_w) continue;
    out.entries.push_back(e);
  }
  return out;
}

TimeSeries load_recording(const RecordingMeta& meta) {
  if (!fs::exists(meta.path)) throw IoError("recording not found: '" + meta.path + "'");
  TimeSeries ts = is_raw_f32(meta.path) ? load_f32_recording(meta) : load_text_recording(meta);
  if (ts.empty()) throw DataError(meta.path + ": no samples");
  if (meta.duration_s) {
    const auto expected = static_cast<std::size_t>(std::llround(*meta.duration_s * meta.fs_hz));
    if (ts.size() != expected) {
      throw DataError(meta.path + ": expected " + std::to_string(expected) + " samples (" +
                      format_double(*meta.duration_s) + " s), found " +
                      std::to_string(ts.size()));
    }
  }
  return ts;
}

std::vector<LabeledFeature> build_feature_set(const Manifest& manifest, const PehDesign& design,
                                              const FeatureSetConfig& cfg) {
  const std::size_t n = manifest.entries.size();
  std::vector<std::vector<LabeledFeature>> per_recording(n);
  std::vector<std::exception_ptr> errors(n);

  const auto work = [&](std::size_t i) {
    const auto& meta = manifest.entries[i];
    try {
      const auto accel = load_recording(meta);
      const auto segments = segment(accel, cfg.segment_s, cfg.segments_per_recording);
      auto& out = per_recording[i];
      for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto volts = simulate_voltage(design, segments[s]);
        out.push_back(LabeledFeature{make_feature(volts, cfg.period_s, cfg.r_ohm, design.name),
                                     meta.label, meta.id, s});
      }
    } catch (const Error&) {
      try {
        rethrow_with_context("recording '" + meta.id + "'");
      } catch (...) {
        errors[i] = std::current_exception();
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  // Results land in per-recording slots, so ordering is schedule-independent.
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) work(i);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<LabeledFeature> out;
  out.reserve(n * cfg.segments_per_recording);
  for (auto& r : per_recording) {
    for (auto& f : r) out.push_back(std::move(f));
  }
  return out;
}

SurrogateSpec SurrogateSpec::defaults() {
  SurrogateSpec s;
  s.classes.push_back(SurrogateClass{MachineState::healthy, {{60.0, 1.0}, {320.0, 0.8}}, 0.05});
  s.classes.push_back(SurrogateClass{
      MachineState::ball_crack,
      {{110.0, 0.3}, {138.0, 0.3}, {163.0, 0.3}, {198.0, 1.0}, {201.0, 0.8},
       {233.0, 0.3}, {290.0, 0.3}, {360.0, 0.4}, {445.0, 0.3}, {530.0, 0.3},
       {640.0, 0.3}, {780.0, 0.3}, {910.0, 0.3}},
      0.3});
  return s;
}

SurrogateSpec SurrogateSpec::load(const std::string& path) {
  SurrogateSpec s = defaults();
  const auto sections = load_key_value_file(path);
  const auto& kv = sections.front().values;
  const auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  const auto ctx = [&](const std::string& key) { return path + ": " + key; };

  if (auto v = get("seed")) s.seed = static_cast<std::uint64_t>(parse_int(*v, ctx("seed")));
  if (auto v = get("fs_hz")) s.fs_hz = parse_double(*v, ctx("fs_hz"));
  if (auto v = get("duration_s")) s.duration_s = parse_double(*v, ctx("duration_s"));
  if (auto v = get("count_per_class")) {
    const auto c = parse_int(*v, ctx("count_per_class"));
    if (c < 1) throw ConfigError(ctx("count_per_class") + ": must be at least 1");
    s.count_per_class = static_cast<std::size_t>(c);
  }
  if (auto v = get("bearing_type")) s.bearing_type = *v;
  if (auto v = get("load_w")) s.load_w = static_cast<int>(parse_int(*v, ctx("load_w")));
  if (auto v = get("amplitude_jitter")) s.amplitude_jitter = parse_double(*v, ctx("amplitude_jitter"));
  if (auto v = get("frequency_jitter_hz")) {
    s.frequency_jitter_hz = parse_double(*v, ctx("frequency_jitter_hz"));
  }
  if (auto v = get("format")) {
    if (*v == "text") {
      s.text_format = true;
    } else if (*v == "f32") {
      s.text_format = false;
    } else {
      throw ConfigError(ctx("format") + ": expected 'f32' or 'text'");
    }
  }
  if (auto v = get("classes")) {
    std::vector<SurrogateClass> classes;
    for (const auto& token : split(*v, ',')) {
      const auto label = parse_state(token);
      if (!label) throw ConfigError(ctx("classes") + ": unknown label token '" + token + "'");
      SurrogateClass c{*label, {}, 0.0};
      for (const auto& d : s.classes) {
        if (d.label == *label) c = d;
      }
      classes.push_back(std::move(c));
    }
    s.classes = std::move(classes);
  }
  for (auto& c : s.classes) {
    const std::string prefix = state_name(c.label);
    if (auto v = get(prefix + ".tones")) c.tones = parse_tones(*v, ctx(prefix + ".tones"));
    if (auto v = get(prefix + ".noise_sigma")) {
      c.noise_sigma = parse_double(*v, ctx(prefix + ".noise_sigma"));
    }
  }
  if (s.classes.empty()) throw ConfigError(path + ": no classes");
  return s;
}

std::string SurrogateSpec::to_text() const {
  std::string out;
  out += "seed = " + std::to_string(seed) + "\n";
  out += "fs_hz = " + format_double(fs_hz) + "\n";
  out += "duration_s = " + format_double(duration_s) + "\n";
  out += "count_per_class = " + std::to_string(count_per_class) + "\n";
  out += "bearing_type = " + bearing_type + "\n";
  out += "load_w = " + std::to_string(load_w) + "\n";
  out += "amplitude_jitter = " + format_double(amplitude_jitter) + "\n";
  out += "frequency_jitter_hz = " + format_double(frequency_jitter_hz) + "\n";
  out += std::string("format = ") + (text_format ? "text" : "f32") + "\n";
  out += "classes = ";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out += (i ? "," : "") + std::string(state_name(classes[i].label));
  }
  out += "\n";
  for (const auto& c : classes) {
    out += std::string(state_name(c.label)) + ".tones = ";
    for (std::size_t i = 0; i < c.tones.size(); ++i) {
      out += (i ? ", " : "") + format_double(c.tones[i].frequency_hz) + ":" +
             format_double(c.tones[i].amplitude);
    }
    out += "\n";
    out += std::string(state_name(c.label)) + ".noise_sigma = " + format_double(c.noise_sigma) +
           "\n";
  }
  return out;
}

Manifest synth_surrogate_corpus(const SurrogateSpec& spec, const std::string& directory) {
  if (spec.classes.empty()) throw ConfigError("surrogate spec has no classes");
  if (!(spec.amplitude_jitter >= 0.0 && spec.amplitude_jitter < 1.0)) {
    throw ConfigError("amplitude_jitter must lie in [0, 1)");
  }
  if (!(spec.frequency_jitter_hz >= 0.0)) throw ConfigError("frequency_jitter_hz must be >= 0");
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory)) {
    throw IoError("cannot create directory '" + directory + "'");
  }

  Manifest m;
  m.root = directory;
  for (const auto& cls : spec.classes) {
    for (std::size_t i = 0; i < spec.count_per_class; ++i) {
      std::seed_seq seq{static_cast<std::uint32_t>(spec.seed & 0xffffffffu),
                        static_cast<std::uint32_t>(spec.seed >> 32),
                        static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      std::vector<Tone> tones;
      for (const auto& t : cls.tones) {
        const double a = t.amplitude * (1.0 + spec.amplitude_jitter * unit(rng));
        const double f = t.frequency_hz + spec.frequency_jitter_hz * unit(rng);
        tones.push_back(Tone{f, a});
      }
      const std::uint64_t noise_seed = rng();
      const auto ts = synth_composite(tones, cls.noise_sigma, spec.fs_hz, spec.duration_s,
                                      noise_seed);

      char index[16];
      std::snprintf(index, sizeof index, "%02zu", i);
      const std::string stem = std::string(state_name(cls.label)) + "_" + index;
      RecordingMeta r;
      r.label = cls.label;
      r.bearing_type = spec.bearing_type;
      r.load_w = spec.load_w;
      r.fs_hz = spec.fs_hz;
      if (spec.text_format) {
        r.id = stem + ".txt";
        std::string text;
        text.reserve(ts.size() * 12);
        for (double v : ts.samples()) {
          text += format_double(v);
          text += '\n';
        }
        write_text_file((fs::path(directory) / r.id).string(), text);
      } else {
        r.id = stem + ".f32";
        write_f32((fs::path(directory) / r.id).string(), ts.samples());
        write_text_file((fs::path(directory) / (r.id + ".hdr")).string(),
                        "fs_hz = " + format_double(spec.fs_hz) +
                            "\nn_samples = " + std::to_string(ts.size()) + "\n");
      }
      r.path = (fs::path(directory) / r.id).string();
      m.entries.push_back(std::move(r));
    }
  }
  write_manifest(m, (fs::path(directory) / "manifest.csv").string());
  return m;
}

}  // namespace pehfd
