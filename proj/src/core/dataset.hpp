#pragma once

#include "core/errors.hpp"
#include "core/frontend.hpp"
#include "core/peh.hpp"
#include "core/signal.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace pehfd {

enum class MachineState {
  healthy,
  inner_crack,
  outer_crack,
  ball_crack,
  inner_outer,
  inner_ball,
  outer_ball,
};

inline constexpr std::array<MachineState, 7> kAllStates = {
    MachineState::healthy,     MachineState::inner_crack, MachineState::outer_crack,
    MachineState::ball_crack,  MachineState::inner_outer, MachineState::inner_ball,
    MachineState::outer_ball,
};

const char* state_name(MachineState s);
std::optional<MachineState> parse_state(std::string_view token);

struct RecordingMeta {
  std::string id;    // path as written in the manifest
  std::string path;  // resolved against the manifest directory
  MachineState label = MachineState::healthy;
  std::string bearing_type;
  int load_w = 0;
  double fs_hz = 0.0;
  std::optional<double> duration_s;  // optional sixth manifest column
};

struct Manifest {
  std::vector<RecordingMeta> entries;
  std::string root;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }

  // Recording counts per (state, bearing type, load).
  std::map<std::tuple<MachineState, std::string, int>, std::size_t> condition_counts() const;
};

struct LabeledFeature {
  FeatureVector feature;
  MachineState label = MachineState::healthy;
  std::string recording_id;
  std::size_t segment_index = 0;
};

// Raised when a manifest parses but lists no recordings.
class EmptyManifestError : public DataError {
 public:
  using DataError::DataError;
};

inline constexpr std::string_view kManifestHeader = "path,label,bearing_type,load_w,fs_hz";

// CSV with header `path,label,bearing_type,load_w,fs_hz[,duration_s]`.
Manifest load_manifest(const std::string& path);
void write_manifest(const Manifest& manifest, const std::string& path);

// Keep entries whose label is in `states` (all when empty) and that match
// the optional bearing type / load.
Manifest filter_manifest(const Manifest& manifest, const std::vector<MachineState>& states,
                         const std::optional<std::string>& bearing_type,
                         const std::optional<int>& load_w);

// Text: one decimal value per line. `.f32`: raw little-endian float32 with a
// `<file>.hdr` sidecar holding `fs_hz` and `n_samples`.
TimeSeries load_recording(const RecordingMeta& meta);

struct FeatureSetConfig {
  double segment_s = 3.0;
  std::size_t segments_per_recording = 3;
  double period_s = 3.0;
  double r_ohm = 1.0;
};

// segment -> simulate_voltage -> make_feature for every recording, in
// manifest order then segment order.
std::vector<LabeledFeature> build_feature_set(const Manifest& manifest, const PehDesign& design,
                                              const FeatureSetConfig& cfg);

struct SurrogateClass {
  MachineState label = MachineState::healthy;
  std::vector<Tone> tones;
  double noise_sigma = 0.0;
};

struct SurrogateSpec {
  std::uint64_t seed = 2024;
  double fs_hz = 51200.0;
  double duration_s = 10.0;
  std::size_t count_per_class = 7;
  std::string bearing_type = "6204";
  int load_w = 0;
  double amplitude_jitter = 0.25;   // relative, uniform in [-j, j]
  double frequency_jitter_hz = 0.5;  // uniform in [-j, j]
  bool text_format = false;
  std::vector<SurrogateClass> classes;

  // Healthy: two narrowband components away from the PEH bands. Ball crack:
  // broadband tones plus noise with a strong cluster inside the 200 Hz band.
  static SurrogateSpec defaults();
  // Same keys as written by to_text(); unspecified keys keep the defaults.
  static SurrogateSpec load(const std::string& path);
  std::string to_text() const;
};

// Writes one recording per class and index plus `manifest.csv` into
// `directory`. Recording i of every class draws from the same seeded stream,
// so classes with identical settings produce identical signals.
Manifest synth_surrogate_corpus(const SurrogateSpec& spec, const std::string& directory);

}  // namespace pehfd
