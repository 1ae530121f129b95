#include "pehfd/pehfd.h"

#include "core/errors.hpp"
#include "core/frontend.hpp"
#include "core/peh.hpp"
#include "core/report.hpp"
#include "core/signal.hpp"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <vector>

struct pehfd_series {
  pehfd::TimeSeries ts;
};

struct pehfd_design_table {
  pehfd::DesignTable table;
};

struct pehfd_config {
  pehfd::RunConfig cfg;
};

struct pehfd_result {
  pehfd::CommandResult res;
};

namespace {

thread_local std::string g_last_error;

pehfd_status fail(pehfd_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
pehfd_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return PEHFD_OK;
  } catch (const pehfd::InvalidArgument& e) {
    return fail(PEHFD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const pehfd::ConfigError& e) {
    return fail(PEHFD_ERR_CONFIG, e.what());
  } catch (const pehfd::DataError& e) {
    return fail(PEHFD_ERR_DATA, e.what());
  } catch (const pehfd::IoError& e) {
    return fail(PEHFD_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PEHFD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PEHFD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PEHFD_ERR_INTERNAL, "unknown error");
  }
}

struct NullArgument : pehfd::InvalidArgument {
  explicit NullArgument(const char* what)
      : pehfd::InvalidArgument(std::string(what) + " must not be NULL") {}
};

template <typename T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw NullArgument(what);
}

pehfd::PehDesign to_core(const pehfd_design* d) {
  require(d, "design");
  pehfd::PehDesign out;
  out.name = std::string(d->name, strnlen(d->name, sizeof d->name));
  out.thickness_mm = d->thickness_mm;
  out.f0_hz = d->f0_hz;
  out.bw3db_hz = d->bw3db_hz;
  out.peak_gain_v_per_g = d->peak_gain_v_per_g;
  out.r_ohm = d->r_ohm;
  out.validate();
  return out;
}

void to_c(const pehfd::PehDesign& d, pehfd_design* out) {
  require(out, "out");
  std::memset(out, 0, sizeof *out);
  std::strncpy(out->name, d.name.c_str(), sizeof out->name - 1);
  out->thickness_mm = d.thickness_mm;
  out->f0_hz = d.f0_hz;
  out->bw3db_hz = d.bw3db_hz;
  out->peak_gain_v_per_g = d.peak_gain_v_per_g;
  out->r_ohm = d.r_ohm;
}

pehfd::Unit to_core(pehfd_unit u) {
  switch (u) {
    case PEHFD_UNIT_ACCELERATION_G:
      return pehfd::Unit::acceleration_g;
    case PEHFD_UNIT_VOLTS:
      return pehfd::Unit::volts;
  }
  throw pehfd::InvalidArgument("unknown unit");
}

pehfd_series* wrap(pehfd::TimeSeries ts) { return new pehfd_series{std::move(ts)}; }

template <typename Cmd>
pehfd_status run_command(const pehfd_config* config, pehfd_result** out, Cmd cmd) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    *out = new pehfd_result{cmd(config->cfg)};
  });
}

}  // namespace

extern "C" {

const char* pehfd_version(void) { return "1.0.0"; }

const char* pehfd_last_error(void) { return g_last_error.c_str(); }

const char* pehfd_status_name(pehfd_status status) {
  switch (status) {
    case PEHFD_OK: return "ok";
    case PEHFD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PEHFD_ERR_CONFIG: return "configuration error";
    case PEHFD_ERR_DATA: return "data error";
    case PEHFD_ERR_IO: return "i/o error";
    case PEHFD_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case PEHFD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

pehfd_status pehfd_series_create(const double* samples, size_t count, double fs_hz,
                                 pehfd_unit unit, pehfd_series** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (count > 0) require(samples, "samples");
    std::vector<double> v(samples, samples + count);
    *out = wrap(pehfd::TimeSeries(std::move(v), fs_hz, to_core(unit)));
  });
}

pehfd_status pehfd_series_synth_sine(double f_hz, double amplitude, double phase_rad,
                                     double fs_hz, double duration_s, pehfd_series** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = wrap(pehfd::synth_sine(f_hz, amplitude, phase_rad, fs_hz, duration_s));
  });
}

pehfd_status pehfd_series_synth_composite(const double* tone_hz, const double* tone_amplitude,
                                          size_t tone_count, double noise_sigma, double fs_hz,
                                          double duration_s, uint64_t seed,
                                          pehfd_series** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    std::vector<pehfd::Tone> tones;
    if (tone_count > 0) {
      require(tone_hz, "tone_hz");
      require(tone_amplitude, "tone_amplitude");
    }
    for (size_t i = 0; i < tone_count; ++i) tones.push_back({tone_hz[i], tone_amplitude[i]});
    *out = wrap(pehfd::synth_composite(tones, noise_sigma, fs_hz, duration_s, seed));
  });
}

void pehfd_series_free(pehfd_series* series) { delete series; }

size_t pehfd_series_length(const pehfd_series* series) {
  return series ? series->ts.size() : 0;
}

double pehfd_series_fs(const pehfd_series* series) { return series ? series->ts.fs() : 0.0; }

pehfd_unit pehfd_series_unit(const pehfd_series* series) {
  return series && series->ts.unit() == pehfd::Unit::volts ? PEHFD_UNIT_VOLTS
                                                            : PEHFD_UNIT_ACCELERATION_G;
}

const double* pehfd_series_samples(const pehfd_series* series) {
  return series ? series->ts.samples().data() : nullptr;
}

pehfd_status pehfd_band_energy_digital(const pehfd_series* series, double f_lo_hz,
                                       double f_hi_hz, double r_ohm, double* out_joules) {
  return guarded([&] {
    require(series, "series");
    require(out_joules, "out_joules");
    *out_joules = pehfd::band_energy_digital(series->ts, f_lo_hz, f_hi_hz, r_ohm);
  });
}

pehfd_status pehfd_design_table_default(pehfd_design_table** out) {
  return guarded([&] {
    require(out, "out");
    *out = new pehfd_design_table{pehfd::DesignTable::defaults()};
  });
}

pehfd_status pehfd_design_table_load(const char* path, pehfd_design_table** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new pehfd_design_table{pehfd::DesignTable::load(path)};
  });
}

void pehfd_design_table_free(pehfd_design_table* table) { delete table; }

size_t pehfd_design_table_size(const pehfd_design_table* table) {
  return table ? table->table.designs().size() : 0;
}

pehfd_status pehfd_design_table_get(const pehfd_design_table* table, size_t index,
                                    pehfd_design* out) {
  return guarded([&] {
    require(table, "table");
    const auto& designs = table->table.designs();
    if (index >= designs.size()) throw pehfd::InvalidArgument("design index out of range");
    to_c(designs[index], out);
  });
}

pehfd_status pehfd_design_table_lookup(const pehfd_design_table* table, const char* key,
                                       pehfd_design* out) {
  return guarded([&] {
    require(table, "table");
    require(key, "key");
    to_c(table->table.lookup(key), out);
  });
}

pehfd_status pehfd_design_from_thickness(double thickness_mm, pehfd_design* out) {
  return guarded([&] { to_c(pehfd::design_from_thickness(thickness_mm), out); });
}

pehfd_status pehfd_frf_magnitude(const pehfd_design* design, double f_hz, double* out_v_per_g) {
  return guarded([&] {
    require(out_v_per_g, "out_v_per_g");
    *out_v_per_g = pehfd::frf_magnitude(to_core(design), f_hz);
  });
}

pehfd_status pehfd_simulate_voltage(const pehfd_design* design, const pehfd_series* accel,
                                    pehfd_series** out_volts) {
  return guarded([&] {
    require(accel, "accel");
    require(out_volts, "out_volts");
    *out_volts = nullptr;
    *out_volts = wrap(pehfd::simulate_voltage(to_core(design), accel->ts));
  });
}

pehfd_status pehfd_verify_discretization(const pehfd_design* design, double fs_hz,
                                         const double* probes_hz, size_t probe_count,
                                         double* out_max_relative_error) {
  return guarded([&] {
    require(out_max_relative_error, "out_max_relative_error");
    if (probe_count > 0) require(probes_hz, "probes_hz");
    *out_max_relative_error = pehfd::verify_discretization(
        to_core(design), fs_hz, std::span<const double>(probes_hz, probe_count));
  });
}

pehfd_status pehfd_integrate_energy(const pehfd_series* volts, double period_s, double r_ohm,
                                    double* out_y, size_t capacity, size_t* out_count) {
  std::optional<pehfd::EnergySamples> e;
  const auto st = guarded([&] {
    require(volts, "volts");
    require(out_count, "out_count");
    if (capacity > 0) require(out_y, "out_y");
    e = pehfd::integrate_energy(volts->ts, period_s, r_ohm);
  });
  if (st != PEHFD_OK) return st;
  *out_count = e->y.size();
  const size_t n = std::min(capacity, e->y.size());
  std::copy_n(e->y.begin(), n, out_y);
  if (e->y.size() > capacity) {
    return fail(PEHFD_ERR_BUFFER_TOO_SMALL, "integrate_energy: " + std::to_string(e->y.size()) +
                                                " samples do not fit in " +
                                                std::to_string(capacity));
  }
  return PEHFD_OK;
}

pehfd_status pehfd_config_create(pehfd_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new pehfd_config{};
  });
}

void pehfd_config_free(pehfd_config* config) { delete config; }

pehfd_status pehfd_config_load(pehfd_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->cfg.load(path);
  });
}

pehfd_status pehfd_config_set(pehfd_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->cfg.set(key, value);
  });
}

pehfd_status pehfd_cmd_thought_experiment(const pehfd_config* config, pehfd_result** out) {
  return run_command(config, out, pehfd::cmd_thought_experiment);
}

pehfd_status pehfd_cmd_extract(const pehfd_config* config, pehfd_result** out) {
  return run_command(config, out, pehfd::cmd_extract);
}

pehfd_status pehfd_cmd_classify(const pehfd_config* config, pehfd_result** out) {
  return run_command(config, out, pehfd::cmd_classify);
}

pehfd_status pehfd_cmd_sweep(const pehfd_config* config, pehfd_result** out) {
  return run_command(config, out, pehfd::cmd_sweep);
}

pehfd_status pehfd_cmd_scatter(const pehfd_config* config, pehfd_result** out) {
  return run_command(config, out, pehfd::cmd_scatter);
}

pehfd_status pehfd_cmd_energy_report(const pehfd_config* config, pehfd_result** out) {
  return run_command(config, out, pehfd::cmd_energy_report);
}

pehfd_status pehfd_cmd_surrogate_gen(const pehfd_config* config, pehfd_result** out) {
  return run_command(config, out, pehfd::cmd_surrogate_gen);
}

void pehfd_result_free(pehfd_result* result) { delete result; }

const char* pehfd_result_text(const pehfd_result* result) {
  return result ? result->res.text.c_str() : "";
}

size_t pehfd_result_file_count(const pehfd_result* result) {
  return result ? result->res.files.size() : 0;
}

const char* pehfd_result_file(const pehfd_result* result, size_t index) {
  if (!result || index >= result->res.files.size()) return nullptr;
  return result->res.files[index].c_str();
}

pehfd_status pehfd_result_metric(const pehfd_result* result, const char* name, double* out) {
  return guarded([&] {
    require(result, "result");
    require(name, "name");
    require(out, "out");
    const auto it = result->res.metrics.find(name);
    if (it == result->res.metrics.end()) {
      throw pehfd::InvalidArgument(std::string("no metric named '") + name + "'");
    }
    *out = it->second;
  });
}

}  // extern "C"
