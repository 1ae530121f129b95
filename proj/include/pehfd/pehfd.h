#ifndef PEHFD_PEHFD_H
#define PEHFD_PEHFD_H

/*
 * pehfd: simulated fault detection with piezoelectric energy harvesters used
 * as analog band-pass filters followed by an energy integrator sampled at a
 * low rate.
 *
 * All functions return a pehfd_status. On failure a thread-local message is
 * available from pehfd_last_error() until the next call on the same thread.
 * Objects are opaque handles created by pehfd_*_create / loader functions
 * and released with the matching pehfd_*_free, which accepts NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PEHFD_BUILDING)
#    define PEHFD_API __declspec(dllexport)
#  else
#    define PEHFD_API __declspec(dllimport)
#  endif
#else
#  define PEHFD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pehfd_status {
  PEHFD_OK = 0,
  PEHFD_ERR_INVALID_ARGUMENT = 1, /* violated precondition or NULL handle */
  PEHFD_ERR_CONFIG = 2,           /* bad configuration, manifest or design table */
  PEHFD_ERR_DATA = 3,             /* bad or insufficient recording data */
  PEHFD_ERR_IO = 4,               /* filesystem failure */
  PEHFD_ERR_BUFFER_TOO_SMALL = 5, /* output array shorter than the result */
  PEHFD_ERR_INTERNAL = 6
} pehfd_status;

typedef enum pehfd_unit {
  PEHFD_UNIT_ACCELERATION_G = 0,
  PEHFD_UNIT_VOLTS = 1
} pehfd_unit;

PEHFD_API const char* pehfd_version(void);
PEHFD_API const char* pehfd_last_error(void);
PEHFD_API const char* pehfd_status_name(pehfd_status status);

/* ---- time series ------------------------------------------------------- */

typedef struct pehfd_series pehfd_series;

PEHFD_API pehfd_status pehfd_series_create(const double* samples, size_t count, double fs_hz,
                                           pehfd_unit unit, pehfd_series** out);
PEHFD_API pehfd_status pehfd_series_synth_sine(double f_hz, double amplitude, double phase_rad,
                                               double fs_hz, double duration_s,
                                               pehfd_series** out);
/* Sum of zero-phase tones plus seeded white Gaussian noise. */
PEHFD_API pehfd_status pehfd_series_synth_composite(const double* tone_hz,
                                                    const double* tone_amplitude,
                                                    size_t tone_count, double noise_sigma,
                                                    double fs_hz, double duration_s,
                                                    uint64_t seed, pehfd_series** out);
PEHFD_API void pehfd_series_free(pehfd_series* series);

PEHFD_API size_t pehfd_series_length(const pehfd_series* series);
PEHFD_API double pehfd_series_fs(const pehfd_series* series);
PEHFD_API pehfd_unit pehfd_series_unit(const pehfd_series* series);
/* Borrowed pointer, valid until the series is freed. */
PEHFD_API const double* pehfd_series_samples(const pehfd_series* series);

/* Energy of the band [f_lo, f_hi] from the full-length spectrum, in J into r_ohm. */
PEHFD_API pehfd_status pehfd_band_energy_digital(const pehfd_series* series, double f_lo_hz,
                                                 double f_hi_hz, double r_ohm,
                                                 double* out_joules);

/* ---- harvester designs ------------------------------------------------- */

typedef struct pehfd_design {
  char name[64];
  double thickness_mm;
  double f0_hz;
  double bw3db_hz;
  double peak_gain_v_per_g;
  double r_ohm;
} pehfd_design;

typedef struct pehfd_design_table pehfd_design_table;

PEHFD_API pehfd_status pehfd_design_table_default(pehfd_design_table** out);
PEHFD_API pehfd_status pehfd_design_table_load(const char* path, pehfd_design_table** out);
PEHFD_API void pehfd_design_table_free(pehfd_design_table* table);
PEHFD_API size_t pehfd_design_table_size(const pehfd_design_table* table);
PEHFD_API pehfd_status pehfd_design_table_get(const pehfd_design_table* table, size_t index,
                                              pehfd_design* out);
/* Accepts a design name or a thickness in mm, e.g. "0.45". */
PEHFD_API pehfd_status pehfd_design_table_lookup(const pehfd_design_table* table,
                                                 const char* key, pehfd_design* out);

/* Built-in table: 0.35/0.40/0.45/0.50 mm -> 125/150/175/200 Hz. */
PEHFD_API pehfd_status pehfd_design_from_thickness(double thickness_mm, pehfd_design* out);
PEHFD_API pehfd_status pehfd_frf_magnitude(const pehfd_design* design, double f_hz,
                                           double* out_v_per_g);
PEHFD_API pehfd_status pehfd_simulate_voltage(const pehfd_design* design,
                                              const pehfd_series* accel,
                                              pehfd_series** out_volts);
PEHFD_API pehfd_status pehfd_verify_discretization(const pehfd_design* design, double fs_hz,
                                                   const double* probes_hz, size_t probe_count,
                                                   double* out_max_relative_error);

/* ---- analog front end -------------------------------------------------- */

/* y[k] = sum over interval k of v^2 / (R fs). Writes up to `capacity`
 * values; *out_count always receives the full count, and
 * PEHFD_ERR_BUFFER_TOO_SMALL is returned when it exceeds capacity. */
PEHFD_API pehfd_status pehfd_integrate_energy(const pehfd_series* volts, double period_s,
                                              double r_ohm, double* out_y, size_t capacity,
                                              size_t* out_count);

/* ---- run configuration and commands ------------------------------------ */

typedef struct pehfd_config pehfd_config;
typedef struct pehfd_result pehfd_result;

PEHFD_API pehfd_status pehfd_config_create(pehfd_config** out);
PEHFD_API void pehfd_config_free(pehfd_config* config);
/* Applies a flat `key = value` file; relative paths resolve against it. */
PEHFD_API pehfd_status pehfd_config_load(pehfd_config* config, const char* path);
PEHFD_API pehfd_status pehfd_config_set(pehfd_config* config, const char* key,
                                        const char* value);

/* Each command validates the configuration before doing any work and writes
 * its CSV (and SVG) artifacts into the configured out_dir. */
PEHFD_API pehfd_status pehfd_cmd_thought_experiment(const pehfd_config* config,
                                                    pehfd_result** out);
PEHFD_API pehfd_status pehfd_cmd_extract(const pehfd_config* config, pehfd_result** out);
PEHFD_API pehfd_status pehfd_cmd_classify(const pehfd_config* config, pehfd_result** out);
PEHFD_API pehfd_status pehfd_cmd_sweep(const pehfd_config* config, pehfd_result** out);
PEHFD_API pehfd_status pehfd_cmd_scatter(const pehfd_config* config, pehfd_result** out);
PEHFD_API pehfd_status pehfd_cmd_energy_report(const pehfd_config* config, pehfd_result** out);
PEHFD_API pehfd_status pehfd_cmd_surrogate_gen(const pehfd_config* config, pehfd_result** out);

PEHFD_API void pehfd_result_free(pehfd_result* result);
PEHFD_API const char* pehfd_result_text(const pehfd_result* result);
PEHFD_API size_t pehfd_result_file_count(const pehfd_result* result);
PEHFD_API const char* pehfd_result_file(const pehfd_result* result, size_t index);
PEHFD_API pehfd_status pehfd_result_metric(const pehfd_result* result, const char* name,
                                           double* out);

#ifdef __cplusplus
}
#endif

#endif /* PEHFD_PEHFD_H */
