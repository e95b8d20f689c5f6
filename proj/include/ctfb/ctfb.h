/* C interface to the command-filtered backstepping simulator.
 *
 * All objects are opaque handles created by a *_load / *_run / *_read call
 * and released with the matching *_free. Every fallible call returns a
 * ctfb_status; on failure ctfb_last_error() describes the problem. The
 * message is thread-local and stays valid until the next failing call on
 * the same thread. Handles are not synchronized: share one across threads
 * only for const (read-only) calls.
 */
#ifndef CTFB_CTFB_H
#define CTFB_CTFB_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(CTFB_BUILDING_LIBRARY)
#    define CTFB_API __declspec(dllexport)
#  else
#    define CTFB_API __declspec(dllimport)
#  endif
#else
#  define CTFB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ctfb_status {
  CTFB_OK = 0,
  CTFB_ERR_INVALID_ARGUMENT = 1,
  CTFB_ERR_PARSE = 2,
  CTFB_ERR_VALIDATION = 3,
  CTFB_ERR_CONTROLLABILITY = 4,
  CTFB_ERR_NON_FINITE = 5,
  CTFB_ERR_IO = 6,
  CTFB_ERR_INTERNAL = 7
} ctfb_status;

typedef enum ctfb_variant {
  CTFB_VARIANT_PROPOSED = 0,
  CTFB_VARIANT_DSC = 1,
  CTFB_VARIANT_CONSTANT_GAIN = 2
} ctfb_variant;

typedef struct ctfb_scenario ctfb_scenario;
typedef struct ctfb_trace ctfb_trace;
typedef struct ctfb_report ctfb_report;

typedef struct ctfb_metrics {
  double max_abs_z1_after_T;
  double terminal_abs_z1;
  double window_max_abs_z1;
  double settling_time;
} ctfb_metrics;

CTFB_API const char* ctfb_version(void);
CTFB_API const char* ctfb_last_error(void);
CTFB_API const char* ctfb_status_string(ctfb_status status);

/* "proposed", "dsc", "constant_gain_cfb" */
CTFB_API const char* ctfb_variant_name(ctfb_variant variant);
CTFB_API ctfb_status ctfb_variant_parse(const char* name, ctfb_variant* out);

/* Scenarios (TOML). */
CTFB_API ctfb_status ctfb_scenario_load(const char* path, ctfb_scenario** out);
CTFB_API ctfb_status ctfb_scenario_parse(const char* toml_text,
                                         ctfb_scenario** out);
CTFB_API ctfb_status ctfb_scenario_clone(const ctfb_scenario* scenario,
                                         ctfb_scenario** out);
CTFB_API void ctfb_scenario_free(ctfb_scenario* scenario);
CTFB_API ctfb_status ctfb_scenario_save(const ctfb_scenario* scenario,
                                        const char* path);
/* Overrides are validated immediately; the scenario is unchanged on error. */
CTFB_API ctfb_status ctfb_scenario_set_step(ctfb_scenario* scenario, double h);
CTFB_API ctfb_status ctfb_scenario_set_horizon(ctfb_scenario* scenario,
                                               double horizon);
CTFB_API ctfb_status ctfb_scenario_set_variant(ctfb_scenario* scenario,
                                               ctfb_variant variant);
CTFB_API ctfb_status ctfb_scenario_get_variant(const ctfb_scenario* scenario,
                                               ctfb_variant* out);
CTFB_API size_t ctfb_scenario_order(const ctfb_scenario* scenario);
CTFB_API double ctfb_scenario_prescribed_time(const ctfb_scenario* scenario);
CTFB_API double ctfb_scenario_horizon(const ctfb_scenario* scenario);
/* Empty string when the scenario names no output path. */
CTFB_API const char* ctfb_scenario_output_path(const ctfb_scenario* scenario);

/* Simulation traces. */
CTFB_API ctfb_status ctfb_run(const ctfb_scenario* scenario, ctfb_trace** out);
CTFB_API void ctfb_trace_free(ctfb_trace* trace);
CTFB_API size_t ctfb_trace_rows(const ctfb_trace* trace);
CTFB_API size_t ctfb_trace_order(const ctfb_trace* trace);
CTFB_API ctfb_status ctfb_trace_value(const ctfb_trace* trace, size_t row,
                                      const char* column, double* out);
CTFB_API ctfb_status ctfb_trace_write_csv(const ctfb_trace* trace,
                                          const char* path);
CTFB_API ctfb_status ctfb_trace_read_csv(const char* path, ctfb_trace** out);

/* Analysis. window_start < 0 selects the last two seconds of the trace. */
CTFB_API ctfb_status ctfb_tracking_metrics(const ctfb_scenario* scenario,
                                           const ctfb_trace* trace,
                                           double window_start,
                                           ctfb_metrics* out);
CTFB_API ctfb_status ctfb_certify(const ctfb_scenario* scenario,
                                  const ctfb_trace* trace, ctfb_report** out);
CTFB_API void ctfb_report_free(ctfb_report* report);
/* 1 if every inequality check passed, 0 otherwise. */
CTFB_API int ctfb_report_passed(const ctfb_report* report);
/* 1 if l_i >= max|g_i| tau_i held on every filtered channel. */
CTFB_API int ctfb_report_side_condition_holds(const ctfb_report* report);
/* Owned by the report. */
CTFB_API const char* ctfb_report_text(const ctfb_report* report);
CTFB_API const char* ctfb_report_csv(const ctfb_report* report);
CTFB_API ctfb_status ctfb_report_write(const ctfb_report* report,
                                       const char* text_path,
                                       const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* CTFB_CTFB_H */
