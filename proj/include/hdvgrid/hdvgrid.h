/* C interface of libhdvgrid.
 *
 * Every call returns an hdv_status. On failure hdv_last_error() describes the
 * problem; the message is thread-local and valid until the next call on the
 * same thread. Handles are opaque and owned by the caller once returned.
 */
#ifndef HDVGRID_H
#define HDVGRID_H

#include <stddef.h>

#if defined(HDVGRID_BUILDING_LIBRARY)
#define HDV_API __attribute__((visibility("default")))
#else
#define HDV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hdv_status {
  HDV_OK = 0,
  HDV_NOT_OPTIMAL = 1,  /* a scenario ended infeasible, unbounded or at the iteration limit */
  HDV_CONFIG_ERROR = 2, /* unreadable or invalid input */
  HDV_BAD_ARGUMENT = 3,
  HDV_INTERNAL_ERROR = 4
} hdv_status;

typedef struct hdv_manifest hdv_manifest;
typedef struct hdv_result hdv_result;

HDV_API const char* hdv_version(void);
HDV_API const char* hdv_last_error(void);

HDV_API hdv_status hdv_manifest_load(const char* path, hdv_manifest** out);
HDV_API void hdv_manifest_free(hdv_manifest* m);
HDV_API hdv_status hdv_manifest_set_horizon(hdv_manifest* m, size_t hours);
HDV_API hdv_status hdv_manifest_set_island(hdv_manifest* m, int island);
/* A negative cap removes it. */
HDV_API hdv_status hdv_manifest_set_wind_caps(hdv_manifest* m, double onshore_mw, double offshore_mw);
HDV_API hdv_status hdv_manifest_set_depot_scale(hdv_manifest* m, double scale);
HDV_API hdv_status hdv_manifest_set_away_scale(hdv_manifest* m, double scale);
HDV_API hdv_status hdv_manifest_set_jobs(hdv_manifest* m, int jobs);
HDV_API hdv_status hdv_manifest_set_out(hdv_manifest* m, const char* dir);
/* Comma-separated scenario kinds, e.g. "REF,BEV_FLEX". */
HDV_API hdv_status hdv_manifest_set_scenarios(hdv_manifest* m, const char* kinds);
HDV_API hdv_status hdv_manifest_out(const hdv_manifest* m, const char** dir);

/* Runs the manifest and writes outputs below its output directory. Returns
 * HDV_NOT_OPTIMAL (with a result) when any scenario is not optimal. */
HDV_API hdv_status hdv_run(const hdv_manifest* m, hdv_result** out);
/* axis: "depot", "away", "windcap" or "island". */
HDV_API hdv_status hdv_sweep(const hdv_manifest* m, const char* axis, hdv_result** out);

HDV_API size_t hdv_result_count(const hdv_result* r);
HDV_API const char* hdv_result_scenario(const hdv_result* r, size_t i);
HDV_API const char* hdv_result_status(const hdv_result* r, size_t i);
/* Metric or delta value by key; HDV_BAD_ARGUMENT when absent. */
HDV_API hdv_status hdv_result_metric(const hdv_result* r, size_t i, const char* key, double* value);
HDV_API hdv_status hdv_result_delta(const hdv_result* r, size_t i, const char* key, double* value);
/* Ordering and monotonicity checks, one line each. */
HDV_API const char* hdv_result_log(const hdv_result* r);
HDV_API int hdv_result_checks_ok(const hdv_result* r);
HDV_API void hdv_result_free(hdv_result* r);

/* Profile synthesis for one fleet; fuel_chain may be NULL. */
HDV_API hdv_status hdv_synth(const char* synth_config, const char* fleet, const char* fuel_chain, size_t horizon,
                             int anchor_weekday, const char* out_dir, size_t* bins, size_t* profiles);
HDV_API hdv_status hdv_compare(const char* scenario_summary, const char* reference_summary, const char* out_csv);
/* Solves a model in the ModelIR text format and writes the solution text format. */
HDV_API hdv_status hdv_solve_file(const char* model_path, const char* solution_path);

#ifdef __cplusplus
}
#endif

#endif
