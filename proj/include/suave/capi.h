/* C API for the pipeline-inspection mission simulator. All state lives
 * behind opaque handles; every call returns a status code and the last
 * error message is available via suave_last_error(). */

#ifndef SUAVE_CAPI_H
#define SUAVE_CAPI_H

#include <stdint.h>

#if defined(_WIN32)
#define SUAVE_API __declspec(dllexport)
#else
#define SUAVE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum suave_status {
    SUAVE_OK = 0,
    SUAVE_ERR_INVALID_ARG = 1,
    SUAVE_ERR_CONFIG = 2,
    SUAVE_ERR_IO = 3,
    SUAVE_ERR_RUNTIME = 4
} suave_status;

typedef struct suave_config suave_config;
typedef struct suave_result suave_result;

SUAVE_API const char* suave_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
SUAVE_API const char* suave_last_error(void);

/* Configuration. Defaults reproduce the reference experiment scenario. */
SUAVE_API suave_status suave_config_create(suave_config** out);
SUAVE_API suave_status suave_config_load_file(const char* path,
                                              suave_config** out);
SUAVE_API suave_status suave_config_load_json(const char* json,
                                              suave_config** out);
SUAVE_API void suave_config_destroy(suave_config* config);

/* kind is "none", "random" or "metacontrol". */
SUAVE_API suave_status suave_config_set_manager(suave_config* config,
                                                const char* kind);
SUAVE_API suave_status suave_config_set_runs(suave_config* config, int runs);
SUAVE_API suave_status suave_config_set_base_seed(suave_config* config,
                                                  uint64_t seed);
SUAVE_API suave_status suave_config_set_output_dir(suave_config* config,
                                                   const char* dir);
SUAVE_API suave_status suave_config_set_trace(suave_config* config,
                                              int enabled);
SUAVE_API suave_status suave_config_set_kb_snapshots(suave_config* config,
                                                     int enabled);
SUAVE_API suave_status suave_config_to_json(const suave_config* config,
                                            char* buffer, int buffer_size,
                                            int* required_size);

/* Runs the batch (seeds base_seed .. base_seed+runs-1). When an output
 * directory is configured, results and stats CSVs are written there. */
SUAVE_API suave_status suave_run_batch(const suave_config* config,
                                       suave_result** out);
SUAVE_API void suave_result_destroy(suave_result* result);

SUAVE_API int suave_result_run_count(const suave_result* result);
SUAVE_API suave_status suave_result_run(const suave_result* result, int index,
                                        uint64_t* seed, int* pipeline_found,
                                        double* search_time_s,
                                        double* distance_inspected_m);
/* Sample (N-1) standard deviations; NaN for a single run. */
SUAVE_API suave_status suave_result_stats(const suave_result* result,
                                          double* search_time_mean_s,
                                          double* search_time_std_s,
                                          double* distance_mean_m,
                                          double* distance_std_m);

#ifdef __cplusplus
}
#endif

#endif /* SUAVE_CAPI_H */
