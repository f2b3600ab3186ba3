#include "suave/capi.h"

#include <cstring>
#include <string>

#include "suave/runner.hpp"

using suave::runner::BatchResult;
using suave::runner::ConfigError;
using suave::runner::RunConfig;

struct suave_config {
    RunConfig cfg;
};

struct suave_result {
    BatchResult batch;
};

namespace {

thread_local std::string g_last_error;

suave_status fail(suave_status s, const std::string& message) {
    g_last_error = message;
    return s;
}

template <typename Fn>
suave_status guard(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        return fail(SUAVE_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SUAVE_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(SUAVE_ERR_RUNTIME, e.what());
    }
}

}  // namespace

extern "C" {

const char* suave_version(void) { return "1.0.0"; }

const char* suave_last_error(void) { return g_last_error.c_str(); }

suave_status suave_config_create(suave_config** out) {
    if (!out) return fail(SUAVE_ERR_INVALID_ARG, "out is null");
    *out = new suave_config{};
    return SUAVE_OK;
}

suave_status suave_config_load_file(const char* path, suave_config** out) {
    if (!path || !out) return fail(SUAVE_ERR_INVALID_ARG, "null argument");
    return guard([&] {
        auto cfg = RunConfig::from_file(path);
        *out = new suave_config{std::move(cfg)};
        return SUAVE_OK;
    });
}

suave_status suave_config_load_json(const char* json, suave_config** out) {
    if (!json || !out) return fail(SUAVE_ERR_INVALID_ARG, "null argument");
    return guard([&] {
        auto cfg = RunConfig::from_json(json);
        *out = new suave_config{std::move(cfg)};
        return SUAVE_OK;
    });
}

void suave_config_destroy(suave_config* config) { delete config; }

suave_status suave_config_set_manager(suave_config* config, const char* kind) {
    if (!config || !kind) return fail(SUAVE_ERR_INVALID_ARG, "null argument");
    return guard([&] {
        config->cfg.manager = suave::managing::manager_kind_from_string(kind);
        return SUAVE_OK;
    });
}

suave_status suave_config_set_runs(suave_config* config, int runs) {
    if (!config) return fail(SUAVE_ERR_INVALID_ARG, "config is null");
    if (runs < 1) return fail(SUAVE_ERR_CONFIG, "runs must be >= 1");
    config->cfg.runs = runs;
    return SUAVE_OK;
}

suave_status suave_config_set_base_seed(suave_config* config, uint64_t seed) {
    if (!config) return fail(SUAVE_ERR_INVALID_ARG, "config is null");
    config->cfg.base_seed = seed;
    return SUAVE_OK;
}

suave_status suave_config_set_output_dir(suave_config* config,
                                         const char* dir) {
    if (!config || !dir) return fail(SUAVE_ERR_INVALID_ARG, "null argument");
    config->cfg.output_dir = dir;
    return SUAVE_OK;
}

suave_status suave_config_set_trace(suave_config* config, int enabled) {
    if (!config) return fail(SUAVE_ERR_INVALID_ARG, "config is null");
    config->cfg.trace = enabled != 0;
    return SUAVE_OK;
}

suave_status suave_config_set_kb_snapshots(suave_config* config, int enabled) {
    if (!config) return fail(SUAVE_ERR_INVALID_ARG, "config is null");
    config->cfg.kb_snapshots = enabled != 0;
    return SUAVE_OK;
}

suave_status suave_config_to_json(const suave_config* config, char* buffer,
                                  int buffer_size, int* required_size) {
    if (!config) return fail(SUAVE_ERR_INVALID_ARG, "config is null");
    std::string json = config->cfg.to_json();
    int needed = static_cast<int>(json.size()) + 1;
    if (required_size) *required_size = needed;
    if (!buffer) return SUAVE_OK;
    if (buffer_size < needed)
        return fail(SUAVE_ERR_INVALID_ARG, "buffer too small");
    std::memcpy(buffer, json.c_str(), static_cast<std::size_t>(needed));
    return SUAVE_OK;
}

suave_status suave_run_batch(const suave_config* config, suave_result** out) {
    if (!config || !out) return fail(SUAVE_ERR_INVALID_ARG, "null argument");
    return guard([&] {
        auto batch = suave::runner::run_batch(config->cfg);
        *out = new suave_result{std::move(batch)};
        return SUAVE_OK;
    });
}

void suave_result_destroy(suave_result* result) { delete result; }

int suave_result_run_count(const suave_result* result) {
    return result ? static_cast<int>(result->batch.runs.size()) : 0;
}

suave_status suave_result_run(const suave_result* result, int index,
                              uint64_t* seed, int* pipeline_found,
                              double* search_time_s,
                              double* distance_inspected_m) {
    if (!result) return fail(SUAVE_ERR_INVALID_ARG, "result is null");
    if (index < 0 || index >= suave_result_run_count(result))
        return fail(SUAVE_ERR_INVALID_ARG, "run index out of range");
    const auto& r = result->batch.runs[static_cast<std::size_t>(index)];
    if (seed) *seed = r.seed;
    if (pipeline_found) *pipeline_found = r.pipeline_found ? 1 : 0;
    if (search_time_s) *search_time_s = r.search_time;
    if (distance_inspected_m) *distance_inspected_m = r.distance_inspected;
    return SUAVE_OK;
}

suave_status suave_result_stats(const suave_result* result,
                                double* search_time_mean_s,
                                double* search_time_std_s,
                                double* distance_mean_m,
                                double* distance_std_m) {
    if (!result) return fail(SUAVE_ERR_INVALID_ARG, "result is null");
    const auto& s = result->batch.stats;
    if (search_time_mean_s) *search_time_mean_s = s.search_time.mean;
    if (search_time_std_s) *search_time_std_s = s.search_time.std;
    if (distance_mean_m) *distance_mean_m = s.distance.mean;
    if (distance_std_m) *distance_std_m = s.distance.std;
    return SUAVE_OK;
}

}  // extern "C"
