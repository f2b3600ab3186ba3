// Command-line front end for the mission simulator. Links only the C API.

#include <cinttypes>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "suave/capi.h"

namespace {

int fail(const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, suave_last_error());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-adaptive AUV pipeline-inspection mission runner"};
    app.footer("Exit codes: 0 success, 2 configuration error.");

    std::string config_path;
    std::string manager;
    std::string out_dir;
    int runs = -1;
    long long seed = -1;
    bool trace = false;
    bool snapshot_kb = false;

    app.add_option("--config", config_path,
                   "JSON configuration file (defaults used when omitted)");
    app.add_option("--manager", manager,
                   "Managing subsystem: none, random or metacontrol")
        ->check(CLI::IsMember({"none", "random", "metacontrol"}));
    app.add_option("--runs", runs, "Number of missions in the batch");
    app.add_option("--seed", seed, "Base seed (runs use seed, seed+1, ...)");
    app.add_option("--out", out_dir, "Directory for results/stats CSV files");
    app.add_flag("--trace", trace, "Write a per-step trajectory CSV per run");
    app.add_flag("--snapshot-kb", snapshot_kb,
                 "Dump the knowledge base per MAPE cycle (metacontrol only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    suave_config* config = nullptr;
    suave_status rc;
    if (config_path.empty())
        rc = suave_config_create(&config);
    else
        rc = suave_config_load_file(config_path.c_str(), &config);
    if (rc != SUAVE_OK) return fail("loading configuration");

    if (!manager.empty() &&
        suave_config_set_manager(config, manager.c_str()) != SUAVE_OK) {
        suave_config_destroy(config);
        return fail("setting manager");
    }
    if (runs >= 0 && suave_config_set_runs(config, runs) != SUAVE_OK) {
        suave_config_destroy(config);
        return fail("setting runs");
    }
    if (seed >= 0)
        suave_config_set_base_seed(config, static_cast<uint64_t>(seed));
    if (!out_dir.empty()) suave_config_set_output_dir(config, out_dir.c_str());
    suave_config_set_trace(config, trace ? 1 : 0);
    suave_config_set_kb_snapshots(config, snapshot_kb ? 1 : 0);

    suave_result* result = nullptr;
    rc = suave_run_batch(config, &result);
    if (rc != SUAVE_OK) {
        suave_config_destroy(config);
        std::fprintf(stderr, "error: batch failed: %s\n", suave_last_error());
        return rc == SUAVE_ERR_CONFIG ? 2 : 1;
    }

    int count = suave_result_run_count(result);
    std::printf("seed,pipeline_found,search_time_s,distance_inspected_m\n");
    for (int i = 0; i < count; ++i) {
        uint64_t run_seed = 0;
        int found = 0;
        double search_time = 0.0, distance = 0.0;
        suave_result_run(result, i, &run_seed, &found, &search_time, &distance);
        std::printf("%" PRIu64 ",%s,%.3f,%.3f\n", run_seed,
                    found ? "true" : "false", search_time, distance);
    }

    double st_mean = 0.0, st_std = 0.0, di_mean = 0.0, di_std = 0.0;
    suave_result_stats(result, &st_mean, &st_std, &di_mean, &di_std);
    std::printf("\nruns: %d\n", count);
    std::printf("search time (s):        mean %.2f  std %.2f\n", st_mean, st_std);
    std::printf("distance inspected (m): mean %.2f  std %.2f\n", di_mean, di_std);
    if (!out_dir.empty())
        std::printf("results written to %s\n", out_dir.c_str());

    suave_result_destroy(result);
    suave_config_destroy(config);
    return 0;
}
