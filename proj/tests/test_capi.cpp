#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "suave/capi.h"

TEST_CASE("version and error strings are always available") {
    CHECK(suave_version() != nullptr);
    CHECK(std::string(suave_version()) == "1.0.0");
    CHECK(suave_last_error() != nullptr);
}

TEST_CASE("null arguments are rejected with INVALID_ARG") {
    CHECK(suave_config_create(nullptr) == SUAVE_ERR_INVALID_ARG);
    CHECK(suave_config_load_json(nullptr, nullptr) == SUAVE_ERR_INVALID_ARG);
    CHECK(suave_config_set_manager(nullptr, "none") == SUAVE_ERR_INVALID_ARG);
    CHECK(suave_run_batch(nullptr, nullptr) == SUAVE_ERR_INVALID_ARG);
    CHECK(suave_result_run_count(nullptr) == 0);
    suave_config_destroy(nullptr);  // must be a safe no-op
    suave_result_destroy(nullptr);
}

TEST_CASE("bad configuration input maps to ERR_CONFIG with a message") {
    suave_config* config = nullptr;
    CHECK(suave_config_load_json("{\"bogus\": 1}", &config) == SUAVE_ERR_CONFIG);
    CHECK(config == nullptr);
    CHECK(std::strlen(suave_last_error()) > 0);

    CHECK(suave_config_load_file("/nonexistent.json", &config) != SUAVE_OK);

    REQUIRE(suave_config_create(&config) == SUAVE_OK);
    CHECK(suave_config_set_manager(config, "bogus") == SUAVE_ERR_CONFIG);
    CHECK(suave_config_set_runs(config, -2) == SUAVE_ERR_CONFIG);
    suave_config_destroy(config);
}

TEST_CASE("config to_json reports the required size") {
    suave_config* config = nullptr;
    REQUIRE(suave_config_create(&config) == SUAVE_OK);

    int required = 0;
    CHECK(suave_config_to_json(config, nullptr, 0, &required) == SUAVE_OK);
    CHECK(required > 2);

    std::vector<char> small(2);
    CHECK(suave_config_to_json(config, small.data(), 2, &required) ==
          SUAVE_ERR_INVALID_ARG);

    std::vector<char> buffer(required);
    REQUIRE(suave_config_to_json(config, buffer.data(), required, &required) ==
            SUAVE_OK);
    std::string json(buffer.data());
    CHECK(json.find("\"manager\"") != std::string::npos);
    suave_config_destroy(config);
}

TEST_CASE("a small batch runs end to end through the C API") {
    suave_config* config = nullptr;
    REQUIRE(suave_config_load_json("{\"time_limit_s\": 60.0, \"runs\": 2}",
                                   &config) == SUAVE_OK);
    REQUIRE(suave_config_set_manager(config, "metacontrol") == SUAVE_OK);
    REQUIRE(suave_config_set_base_seed(config, 1) == SUAVE_OK);

    suave_result* result = nullptr;
    REQUIRE(suave_run_batch(config, &result) == SUAVE_OK);
    REQUIRE(result != nullptr);
    CHECK(suave_result_run_count(result) == 2);

    uint64_t seed = 0;
    int found = -1;
    double search_time = -1.0, distance = -1.0;
    REQUIRE(suave_result_run(result, 0, &seed, &found, &search_time,
                             &distance) == SUAVE_OK);
    CHECK(seed == 1);
    CHECK((found == 0 || found == 1));
    CHECK(search_time >= 0.0);
    CHECK(distance >= 0.0);
    CHECK(suave_result_run(result, 5, &seed, &found, &search_time, &distance) ==
          SUAVE_ERR_INVALID_ARG);

    double st_mean, st_std, d_mean, d_std;
    REQUIRE(suave_result_stats(result, &st_mean, &st_std, &d_mean, &d_std) ==
            SUAVE_OK);
    CHECK(st_mean >= 0.0);
    CHECK((std::isnan(st_std) == false));  // two runs give a finite std

    // Same config again: identical metrics.
    suave_result* again = nullptr;
    REQUIRE(suave_run_batch(config, &again) == SUAVE_OK);
    uint64_t seed2;
    int found2;
    double st2, d2;
    REQUIRE(suave_result_run(again, 0, &seed2, &found2, &st2, &d2) == SUAVE_OK);
    CHECK(st2 == search_time);
    CHECK(d2 == distance);

    suave_result_destroy(result);
    suave_result_destroy(again);
    suave_config_destroy(config);
}
