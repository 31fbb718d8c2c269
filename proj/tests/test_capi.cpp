// Exercises the shared library strictly through the C header, the way an
// embedding application would.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tocsim.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "tocsim_capi" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const double kDefaultModel[TOCSIM_MODEL_PARAMS] = {1.0, 0.5, 1.0, 0.25,
                                                   0.0, -5.0, 5.0, 10.0};

}  // namespace

TEST_CASE("version and status names are stable") {
    CHECK(std::string(tocsim_version()) == "0.1.0");
    CHECK(std::string(tocsim_status_name(TOCSIM_OK)) == "ok");
    CHECK(std::string(tocsim_status_name(TOCSIM_ERR_CONFIG)) == "config");
    CHECK(std::string(tocsim_status_name(TOCSIM_ERR_IO)) == "io");
}

TEST_CASE("opening with no config yields the defaults") {
    tocsim_experiment* experiment = nullptr;
    REQUIRE(tocsim_experiment_open(nullptr, &experiment) == TOCSIM_OK);
    REQUIRE(experiment != nullptr);

    const auto dir = fresh_dir("write_config");
    const auto path = (dir / "default.cfg").string();
    CHECK(tocsim_experiment_write_config(experiment, path.c_str()) == TOCSIM_OK);

    // The written config must be loadable again.
    tocsim_experiment* reopened = nullptr;
    CHECK(tocsim_experiment_open(path.c_str(), &reopened) == TOCSIM_OK);
    tocsim_experiment_close(reopened);
    tocsim_experiment_close(experiment);
}

TEST_CASE("missing config files are io errors with a message") {
    tocsim_experiment* experiment = nullptr;
    CHECK(tocsim_experiment_open("/no/such/file.cfg", &experiment) == TOCSIM_ERR_IO);
    CHECK(experiment == nullptr);
    CHECK(std::string(tocsim_last_error()).find("/no/such/file.cfg") != std::string::npos);
}

TEST_CASE("bad configs are config errors") {
    const auto dir = fresh_dir("bad_config");
    const auto path = dir / "bad.cfg";
    std::ofstream(path) << "[plant]\nalpa = 1.0\n";
    tocsim_experiment* experiment = nullptr;
    CHECK(tocsim_experiment_open(path.string().c_str(), &experiment) == TOCSIM_ERR_CONFIG);
    CHECK(std::string(tocsim_last_error()).find("alpa") != std::string::npos);
}

TEST_CASE("setter validation") {
    tocsim_experiment* experiment = nullptr;
    REQUIRE(tocsim_experiment_open(nullptr, &experiment) == TOCSIM_OK);
    CHECK(tocsim_experiment_set_workers(experiment, 0) == TOCSIM_ERR_INVALID_ARGUMENT);
    CHECK(tocsim_experiment_set_cycles(experiment, 0) == TOCSIM_ERR_INVALID_ARGUMENT);
    CHECK(tocsim_experiment_set_out_dir(experiment, "") == TOCSIM_ERR_INVALID_ARGUMENT);
    CHECK(tocsim_experiment_set_start(experiment, NAN, 0.0) == TOCSIM_ERR_CONFIG);
    CHECK(tocsim_experiment_set_seed(experiment, 99) == TOCSIM_OK);
    CHECK(tocsim_experiment_set_workers(experiment, 2) == TOCSIM_OK);
    tocsim_experiment_close(experiment);
    tocsim_experiment_close(nullptr);  // must be a harmless no-op
}

TEST_CASE("unknown commands are invalid arguments") {
    tocsim_experiment* experiment = nullptr;
    REQUIRE(tocsim_experiment_open(nullptr, &experiment) == TOCSIM_OK);
    CHECK(tocsim_experiment_run(experiment, "bogus") == TOCSIM_ERR_INVALID_ARGUMENT);
    CHECK(std::string(tocsim_last_error()).find("bogus") != std::string::npos);
    tocsim_experiment_close(experiment);
}

TEST_CASE("a small simulate run produces the trajectory file") {
    const auto dir = fresh_dir("run_sim");
    const auto config_path = dir / "config.cfg";
    {
        std::ofstream out(config_path);
        out << "[plant]\nactuation_noise_std = 0\n";
        out << "[phase.1]\ntime_budget = 8\n[phase.2]\ntime_budget = 8\n"
               "[phase.3]\ntime_budget = 8\n";
        out << "[simulate]\nn_cycles = 1\n";
    }
    tocsim_experiment* experiment = nullptr;
    REQUIRE(tocsim_experiment_open(config_path.string().c_str(), &experiment) == TOCSIM_OK);
    REQUIRE(tocsim_experiment_set_out_dir(experiment, (dir / "out").string().c_str()) ==
            TOCSIM_OK);
    REQUIRE(tocsim_experiment_set_start(experiment, 0.1, 0.1) == TOCSIM_OK);
    REQUIRE(tocsim_experiment_set_cycles(experiment, 1) == TOCSIM_OK);
    CHECK(tocsim_experiment_run(experiment, "simulate") == TOCSIM_OK);
    CHECK(fs::exists(dir / "out" / "sim" / "trajectory.csv"));
    CHECK(fs::exists(dir / "out" / "sim" / "manifest.json"));
    tocsim_experiment_close(experiment);
}

TEST_CASE("plant entry points match the dynamics") {
    double out[2] = {9.0, 9.0};
    const double state[2] = {0.0, 0.0};
    const double control[2] = {0.0, 0.0};
    REQUIRE(tocsim_plant_derivative(state, control, kDefaultModel, out) == TOCSIM_OK);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);

    const double state2[2] = {1.0, 0.0};
    REQUIRE(tocsim_plant_derivative(state2, control, kDefaultModel, out) == TOCSIM_OK);
    CHECK(out[0] == doctest::Approx(-1.0));
    CHECK(out[1] == doctest::Approx(0.5));

    double decoupled[TOCSIM_MODEL_PARAMS];
    for (int i = 0; i < TOCSIM_MODEL_PARAMS; ++i) decoupled[i] = kDefaultModel[i];
    decoupled[1] = 0.0;  // beta
    decoupled[3] = 0.0;  // eta
    REQUIRE(tocsim_plant_step(state2, control, 0.1, decoupled, out) == TOCSIM_OK);
    CHECK(std::abs(out[0] - 0.90483742) < 1e-6);

    CHECK(tocsim_plant_step(state2, control, -0.1, decoupled, out) ==
          TOCSIM_ERR_INVALID_ARGUMENT);
    CHECK(tocsim_plant_derivative(nullptr, control, decoupled, out) ==
          TOCSIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("transfer entropy over raw arrays") {
    const std::size_t n = 50000;
    std::vector<int> x(n);
    std::vector<int> y(n, 0);
    std::uint64_t s = 12345;
    for (std::size_t t = 0; t < n; ++t) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        x[t] = static_cast<int>(s & 1);
        if (t + 1 < n) y[t + 1] = x[t];
    }
    double te = 0.0;
    double eff = 0.0;
    REQUIRE(tocsim_transfer_entropy(x.data(), y.data(), n, 2, 1, 1, &te, &eff, 10, 7) ==
            TOCSIM_OK);
    CHECK(std::abs(te - 1.0) < 0.05);
    CHECK(std::abs(eff - te) < 0.01);

    // Raw-only call.
    double te_only = 0.0;
    REQUIRE(tocsim_transfer_entropy(x.data(), y.data(), n, 2, 1, 1, &te_only, nullptr, 0,
                                    0) == TOCSIM_OK);
    CHECK(te_only == te);

    CHECK(tocsim_transfer_entropy(nullptr, y.data(), n, 2, 1, 1, &te, nullptr, 0, 0) ==
          TOCSIM_ERR_INVALID_ARGUMENT);
    CHECK(tocsim_transfer_entropy(x.data(), y.data(), 2, 2, 1, 1, &te, nullptr, 0, 0) ==
          TOCSIM_ERR_INSUFFICIENT_DATA);
}
