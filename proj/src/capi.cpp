#include "tocsim.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "tocsim/config.hpp"
#include "tocsim/errors.hpp"
#include "tocsim/experiment.hpp"
#include "tocsim/infotheory.hpp"
#include "tocsim/plant.hpp"
#include "tocsim/version.hpp"

struct tocsim_experiment {
    tocsim::ExperimentConfig config;
};

namespace {

thread_local std::string g_last_error;

tocsim_status fail(tocsim_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
tocsim_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return TOCSIM_OK;
    } catch (const tocsim::ConfigError& e) {
        return fail(TOCSIM_ERR_CONFIG, e.what());
    } catch (const tocsim::IoError& e) {
        return fail(TOCSIM_ERR_IO, e.what());
    } catch (const tocsim::InsufficientDataError& e) {
        return fail(TOCSIM_ERR_INSUFFICIENT_DATA, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(TOCSIM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TOCSIM_ERR_INTERNAL, "unknown error");
    }
}

tocsim::PlantModel model_from_params(const double params[TOCSIM_MODEL_PARAMS]) {
    tocsim::PlantModel model;
    model.alpha = params[0];
    model.beta = params[1];
    model.gamma = params[2];
    model.eta = params[3];
    model.actuation_noise_std = params[4];
    model.control_min = params[5];
    model.control_max = params[6];
    model.constraint_box_half_width = params[7];
    return model;
}

}  // namespace

extern "C" {

const char* tocsim_version(void) { return tocsim::kVersion; }

const char* tocsim_status_name(tocsim_status status) {
    switch (status) {
        case TOCSIM_OK: return "ok";
        case TOCSIM_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case TOCSIM_ERR_CONFIG: return "config";
        case TOCSIM_ERR_IO: return "io";
        case TOCSIM_ERR_INSUFFICIENT_DATA: return "insufficient-data";
        case TOCSIM_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* tocsim_last_error(void) { return g_last_error.c_str(); }

tocsim_status tocsim_experiment_open(const char* config_path, tocsim_experiment** out) {
    if (out == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "tocsim_experiment_open: out is NULL");
    *out = nullptr;
    return guarded([&] {
        auto* experiment = new tocsim_experiment;
        try {
            if (config_path != nullptr && std::strlen(config_path) > 0)
                experiment->config = tocsim::load_config(config_path);
            else
                tocsim::validate(experiment->config);
        } catch (...) {
            delete experiment;
            throw;
        }
        *out = experiment;
    });
}

void tocsim_experiment_close(tocsim_experiment* experiment) { delete experiment; }

tocsim_status tocsim_experiment_set_seed(tocsim_experiment* experiment, uint64_t seed) {
    if (experiment == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "set_seed: experiment is NULL");
    experiment->config.seed = seed;
    g_last_error.clear();
    return TOCSIM_OK;
}

tocsim_status tocsim_experiment_set_out_dir(tocsim_experiment* experiment,
                                            const char* out_dir) {
    if (experiment == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "set_out_dir: experiment is NULL");
    if (out_dir == nullptr || *out_dir == '\0')
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "set_out_dir: path is empty");
    experiment->config.out_dir = out_dir;
    g_last_error.clear();
    return TOCSIM_OK;
}

tocsim_status tocsim_experiment_set_workers(tocsim_experiment* experiment, int workers) {
    if (experiment == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "set_workers: experiment is NULL");
    if (workers < 1)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "set_workers: workers must be >= 1");
    experiment->config.workers = workers;
    g_last_error.clear();
    return TOCSIM_OK;
}

tocsim_status tocsim_experiment_set_start(tocsim_experiment* experiment,
                                          double temperature, double pressure) {
    if (experiment == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "set_start: experiment is NULL");
    return guarded([&] {
        tocsim::ExperimentConfig candidate = experiment->config;
        candidate.simulate.start = {temperature, pressure};
        tocsim::validate(candidate);
        experiment->config = candidate;
    });
}

tocsim_status tocsim_experiment_set_cycles(tocsim_experiment* experiment, int n_cycles) {
    if (experiment == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "set_cycles: experiment is NULL");
    if (n_cycles < 1)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "set_cycles: n_cycles must be >= 1");
    experiment->config.simulate.n_cycles = n_cycles;
    g_last_error.clear();
    return TOCSIM_OK;
}

tocsim_status tocsim_experiment_run(tocsim_experiment* experiment, const char* command) {
    if (experiment == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "run: experiment is NULL");
    if (command == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "run: command is NULL");
    const std::string name = command;
    return guarded([&] {
        if (name == "kernel")
            tocsim::cmd_kernel(experiment->config);
        else if (name == "compare")
            tocsim::cmd_compare(experiment->config);
        else if (name == "te")
            tocsim::cmd_te(experiment->config);
        else if (name == "simulate")
            tocsim::cmd_simulate(experiment->config);
        else
            throw std::invalid_argument("unknown command: " + name +
                                        " (expected kernel|compare|te|simulate)");
    });
}

tocsim_status tocsim_experiment_write_config(const tocsim_experiment* experiment,
                                             const char* path) {
    if (experiment == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "write_config: experiment is NULL");
    if (path == nullptr || *path == '\0')
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "write_config: path is empty");
    return guarded([&] {
        std::FILE* f = std::fopen(path, "wb");
        if (f == nullptr) throw tocsim::IoError(std::string("cannot write: ") + path);
        const std::string text = tocsim::save_config(experiment->config);
        const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
        std::fclose(f);
        if (!ok) throw tocsim::IoError(std::string("write failed: ") + path);
    });
}

tocsim_status tocsim_plant_derivative(const double state[2], const double control[2],
                                      const double model[TOCSIM_MODEL_PARAMS],
                                      double out[2]) {
    if (state == nullptr || control == nullptr || model == nullptr || out == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "plant_derivative: NULL argument");
    return guarded([&] {
        const auto rate = tocsim::derivative({state[0], state[1]},
                                             {control[0], control[1]},
                                             model_from_params(model));
        out[0] = rate.temperature;
        out[1] = rate.pressure;
    });
}

tocsim_status tocsim_plant_step(const double state[2], const double control[2], double h,
                                const double model[TOCSIM_MODEL_PARAMS], double out[2]) {
    if (state == nullptr || control == nullptr || model == nullptr || out == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "plant_step: NULL argument");
    return guarded([&] {
        const auto next = tocsim::step_rk4({state[0], state[1]}, {control[0], control[1]},
                                           h, model_from_params(model));
        out[0] = next.temperature;
        out[1] = next.pressure;
    });
}

tocsim_status tocsim_transfer_entropy(const int* x, const int* y, size_t n, int n_bins,
                                      int k, int l, double* te_bits,
                                      double* effective_te_bits, int n_shuffles,
                                      uint64_t shuffle_seed) {
    if (x == nullptr || y == nullptr || te_bits == nullptr)
        return fail(TOCSIM_ERR_INVALID_ARGUMENT, "transfer_entropy: NULL argument");
    return guarded([&] {
        tocsim::SymbolSeries sx;
        tocsim::SymbolSeries sy;
        sx.n_bins = n_bins;
        sy.n_bins = n_bins;
        sx.symbols.assign(x, x + n);
        sy.symbols.assign(y, y + n);
        if (effective_te_bits != nullptr) {
            tocsim::RngStream rng(shuffle_seed);
            const auto result = tocsim::effective_te(sx, sy, k, l, n_shuffles, rng);
            *te_bits = result.te_bits;
            *effective_te_bits = result.effective_te_bits;
        } else {
            *te_bits = tocsim::transfer_entropy(sx, sy, k, l).te_bits;
        }
    });
}

}  // extern "C"
