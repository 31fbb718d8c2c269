/* tocsim — viability-theoretic task-oriented communication simulator.
 *
 * C interface to the experiment toolkit. Handles are opaque; every call that
 * can fail returns a tocsim_status, and tocsim_last_error() describes the most
 * recent failure on the calling thread.
 */

#ifndef TOCSIM_H
#define TOCSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TOCSIM_API __declspec(dllexport)
#else
#define TOCSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tocsim_status {
    TOCSIM_OK = 0,
    TOCSIM_ERR_INVALID_ARGUMENT = 1,
    TOCSIM_ERR_CONFIG = 2,
    TOCSIM_ERR_IO = 3,
    TOCSIM_ERR_INSUFFICIENT_DATA = 4,
    TOCSIM_ERR_INTERNAL = 5
} tocsim_status;

/* Library version, e.g. "0.1.0". */
TOCSIM_API const char* tocsim_version(void);

/* Short machine-readable name of a status code, e.g. "config". */
TOCSIM_API const char* tocsim_status_name(tocsim_status status);

/* Message of the last failure on this thread; empty string if none. */
TOCSIM_API const char* tocsim_last_error(void);

/* ------------------------------------------------------------------ */
/* Experiment runner                                                   */
/* ------------------------------------------------------------------ */

typedef struct tocsim_experiment tocsim_experiment;

/* Opens an experiment from a configuration file. A NULL path (or an empty
 * file) yields the built-in default scenario. */
TOCSIM_API tocsim_status tocsim_experiment_open(const char* config_path,
                                                tocsim_experiment** out);

TOCSIM_API void tocsim_experiment_close(tocsim_experiment* experiment);

/* Overrides of the configured values, applied before running. */
TOCSIM_API tocsim_status tocsim_experiment_set_seed(tocsim_experiment* experiment,
                                                    uint64_t seed);
TOCSIM_API tocsim_status tocsim_experiment_set_out_dir(tocsim_experiment* experiment,
                                                       const char* out_dir);
TOCSIM_API tocsim_status tocsim_experiment_set_workers(tocsim_experiment* experiment,
                                                       int workers);
TOCSIM_API tocsim_status tocsim_experiment_set_start(tocsim_experiment* experiment,
                                                     double temperature, double pressure);
TOCSIM_API tocsim_status tocsim_experiment_set_cycles(tocsim_experiment* experiment,
                                                      int n_cycles);

/* Runs one command: "kernel", "compare", "te" or "simulate". Output files are
 * written under <out_dir>/<command>/. */
TOCSIM_API tocsim_status tocsim_experiment_run(tocsim_experiment* experiment,
                                               const char* command);

/* Writes the experiment's effective configuration in canonical form. */
TOCSIM_API tocsim_status tocsim_experiment_write_config(const tocsim_experiment* experiment,
                                                        const char* path);

/* ------------------------------------------------------------------ */
/* Direct numeric entry points                                         */
/* ------------------------------------------------------------------ */

/* Plant parameters in array form:
 * {alpha, beta, gamma, eta, actuation_noise_std, control_min, control_max,
 *  constraint_box_half_width}. */
#define TOCSIM_MODEL_PARAMS 8

/* Deterministic state rate: out = {dT/dt, dP/dt}. */
TOCSIM_API tocsim_status tocsim_plant_derivative(const double state[2],
                                                 const double control[2],
                                                 const double model[TOCSIM_MODEL_PARAMS],
                                                 double out[2]);

/* One RK4 step of size h with the control held constant. */
TOCSIM_API tocsim_status tocsim_plant_step(const double state[2], const double control[2],
                                           double h,
                                           const double model[TOCSIM_MODEL_PARAMS],
                                           double out[2]);

/* Plug-in transfer entropy TE(x -> y) in bits between two symbol series over
 * the alphabet [0, n_bins), with history lengths k (of y) and l (of x). When
 * effective_te_bits is non-NULL, also computes the shuffle-corrected estimate
 * with n_shuffles surrogates seeded by shuffle_seed. */
TOCSIM_API tocsim_status tocsim_transfer_entropy(const int* x, const int* y, size_t n,
                                                 int n_bins, int k, int l,
                                                 double* te_bits,
                                                 double* effective_te_bits,
                                                 int n_shuffles, uint64_t shuffle_seed);

#ifdef __cplusplus
}
#endif

#endif /* TOCSIM_H */
