#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tocsim/config.hpp"
#include "tocsim/infotheory.hpp"
#include "tocsim/viability.hpp"

namespace tocsim {

/// Fixed policies at each phase's base update period.
std::array<CommPolicy, 3> fixed_policies(const ExperimentConfig& config);

/// Adaptive policies referencing labeled priors (normally from a fixed-policy
/// kernel pass). Phase p queries the labels of its start level, runs at the
/// phase's fast period at the edge and at slow_factor * base period inside the
/// green interior. The label array must outlive the returned policies.
std::array<CommPolicy, 3> adaptive_policies(const ExperimentConfig& config,
                                            const std::array<KernelEstimate, 3>& labels);

/// Kernel estimation with the fixed baseline. `period_scale` multiplies every
/// phase's update period (1.0 = configured periods); used for rate sweeps.
KernelResult run_kernel_fixed(const ExperimentConfig& config, std::uint64_t seed,
                              double period_scale = 1.0);

/// Kernel estimation with the adaptive policy, paired with a fixed-policy pass
/// through shared priors and per-prior noise streams.
KernelResult run_kernel_adaptive(const ExperimentConfig& config, std::uint64_t seed,
                                 const std::array<KernelEstimate, 3>& labels);

struct ComparisonRow {
    int index = 0;                       // phase index for rates, level index for kernels
    double fixed_rate = 0.0;             // updates per unit time during phase `index`
    double adaptive_rate = 0.0;
    double reduction_percent = 0.0;      // 100 * (fixed - adaptive) / fixed
    double fixed_viable_fraction = 0.0;  // green fraction at level `index`
    double adaptive_viable_fraction = 0.0;
    double fixed_width = 0.0;
    double adaptive_width = 0.0;
};

struct ComparisonReport {
    std::array<ComparisonRow, 3> rows;
    double fixed_overall_rate = 0.0;
    double adaptive_overall_rate = 0.0;
    double overall_reduction_percent = 0.0;
};

/// Paired fixed-vs-adaptive comparison over one shared prior set.
ComparisonReport run_comparison(const ExperimentConfig& config, std::uint64_t seed);

/// Transfer-entropy table data: repeated Phase-II runs at each configured
/// update period, channels sampled at exchange instants.
std::vector<TeResult> run_te_experiment(const ExperimentConfig& config,
                                        std::uint64_t seed);

/// One seeded multi-cycle closed-loop run from the configured start state.
CycleOutcome run_simulation(const ExperimentConfig& config, std::uint64_t seed);

// File-producing commands. Each writes into <out_dir>/<command>/ along with a
// manifest recording the command, seed and config hash. Outputs are
// byte-deterministic for a given (config, seed) and independent of the worker
// count.
void cmd_kernel(const ExperimentConfig& config);
void cmd_compare(const ExperimentConfig& config);
void cmd_te(const ExperimentConfig& config);
void cmd_simulate(const ExperimentConfig& config);

}  // namespace tocsim
