#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tocsim/commloop.hpp"

namespace tocsim {

struct KernelSettings {
    std::string policy = "fixed";
    double actuation_noise_std = 0.0;
    std::uint64_t seed = 0;
    int n_cycles = 0;
    int label_repeats = 1;
};

/// Monte-Carlo kernel estimate for one level: labeled priors plus the
/// viable-fraction width metric.
struct KernelEstimate {
    int level = 1;  // 1..3, the level the priors were sampled in
    double level_radius = 0.0;
    std::vector<LabeledPrior> priors;
    double viable_fraction = 0.0;  // |green predicate| / n_priors
    double width = 0.0;            // viable_fraction * disc area
    int unmatched_arrivals = 0;    // arrivals with no prior within radius/5
    KernelSettings settings;
};

/// Substream bases for kernel estimation. Sharing them across policies pins
/// the priors and the per-prior noise streams, so comparisons are paired.
struct KernelSeeds {
    std::uint64_t priors = 0;
    std::uint64_t classify = 0;
};

/// Green/red classification of one candidate start point: green iff the given
/// phase, run from the prior, reaches its target neighborhood with no
/// constraint violation.
PriorLabel classify_start(const PlantState& prior, const PhaseSpec& phase,
                          const CommPolicy& policy, const PlantModel& model, double h,
                          RngStream& rng);

/// Per-rollout communication accounting, aggregated by the phase that ran.
struct PhaseRateAggregate {
    std::array<long, 3> updates{};
    std::array<double, 3> elapsed{};
};

struct KernelResult {
    std::array<KernelEstimate, 3> levels;
    PhaseRateAggregate rates;  // over all classification rollouts
};

/// Estimates the viability kernel of every level: samples priors per level,
/// classifies each by running the next phase in the cycle, marks blue points
/// from the arrival states of the previous phase's green rollouts, and labels
/// the green/blue intersection yellow. `policies` is indexed by the phase that
/// runs (policies[p-1] drives phase p). Prior i of level n always consumes the
/// substream derived from (seeds.classify, n, i, repeat), so results do not
/// depend on the worker count.
KernelResult estimate_kernel(const std::array<PhaseSpec, 3>& phases,
                             const std::array<CommPolicy, 3>& policies,
                             const PlantModel& model, double h, int n_priors,
                             int n_cycles, const KernelSeeds& seeds, int workers = 1,
                             int label_repeats = 1);

/// Capture basin: same machinery as the green classification, with the phase's
/// time budget replaced by `time_window` and no cycling bookkeeping.
KernelEstimate estimate_capture_basin(int start_level,
                                      const std::array<PhaseSpec, 3>& phases,
                                      double time_window, const CommPolicy& policy,
                                      const PlantModel& model, double h, int n_priors,
                                      const KernelSeeds& seeds, int workers = 1);

/// Monte-Carlo area of the green region: viable_fraction * pi * level_radius^2.
double kernel_width(const KernelEstimate& estimate);

/// CSV with columns phase,prior_x,prior_y,label for all three levels.
void write_kernel_csv(std::ostream& out, const std::array<KernelEstimate, 3>& levels);

}  // namespace tocsim
