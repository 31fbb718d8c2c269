#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tocsim/control.hpp"
#include "tocsim/infotheory.hpp"
#include "tocsim/plant.hpp"

namespace tocsim {

/// Adaptive-policy knobs. At each exchange the policy queries the labeled
/// priors of the phase's start level: edge or unlabeled territory gets the
/// phase's fast_update_period, the green interior gets slow_factor times the
/// phase's base period.
struct AdaptiveSettings {
    double edge_radius = 0.3;
    double slow_factor = 2.0;
};

struct TeExperimentConfig {
    std::vector<double> periods{0.1, 0.075, 0.05};
    int n_repeats = 60;
    double window = 4.0;  // observation window per repeat, in plant time
    int n_bins = 3;
    std::vector<double> quantiles{0.05, 0.95};
    int history_k = 1;
    int history_l = 1;
    int n_shuffles = 100;
};

struct SimulateConfig {
    PlantState start{0.0, 0.0};
    int n_cycles = 3;
    std::string policy = "fixed";  // fixed | adaptive
};

struct ExperimentConfig {
    PlantModel plant;
    double integration_step = 0.005;
    std::array<PhaseSpec, 3> phases;
    AdaptiveSettings adaptive;
    std::uint64_t seed = 1;
    int n_priors = 50;
    int n_cycles = 3;
    int workers = 1;
    int label_repeats = 1;
    std::string out_dir = "out";
    TeExperimentConfig te;
    SimulateConfig simulate;

    ExperimentConfig();  // fills the three-phase cycle defaults
};

/// Parses the key-value configuration text. Unknown keys are rejected with an
/// error listing all of them; omitted keys keep their defaults.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

/// Reads and parses a configuration file. An empty file yields the defaults.
ExperimentConfig load_config(const std::string& path);

/// Canonical serialization; load(save(c)) == c exactly.
std::string save_config(const ExperimentConfig& config);

/// Checks every field invariant; throws ConfigError naming the field.
void validate(const ExperimentConfig& config);

/// FNV-1a 64 over the canonical serialization, as a hex string.
std::string config_hash(const ExperimentConfig& config);

}  // namespace tocsim
