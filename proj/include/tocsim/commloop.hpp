#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tocsim/control.hpp"
#include "tocsim/priors.hpp"

namespace tocsim {

enum class PolicyKind { fixed, adaptive };

/// Update-interval policy for one phase.
///
/// Fixed: every exchange is `fixed_period` apart.
/// Adaptive: `fast_period` when the current state is at the kernel edge
/// (or in unlabeled territory), `base_period` deep inside the green region.
/// Requires a labeled prior set for the phase's start level.
struct CommPolicy {
    PolicyKind kind = PolicyKind::fixed;
    double fixed_period = 0.1;

    double base_period = 0.2;
    double fast_period = 0.1;
    double edge_radius = 0.3;
    const std::vector<LabeledPrior>* edge_priors = nullptr;  // not owned
};

enum class Violation { none, left_constraint_box, budget_exhausted };

const char* violation_name(Violation v);

struct TrajectoryPoint {
    double t = 0.0;
    PlantState state;
    ControlInput applied;    // control active from this instant (noise included)
    ControlInput commanded;  // controller output before actuation noise
    bool update = false;     // true at state-upload/control-download instants
};

struct PhaseOutcome {
    int phase_index = 0;
    bool reached = false;
    double elapsed = 0.0;
    long updates_count = 0;  // exchanges; the free arrival check is not counted
    Violation violation = Violation::none;
    std::vector<TrajectoryPoint> trajectory;
    PlantState final_state;
};

struct CycleOutcome {
    std::vector<PhaseOutcome> phases;  // aborted at the first failed phase
    bool viable = false;               // every phase of every cycle reached
    long total_updates = 0;
    double total_time = 0.0;
};

/// Runs one phase of the sampled-data loop: arrival check, exchange, hold.
/// The arrival check precedes the exchange, so reaching the neighborhood
/// costs no update. Trajectory timestamps start at `t0`.
PhaseOutcome run_phase(const PlantState& start, const PhaseSpec& phase,
                       const CommPolicy& policy, const PlantModel& model, double h,
                       RngStream& rng, double t0 = 0.0);

/// Chains phases in cyclic order, starting from the phase whose target level
/// follows the level nearest to `start`. Aborts at the first failed phase.
CycleOutcome run_cycle(const PlantState& start, const std::array<PhaseSpec, 3>& phases,
                       const std::array<CommPolicy, 3>& policies, const PlantModel& model,
                       double h, RngStream& rng, int n_cycles);

/// Data-collection variant of run_phase: exchanges keep going for a whole
/// observation window, so the series covers both the approach and the dwell
/// at the operating point. Stops early only on a constraint violation.
PhaseOutcome run_phase_window(const PlantState& start, const PhaseSpec& phase,
                              const CommPolicy& policy, const PlantModel& model,
                              double h, RngStream& rng, double window);

struct CommRate {
    double overall = 0.0;                        // total updates / total time
    std::array<double, 3> per_phase{};           // by phase index; 0 when the phase never ran
    std::array<long, 3> updates{};
    std::array<double, 3> elapsed{};
};

/// Communication rate in updates per unit time. Throws std::invalid_argument
/// when the outcome spans zero time.
CommRate comm_rate(const CycleOutcome& outcome);

/// Writes all phase trajectories as CSV with columns
/// t,temperature,pressure,u1_applied,u2_applied,update_flag,phase_index.
void write_trajectory_csv(std::ostream& out, const CycleOutcome& outcome);

}  // namespace tocsim
