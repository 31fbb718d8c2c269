#pragma once

#include "tocsim/plant.hpp"

namespace tocsim {

/// Feedback gain: u += K * (target - state).
struct GainMatrix {
    double k11 = 2.0;
    double k12 = 0.0;
    double k21 = 0.0;
    double k22 = 2.0;
};

/// One leg of the operating cycle: steer the plant into the neighborhood of
/// this phase's operating point. Phases run in the fixed order 1 -> 2 -> 3 -> 1.
struct PhaseSpec {
    int index = 1;  // 1..3
    PlantState target;
    double neighborhood_radius = 0.35;
    double base_update_period = 0.1;   // exchange period of the fixed policy
    double fast_update_period = 0.1;   // period the adaptive policy uses at the kernel edge
    double time_budget = 2.0;
    GainMatrix gain;
};

struct SteadyStateInput {
    ControlInput input;
    bool clamped = false;  // true if the unclamped solution left the control bounds
};

/// Control holding the plant at `target`: u1 = alpha*T, u2 = (gamma*P - beta*T)/(1 + eta*T).
/// Throws std::domain_error when 1 + eta*T is (numerically) zero.
SteadyStateInput steady_state_input(const PlantState& target, const PlantModel& model);

/// Proportional state feedback around the steady-state input, clamped to the
/// control bounds.
ControlInput feedback_control(const PlantState& state, const PhaseSpec& phase,
                              const PlantModel& model);

/// Same law without the clamp. Test hook for the affine-consistency property.
ControlInput feedback_control_unclamped(const PlantState& state, const PhaseSpec& phase,
                                        const PlantModel& model);

/// Closed disc: distance(state, target) <= neighborhood_radius.
bool in_neighborhood(const PlantState& state, const PhaseSpec& phase);

double distance(const PlantState& a, const PlantState& b);

/// Successor in the fixed cycle: 1 -> 2 -> 3 -> 1.
int next_phase_index(int index);

}  // namespace tocsim
