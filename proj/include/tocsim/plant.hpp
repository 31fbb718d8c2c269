#pragma once

#include <utility>
#include <vector>

#include "tocsim/rng.hpp"

namespace tocsim {

/// Plant state in normalized units; (0, 0) is ambient.
struct PlantState {
    double temperature = 0.0;
    double pressure = 0.0;
};

/// Controller directives: heat supply rate and piston displacement rate.
struct ControlInput {
    double heat_rate = 0.0;
    double piston_rate = 0.0;
};

/// Time derivative of the plant state.
struct StateRate {
    double temperature = 0.0;
    double pressure = 0.0;
};

/// Plant parameters.
///
/// Dynamics:
///   dT/dt = -alpha*T + u1
///   dP/dt = beta*T - gamma*P + eta*T*u2 + u2
///
/// Actuation is imprecise: each commanded control component is perturbed by
/// zero-mean Gaussian noise once per hold interval, then clamped to the
/// control bounds.
struct PlantModel {
    double alpha = 1.0;  // heat loss, > 0
    double beta = 0.5;   // temperature -> pressure coupling, >= 0
    double gamma = 1.0;  // pressure relaxation, > 0
    double eta = 0.25;   // bilinear temperature-piston coupling, >= 0
    double actuation_noise_std = 0.05;
    double control_min = -5.0;
    double control_max = 5.0;
    double constraint_box_half_width = 10.0;  // state stays in [-B, B]^2
};

bool is_finite(const PlantState& state);
bool is_finite(const ControlInput& input);

/// True while the state is inside the constraint box [-B, B]^2.
bool in_constraint_box(const PlantState& state, const PlantModel& model);

double clamp_component(double value, const PlantModel& model);
ControlInput clamp_control(const ControlInput& input, const PlantModel& model);

/// Deterministic state rate under a held control. Throws std::invalid_argument
/// on non-finite state or input.
StateRate derivative(const PlantState& state, const ControlInput& input,
                     const PlantModel& model);

/// One classical RK4 step with the control held constant. h = 0 returns the
/// state unchanged; negative h throws std::invalid_argument.
PlantState step_rk4(const PlantState& state, const ControlInput& input, double h,
                    const PlantModel& model);

/// Result of holding a (noisy) control over one update interval.
struct HoldResult {
    PlantState final_state;
    ControlInput applied;  // commanded + actuation noise, clamped
    /// States after each integrator step, as (time since hold start, state).
    /// The last entry is the final state; truncated at a box violation.
    std::vector<std::pair<double, PlantState>> path;
    bool left_box = false;
    double elapsed = 0.0;  // integrated time; < duration only if left_box
};

/// Integrates the plant over one zero-order-hold interval. Draws one noise
/// sample per component (none when actuation_noise_std == 0, so zero-noise
/// results are seed independent). Leaving the constraint box mid-hold is a
/// flagged outcome, not an error.
HoldResult simulate_hold(const PlantState& state, const ControlInput& commanded,
                         double duration, double h, const PlantModel& model,
                         RngStream& rng);

}  // namespace tocsim
