#include "tocsim/control.hpp"

#include <cmath>
#include <stdexcept>

namespace tocsim {

SteadyStateInput steady_state_input(const PlantState& target, const PlantModel& model) {
    if (!is_finite(target)) throw std::invalid_argument("steady_state_input: non-finite target");
    const double denom = 1.0 + model.eta * target.temperature;
    if (std::abs(denom) < 1e-12)
        throw std::domain_error("steady_state_input: singular target, 1 + eta*T = 0");

    ControlInput raw;
    raw.heat_rate = model.alpha * target.temperature;
    raw.piston_rate =
        (model.gamma * target.pressure - model.beta * target.temperature) / denom;

    SteadyStateInput out;
    out.input = clamp_control(raw, model);
    out.clamped = out.input.heat_rate != raw.heat_rate ||
                  out.input.piston_rate != raw.piston_rate;
    return out;
}

ControlInput feedback_control_unclamped(const PlantState& state, const PhaseSpec& phase,
                                        const PlantModel& model) {
    if (!is_finite(state)) throw std::invalid_argument("feedback_control: non-finite state");
    const ControlInput ss = steady_state_input(phase.target, model).input;
    const double et = phase.target.temperature - state.temperature;
    const double ep = phase.target.pressure - state.pressure;
    return {ss.heat_rate + phase.gain.k11 * et + phase.gain.k12 * ep,
            ss.piston_rate + phase.gain.k21 * et + phase.gain.k22 * ep};
}

ControlInput feedback_control(const PlantState& state, const PhaseSpec& phase,
                              const PlantModel& model) {
    return clamp_control(feedback_control_unclamped(state, phase, model), model);
}

double distance(const PlantState& a, const PlantState& b) {
    return std::hypot(a.temperature - b.temperature, a.pressure - b.pressure);
}

bool in_neighborhood(const PlantState& state, const PhaseSpec& phase) {
    return distance(state, phase.target) <= phase.neighborhood_radius;
}

int next_phase_index(int index) {
    return index % 3 + 1;
}

}  // namespace tocsim
