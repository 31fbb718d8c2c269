#include "tocsim/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tocsim {

bool is_finite(const PlantState& state) {
    return std::isfinite(state.temperature) && std::isfinite(state.pressure);
}

bool is_finite(const ControlInput& input) {
    return std::isfinite(input.heat_rate) && std::isfinite(input.piston_rate);
}

bool in_constraint_box(const PlantState& state, const PlantModel& model) {
    const double b = model.constraint_box_half_width;
    return is_finite(state) && std::abs(state.temperature) <= b &&
           std::abs(state.pressure) <= b;
}

double clamp_component(double value, const PlantModel& model) {
    return std::clamp(value, model.control_min, model.control_max);
}

ControlInput clamp_control(const ControlInput& input, const PlantModel& model) {
    return {clamp_component(input.heat_rate, model),
            clamp_component(input.piston_rate, model)};
}

StateRate derivative(const PlantState& state, const ControlInput& input,
                     const PlantModel& model) {
    if (!is_finite(state)) throw std::invalid_argument("derivative: non-finite state");
    if (!is_finite(input)) throw std::invalid_argument("derivative: non-finite input");
    StateRate rate;
    rate.temperature = -model.alpha * state.temperature + input.heat_rate;
    rate.pressure = model.beta * state.temperature - model.gamma * state.pressure +
                    model.eta * state.temperature * input.piston_rate +
                    input.piston_rate;
    return rate;
}

PlantState step_rk4(const PlantState& state, const ControlInput& input, double h,
                    const PlantModel& model) {
    if (!(h >= 0.0)) throw std::invalid_argument("step_rk4: negative step size");
    if (h == 0.0) return state;

    const auto eval = [&](const PlantState& s) { return derivative(s, input, model); };
    const auto advance = [](const PlantState& s, const StateRate& r, double dt) {
        return PlantState{s.temperature + dt * r.temperature,
                          s.pressure + dt * r.pressure};
    };

    const StateRate k1 = eval(state);
    const StateRate k2 = eval(advance(state, k1, h / 2.0));
    const StateRate k3 = eval(advance(state, k2, h / 2.0));
    const StateRate k4 = eval(advance(state, k3, h));

    PlantState out;
    out.temperature = state.temperature +
                      h / 6.0 * (k1.temperature + 2.0 * k2.temperature +
                                 2.0 * k3.temperature + k4.temperature);
    out.pressure = state.pressure + h / 6.0 * (k1.pressure + 2.0 * k2.pressure +
                                               2.0 * k3.pressure + k4.pressure);
    return out;
}

HoldResult simulate_hold(const PlantState& state, const ControlInput& commanded,
                         double duration, double h, const PlantModel& model,
                         RngStream& rng) {
    if (!(duration >= 0.0)) throw std::invalid_argument("simulate_hold: negative duration");
    if (!(h > 0.0)) throw std::invalid_argument("simulate_hold: step size must be positive");

    HoldResult result;
    result.applied = clamp_control(commanded, model);
    if (duration == 0.0) {
        result.final_state = state;
        return result;
    }

    if (model.actuation_noise_std > 0.0) {
        // One draw per hold, not per integrator step, so the noise magnitude
        // does not depend on h.
        const auto [g1, g2] = rng.next_gaussian_pair();
        result.applied.heat_rate = clamp_component(
            commanded.heat_rate + model.actuation_noise_std * g1, model);
        result.applied.piston_rate = clamp_component(
            commanded.piston_rate + model.actuation_noise_std * g2, model);
    }

    const auto steps = static_cast<long>(std::ceil(duration / h - 1e-12));
    PlantState current = state;
    double t = 0.0;
    result.path.reserve(static_cast<std::size_t>(steps));
    for (long i = 0; i < steps; ++i) {
        // Truncate the last step so the hold lands exactly on `duration`.
        const double dt = std::min(h, duration - t);
        current = step_rk4(current, result.applied, dt, model);
        t = (i + 1 == steps) ? duration : t + dt;
        result.path.emplace_back(t, current);
        if (!in_constraint_box(current, model)) {
            result.left_box = true;
            break;
        }
    }
    result.final_state = current;
    result.elapsed = t;
    return result;
}

}  // namespace tocsim
