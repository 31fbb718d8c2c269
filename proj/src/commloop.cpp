#include "tocsim/commloop.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "tocsim/errors.hpp"
#include "tocsim/textio.hpp"

namespace tocsim {

namespace {

double pick_interval(const CommPolicy& policy, const PlantState& state) {
    if (policy.kind == PolicyKind::fixed) return policy.fixed_period;
    return is_edge_state(state, *policy.edge_priors, policy.edge_radius)
               ? policy.fast_period
               : policy.base_period;
}

void validate_policy(const CommPolicy& policy, const PhaseSpec& phase) {
    if (policy.kind == PolicyKind::fixed) {
        if (!(policy.fixed_period > 0.0))
            throw ConfigError("run_phase: fixed period must be > 0 (phase " +
                              std::to_string(phase.index) + ")");
        return;
    }
    if (policy.edge_priors == nullptr || policy.edge_priors->empty())
        throw ConfigError("run_phase: adaptive policy needs a labeled prior set (phase " +
                          std::to_string(phase.index) + ")");
    if (!(policy.fast_period > 0.0) || policy.fast_period > policy.base_period)
        throw ConfigError("run_phase: adaptive policy needs 0 < fast period <= base period");
    if (!(policy.edge_radius > 0.0))
        throw ConfigError("run_phase: adaptive edge radius must be > 0");
}

}  // namespace

const char* violation_name(Violation v) {
    switch (v) {
        case Violation::none: return "none";
        case Violation::left_constraint_box: return "left-constraint-box";
        case Violation::budget_exhausted: return "budget-exhausted";
    }
    return "?";
}

PhaseOutcome run_phase(const PlantState& start, const PhaseSpec& phase,
                       const CommPolicy& policy, const PlantModel& model, double h,
                       RngStream& rng, double t0) {
    if (!is_finite(start)) throw std::invalid_argument("run_phase: non-finite start state");
    validate_policy(policy, phase);

    const double budget_eps = 1e-9 * std::max(1.0, phase.time_budget);

    PhaseOutcome out;
    out.phase_index = phase.index;
    PlantState state = start;
    ControlInput last_applied;

    for (;;) {
        if (in_neighborhood(state, phase)) {  // checked before transmitting
            out.reached = true;
            break;
        }
        if (out.elapsed > phase.time_budget + budget_eps) {
            out.violation = Violation::budget_exhausted;
            break;
        }
        const double interval = pick_interval(policy, state);
        const ControlInput commanded = feedback_control(state, phase, model);
        ++out.updates_count;

        const HoldResult hold = simulate_hold(state, commanded, interval, h, model, rng);
        out.trajectory.push_back({t0 + out.elapsed, state, hold.applied, commanded, true});
        // Interior integrator steps; the hold's endpoint becomes the next row.
        for (std::size_t i = 0; i + 1 < hold.path.size(); ++i)
            out.trajectory.push_back({t0 + out.elapsed + hold.path[i].first,
                                      hold.path[i].second, hold.applied, commanded, false});
        state = hold.final_state;
        last_applied = hold.applied;
        out.elapsed += hold.elapsed;

        if (hold.left_box) {
            out.violation = Violation::left_constraint_box;
            break;
        }
        if (out.elapsed > phase.time_budget + budget_eps) {
            out.violation = Violation::budget_exhausted;
            break;
        }
    }

    out.final_state = state;
    out.trajectory.push_back({t0 + out.elapsed, state, last_applied,
                              last_applied, false});
    return out;
}

PhaseOutcome run_phase_window(const PlantState& start, const PhaseSpec& phase,
                              const CommPolicy& policy, const PlantModel& model,
                              double h, RngStream& rng, double window) {
    if (!is_finite(start)) throw std::invalid_argument("run_phase_window: non-finite start");
    if (!(window > 0.0)) throw std::invalid_argument("run_phase_window: window must be > 0");
    validate_policy(policy, phase);

    PhaseOutcome out;
    out.phase_index = phase.index;
    PlantState state = start;
    ControlInput last_applied;

    while (out.elapsed < window - 1e-9) {
        const double interval =
            std::min(pick_interval(policy, state), window - out.elapsed);
        const ControlInput commanded = feedback_control(state, phase, model);
        ++out.updates_count;
        const HoldResult hold = simulate_hold(state, commanded, interval, h, model, rng);
        out.trajectory.push_back({out.elapsed, state, hold.applied, commanded, true});
        for (std::size_t i = 0; i + 1 < hold.path.size(); ++i)
            out.trajectory.push_back({out.elapsed + hold.path[i].first,
                                      hold.path[i].second, hold.applied, commanded, false});
        state = hold.final_state;
        last_applied = hold.applied;
        out.elapsed += hold.elapsed;
        if (hold.left_box) {
            out.violation = Violation::left_constraint_box;
            break;
        }
    }
    out.reached = in_neighborhood(state, phase) && out.violation == Violation::none;
    out.final_state = state;
    out.trajectory.push_back({out.elapsed, state, last_applied, last_applied, false});
    return out;
}

CycleOutcome run_cycle(const PlantState& start, const std::array<PhaseSpec, 3>& phases,
                       const std::array<CommPolicy, 3>& policies, const PlantModel& model,
                       double h, RngStream& rng, int n_cycles) {
    if (!is_finite(start)) throw std::invalid_argument("run_cycle: non-finite start state");
    if (n_cycles < 1) throw std::invalid_argument("run_cycle: n_cycles must be >= 1");

    // First phase: the one targeting the level after the level nearest to the
    // start point (ties go to the lower index).
    int nearest = 1;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& phase : phases) {
        const double d = distance(start, phase.target);
        if (d < best) {
            best = d;
            nearest = phase.index;
        }
    }

    CycleOutcome out;
    out.viable = true;
    PlantState state = start;
    double t = 0.0;
    int phase_index = next_phase_index(nearest);
    for (int run = 0; run < 3 * n_cycles; ++run) {
        const auto& phase = phases[static_cast<std::size_t>(phase_index - 1)];
        const auto& policy = policies[static_cast<std::size_t>(phase_index - 1)];
        PhaseOutcome phase_out = run_phase(state, phase, policy, model, h, rng, t);
        state = phase_out.final_state;
        t += phase_out.elapsed;
        out.total_updates += phase_out.updates_count;
        out.total_time += phase_out.elapsed;
        const bool ok = phase_out.reached;
        out.phases.push_back(std::move(phase_out));
        if (!ok) {
            out.viable = false;  // later phases are absent from the outcome
            break;
        }
        phase_index = next_phase_index(phase_index);
    }
    return out;
}

CommRate comm_rate(const CycleOutcome& outcome) {
    if (!(outcome.total_time > 0.0))
        throw std::invalid_argument("comm_rate: undefined rate, zero elapsed time");

    CommRate rate;
    for (const auto& phase : outcome.phases) {
        const auto i = static_cast<std::size_t>(phase.phase_index - 1);
        rate.updates[i] += phase.updates_count;
        rate.elapsed[i] += phase.elapsed;
    }
    for (std::size_t i = 0; i < 3; ++i)
        rate.per_phase[i] =
            rate.elapsed[i] > 0.0 ? static_cast<double>(rate.updates[i]) / rate.elapsed[i] : 0.0;
    rate.overall = static_cast<double>(outcome.total_updates) / outcome.total_time;
    return rate;
}

void write_trajectory_csv(std::ostream& out, const CycleOutcome& outcome) {
    out << "t,temperature,pressure,u1_applied,u2_applied,update_flag,phase_index\n";
    for (const auto& phase : outcome.phases) {
        for (const auto& p : phase.trajectory) {
            out << fmt_double(p.t) << ',' << fmt_double(p.state.temperature) << ','
                << fmt_double(p.state.pressure) << ',' << fmt_double(p.applied.heat_rate)
                << ',' << fmt_double(p.applied.piston_rate) << ',' << (p.update ? 1 : 0)
                << ',' << phase.phase_index << '\n';
        }
    }
}

}  // namespace tocsim
