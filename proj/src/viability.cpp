#include "tocsim/viability.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "tocsim/parallel.hpp"
#include "tocsim/textio.hpp"

namespace tocsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rollout {
    bool green = false;
    std::vector<PlantState> arrivals;  // final states of green repeats
    long updates = 0;
    double elapsed = 0.0;
};

Rollout classify_with_repeats(const PlantState& prior, const PhaseSpec& phase,
                              const CommPolicy& policy, const PlantModel& model,
                              double h, std::uint64_t classify_seed, int level,
                              int prior_index, int repeats) {
    Rollout result;
    int green_votes = 0;
    for (int rep = 0; rep < repeats; ++rep) {
        RngStream rng(derive_seed(classify_seed, purpose::classify,
                                  static_cast<std::uint64_t>(level),
                                  static_cast<std::uint64_t>(prior_index),
                                  static_cast<std::uint64_t>(rep)));
        const PhaseOutcome out = run_phase(prior, phase, policy, model, h, rng);
        const bool green = out.reached && out.violation == Violation::none;
        if (green) {
            ++green_votes;
            result.arrivals.push_back(out.final_state);
        }
        result.updates += out.updates_count;
        result.elapsed += out.elapsed;
    }
    result.green = 2 * green_votes > repeats;  // majority vote, default repeats = 1
    return result;
}

void finalize_estimate(KernelEstimate& estimate, const std::vector<bool>& green,
                       const std::vector<bool>& blue, int n_priors) {
    int green_count = 0;
    for (int i = 0; i < n_priors; ++i) {
        auto& prior = estimate.priors[static_cast<std::size_t>(i)];
        if (green[static_cast<std::size_t>(i)]) {
            ++green_count;
            prior.label = blue[static_cast<std::size_t>(i)] ? PriorLabel::yellow
                                                            : PriorLabel::green;
        } else {
            prior.label = blue[static_cast<std::size_t>(i)] ? PriorLabel::blue
                                                            : PriorLabel::red;
        }
    }
    estimate.viable_fraction = static_cast<double>(green_count) / n_priors;
    estimate.width = kernel_width(estimate);
}

}  // namespace

PriorLabel classify_start(const PlantState& prior, const PhaseSpec& phase,
                          const CommPolicy& policy, const PlantModel& model, double h,
                          RngStream& rng) {
    const PhaseOutcome out = run_phase(prior, phase, policy, model, h, rng);
    return out.reached && out.violation == Violation::none ? PriorLabel::green
                                                           : PriorLabel::red;
}

KernelResult estimate_kernel(const std::array<PhaseSpec, 3>& phases,
                             const std::array<CommPolicy, 3>& policies,
                             const PlantModel& model, double h, int n_priors,
                             int n_cycles, const KernelSeeds& seeds, int workers,
                             int label_repeats) {
    if (n_priors < 1) throw std::invalid_argument("estimate_kernel: n_priors must be >= 1");
    if (label_repeats < 1)
        throw std::invalid_argument("estimate_kernel: label_repeats must be >= 1");

    KernelResult result;
    for (int n = 1; n <= 3; ++n) {
        auto& estimate = result.levels[static_cast<std::size_t>(n - 1)];
        const auto& level_phase = phases[static_cast<std::size_t>(n - 1)];
        estimate.level = n;
        estimate.level_radius = level_phase.neighborhood_radius;
        estimate.settings.n_cycles = n_cycles;
        estimate.settings.label_repeats = label_repeats;
        estimate.settings.actuation_noise_std = model.actuation_noise_std;
        RngStream rng(derive_seed(seeds.priors, purpose::prior_sampling,
                                  static_cast<std::uint64_t>(n)));
        const auto points =
            sample_priors(level_phase.target, level_phase.neighborhood_radius, n_priors, rng);
        estimate.priors.reserve(points.size());
        for (const auto& p : points) estimate.priors.push_back({p, PriorLabel::red});
    }

    // One rollout slot per (level, prior); indices pin the substreams, so the
    // schedule cannot affect the outcome.
    std::vector<Rollout> rollouts(static_cast<std::size_t>(3 * n_priors));
    parallel_for(3L * n_priors, workers, [&](long task) {
        const int level = static_cast<int>(task / n_priors) + 1;
        const int i = static_cast<int>(task % n_priors);
        const int run_phase_index = next_phase_index(level);
        const auto& phase = phases[static_cast<std::size_t>(run_phase_index - 1)];
        const auto& policy = policies[static_cast<std::size_t>(run_phase_index - 1)];
        const auto& prior =
            result.levels[static_cast<std::size_t>(level - 1)].priors[static_cast<std::size_t>(i)];
        rollouts[static_cast<std::size_t>(task)] = classify_with_repeats(
            prior.point, phase, policy, model, h, seeds.classify, level, i, label_repeats);
    });

    // Reduce in (level, prior) order.
    std::array<std::vector<bool>, 3> green;
    std::array<std::vector<bool>, 3> blue;
    for (int n = 0; n < 3; ++n) {
        green[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n_priors), false);
        blue[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(n_priors), false);
    }
    for (int n = 1; n <= 3; ++n) {
        const int arrival_level = next_phase_index(n);
        auto& arrival_estimate = result.levels[static_cast<std::size_t>(arrival_level - 1)];
        const double match_radius = arrival_estimate.level_radius / 5.0;
        const int run_phase_index = next_phase_index(n);
        for (int i = 0; i < n_priors; ++i) {
            const auto& rollout = rollouts[static_cast<std::size_t>((n - 1) * n_priors + i)];
            green[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(i)] = rollout.green;
            const auto pi = static_cast<std::size_t>(run_phase_index - 1);
            result.rates.updates[pi] += rollout.updates;
            result.rates.elapsed[pi] += rollout.elapsed;
            if (!rollout.green) continue;
            // Arrivals from green rollouts mark blue points at the next level.
            for (const auto& arrival : rollout.arrivals) {
                int nearest = -1;
                double best = std::numeric_limits<double>::infinity();
                for (int j = 0; j < n_priors; ++j) {
                    const double d = distance(
                        arrival, arrival_estimate.priors[static_cast<std::size_t>(j)].point);
                    if (d < best) {
                        best = d;
                        nearest = j;
                    }
                }
                if (nearest >= 0 && best <= match_radius)
                    blue[static_cast<std::size_t>(arrival_level - 1)]
                        [static_cast<std::size_t>(nearest)] = true;
                else
                    ++arrival_estimate.unmatched_arrivals;
            }
        }
    }

    for (int n = 1; n <= 3; ++n)
        finalize_estimate(result.levels[static_cast<std::size_t>(n - 1)],
                          green[static_cast<std::size_t>(n - 1)],
                          blue[static_cast<std::size_t>(n - 1)], n_priors);
    return result;
}

KernelEstimate estimate_capture_basin(int start_level,
                                      const std::array<PhaseSpec, 3>& phases,
                                      double time_window, const CommPolicy& policy,
                                      const PlantModel& model, double h, int n_priors,
                                      const KernelSeeds& seeds, int workers) {
    if (start_level < 1 || start_level > 3)
        throw std::invalid_argument("estimate_capture_basin: start_level must be 1..3");
    if (!(time_window > 0.0))
        throw std::invalid_argument("estimate_capture_basin: time_window must be > 0");
    if (n_priors < 1)
        throw std::invalid_argument("estimate_capture_basin: n_priors must be >= 1");

    const auto& level_phase = phases[static_cast<std::size_t>(start_level - 1)];
    const int run_phase_index = next_phase_index(start_level);
    PhaseSpec task_phase = phases[static_cast<std::size_t>(run_phase_index - 1)];
    task_phase.time_budget = time_window;

    KernelEstimate estimate;
    estimate.level = start_level;
    estimate.level_radius = level_phase.neighborhood_radius;
    estimate.settings.actuation_noise_std = model.actuation_noise_std;
    RngStream rng(derive_seed(seeds.priors, purpose::prior_sampling,
                              static_cast<std::uint64_t>(start_level)));
    const auto points =
        sample_priors(level_phase.target, level_phase.neighborhood_radius, n_priors, rng);
    for (const auto& p : points) estimate.priors.push_back({p, PriorLabel::red});

    std::vector<bool> green(static_cast<std::size_t>(n_priors), false);
    parallel_for(n_priors, workers, [&](long i) {
        RngStream stream(derive_seed(seeds.classify, purpose::capture_basin,
                                     static_cast<std::uint64_t>(start_level),
                                     static_cast<std::uint64_t>(i)));
        const auto label = classify_start(estimate.priors[static_cast<std::size_t>(i)].point,
                                          task_phase, policy, model, h, stream);
        green[static_cast<std::size_t>(i)] = label == PriorLabel::green;
    });

    finalize_estimate(estimate, green, std::vector<bool>(static_cast<std::size_t>(n_priors)),
                      n_priors);
    return estimate;
}

double kernel_width(const KernelEstimate& estimate) {
    return estimate.viable_fraction * kPi * estimate.level_radius * estimate.level_radius;
}

void write_kernel_csv(std::ostream& out, const std::array<KernelEstimate, 3>& levels) {
    out << "phase,prior_x,prior_y,label\n";
    for (const auto& estimate : levels)
        for (const auto& prior : estimate.priors)
            out << estimate.level << ',' << fmt_double(prior.point.temperature) << ','
                << fmt_double(prior.point.pressure) << ',' << label_name(prior.label)
                << '\n';
}

}  // namespace tocsim
