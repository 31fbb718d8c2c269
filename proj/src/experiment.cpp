#include "tocsim/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tocsim/errors.hpp"
#include "tocsim/parallel.hpp"
#include "tocsim/textio.hpp"
#include "tocsim/version.hpp"

namespace tocsim {

namespace {

using nlohmann::json;

int prev_phase_index(int index) {
    return (index + 1) % 3 + 1;
}

KernelSeeds seeds_for(std::uint64_t seed) {
    return KernelSeeds{seed, seed};
}

void stamp(std::array<KernelEstimate, 3>& levels, const std::string& policy,
           std::uint64_t seed) {
    for (auto& estimate : levels) {
        estimate.settings.policy = policy;
        estimate.settings.seed = seed;
    }
}

double phase_rate(const PhaseRateAggregate& rates, int phase_index) {
    const auto i = static_cast<std::size_t>(phase_index - 1);
    return rates.elapsed[i] > 0.0
               ? static_cast<double>(rates.updates[i]) / rates.elapsed[i]
               : 0.0;
}

double overall_rate(const PhaseRateAggregate& rates) {
    long updates = 0;
    double elapsed = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        updates += rates.updates[i];
        elapsed += rates.elapsed[i];
    }
    return elapsed > 0.0 ? static_cast<double>(updates) / elapsed : 0.0;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::filesystem::path prepare_dir(const ExperimentConfig& config, const std::string& sub) {
    std::filesystem::path dir = std::filesystem::path(config.out_dir) / sub;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
    return dir;
}

void write_manifest(const std::filesystem::path& dir, const ExperimentConfig& config,
                    const std::string& command) {
    json manifest;
    manifest["command"] = command;
    manifest["seed"] = config.seed;
    manifest["config_hash"] = config_hash(config);
    manifest["version"] = kVersion;
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

json summary_json(const std::array<KernelEstimate, 3>& levels) {
    json out;
    out["policy"] = levels[0].settings.policy;
    out["seed"] = levels[0].settings.seed;
    out["actuation_noise_std"] = levels[0].settings.actuation_noise_std;
    out["n_cycles"] = levels[0].settings.n_cycles;
    out["label_repeats"] = levels[0].settings.label_repeats;
    out["levels"] = json::array();
    for (const auto& estimate : levels) {
        json level;
        level["level"] = estimate.level;
        level["n_priors"] = estimate.priors.size();
        level["viable_fraction"] = estimate.viable_fraction;
        level["width"] = estimate.width;
        level["unmatched_arrivals"] = estimate.unmatched_arrivals;
        out["levels"].push_back(level);
    }
    return out;
}

std::string kernel_csv_text(const std::array<KernelEstimate, 3>& levels) {
    std::ostringstream out;
    write_kernel_csv(out, levels);
    return out.str();
}

PhaseSamples collect_exchange_samples(const PhaseOutcome& outcome) {
    PhaseSamples samples;
    for (const auto& p : outcome.trajectory) {
        if (!p.update) continue;
        samples.temperature.push_back(p.state.temperature);
        samples.pressure.push_back(p.state.pressure);
        samples.heat_rate.push_back(p.commanded.heat_rate);
        samples.piston_rate.push_back(p.commanded.piston_rate);
    }
    return samples;
}

}  // namespace

std::array<CommPolicy, 3> fixed_policies(const ExperimentConfig& config) {
    std::array<CommPolicy, 3> policies;
    for (std::size_t i = 0; i < 3; ++i) {
        policies[i].kind = PolicyKind::fixed;
        policies[i].fixed_period = config.phases[i].base_update_period;
    }
    return policies;
}

std::array<CommPolicy, 3> adaptive_policies(const ExperimentConfig& config,
                                            const std::array<KernelEstimate, 3>& labels) {
    std::array<CommPolicy, 3> policies;
    for (std::size_t i = 0; i < 3; ++i) {
        const int phase_index = static_cast<int>(i) + 1;
        const int start_level = prev_phase_index(phase_index);
        policies[i].kind = PolicyKind::adaptive;
        policies[i].fast_period = config.phases[i].fast_update_period;
        policies[i].base_period =
            config.adaptive.slow_factor * config.phases[i].base_update_period;
        policies[i].edge_radius = config.adaptive.edge_radius;
        policies[i].edge_priors = &labels[static_cast<std::size_t>(start_level - 1)].priors;
    }
    return policies;
}

KernelResult run_kernel_fixed(const ExperimentConfig& config, std::uint64_t seed,
                              double period_scale) {
    ExperimentConfig scaled = config;
    for (auto& phase : scaled.phases) {
        phase.base_update_period *= period_scale;
        phase.fast_update_period *= period_scale;
    }
    KernelResult result =
        estimate_kernel(scaled.phases, fixed_policies(scaled), scaled.plant,
                        scaled.integration_step, scaled.n_priors, scaled.n_cycles,
                        seeds_for(seed), scaled.workers, scaled.label_repeats);
    stamp(result.levels, "fixed", seed);
    return result;
}

KernelResult run_kernel_adaptive(const ExperimentConfig& config, std::uint64_t seed,
                                 const std::array<KernelEstimate, 3>& labels) {
    KernelResult result =
        estimate_kernel(config.phases, adaptive_policies(config, labels), config.plant,
                        config.integration_step, config.n_priors, config.n_cycles,
                        seeds_for(seed), config.workers, config.label_repeats);
    stamp(result.levels, "adaptive", seed);
    return result;
}

ComparisonReport run_comparison(const ExperimentConfig& config, std::uint64_t seed) {
    const KernelResult fixed = run_kernel_fixed(config, seed);
    const KernelResult adaptive = run_kernel_adaptive(config, seed, fixed.levels);

    ComparisonReport report;
    for (std::size_t i = 0; i < 3; ++i) {
        auto& row = report.rows[i];
        row.index = static_cast<int>(i) + 1;
        row.fixed_rate = phase_rate(fixed.rates, row.index);
        row.adaptive_rate = phase_rate(adaptive.rates, row.index);
        row.reduction_percent =
            row.fixed_rate > 0.0
                ? 100.0 * (row.fixed_rate - row.adaptive_rate) / row.fixed_rate
                : 0.0;
        row.fixed_viable_fraction = fixed.levels[i].viable_fraction;
        row.adaptive_viable_fraction = adaptive.levels[i].viable_fraction;
        row.fixed_width = fixed.levels[i].width;
        row.adaptive_width = adaptive.levels[i].width;
    }
    report.fixed_overall_rate = overall_rate(fixed.rates);
    report.adaptive_overall_rate = overall_rate(adaptive.rates);
    report.overall_reduction_percent =
        report.fixed_overall_rate > 0.0
            ? 100.0 * (report.fixed_overall_rate - report.adaptive_overall_rate) /
                  report.fixed_overall_rate
            : 0.0;
    return report;
}

std::vector<TeResult> run_te_experiment(const ExperimentConfig& config,
                                        std::uint64_t seed) {
    const auto& level1 = config.phases[0];

    std::vector<std::pair<double, std::vector<PhaseSamples>>> runs_by_period;
    for (std::size_t pi = 0; pi < config.te.periods.size(); ++pi) {
        const double period = config.te.periods[pi];
        PhaseSpec phase2 = config.phases[1];
        phase2.base_update_period = period;
        CommPolicy policy;
        policy.kind = PolicyKind::fixed;
        policy.fixed_period = period;

        std::vector<PhaseSamples> runs(static_cast<std::size_t>(config.te.n_repeats));
        parallel_for(config.te.n_repeats, config.workers, [&](long rep) {
            RngStream start_rng(derive_seed(seed, purpose::te_start,
                                            static_cast<std::uint64_t>(pi),
                                            static_cast<std::uint64_t>(rep)));
            const PlantState start =
                sample_priors(level1.target, level1.neighborhood_radius, 1, start_rng)[0];
            RngStream rollout_rng(derive_seed(seed, purpose::te_rollout,
                                              static_cast<std::uint64_t>(pi),
                                              static_cast<std::uint64_t>(rep)));
            const PhaseOutcome out = run_phase(start, phase2, policy, config.plant,
                                               config.integration_step, rollout_rng);
            runs[static_cast<std::size_t>(rep)] = collect_exchange_samples(out);
        });
        runs_by_period.emplace_back(period, std::move(runs));
    }

    TeSettings settings;
    settings.discretize.n_bins = config.te.n_bins;
    settings.discretize.quantiles = config.te.quantiles;
    settings.history_k = config.te.history_k;
    settings.history_l = config.te.history_l;
    settings.n_shuffles = config.te.n_shuffles;
    return te_table(runs_by_period, settings, seed);
}

CycleOutcome run_simulation(const ExperimentConfig& config, std::uint64_t seed) {
    RngStream rng(derive_seed(seed, purpose::simulate));
    if (config.simulate.policy == "adaptive") {
        const KernelResult fixed = run_kernel_fixed(config, seed);
        return run_cycle(config.simulate.start, config.phases,
                         adaptive_policies(config, fixed.levels), config.plant,
                         config.integration_step, rng, config.simulate.n_cycles);
    }
    return run_cycle(config.simulate.start, config.phases, fixed_policies(config),
                     config.plant, config.integration_step, rng, config.simulate.n_cycles);
}

void cmd_kernel(const ExperimentConfig& config) {
    const auto dir = prepare_dir(config, "kernel");
    const KernelResult fixed = run_kernel_fixed(config, config.seed);
    const KernelResult adaptive = run_kernel_adaptive(config, config.seed, fixed.levels);

    write_text_file(dir / "kernel_fixed.csv", kernel_csv_text(fixed.levels));
    write_text_file(dir / "summary_fixed.json", summary_json(fixed.levels).dump(2) + "\n");
    write_text_file(dir / "kernel_adaptive.csv", kernel_csv_text(adaptive.levels));
    write_text_file(dir / "summary_adaptive.json",
                    summary_json(adaptive.levels).dump(2) + "\n");
    write_manifest(dir, config, "kernel");
}

void cmd_compare(const ExperimentConfig& config) {
    const auto dir = prepare_dir(config, "compare");
    const ComparisonReport report = run_comparison(config, config.seed);

    std::ostringstream csv;
    csv << "phase,fixed_rate,adaptive_rate,reduction_percent,fixed_viable_fraction,"
           "adaptive_viable_fraction,fixed_width,adaptive_width\n";
    for (const auto& row : report.rows)
        csv << row.index << ',' << fmt_double(row.fixed_rate) << ','
            << fmt_double(row.adaptive_rate) << ',' << fmt_double(row.reduction_percent)
            << ',' << fmt_double(row.fixed_viable_fraction) << ','
            << fmt_double(row.adaptive_viable_fraction) << ','
            << fmt_double(row.fixed_width) << ',' << fmt_double(row.adaptive_width)
            << '\n';
    write_text_file(dir / "report.csv", csv.str());

    json out;
    out["seed"] = config.seed;
    out["phases"] = json::array();
    for (const auto& row : report.rows) {
        json r;
        r["phase"] = row.index;
        r["fixed_rate"] = row.fixed_rate;
        r["adaptive_rate"] = row.adaptive_rate;
        r["reduction_percent"] = row.reduction_percent;
        r["fixed_viable_fraction"] = row.fixed_viable_fraction;
        r["adaptive_viable_fraction"] = row.adaptive_viable_fraction;
        r["fixed_width"] = row.fixed_width;
        r["adaptive_width"] = row.adaptive_width;
        out["phases"].push_back(r);
    }
    out["fixed_overall_rate"] = report.fixed_overall_rate;
    out["adaptive_overall_rate"] = report.adaptive_overall_rate;
    out["overall_reduction_percent"] = report.overall_reduction_percent;
    write_text_file(dir / "report.json", out.dump(2) + "\n");
    write_manifest(dir, config, "compare");
}

void cmd_te(const ExperimentConfig& config) {
    const auto dir = prepare_dir(config, "te");
    const auto table = run_te_experiment(config, config.seed);

    std::ostringstream csv;
    csv << "direction,update_period,te_bits,effective_te_bits,n_samples,k,l,n_bins\n";
    for (const auto& cell : table)
        csv << cell.direction << ',' << fmt_double(cell.update_period) << ','
            << fmt_double(cell.te_bits) << ',' << fmt_double(cell.effective_te_bits)
            << ',' << cell.n_samples << ',' << cell.k << ',' << cell.l << ','
            << config.te.n_bins << '\n';
    write_text_file(dir / "te_table.csv", csv.str());
    write_manifest(dir, config, "te");
}

void cmd_simulate(const ExperimentConfig& config) {
    const auto dir = prepare_dir(config, "sim");
    const CycleOutcome outcome = run_simulation(config, config.seed);

    std::ostringstream csv;
    write_trajectory_csv(csv, outcome);
    write_text_file(dir / "trajectory.csv", csv.str());
    write_manifest(dir, config, "simulate");
}

}  // namespace tocsim
