// Command-line front end. Talks to the toolkit exclusively through the C API
// in tocsim.h; everything else lives behind the shared library.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "tocsim.h"

namespace {

std::string json_escape(const char* text) {
    std::string out;
    for (const char* p = text; *p != '\0'; ++p) {
        const char c = *p;
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

int report_failure(tocsim_status status) {
    std::fprintf(stderr, "{\"error\":{\"code\":\"%s\",\"message\":\"%s\"}}\n",
                 tocsim_status_name(status), json_escape(tocsim_last_error()).c_str());
    return static_cast<int>(status);
}

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int workers = 0;
    bool seed_set = false;
    bool out_dir_set = false;
    bool workers_set = false;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Experiment configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "Master seed (overrides the config)")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--out-dir", opts.out_dir, "Output directory")
        ->each([&](const std::string&) { opts.out_dir_set = true; });
    cmd->add_option("--workers", opts.workers, "Worker threads (never changes results)")
        ->each([&](const std::string&) { opts.workers_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tocsim — viability-kernel and transfer-entropy experiments for a "
                 "remotely controlled two-state plant"};
    app.set_version_flag("--version", tocsim_version());
    app.require_subcommand(1);

    CommonOptions opts;
    double start_temperature = 0.0;
    double start_pressure = 0.0;
    int cycles = 0;
    bool start_t_set = false;
    bool start_p_set = false;
    bool cycles_set = false;

    CLI::App* kernel = app.add_subcommand(
        "kernel", "Estimate the viability kernels (fixed and adaptive policies)");
    CLI::App* compare = app.add_subcommand(
        "compare", "Paired fixed-vs-adaptive comparison of rates and kernels");
    CLI::App* te = app.add_subcommand(
        "te", "Transfer-entropy table over Phase-II update periods");
    CLI::App* simulate =
        app.add_subcommand("simulate", "One closed-loop multi-cycle trajectory");
    for (CLI::App* cmd : {kernel, compare, te, simulate}) add_common_options(cmd, opts);
    simulate->add_option("--start-temperature", start_temperature, "Initial temperature")
        ->each([&](const std::string&) { start_t_set = true; });
    simulate->add_option("--start-pressure", start_pressure, "Initial pressure")
        ->each([&](const std::string&) { start_p_set = true; });
    simulate->add_option("--cycles", cycles, "Number of cycles through the three levels")
        ->each([&](const std::string&) { cycles_set = true; });

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    tocsim_experiment* experiment = nullptr;
    tocsim_status status = tocsim_experiment_open(
        opts.config_path.empty() ? nullptr : opts.config_path.c_str(), &experiment);
    if (status != TOCSIM_OK) return report_failure(status);

    if (status == TOCSIM_OK && opts.seed_set)
        status = tocsim_experiment_set_seed(experiment, opts.seed);
    if (status == TOCSIM_OK && opts.out_dir_set)
        status = tocsim_experiment_set_out_dir(experiment, opts.out_dir.c_str());
    if (status == TOCSIM_OK && opts.workers_set)
        status = tocsim_experiment_set_workers(experiment, opts.workers);
    if (status == TOCSIM_OK && (start_t_set || start_p_set)) {
        // Unset components keep the configured defaults of (0, 0) semantics:
        // both flags are applied together.
        status = tocsim_experiment_set_start(experiment, start_temperature, start_pressure);
    }
    if (status == TOCSIM_OK && cycles_set)
        status = tocsim_experiment_set_cycles(experiment, cycles);
    if (status == TOCSIM_OK) status = tocsim_experiment_run(experiment, command.c_str());

    const int exit_code = status == TOCSIM_OK ? 0 : report_failure(status);
    tocsim_experiment_close(experiment);
    return exit_code;
}
