#include "tocsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "tocsim/errors.hpp"
#include "tocsim/textio.hpp"

namespace tocsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& raw, const std::string& where) {
    const std::string t = trim(raw);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ConfigError(where + ": expected a number, got '" + raw + "'");
    return value;
}

long parse_long(const std::string& raw, const std::string& where) {
    const std::string t = trim(raw);
    long value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ConfigError(where + ": expected an integer, got '" + raw + "'");
    return value;
}

std::uint64_t parse_u64(const std::string& raw, const std::string& where) {
    const std::string t = trim(raw);
    std::uint64_t value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ConfigError(where + ": expected a non-negative integer, got '" + raw + "'");
    return value;
}

std::vector<double> parse_double_list(const std::string& raw, const std::string& where) {
    std::vector<double> values;
    std::istringstream in(raw);
    std::string token;
    while (in >> token) values.push_back(parse_double(token, where));
    if (values.empty()) throw ConfigError(where + ": expected at least one number");
    return values;
}

std::string format_double_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ' ';
        out += fmt_double(values[i]);
    }
    return out;
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

Field num_field(std::string section, std::string key,
                std::function<double&(ExperimentConfig&)> ref) {
    Field f;
    f.section = std::move(section);
    f.key = std::move(key);
    f.set = [ref](ExperimentConfig& c, const std::string& raw, const std::string& where) {
        ref(c) = parse_double(raw, where);
    };
    f.get = [ref](const ExperimentConfig& c) {
        return fmt_double(ref(const_cast<ExperimentConfig&>(c)));
    };
    return f;
}

Field int_field(std::string section, std::string key,
                std::function<int&(ExperimentConfig&)> ref) {
    Field f;
    f.section = std::move(section);
    f.key = std::move(key);
    f.set = [ref](ExperimentConfig& c, const std::string& raw, const std::string& where) {
        ref(c) = static_cast<int>(parse_long(raw, where));
    };
    f.get = [ref](const ExperimentConfig& c) {
        return std::to_string(ref(const_cast<ExperimentConfig&>(c)));
    };
    return f;
}

std::vector<Field> schema() {
    std::vector<Field> fields;
    auto add = [&](Field f) { fields.push_back(std::move(f)); };

    add(num_field("plant", "alpha", [](ExperimentConfig& c) -> double& { return c.plant.alpha; }));
    add(num_field("plant", "beta", [](ExperimentConfig& c) -> double& { return c.plant.beta; }));
    add(num_field("plant", "gamma", [](ExperimentConfig& c) -> double& { return c.plant.gamma; }));
    add(num_field("plant", "eta", [](ExperimentConfig& c) -> double& { return c.plant.eta; }));
    add(num_field("plant", "actuation_noise_std",
                  [](ExperimentConfig& c) -> double& { return c.plant.actuation_noise_std; }));
    add(num_field("plant", "control_min",
                  [](ExperimentConfig& c) -> double& { return c.plant.control_min; }));
    add(num_field("plant", "control_max",
                  [](ExperimentConfig& c) -> double& { return c.plant.control_max; }));
    add(num_field("plant", "constraint_box_half_width",
                  [](ExperimentConfig& c) -> double& { return c.plant.constraint_box_half_width; }));

    add(num_field("integration", "step",
                  [](ExperimentConfig& c) -> double& { return c.integration_step; }));

    for (int p = 0; p < 3; ++p) {
        const std::string section = "phase." + std::to_string(p + 1);
        auto phase = [p](ExperimentConfig& c) -> PhaseSpec& {
            return c.phases[static_cast<std::size_t>(p)];
        };
        add(num_field(section, "target_temperature",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).target.temperature; }));
        add(num_field(section, "target_pressure",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).target.pressure; }));
        add(num_field(section, "neighborhood_radius",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).neighborhood_radius; }));
        add(num_field(section, "base_update_period",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).base_update_period; }));
        add(num_field(section, "fast_update_period",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).fast_update_period; }));
        add(num_field(section, "time_budget",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).time_budget; }));
        add(num_field(section, "k11",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).gain.k11; }));
        add(num_field(section, "k12",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).gain.k12; }));
        add(num_field(section, "k21",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).gain.k21; }));
        add(num_field(section, "k22",
                      [phase](ExperimentConfig& c) -> double& { return phase(c).gain.k22; }));
    }

    add(num_field("policy.adaptive", "edge_radius",
                  [](ExperimentConfig& c) -> double& { return c.adaptive.edge_radius; }));
    add(num_field("policy.adaptive", "slow_factor",
                  [](ExperimentConfig& c) -> double& { return c.adaptive.slow_factor; }));

    {
        Field f;
        f.section = "experiment";
        f.key = "seed";
        f.set = [](ExperimentConfig& c, const std::string& raw, const std::string& where) {
            c.seed = parse_u64(raw, where);
        };
        f.get = [](const ExperimentConfig& c) { return std::to_string(c.seed); };
        add(std::move(f));
    }
    add(int_field("experiment", "n_priors", [](ExperimentConfig& c) -> int& { return c.n_priors; }));
    add(int_field("experiment", "n_cycles", [](ExperimentConfig& c) -> int& { return c.n_cycles; }));
    add(int_field("experiment", "workers", [](ExperimentConfig& c) -> int& { return c.workers; }));
    add(int_field("experiment", "label_repeats",
                  [](ExperimentConfig& c) -> int& { return c.label_repeats; }));
    {
        Field f;
        f.section = "experiment";
        f.key = "out_dir";
        f.set = [](ExperimentConfig& c, const std::string& raw, const std::string&) {
            c.out_dir = trim(raw);
        };
        f.get = [](const ExperimentConfig& c) { return c.out_dir; };
        add(std::move(f));
    }

    {
        Field f;
        f.section = "te";
        f.key = "periods";
        f.set = [](ExperimentConfig& c, const std::string& raw, const std::string& where) {
            c.te.periods = parse_double_list(raw, where);
        };
        f.get = [](const ExperimentConfig& c) { return format_double_list(c.te.periods); };
        add(std::move(f));
    }
    add(int_field("te", "n_repeats", [](ExperimentConfig& c) -> int& { return c.te.n_repeats; }));
    add(num_field("te", "window", [](ExperimentConfig& c) -> double& { return c.te.window; }));
    add(int_field("te", "n_bins", [](ExperimentConfig& c) -> int& { return c.te.n_bins; }));
    {
        Field f;
        f.section = "te";
        f.key = "quantiles";
        f.set = [](ExperimentConfig& c, const std::string& raw, const std::string& where) {
            c.te.quantiles = parse_double_list(raw, where);
        };
        f.get = [](const ExperimentConfig& c) { return format_double_list(c.te.quantiles); };
        add(std::move(f));
    }
    add(int_field("te", "history_k", [](ExperimentConfig& c) -> int& { return c.te.history_k; }));
    add(int_field("te", "history_l", [](ExperimentConfig& c) -> int& { return c.te.history_l; }));
    add(int_field("te", "n_shuffles", [](ExperimentConfig& c) -> int& { return c.te.n_shuffles; }));

    add(num_field("simulate", "start_temperature",
                  [](ExperimentConfig& c) -> double& { return c.simulate.start.temperature; }));
    add(num_field("simulate", "start_pressure",
                  [](ExperimentConfig& c) -> double& { return c.simulate.start.pressure; }));
    add(int_field("simulate", "n_cycles",
                  [](ExperimentConfig& c) -> int& { return c.simulate.n_cycles; }));
    {
        Field f;
        f.section = "simulate";
        f.key = "policy";
        f.set = [](ExperimentConfig& c, const std::string& raw, const std::string&) {
            c.simulate.policy = trim(raw);
        };
        f.get = [](const ExperimentConfig& c) { return c.simulate.policy; };
        add(std::move(f));
    }

    return fields;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError("invalid configuration: " + message);
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
    // The three-phase cycle: ambient, high-pressure operating point, and the
    // hot low-temperature point, revisited in this order forever.
    phases[0].index = 1;
    phases[0].target = {0.0, 0.0};
    phases[0].base_update_period = 0.1;
    phases[0].fast_update_period = 0.1;
    phases[0].time_budget = 2.0;

    phases[1].index = 2;
    phases[1].target = {2.5, 2.0};
    phases[1].base_update_period = 0.05;
    phases[1].fast_update_period = 0.05;
    phases[1].time_budget = 2.0;

    phases[2].index = 3;
    phases[2].target = {1.0, 3.0};
    phases[2].base_update_period = 0.05;
    phases[2].fast_update_period = 0.05;
    phases[2].time_budget = 2.0;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    const auto fields = schema();
    ExperimentConfig config;

    std::string section;
    std::vector<std::string> unknown;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) {
            return f.section == section && f.key == key;
        });
        if (it == fields.end()) {
            unknown.push_back(section.empty() ? key : section + "." + key);
            continue;
        }
        it->set(config, value, where + " (" + section + "." + key + ")");
    }

    if (!unknown.empty()) {
        std::string msg = origin + ": unknown key";
        if (unknown.size() > 1) msg += 's';
        msg += ": ";
        for (std::size_t i = 0; i < unknown.size(); ++i) {
            if (i > 0) msg += ", ";
            msg += unknown[i];
        }
        throw ConfigError(msg);
    }

    validate(config);
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

std::string save_config(const ExperimentConfig& config) {
    const auto fields = schema();
    std::string out;
    std::string section;
    for (const auto& field : fields) {
        if (field.section != section) {
            if (!out.empty()) out += '\n';
            section = field.section;
            out += '[' + section + "]\n";
        }
        out += field.key + " = " + field.get(config) + '\n';
    }
    return out;
}

void validate(const ExperimentConfig& config) {
    const auto& plant = config.plant;
    require(plant.alpha > 0.0, "plant.alpha must be > 0");
    require(plant.gamma > 0.0, "plant.gamma must be > 0");
    require(plant.beta >= 0.0, "plant.beta must be >= 0");
    require(plant.eta >= 0.0, "plant.eta must be >= 0");
    require(plant.actuation_noise_std >= 0.0, "plant.actuation_noise_std must be >= 0");
    require(plant.control_min < plant.control_max,
            "plant.control_min must be below plant.control_max");
    require(plant.constraint_box_half_width > 0.0,
            "plant.constraint_box_half_width must be > 0");
    require(config.integration_step > 0.0, "integration.step must be > 0");

    for (std::size_t i = 0; i < 3; ++i) {
        const auto& phase = config.phases[i];
        const std::string name = "phase." + std::to_string(i + 1);
        require(phase.index == static_cast<int>(i + 1), name + ".index is fixed");
        require(std::isfinite(phase.target.temperature) && std::isfinite(phase.target.pressure),
                name + ".target must be finite");
        require(phase.neighborhood_radius > 0.0, name + ".neighborhood_radius must be > 0");
        require(phase.fast_update_period > 0.0, name + ".fast_update_period must be > 0");
        require(phase.fast_update_period <= phase.base_update_period,
                name + ".fast_update_period must not exceed " + name + ".base_update_period");
        require(phase.base_update_period <= phase.time_budget,
                name + ".base_update_period must not exceed " + name + ".time_budget");
        require(std::abs(1.0 + plant.eta * phase.target.temperature) >= 1e-12,
                name + ".target is singular (1 + eta*T = 0)");
    }

    require(config.adaptive.edge_radius > 0.0, "policy.adaptive.edge_radius must be > 0");
    require(config.adaptive.slow_factor >= 1.0, "policy.adaptive.slow_factor must be >= 1");

    require(config.n_priors >= 1, "experiment.n_priors must be >= 1");
    require(config.n_cycles >= 1, "experiment.n_cycles must be >= 1");
    require(config.workers >= 1, "experiment.workers must be >= 1");
    require(config.label_repeats >= 1, "experiment.label_repeats must be >= 1");
    require(!config.out_dir.empty(), "experiment.out_dir must not be empty");

    require(!config.te.periods.empty(), "te.periods must not be empty");
    for (const double p : config.te.periods) require(p > 0.0, "te.periods must be > 0");
    require(config.te.n_repeats >= 1, "te.n_repeats must be >= 1");
    require(config.te.n_bins >= 2, "te.n_bins must be >= 2");
    require(config.te.quantiles.size() + 1 == static_cast<std::size_t>(config.te.n_bins),
            "te.quantiles must list n_bins - 1 levels");
    for (const double q : config.te.quantiles)
        require(q > 0.0 && q < 1.0, "te.quantiles must lie in (0, 1)");
    require(std::is_sorted(config.te.quantiles.begin(), config.te.quantiles.end()),
            "te.quantiles must be non-decreasing");
    require(config.te.history_k >= 1, "te.history_k must be >= 1");
    require(config.te.history_l >= 1, "te.history_l must be >= 1");
    require(config.te.n_shuffles >= 1, "te.n_shuffles must be >= 1");

    require(std::isfinite(config.simulate.start.temperature) &&
                std::isfinite(config.simulate.start.pressure),
            "simulate.start must be finite");
    require(config.simulate.n_cycles >= 1, "simulate.n_cycles must be >= 1");
    require(config.simulate.policy == "fixed" || config.simulate.policy == "adaptive",
            "simulate.policy must be 'fixed' or 'adaptive'");
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = save_config(config);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[hash & 0xf];
        hash >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

}  // namespace tocsim
