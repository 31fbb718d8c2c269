#include "tocsim/infotheory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "tocsim/errors.hpp"

namespace tocsim {

namespace {

int bits_for(int n_bins) {
    return std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(n_bins - 1))));
}

void check_symbols(const std::vector<int>& symbols, int n_bins, const char* name) {
    for (const int s : symbols)
        if (s < 0 || s >= n_bins)
            throw std::invalid_argument(std::string("transfer_entropy: symbol out of range in ") +
                                        name);
}

struct TupleCounts {
    // Packed keys: abc = (a << (k*by + l*bx)) | (b << (l*bx)) | c, where a is
    // the next target symbol, b the target history, c the source history.
    std::unordered_map<std::uint64_t, long> joint;  // (a, b, c)
    std::unordered_map<std::uint64_t, long> ab;     // (a, b)
    std::unordered_map<std::uint64_t, long> bc;     // (b, c)
    std::unordered_map<std::uint64_t, long> b;
    long total = 0;
};

TupleCounts count_tuples(const std::vector<std::vector<int>>& x_segments,
                         const std::vector<std::vector<int>>& y_segments, int x_bins,
                         int y_bins, int k, int l) {
    const int bx = bits_for(x_bins);
    const int by = bits_for(y_bins);
    if ((1 + k) * by + l * bx > 63)
        throw std::invalid_argument("transfer_entropy: histories too long to pack");

    TupleCounts counts;
    for (std::size_t seg = 0; seg < y_segments.size(); ++seg) {
        const auto& x = x_segments[seg];
        const auto& y = y_segments[seg];
        const long n = static_cast<long>(y.size());
        for (long t = std::max(k, l) - 1; t + 1 < n; ++t) {
            std::uint64_t b_key = 0;
            for (int j = 0; j < k; ++j)
                b_key = (b_key << by) | static_cast<std::uint64_t>(y[static_cast<std::size_t>(t - j)]);
            std::uint64_t c_key = 0;
            for (int j = 0; j < l; ++j)
                c_key = (c_key << bx) | static_cast<std::uint64_t>(x[static_cast<std::size_t>(t - j)]);
            const auto a = static_cast<std::uint64_t>(y[static_cast<std::size_t>(t + 1)]);

            const std::uint64_t abc = (((a << (k * by)) | b_key) << (l * bx)) | c_key;
            ++counts.joint[abc];
            ++counts.ab[(a << (k * by)) | b_key];
            ++counts.bc[(b_key << (l * bx)) | c_key];
            ++counts.b[b_key];
            ++counts.total;
        }
    }
    return counts;
}

double plugin_te(const TupleCounts& counts, int x_bins, int y_bins, int k, int l) {
    const int bx = bits_for(x_bins);
    const int by = bits_for(y_bins);
    const std::uint64_t c_mask = (std::uint64_t{1} << (l * bx)) - 1;
    const std::uint64_t b_mask = (std::uint64_t{1} << (k * by)) - 1;

    // Sort for a summation order independent of hash-map internals.
    std::vector<std::pair<std::uint64_t, long>> entries(counts.joint.begin(),
                                                        counts.joint.end());
    std::sort(entries.begin(), entries.end());

    double te = 0.0;
    const auto total = static_cast<double>(counts.total);
    for (const auto& [abc, n_abc] : entries) {
        const std::uint64_t c_key = abc & c_mask;
        const std::uint64_t b_key = (abc >> (l * bx)) & b_mask;
        const std::uint64_t a = abc >> (l * bx + k * by);
        const long n_ab = counts.ab.at((a << (k * by)) | b_key);
        const long n_bc = counts.bc.at((b_key << (l * bx)) | c_key);
        const long n_b = counts.b.at(b_key);
        // p(a|b,c) / p(a|b) as a ratio of integer counts; products stay well
        // below 2^63 for any realistic series length.
        te += static_cast<double>(n_abc) / total *
              std::log2(static_cast<double>(n_abc) * static_cast<double>(n_b) /
                        (static_cast<double>(n_ab) * static_cast<double>(n_bc)));
    }
    return std::max(te, 0.0);  // guard against -0 rounding residue
}

void validate_segments(const std::vector<std::vector<int>>& x_segments,
                       const std::vector<std::vector<int>>& y_segments, int x_bins,
                       int y_bins, int k, int l) {
    if (k < 1 || l < 1)
        throw std::invalid_argument("transfer_entropy: history lengths must be >= 1");
    if (x_bins < 2 || y_bins < 2)
        throw std::invalid_argument("transfer_entropy: need at least 2 bins");
    if (x_segments.size() != y_segments.size())
        throw std::invalid_argument("transfer_entropy: segment counts differ");
    for (std::size_t i = 0; i < x_segments.size(); ++i) {
        if (x_segments[i].size() != y_segments[i].size())
            throw std::invalid_argument("transfer_entropy: series lengths differ");
        check_symbols(x_segments[i], x_bins, "x");
        check_symbols(y_segments[i], y_bins, "y");
    }
}

}  // namespace

std::vector<double> quantile_thresholds(std::vector<double> values,
                                        const std::vector<double>& quantiles) {
    if (values.empty()) throw std::invalid_argument("quantile_thresholds: empty series");
    std::sort(values.begin(), values.end());
    std::vector<double> thresholds;
    thresholds.reserve(quantiles.size());
    const auto n = static_cast<double>(values.size());
    for (const double q : quantiles) {
        // Nearest-rank quantile: the ceil(q*n)-th order statistic.
        auto rank = static_cast<long>(std::ceil(q * n));
        rank = std::clamp<long>(rank, 1, static_cast<long>(values.size()));
        thresholds.push_back(values[static_cast<std::size_t>(rank - 1)]);
    }
    return thresholds;
}

int symbol_for(double value, const std::vector<double>& thresholds) {
    int symbol = 0;
    for (const double t : thresholds)
        if (value > t) ++symbol;  // ties go to the lower bin
    return symbol;
}

SymbolSeries discretize(const std::vector<double>& series, const DiscretizeSpec& spec,
                        const std::string& channel, double update_period) {
    if (series.size() < 2) throw std::invalid_argument("discretize: series length must be >= 2");
    if (spec.n_bins < 2) throw std::invalid_argument("discretize: n_bins must be >= 2");
    if (spec.quantiles.size() + 1 != static_cast<std::size_t>(spec.n_bins))
        throw std::invalid_argument("discretize: need n_bins - 1 quantile levels");
    for (const double q : spec.quantiles)
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("discretize: quantiles must lie in (0, 1)");
    if (!std::is_sorted(spec.quantiles.begin(), spec.quantiles.end()))
        throw std::invalid_argument("discretize: quantiles must be non-decreasing");

    const auto thresholds = quantile_thresholds(series, spec.quantiles);
    SymbolSeries out;
    out.n_bins = spec.n_bins;
    out.channel = channel;
    out.update_period = update_period;
    out.symbols.reserve(series.size());
    for (const double v : series) out.symbols.push_back(symbol_for(v, thresholds));
    return out;
}

TeResult transfer_entropy_segments(const std::vector<std::vector<int>>& x_segments,
                                   const std::vector<std::vector<int>>& y_segments,
                                   int x_bins, int y_bins, int k, int l) {
    validate_segments(x_segments, y_segments, x_bins, y_bins, k, l);
    const TupleCounts counts = count_tuples(x_segments, y_segments, x_bins, y_bins, k, l);
    if (counts.total < 1)
        throw InsufficientDataError("transfer_entropy: no usable tuples (series shorter than histories)");

    TeResult result;
    result.k = k;
    result.l = l;
    result.n_samples = counts.total;
    result.te_bits = plugin_te(counts, x_bins, y_bins, k, l);
    result.effective_te_bits = result.te_bits;
    return result;
}

TeResult transfer_entropy(const SymbolSeries& x, const SymbolSeries& y, int k, int l) {
    if (x.symbols.size() != y.symbols.size())
        throw std::invalid_argument("transfer_entropy: series lengths differ");
    if (x.symbols.size() < static_cast<std::size_t>(k + l + 1))
        throw InsufficientDataError("transfer_entropy: series shorter than k + l + 1");
    TeResult result = transfer_entropy_segments({x.symbols}, {y.symbols}, x.n_bins,
                                                y.n_bins, k, l);
    result.direction = x.channel.empty() && y.channel.empty()
                           ? std::string()
                           : x.channel + "->" + y.channel;
    result.update_period = y.update_period;
    return result;
}

TeResult effective_te_segments(const std::vector<std::vector<int>>& x_segments,
                               const std::vector<std::vector<int>>& y_segments,
                               int x_bins, int y_bins, int k, int l, int n_shuffles,
                               RngStream& rng) {
    if (n_shuffles < 1)
        throw std::invalid_argument("effective_te: n_shuffles must be >= 1");
    TeResult result = transfer_entropy_segments(x_segments, y_segments, x_bins, y_bins, k, l);

    // Pool x, shuffle, re-split into the original segment shapes. The pooled
    // histogram of x symbols is preserved exactly.
    std::vector<int> pooled;
    for (const auto& seg : x_segments) pooled.insert(pooled.end(), seg.begin(), seg.end());

    double shuffled_sum = 0.0;
    std::vector<std::vector<int>> shuffled_segments(x_segments.size());
    for (int s = 0; s < n_shuffles; ++s) {
        rng.shuffle(pooled);
        std::size_t offset = 0;
        for (std::size_t i = 0; i < x_segments.size(); ++i) {
            shuffled_segments[i].assign(pooled.begin() + static_cast<long>(offset),
                                        pooled.begin() + static_cast<long>(offset + x_segments[i].size()));
            offset += x_segments[i].size();
        }
        const TupleCounts counts =
            count_tuples(shuffled_segments, y_segments, x_bins, y_bins, k, l);
        shuffled_sum += plugin_te(counts, x_bins, y_bins, k, l);
    }
    result.effective_te_bits = result.te_bits - shuffled_sum / n_shuffles;
    return result;
}

TeResult effective_te(const SymbolSeries& x, const SymbolSeries& y, int k, int l,
                      int n_shuffles, RngStream& rng) {
    if (x.symbols.size() != y.symbols.size())
        throw std::invalid_argument("effective_te: series lengths differ");
    if (x.symbols.size() < static_cast<std::size_t>(k + l + 1))
        throw InsufficientDataError("effective_te: series shorter than k + l + 1");
    TeResult result = effective_te_segments({x.symbols}, {y.symbols}, x.n_bins, y.n_bins,
                                            k, l, n_shuffles, rng);
    result.direction = x.channel.empty() && y.channel.empty()
                           ? std::string()
                           : x.channel + "->" + y.channel;
    result.update_period = y.update_period;
    return result;
}

std::vector<TeResult> te_table(
    const std::vector<std::pair<double, std::vector<PhaseSamples>>>& runs_by_period,
    const TeSettings& settings, std::uint64_t shuffle_seed) {
    struct ChannelPair {
        const char* direction;
        const std::vector<double>& (*state)(const PhaseSamples&);
        const std::vector<double>& (*control)(const PhaseSamples&);
    };
    static const ChannelPair pairs[2] = {
        {"temperature->heat_rate",
         [](const PhaseSamples& s) -> const std::vector<double>& { return s.temperature; },
         [](const PhaseSamples& s) -> const std::vector<double>& { return s.heat_rate; }},
        {"pressure->piston_rate",
         [](const PhaseSamples& s) -> const std::vector<double>& { return s.pressure; },
         [](const PhaseSamples& s) -> const std::vector<double>& { return s.piston_rate; }},
    };

    std::vector<TeResult> table;
    for (std::size_t pi = 0; pi < runs_by_period.size(); ++pi) {
        const auto& [period, runs] = runs_by_period[pi];
        for (std::size_t ci = 0; ci < 2; ++ci) {
            const auto& pair = pairs[ci];
            std::vector<double> pooled_state;
            std::vector<double> pooled_control;
            for (const auto& run : runs) {
                const auto& sv = pair.state(run);
                const auto& cv = pair.control(run);
                pooled_state.insert(pooled_state.end(), sv.begin(), sv.end());
                pooled_control.insert(pooled_control.end(), cv.begin(), cv.end());
            }
            if (pooled_state.size() <
                static_cast<std::size_t>(settings.history_k + settings.history_l + 1))
                throw InsufficientDataError(std::string("te_table: too few exchanges for ") +
                                            pair.direction + " at period " +
                                            std::to_string(period));

            const auto state_thresholds =
                quantile_thresholds(pooled_state, settings.discretize.quantiles);
            const auto control_thresholds =
                quantile_thresholds(pooled_control, settings.discretize.quantiles);

            std::vector<std::vector<int>> x_segments;
            std::vector<std::vector<int>> y_segments;
            for (const auto& run : runs) {
                const auto& sv = pair.state(run);
                const auto& cv = pair.control(run);
                std::vector<int> xs;
                std::vector<int> ys;
                xs.reserve(sv.size());
                ys.reserve(cv.size());
                for (const double v : sv) xs.push_back(symbol_for(v, state_thresholds));
                for (const double v : cv) ys.push_back(symbol_for(v, control_thresholds));
                x_segments.push_back(std::move(xs));
                y_segments.push_back(std::move(ys));
            }

            RngStream rng(derive_seed(shuffle_seed, purpose::te_shuffle,
                                      static_cast<std::uint64_t>(pi),
                                      static_cast<std::uint64_t>(ci)));
            TeResult cell = effective_te_segments(
                x_segments, y_segments, settings.discretize.n_bins, settings.discretize.n_bins,
                settings.history_k, settings.history_l, settings.n_shuffles, rng);
            cell.direction = pair.direction;
            cell.update_period = period;
            table.push_back(std::move(cell));
        }
    }
    return table;
}

}  // namespace tocsim
