#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tocsim/rng.hpp"

namespace tocsim {

/// Discretized time series over the alphabet [0, n_bins).
struct SymbolSeries {
    std::vector<int> symbols;
    int n_bins = 3;
    std::string channel;
    double update_period = 0.0;
};

/// Quantile-threshold binning. quantiles has n_bins - 1 entries; the default
/// splits at the 5th and 95th percentiles. Ties go to the lower bin.
struct DiscretizeSpec {
    int n_bins = 3;
    std::vector<double> quantiles{0.05, 0.95};
};

/// Nearest-rank empirical quantile thresholds of `values`.
std::vector<double> quantile_thresholds(std::vector<double> values,
                                        const std::vector<double>& quantiles);

/// Symbol = number of thresholds strictly below the value.
int symbol_for(double value, const std::vector<double>& thresholds);

SymbolSeries discretize(const std::vector<double>& series, const DiscretizeSpec& spec,
                        const std::string& channel = "", double update_period = 0.0);

struct TeResult {
    double te_bits = 0.0;            // plug-in estimate, >= 0
    double effective_te_bits = 0.0;  // te_bits - mean shuffled TE; not floored
    int k = 1;                       // history length of the target series
    int l = 1;                       // history length of the source series
    long n_samples = 0;              // tuples entering the estimate
    std::string direction;
    double update_period = 0.0;
};

/// Plug-in transfer entropy TE(X -> Y) in bits with history lengths k (of y)
/// and l (of x). Throws std::invalid_argument on mismatched lengths and
/// InsufficientDataError when the series are shorter than k + l + 1.
TeResult transfer_entropy(const SymbolSeries& x, const SymbolSeries& y, int k = 1,
                          int l = 1);

/// Shuffle-corrected estimate: effective_te_bits = te_bits minus the mean TE
/// over n_shuffles time-shuffled copies of x. The shuffle preserves x's symbol
/// histogram exactly.
TeResult effective_te(const SymbolSeries& x, const SymbolSeries& y, int k, int l,
                      int n_shuffles, RngStream& rng);

/// Segment-aware variants: counts are pooled across segments and no tuple
/// straddles a segment boundary. Used for tables built from repeated runs.
TeResult transfer_entropy_segments(const std::vector<std::vector<int>>& x_segments,
                                   const std::vector<std::vector<int>>& y_segments,
                                   int x_bins, int y_bins, int k, int l);
TeResult effective_te_segments(const std::vector<std::vector<int>>& x_segments,
                               const std::vector<std::vector<int>>& y_segments,
                               int x_bins, int y_bins, int k, int l, int n_shuffles,
                               RngStream& rng);

/// Channel samples of one phase run, taken at exchange instants. The control
/// channels hold commanded values: transfer entropy measures what the link
/// carries, and the controller emits commands.
struct PhaseSamples {
    std::vector<double> temperature;
    std::vector<double> pressure;
    std::vector<double> heat_rate;
    std::vector<double> piston_rate;
};

struct TeSettings {
    DiscretizeSpec discretize;
    int history_k = 1;
    int history_l = 1;
    int n_shuffles = 100;
};

/// Transfer-entropy table over update periods and the two state->control
/// channel pairs (temperature->heat_rate, pressure->piston_rate). Each input
/// entry is (update period, runs at that period). Discretization thresholds
/// are computed per period over the pooled channel samples.
std::vector<TeResult> te_table(
    const std::vector<std::pair<double, std::vector<PhaseSamples>>>& runs_by_period,
    const TeSettings& settings, std::uint64_t shuffle_seed);

}  // namespace tocsim
