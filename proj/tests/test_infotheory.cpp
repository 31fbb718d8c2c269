#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tocsim/errors.hpp"
#include "tocsim/infotheory.hpp"
#include "te_oracle.hpp"

using namespace tocsim;

namespace {

SymbolSeries series_of(std::vector<int> symbols, int n_bins) {
    SymbolSeries s;
    s.symbols = std::move(symbols);
    s.n_bins = n_bins;
    return s;
}

std::vector<int> random_bits(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<int> bits(n);
    for (auto& b : bits) b = rng.next_unit() < 0.5 ? 0 : 1;
    return bits;
}

}  // namespace

TEST_CASE("a constant series maps to all-zero symbols") {
    const std::vector<double> series(64, 3.25);
    const auto out = discretize(series, DiscretizeSpec{});
    for (const int s : out.symbols) CHECK(s == 0);
}

TEST_CASE("default quantiles split 1..100 into 5/90/5") {
    std::vector<double> series;
    for (int i = 1; i <= 100; ++i) series.push_back(i);
    const auto out = discretize(series, DiscretizeSpec{});
    int counts[3] = {0, 0, 0};
    for (const int s : out.symbols) ++counts[s];
    CHECK(counts[0] == 5);
    CHECK(counts[1] == 90);
    CHECK(counts[2] == 5);
}

TEST_CASE("symbols are invariant under strictly increasing transforms") {
    RngStream rng(2);
    std::vector<double> series;
    for (int i = 0; i < 500; ++i) series.push_back(rng.next_unit() * 10.0 - 5.0);
    const auto base = discretize(series, DiscretizeSpec{});

    std::vector<double> scaled;
    std::vector<double> warped;
    for (const double v : series) {
        scaled.push_back(2.0 * v + 3.0);
        warped.push_back(std::exp(v / 4.0));
    }
    CHECK(discretize(scaled, DiscretizeSpec{}).symbols == base.symbols);
    CHECK(discretize(warped, DiscretizeSpec{}).symbols == base.symbols);
}

TEST_CASE("discretize validates its inputs") {
    CHECK_THROWS_AS(discretize({1.0}, DiscretizeSpec{}), std::invalid_argument);
    DiscretizeSpec bad;
    bad.n_bins = 4;  // quantile list no longer matches
    CHECK_THROWS_AS(discretize({1.0, 2.0, 3.0}, bad), std::invalid_argument);
}

TEST_CASE("independent processes carry no transfer entropy") {
    const std::size_t n = 100000;
    const auto x = series_of(random_bits(n, 11), 2);
    const auto y = series_of(random_bits(n, 22), 2);
    const auto result = transfer_entropy(x, y, 1, 1);
    CHECK(result.te_bits >= 0.0);
    CHECK(result.te_bits <= 0.01);

    RngStream rng(33);
    const auto eff = effective_te(x, y, 1, 1, 20, rng);
    CHECK(std::abs(eff.effective_te_bits) <= 0.005);
}

TEST_CASE("a one-step binary copy transfers exactly one bit") {
    const std::size_t n = 100000;
    const auto bits = random_bits(n, 44);
    std::vector<int> y(n, 0);
    for (std::size_t t = 0; t + 1 < n; ++t) y[t + 1] = bits[t];
    const auto sx = series_of(bits, 2);
    const auto sy = series_of(y, 2);
    const auto result = transfer_entropy(sx, sy, 1, 1);
    CHECK(std::abs(result.te_bits - 1.0) < 0.05);
    CHECK(result.n_samples == static_cast<long>(n) - 1);

    RngStream rng(55);
    const auto eff = effective_te(sx, sy, 1, 1, 10, rng);
    CHECK(std::abs(eff.effective_te_bits - eff.te_bits) < 0.01);  // shuffles ~0
}

TEST_CASE("a source adds nothing when the target determines itself") {
    const std::size_t n = 5000;
    const auto x = series_of(random_bits(n, 66), 2);
    std::vector<int> y(n);
    for (std::size_t t = 0; t < n; ++t) y[t] = static_cast<int>(t % 2);  // y(t+1) = f(y(t))
    const auto result = transfer_entropy(x, series_of(y, 2), 1, 1);
    CHECK(result.te_bits == 0.0);
}

TEST_CASE("te stays within its information-theoretic bounds") {
    RngStream rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_bins = 2 + static_cast<int>(rng.next_below(3));
        std::vector<int> x(400);
        std::vector<int> y(400);
        for (auto& s : x) s = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_bins)));
        for (auto& s : y) s = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_bins)));
        const auto result = transfer_entropy(series_of(x, n_bins), series_of(y, n_bins), 1, 1);
        CHECK(result.te_bits >= 0.0);
        CHECK(result.te_bits <= std::log2(n_bins) + 1e-12);
    }
}

TEST_CASE("the estimator agrees with the brute-force oracle") {
    // Deterministic copy, independent noise, and random multi-bin series with
    // deeper histories all have to match to 1e-12.
    const auto bits = random_bits(20000, 88);
    std::vector<int> copy(bits.size(), 0);
    for (std::size_t t = 0; t + 1 < bits.size(); ++t) copy[t + 1] = bits[t];
    const double lib_copy =
        transfer_entropy(series_of(bits, 2), series_of(copy, 2), 1, 1).te_bits;
    CHECK(std::abs(lib_copy - te_oracle::transfer_entropy_bits(bits, copy, 2, 1, 1)) < 1e-12);

    const auto xa = random_bits(20000, 99);
    const auto ya = random_bits(20000, 111);
    const double lib_ind =
        transfer_entropy(series_of(xa, 2), series_of(ya, 2), 1, 1).te_bits;
    CHECK(std::abs(lib_ind - te_oracle::transfer_entropy_bits(xa, ya, 2, 1, 1)) < 1e-12);

    RngStream rng(123);
    std::vector<int> x3(3000);
    std::vector<int> y3(3000);
    for (std::size_t t = 0; t < x3.size(); ++t) {
        x3[t] = static_cast<int>(rng.next_below(3));
        y3[t] = (t > 0 && rng.next_unit() < 0.7) ? x3[t - 1] : static_cast<int>(rng.next_below(3));
    }
    const double lib_32 =
        transfer_entropy(series_of(x3, 3), series_of(y3, 3), 2, 1).te_bits;
    CHECK(std::abs(lib_32 - te_oracle::transfer_entropy_bits(x3, y3, 3, 2, 1)) < 1e-12);
}

TEST_CASE("segment pooling matches the oracle and the flat estimator") {
    RngStream rng(321);
    std::vector<std::vector<int>> xs;
    std::vector<std::vector<int>> ys;
    for (int seg = 0; seg < 5; ++seg) {
        std::vector<int> x(40 + 10 * seg);
        std::vector<int> y(x.size());
        for (std::size_t t = 0; t < x.size(); ++t) {
            x[t] = static_cast<int>(rng.next_below(2));
            y[t] = t > 0 ? x[t - 1] : 0;
        }
        xs.push_back(x);
        ys.push_back(y);
    }
    const auto pooled = transfer_entropy_segments(xs, ys, 2, 2, 1, 1);
    CHECK(std::abs(pooled.te_bits - te_oracle::transfer_entropy_bits(xs, ys, 2, 1, 1)) < 1e-12);

    const auto flat = transfer_entropy(series_of(xs[0], 2), series_of(ys[0], 2), 1, 1);
    const auto one = transfer_entropy_segments({xs[0]}, {ys[0]}, 2, 2, 1, 1);
    CHECK(flat.te_bits == one.te_bits);
}

TEST_CASE("estimator rejects malformed inputs") {
    const auto x = series_of({0, 1, 0, 1}, 2);
    const auto y_short = series_of({0, 1, 0}, 2);
    CHECK_THROWS_AS(transfer_entropy(x, y_short, 1, 1), std::invalid_argument);
    const auto tiny = series_of({0, 1}, 2);
    CHECK_THROWS_AS(transfer_entropy(tiny, tiny, 1, 1), InsufficientDataError);
    const auto bad = series_of({0, 3, 0, 1}, 2);
    CHECK_THROWS_AS(transfer_entropy(bad, x, 1, 1), std::invalid_argument);
}

TEST_CASE("shuffle count trades variance, not expectation") {
    const auto x = series_of(random_bits(20000, 777), 2);
    const auto y = series_of(random_bits(20000, 888), 2);
    RngStream r1(1);
    RngStream r2(1);
    const auto one = effective_te(x, y, 1, 1, 1, r1);
    const auto many = effective_te(x, y, 1, 1, 50, r2);
    CHECK(one.te_bits == many.te_bits);  // raw estimate is shuffle independent
    CHECK(std::abs(one.effective_te_bits - many.effective_te_bits) < 0.01);
}

TEST_CASE("effective te is deterministic per seed") {
    const auto x = series_of(random_bits(5000, 1234), 2);
    const auto y = series_of(random_bits(5000, 4321), 2);
    RngStream r1(9);
    RngStream r2(9);
    const auto a = effective_te(x, y, 1, 1, 25, r1);
    const auto b = effective_te(x, y, 1, 1, 25, r2);
    CHECK(a.effective_te_bits == b.effective_te_bits);
}

TEST_CASE("te table has one cell per period and channel pair") {
    // Two tiny synthetic runs per period; just the structural contract.
    std::vector<std::pair<double, std::vector<PhaseSamples>>> runs_by_period;
    RngStream rng(31);
    for (const double period : {0.1, 0.075, 0.05}) {
        std::vector<PhaseSamples> runs;
        for (int r = 0; r < 3; ++r) {
            PhaseSamples samples;
            for (int t = 0; t < 40; ++t) {
                const double v = rng.next_unit();
                samples.temperature.push_back(v);
                samples.pressure.push_back(rng.next_unit());
                samples.heat_rate.push_back(5.0 - 2.0 * v);
                samples.piston_rate.push_back(rng.next_unit());
            }
            runs.push_back(samples);
        }
        runs_by_period.emplace_back(period, runs);
    }
    const auto table = te_table(runs_by_period, TeSettings{}, 7);
    REQUIRE(table.size() == 6);
    for (const auto& cell : table) {
        CHECK(cell.te_bits >= 0.0);
        CHECK(cell.te_bits <= std::log2(3.0) + 1e-12);
        CHECK(cell.n_samples > 0);
    }
    CHECK(table[0].direction == "temperature->heat_rate");
    CHECK(table[1].direction == "pressure->piston_rate");
    CHECK(table[0].update_period == 0.1);
    CHECK(table[5].update_period == 0.05);
}
