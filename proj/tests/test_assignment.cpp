#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "evsim/assignment.hpp"
#include "evsim/rng.hpp"
#include "oracles.hpp"

using namespace evsim;
using assignment::Entry;
using assignment::solve_max_weight;

namespace {
// Dyadic weights (multiples of 1/64) make all sums exact in doubles, so
// "equals brute force" is well-defined.
double dyadic(EntityRng& rng, double lo, double hi) {
    return std::floor(rng.uniform(lo, hi) * 64.0) / 64.0;
}
}  // namespace

TEST_CASE("two-by-two example") {
    std::vector<Entry> entries = {
        {0, 0, {3, 0}}, {0, 1, {1, 0}}, {1, 0, {2, 0}}, {1, 1, {4, 0}}};
    const auto result = solve_max_weight(2, 2, entries);
    CHECK(result.total.value == 7.0);
    CHECK(result.row_to_col == std::vector<int>{0, 1});
}

TEST_CASE("all-negative weights leave everything unmatched") {
    std::vector<Entry> entries = {{0, 0, {-1, 0}}, {0, 1, {-5, 0}}, {1, 0, {-2, 0}}};
    const auto result = solve_max_weight(2, 2, entries);
    CHECK(result.total.value == 0.0);
    CHECK(result.row_to_col == std::vector<int>{-1, -1});
}

TEST_CASE("single positive entry is taken") {
    const auto result = solve_max_weight(1, 1, {{0, 0, {5, 0}}});
    CHECK(result.total.value == 5.0);
    CHECK(result.row_to_col == std::vector<int>{0});
}

TEST_CASE("empty instances") {
    CHECK(solve_max_weight(0, 0, {}).row_to_col.empty());
    CHECK(solve_max_weight(3, 0, {}).row_to_col == std::vector<int>{-1, -1, -1});
    CHECK(solve_max_weight(0, 3, {}).row_to_col.empty());
}

TEST_CASE("ties prefer the lower column index") {
    const auto result = solve_max_weight(1, 2, {{0, 0, {2, 0}}, {0, 1, {2, 0}}});
    CHECK(result.row_to_col == std::vector<int>{0});
}

TEST_CASE("a better matching displaces a greedy one") {
    // Row 0 prefers col 0 locally, but the global optimum swaps.
    std::vector<Entry> entries = {
        {0, 0, {10, 0}}, {0, 1, {9, 0}}, {1, 0, {10, 0}}, {1, 1, {1, 0}}};
    const auto result = solve_max_weight(2, 2, entries);
    CHECK(result.total.value == 19.0);
    CHECK(result.row_to_col == std::vector<int>{1, 0});
}

TEST_CASE("out-of-range entries throw") {
    CHECK_THROWS_AS(solve_max_weight(1, 1, {{1, 0, {1, 0}}}), std::out_of_range);
    CHECK_THROWS_AS(solve_max_weight(1, 1, {{0, -1, {1, 0}}}), std::out_of_range);
}

TEST_CASE("duplicate entries resolve to the better weight") {
    const auto result = solve_max_weight(1, 1, {{0, 0, {1, 0}}, {0, 0, {4, 0}}});
    CHECK(result.total.value == 4.0);
}

TEST_CASE("matches exhaustive enumeration on random rectangular instances") {
    EntityRng rng(424242, 0, 0);
    for (int trial = 0; trial < 120; ++trial) {
        const int rows = 1 + static_cast<int>(rng.uniform() * 7);
        const int cols = 1 + static_cast<int>(rng.uniform() * 7);
        std::vector<Entry> entries;
        std::vector<std::vector<double>> dense(
            static_cast<std::size_t>(rows),
            std::vector<double>(static_cast<std::size_t>(cols), std::nan("")));
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                if (rng.uniform() < 0.25) continue;  // sparse holes
                const double w = dyadic(rng, -8.0, 8.0);
                entries.push_back({r, c, {w, 0}});
                dense[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = w;
            }
        }
        const auto result = solve_max_weight(rows, cols, entries);
        const double expect = oracle::max_weight_brute(dense);
        CHECK(result.total.value == expect);

        // the reported matching re-sums to the reported total
        double recomputed = 0;
        for (int r = 0; r < rows; ++r) {
            const int c = result.row_to_col[static_cast<std::size_t>(r)];
            if (c >= 0) recomputed += dense[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
        CHECK(recomputed == result.total.value);
    }
}

TEST_CASE("lexicographic tiebreak level is honored") {
    // Equal primary values; the secondary level decides.
    std::vector<Entry> entries = {{0, 0, {1, 1}}, {0, 1, {1, 5}}};
    const auto result = solve_max_weight(1, 2, entries);
    CHECK(result.row_to_col == std::vector<int>{1});
    CHECK(result.total.tiebreak == 5.0);

    // Secondary never overrides primary.
    entries = {{0, 0, {2, 0}}, {0, 1, {1, 100}}};
    CHECK(solve_max_weight(1, 2, entries).row_to_col == std::vector<int>{0});
}

TEST_CASE("lexicographic totals match enumeration on random instances") {
    EntityRng rng(98765, 0, 0);
    for (int trial = 0; trial < 60; ++trial) {
        const int rows = 1 + static_cast<int>(rng.uniform() * 5);
        const int cols = 1 + static_cast<int>(rng.uniform() * 5);
        std::vector<Entry> entries;
        // integral weights; small primary range forces frequent ties
        std::vector<std::vector<assignment::Weight>> dense(
            static_cast<std::size_t>(rows),
            std::vector<assignment::Weight>(static_cast<std::size_t>(cols),
                                            {std::nan(""), 0}));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                if (rng.uniform() < 0.2) continue;
                const double primary = 1.0 + std::floor(rng.uniform() * 3.0);
                const double secondary = std::floor(rng.uniform() * 1000.0);
                entries.push_back({r, c, {primary, secondary}});
                dense[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = {primary,
                                                                                   secondary};
            }
        const auto result = solve_max_weight(rows, cols, entries);

        // exhaustive lexicographic maximum
        assignment::Weight best{0, 0};
        std::vector<bool> used(static_cast<std::size_t>(cols), false);
        auto rec = [&](auto&& self, int row, assignment::Weight acc) -> void {
            if (row == rows) {
                if (best < acc) best = acc;
                return;
            }
            self(self, row + 1, acc);
            for (int c = 0; c < cols; ++c) {
                if (used[static_cast<std::size_t>(c)]) continue;
                const auto& w = dense[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
                if (std::isnan(w.value) || w.value <= 0) continue;
                used[static_cast<std::size_t>(c)] = true;
                self(self, row + 1, acc + w);
                used[static_cast<std::size_t>(c)] = false;
            }
        };
        rec(rec, 0, {0, 0});
        CHECK(result.total == best);
    }
}
