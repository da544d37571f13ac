#pragma once

#include <vector>

namespace evsim::assignment {

// Two-level lexicographic weight: maximize `value`, then `tiebreak`.
// Componentwise addition and lexicographic order form an ordered group, so
// the matching algorithm runs on it unchanged. Callers that need bit-exact
// reproducibility against enumeration oracles pass integral components.
struct Weight {
    double value = 0;
    double tiebreak = 0;

    Weight operator+(const Weight& o) const { return {value + o.value, tiebreak + o.tiebreak}; }
    Weight operator-(const Weight& o) const { return {value - o.value, tiebreak - o.tiebreak}; }
    Weight& operator+=(const Weight& o) { value += o.value; tiebreak += o.tiebreak; return *this; }
    Weight& operator-=(const Weight& o) { value -= o.value; tiebreak -= o.tiebreak; return *this; }
    bool operator<(const Weight& o) const {
        if (value != o.value) return value < o.value;
        return tiebreak < o.tiebreak;
    }
    bool operator==(const Weight& o) const { return value == o.value && tiebreak == o.tiebreak; }
};

struct Entry {
    int row = 0;
    int col = 0;
    Weight weight;
};

struct Result {
    std::vector<int> row_to_col;  // -1 = no action
    Weight total;                 // summed over matched pairs in row order
};

// Maximum-weight bipartite matching in which any row or column may stay
// unmatched: every row gets an implicit zero-weight no-action option, and
// entries with value <= 0 are never used. Deterministic: on ties the lowest
// column index is preferred, rows are processed in ascending order.
Result solve_max_weight(int rows, int cols, const std::vector<Entry>& entries);

}  // namespace evsim::assignment
