#include "evsim/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace evsim::assignment {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// Hungarian algorithm (successive shortest augmenting paths with potentials)
// on the cost matrix c = -weight, extended with one zero-cost dummy column
// per row so the matching is perfect on rows while real columns stay
// optional. Costs of absent pairs are +inf on the primary component; deltas
// along the augmenting search stay finite because the active row's own dummy
// is always reachable.
Result solve_max_weight(int rows, int cols, const std::vector<Entry>& entries) {
    Result result;
    result.row_to_col.assign(static_cast<std::size_t>(rows), -1);
    if (rows == 0) return result;

    const int m = cols + rows;  // real columns then dummies
    const Weight inf_cost{kInf, 0};
    std::vector<std::vector<Weight>> cost(
        static_cast<std::size_t>(rows + 1),
        std::vector<Weight>(static_cast<std::size_t>(m + 1), inf_cost));
    std::vector<std::vector<bool>> present(
        static_cast<std::size_t>(rows + 1),
        std::vector<bool>(static_cast<std::size_t>(m + 1), false));

    for (const Entry& e : entries) {
        if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
            throw std::out_of_range("assignment entry index out of range");
        if (!(e.weight.value > 0)) continue;  // never force non-positive pairs
        auto& cell = cost[static_cast<std::size_t>(e.row + 1)][static_cast<std::size_t>(e.col + 1)];
        const Weight candidate{-e.weight.value, -e.weight.tiebreak};
        auto is_present = present[static_cast<std::size_t>(e.row + 1)][static_cast<std::size_t>(e.col + 1)];
        if (!is_present || candidate < cell) {
            cell = candidate;
            present[static_cast<std::size_t>(e.row + 1)][static_cast<std::size_t>(e.col + 1)] = true;
        }
    }
    for (int i = 1; i <= rows; ++i)
        cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols + i)] = Weight{0, 0};

    std::vector<Weight> u(static_cast<std::size_t>(rows + 1));
    std::vector<Weight> v(static_cast<std::size_t>(m + 1));
    std::vector<int> matched_row(static_cast<std::size_t>(m + 1), 0);
    std::vector<int> way(static_cast<std::size_t>(m + 1), 0);

    for (int i = 1; i <= rows; ++i) {
        matched_row[0] = i;
        int j0 = 0;
        std::vector<Weight> minv(static_cast<std::size_t>(m + 1), inf_cost);
        std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = matched_row[static_cast<std::size_t>(j0)];
            int j1 = -1;
            Weight delta = inf_cost;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const Weight& c = cost[static_cast<std::size_t>(i0)][static_cast<std::size_t>(j)];
                if (c.value != kInf) {
                    const Weight cur = c - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                    if (cur < minv[static_cast<std::size_t>(j)]) {
                        minv[static_cast<std::size_t>(j)] = cur;
                        way[static_cast<std::size_t>(j)] = j0;
                    }
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(matched_row[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else if (minv[static_cast<std::size_t>(j)].value != kInf) {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (matched_row[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            matched_row[static_cast<std::size_t>(j0)] = matched_row[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    for (int j = 1; j <= cols; ++j) {
        const int r = matched_row[static_cast<std::size_t>(j)];
        if (r != 0 && present[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)])
            result.row_to_col[static_cast<std::size_t>(r - 1)] = j - 1;
    }

    // Canonical total: summed in row order from the original weights.
    for (int r = 0; r < rows; ++r) {
        const int j = result.row_to_col[static_cast<std::size_t>(r)];
        if (j < 0) continue;
        const Weight& c = cost[static_cast<std::size_t>(r + 1)][static_cast<std::size_t>(j + 1)];
        result.total += Weight{-c.value, -c.tiebreak};
    }
    return result;
}

}  // namespace evsim::assignment
