#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evsim/market.hpp"
#include "evsim/valuation.hpp"

namespace evsim {

enum class TargetKind { passenger, charger };

struct TargetRef {
    TargetKind kind = TargetKind::passenger;
    std::int64_t id = 0;

    bool operator==(const TargetRef&) const = default;
};

// One evaluated (vehicle, target) candidate. Only feasible pairs are stored.
struct PairEvaluation {
    std::int64_t vehicle_id = 0;
    TargetRef target;
    double benefit_usd = 0;                // pi (at r* for chargers)
    double compliance = 1;                 // C (1 for passengers)
    double incentive = 0;                  // r* (0 for passengers)
    double weight = 0;                     // C * pi, the matrix entry
    double pickup_s = 0;                   // travel to passenger or charger
    double delta_mvoc = 0;
    std::optional<ChargingPlan> plan;      // charger pairs only
};

struct BenefitMatrix {
    std::vector<std::int64_t> vehicle_ids;  // rows, ascending
    std::vector<TargetRef> targets;         // cols: passengers then chargers, ascending
    std::vector<PairEvaluation> pairs;      // feasible pairs, row-major order
};

struct IncentiveResult {
    double incentive = 0;
    double weighted = 0;   // C(r*) * pi(r*)
    double benefit = 0;    // pi(r*)
    double compliance = 0; // C(r*)
};

// Maximizes C(r) * pi(r) over r in [0, 1]: 101-point grid scan, golden
// section refinement inside the best bracket, plus the clamp kinks of C as
// extra candidates. Ties prefer the smaller r.
IncentiveResult optimal_incentive(const DriverAttributes& attrs, const ChargingPlan& plan,
                                  double delta_mvoc_c, const PricingConfig& pricing,
                                  double k);

// SoC feasibility, boundary inclusive.
bool passenger_feasible(const Vehicle& v, double pickup_s, double trip_s);
bool charger_feasible(const Vehicle& v, double travel_s);

// Evaluates every feasible pair of the snapshot: passengers with compliance
// 1, chargers with their per-pair optimal incentive. Present marginal values
// are computed once per vehicle, predicted ones once per pair.
BenefitMatrix build_benefit_matrix(const MarketSnapshot& snap, const Valuation& valuation,
                                   const PricingConfig& pricing);

struct Assignment {
    std::vector<std::pair<std::int64_t, TargetRef>> pairs;  // ascending vehicle id
};

// Maximum-weight matching over the feasible positive-weight pairs; leaving a
// vehicle unassigned is always admissible.
Assignment solve_assignment(const BenefitMatrix& matrix);

// Benchmark objective: maximize the sum of reciprocal pickup times over
// SoC-feasible vehicle-passenger pairs (1 s floor on the pickup time).
Assignment benchmark_assignment(const MarketSnapshot& snap, const Network& net);

struct ChargingOrder {
    std::int64_t vehicle_id = 0;
    std::int64_t charger_id = 0;
    double incentive = 0;
    ChargingPlan plan;
};

// Reactive policy: every vacant vehicle below 10% of capacity is sent to the
// charger minimizing travel plus queue time (snapshot availability; ties to
// the lower charger id). Vehicles with no reachable charger are skipped.
std::vector<ChargingOrder> reactive_charging_orders(const std::vector<Vehicle>& vacant,
                                                    const std::vector<Charger>& chargers,
                                                    const Network& net, double k,
                                                    bool full_incentive);

// Checks an assignment against the matching constraints: pairs drawn from the
// feasible set, each vehicle and each target used at most once, incentives in
// [0, 1], and stored benefits consistent with the benefit formulas.
void validate_assignment(const MarketSnapshot& snap, const BenefitMatrix& matrix,
                         const Assignment& assignment, const PricingConfig& pricing);

}  // namespace evsim
