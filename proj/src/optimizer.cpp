#include "evsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "evsim/assignment.hpp"
#include "evsim/behavior.hpp"
#include "evsim/error.hpp"

namespace evsim {

namespace {

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace

IncentiveResult optimal_incentive(const DriverAttributes& attrs, const ChargingPlan& plan,
                                  double delta_mvoc_c, const PricingConfig& pricing,
                                  double k) {
    const std::function<double(double)> g = [&](double r) {
        return compliance(attrs, r, plan.total_s) *
               charging_benefit(plan, r, delta_mvoc_c, pricing, k);
    };

    double best_r = 0;
    double best_g = g(0);
    auto consider = [&](double r) {
        if (r < 0 || r > 1) return;
        const double val = g(r);
        if (val > best_g) {
            best_g = val;
            best_r = r;
        }
    };
    for (int i = 1; i <= 100; ++i) consider(i / 100.0);

    // The clamps of C(r) put kinks where the log argument crosses 1 and e;
    // g can peak exactly there.
    const double charge_term = attrs.gamma1 + attrs.gamma3 * plan.total_s / kSecondsPerHour;
    if (attrs.gamma2 != 0) {
        consider((1.0 - charge_term) / attrs.gamma2);
        consider((std::numbers::e - charge_term) / attrs.gamma2);
    }

    const double lo = std::max(0.0, best_r - 0.01);
    const double hi = std::min(1.0, best_r + 0.01);
    consider(golden_section_max(g, lo, hi, 1e-7));

    IncentiveResult out;
    out.incentive = best_r;
    out.weighted = best_g;
    out.compliance = compliance(attrs, best_r, plan.total_s);
    out.benefit = charging_benefit(plan, best_r, delta_mvoc_c, pricing, k);
    return out;
}

bool passenger_feasible(const Vehicle& v, double pickup_s, double trip_s) {
    return v.soc_kwh >= energy_kwh(v.consumption_kw, pickup_s + trip_s);
}

bool charger_feasible(const Vehicle& v, double travel_s) {
    return v.soc_kwh >= energy_kwh(v.consumption_kw, travel_s);
}

BenefitMatrix build_benefit_matrix(const MarketSnapshot& snap, const Valuation& valuation,
                                   const PricingConfig& pricing) {
    BenefitMatrix matrix;
    matrix.vehicle_ids.reserve(snap.vacant.size());
    for (const Vehicle& v : snap.vacant) matrix.vehicle_ids.push_back(v.id);
    for (const PassengerRequest& p : snap.waiting)
        matrix.targets.push_back({TargetKind::passenger, p.id});
    for (const Charger& ch : snap.chargers)
        matrix.targets.push_back({TargetKind::charger, ch.id});

    const Network& net = valuation.network();
    for (const Vehicle& v : snap.vacant) {
        const double rho_present = valuation.present_mvoc(snap, v);

        for (const PassengerRequest& p : snap.waiting) {
            const double pickup_s = net.travel_time(v.location, p.origin);
            if (!passenger_feasible(v, pickup_s, p.trip_time_s)) continue;
            const double rho_hat = valuation.predicted_mvoc_passenger(snap, v, p, pickup_s);
            const double d_rho = delta_mvoc(rho_present, rho_hat);
            PairEvaluation pair;
            pair.vehicle_id = v.id;
            pair.target = {TargetKind::passenger, p.id};
            pair.benefit_usd =
                passenger_benefit(v, p, pickup_s, snap.clock_s, d_rho, pricing);
            pair.compliance = 1;
            pair.incentive = 0;
            pair.weight = pair.benefit_usd;
            pair.pickup_s = pickup_s;
            pair.delta_mvoc = d_rho;
            matrix.pairs.push_back(pair);
        }

        for (const Charger& ch : snap.chargers) {
            const double travel_s = net.travel_time(v.location, ch.location);
            const auto plan = plan_charging(v, ch, snap.clock_s, travel_s);
            if (!plan) continue;
            const double rho_hat = valuation.predicted_mvoc_charging(snap, v, ch, *plan);
            const double d_rho = delta_mvoc(rho_present, rho_hat);
            const auto inc = optimal_incentive(v.attrs, *plan, d_rho, pricing, snap.clock_s);
            PairEvaluation pair;
            pair.vehicle_id = v.id;
            pair.target = {TargetKind::charger, ch.id};
            pair.benefit_usd = inc.benefit;
            pair.compliance = inc.compliance;
            pair.incentive = inc.incentive;
            pair.weight = inc.weighted;
            pair.pickup_s = travel_s;
            pair.delta_mvoc = d_rho;
            pair.plan = *plan;
            matrix.pairs.push_back(pair);
        }
    }
    return matrix;
}

Assignment solve_assignment(const BenefitMatrix& matrix) {
    std::map<std::int64_t, int> row_of;
    for (int i = 0; i < static_cast<int>(matrix.vehicle_ids.size()); ++i)
        row_of[matrix.vehicle_ids[static_cast<std::size_t>(i)]] = i;
    std::map<std::pair<int, std::int64_t>, int> col_of;
    for (int j = 0; j < static_cast<int>(matrix.targets.size()); ++j) {
        const TargetRef& t = matrix.targets[static_cast<std::size_t>(j)];
        col_of[{static_cast<int>(t.kind), t.id}] = j;
    }

    std::vector<assignment::Entry> entries;
    entries.reserve(matrix.pairs.size());
    for (const PairEvaluation& pair : matrix.pairs)
        entries.push_back({row_of.at(pair.vehicle_id),
                           col_of.at({static_cast<int>(pair.target.kind), pair.target.id}),
                           {pair.weight, 0}});

    const auto solved = assignment::solve_max_weight(
        static_cast<int>(matrix.vehicle_ids.size()),
        static_cast<int>(matrix.targets.size()), entries);

    Assignment out;
    for (int i = 0; i < static_cast<int>(matrix.vehicle_ids.size()); ++i) {
        const int j = solved.row_to_col[static_cast<std::size_t>(i)];
        if (j < 0) continue;
        out.pairs.emplace_back(matrix.vehicle_ids[static_cast<std::size_t>(i)],
                               matrix.targets[static_cast<std::size_t>(j)]);
    }
    return out;
}

Assignment benchmark_assignment(const MarketSnapshot& snap, const Network& net) {
    std::vector<assignment::Entry> entries;
    for (int i = 0; i < static_cast<int>(snap.vacant.size()); ++i) {
        const Vehicle& v = snap.vacant[static_cast<std::size_t>(i)];
        for (int j = 0; j < static_cast<int>(snap.waiting.size()); ++j) {
            const PassengerRequest& p = snap.waiting[static_cast<std::size_t>(j)];
            const double pickup_s = net.travel_time(v.location, p.origin);
            if (!passenger_feasible(v, pickup_s, p.trip_time_s)) continue;
            entries.push_back({i, j, {1.0 / std::max(pickup_s, 1.0), 0}});
        }
    }
    const auto solved = assignment::solve_max_weight(
        static_cast<int>(snap.vacant.size()),
        static_cast<int>(snap.waiting.size()), entries);

    Assignment out;
    for (int i = 0; i < static_cast<int>(snap.vacant.size()); ++i) {
        const int j = solved.row_to_col[static_cast<std::size_t>(i)];
        if (j < 0) continue;
        out.pairs.emplace_back(snap.vacant[static_cast<std::size_t>(i)].id,
                               TargetRef{TargetKind::passenger,
                                         snap.waiting[static_cast<std::size_t>(j)].id});
    }
    return out;
}

std::vector<ChargingOrder> reactive_charging_orders(const std::vector<Vehicle>& vacant,
                                                    const std::vector<Charger>& chargers,
                                                    const Network& net, double k,
                                                    bool full_incentive) {
    std::vector<ChargingOrder> orders;
    const double r = full_incentive ? 1.0 : 0.0;
    for (const Vehicle& v : vacant) {
        if (v.soc_kwh >= 0.1 * v.soc_max_kwh) continue;
        const Charger* best = nullptr;
        double best_cost = std::numeric_limits<double>::infinity();
        ChargingPlan best_plan;
        for (const Charger& ch : chargers) {
            const double travel_s = net.travel_time(v.location, ch.location);
            const auto plan = plan_charging(v, ch, k, travel_s);
            if (!plan) continue;
            const double cost = plan->travel_s + plan->queue_s;
            if (cost < best_cost) {
                best_cost = cost;
                best = &ch;
                best_plan = *plan;
            }
        }
        if (best == nullptr) continue;  // unreachable chargers; exit decisions will follow
        orders.push_back({v.id, best->id, r, best_plan});
    }
    return orders;
}

void validate_assignment(const MarketSnapshot& snap, const BenefitMatrix& matrix,
                         const Assignment& assignment, const PricingConfig& pricing) {
    std::map<std::pair<std::int64_t, std::pair<int, std::int64_t>>, const PairEvaluation*> by_key;
    for (const PairEvaluation& pair : matrix.pairs)
        by_key[{pair.vehicle_id, {static_cast<int>(pair.target.kind), pair.target.id}}] = &pair;

    std::map<std::int64_t, const Vehicle*> vehicle_of;
    for (const Vehicle& v : snap.vacant) vehicle_of[v.id] = &v;
    std::map<std::int64_t, const PassengerRequest*> passenger_of;
    for (const PassengerRequest& p : snap.waiting) passenger_of[p.id] = &p;

    std::set<std::int64_t> used_vehicles;
    std::set<std::pair<int, std::int64_t>> used_targets;
    for (const auto& [vehicle_id, target] : assignment.pairs) {
        if (!used_vehicles.insert(vehicle_id).second)
            throw Error("assignment uses vehicle " + std::to_string(vehicle_id) + " twice");
        if (!used_targets.insert({static_cast<int>(target.kind), target.id}).second)
            throw Error("assignment uses a target twice");

        auto it = by_key.find({vehicle_id, {static_cast<int>(target.kind), target.id}});
        if (it == by_key.end())
            throw Error("assignment pairs vehicle " + std::to_string(vehicle_id) +
                        " with a target that was never evaluated as feasible");
        const PairEvaluation& pair = *it->second;

        if (pair.incentive < 0 || pair.incentive > 1)
            throw Error("incentive outside [0, 1]");
        if (pair.compliance < 0 || pair.compliance > 1)
            throw Error("compliance outside [0, 1]");

        const Vehicle* v = vehicle_of.at(vehicle_id);
        if (target.kind == TargetKind::passenger) {
            const PassengerRequest* p = passenger_of.at(target.id);
            if (!passenger_feasible(*v, pair.pickup_s, p->trip_time_s))
                throw Error("assigned passenger pair violates SoC feasibility");
            const double expect = passenger_benefit(*v, *p, pair.pickup_s, snap.clock_s,
                                                    pair.delta_mvoc, pricing);
            if (std::abs(expect - pair.benefit_usd) > 1e-9)
                throw Error("stored passenger benefit diverges from the formula");
            if (pair.compliance != 1)
                throw Error("passenger pair must have compliance 1");
        } else {
            if (!pair.plan) throw Error("charger pair lacks a charging plan");
            if (!charger_feasible(*v, pair.plan->travel_s))
                throw Error("assigned charger pair violates SoC feasibility");
            const double expect = charging_benefit(*pair.plan, pair.incentive,
                                                   pair.delta_mvoc, pricing, snap.clock_s);
            if (std::abs(expect - pair.benefit_usd) > 1e-9)
                throw Error("stored charging benefit diverges from the formula");
        }
    }
}

}  // namespace evsim
