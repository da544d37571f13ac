#include "evsim/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "evsim/assignment.hpp"
#include "evsim/error.hpp"

namespace evsim {

namespace {
// Fixed-point reciprocal-pickup weight. Integral doubles keep every sum and
// comparison inside the matcher exact.
double reciprocal_weight(double pickup_s) {
    return std::floor(0x1.0p32 / std::max(pickup_s, 1.0));
}

double trip_ms(double trip_s) { return std::round(trip_s * 1000.0); }
}  // namespace

double recharge_amount(const Vehicle& v, double travel_s) {
    const double en_route = energy_kwh(v.consumption_kw, travel_s);
    if (v.soc_kwh < en_route)
        throw Error("charging trip infeasible: SoC cannot reach the charger");
    return 0.9 * v.soc_max_kwh - (v.soc_kwh - en_route);
}

double queue_time(const Charger& ch, double k, double travel_s) {
    return std::max(0.0, ch.next_available_s - (k + travel_s));
}

std::optional<ChargingPlan> plan_charging(const Vehicle& v, const Charger& ch,
                                          double k, double travel_s) {
    const double en_route = energy_kwh(v.consumption_kw, travel_s);
    if (v.soc_kwh < en_route) return std::nullopt;
    ChargingPlan plan;
    plan.travel_s = travel_s;
    plan.queue_s = queue_time(ch, k, travel_s);
    plan.recharge_kwh = 0.9 * v.soc_max_kwh - (v.soc_kwh - en_route);
    if (plan.recharge_kwh < 0) return std::nullopt;  // already above the 90% target
    plan.total_s = plan.travel_s + plan.queue_s +
                   plan.recharge_kwh / ch.speed_kw * kSecondsPerHour;
    return plan;
}

double passenger_benefit(const Vehicle& v, const PassengerRequest& p, double pickup_s,
                         double clock_s, double delta_mvoc_p, const PricingConfig& pricing) {
    const double consumed = energy_kwh(v.consumption_kw, pickup_s + p.trip_time_s);
    if (v.soc_kwh < consumed)
        throw Error("passenger trip infeasible: SoC cannot cover pickup plus trip");
    const double match_wait_s = clock_s - p.request_time_s;
    return (pricing.fare_per_s - pricing.wage_per_s) * p.trip_time_s +
           pricing.vot_match_per_s * match_wait_s -
           pricing.vot_pickup_per_s * pickup_s + delta_mvoc_p * consumed;
}

double charging_benefit(const ChargingPlan& plan, double r, double delta_mvoc_c,
                        const PricingConfig& pricing, double k) {
    return charging_price(pricing, r, k) * plan.recharge_kwh -
           pricing.vot_charge_per_s * plan.total_s + delta_mvoc_c * plan.recharge_kwh;
}

ZoneMatchOutcome zone_match(const Zone& zone, const Network& net,
                            double fare_margin_per_s, double max_pickup_s) {
    ZoneMatchOutcome out;
    out.vehicle_to_passenger.assign(zone.vehicles.size(), -1);
    if (zone.vehicles.empty() || zone.passengers.empty()) return out;

    std::vector<assignment::Entry> entries;
    for (int vi = 0; vi < static_cast<int>(zone.vehicles.size()); ++vi) {
        const ZoneVehicle& v = zone.vehicles[static_cast<std::size_t>(vi)];
        for (int pi = 0; pi < static_cast<int>(zone.passengers.size()); ++pi) {
            const ZonePassenger& p = zone.passengers[static_cast<std::size_t>(pi)];
            const double pickup_s = net.travel_time(v.node, p.origin);
            if (pickup_s > max_pickup_s) continue;
            if (v.soc_kwh < energy_kwh(v.consumption_kw, pickup_s + p.trip_time_s))
                continue;
            entries.push_back({vi, pi,
                               {reciprocal_weight(pickup_s), trip_ms(p.trip_time_s)}});
        }
    }

    const auto solved = assignment::solve_max_weight(
        static_cast<int>(zone.vehicles.size()),
        static_cast<int>(zone.passengers.size()), entries);
    out.vehicle_to_passenger = solved.row_to_col;
    out.profit_usd = fare_margin_per_s * (solved.total.tiebreak / 1000.0);
    return out;
}

double local_market_profit(const Zone& zone, const Network& net,
                           double fare_margin_per_s, double max_pickup_s) {
    return zone_match(zone, net, fare_margin_per_s, max_pickup_s).profit_usd;
}

Zone Valuation::present_zone(const MarketSnapshot& snap, NodeId center) const {
    Zone zone;
    zone.center = center;
    zone.radius_s = params_.zone_radius_s;
    for (const Vehicle& v : snap.vacant)
        if (net_.travel_time(center, v.location) <= params_.zone_radius_s)
            zone.vehicles.push_back({v.id, v.location, v.soc_kwh, v.soc_max_kwh,
                                     v.consumption_kw});
    for (const PassengerRequest& p : snap.waiting)
        if (net_.travel_time(center, p.origin) <= params_.zone_radius_s)
            zone.passengers.push_back({p.id, p.origin, p.trip_time_s});
    return zone;
}

double Valuation::present_mvoc(const MarketSnapshot& snap, const Vehicle& anchor) const {
    if (anchor.soc_kwh <= 0) return 0;  // degenerate anchor, defined as 0
    Zone zone = present_zone(snap, anchor.location);
    const auto base = zone_match(zone, net_, params_.fare_margin_per_s,
                                 params_.max_zone_pickup_s);

    int anchor_index = -1;
    for (int i = 0; i < static_cast<int>(zone.vehicles.size()); ++i)
        if (zone.vehicles[static_cast<std::size_t>(i)].id == anchor.id) anchor_index = i;
    if (anchor_index < 0 ||
        base.vehicle_to_passenger[static_cast<std::size_t>(anchor_index)] < 0)
        return 0;  // not utilised in the initial local matching

    Zone without = zone;
    without.vehicles.erase(without.vehicles.begin() + anchor_index);
    const double loo_profit = local_market_profit(without, net_, params_.fare_margin_per_s,
                                                  params_.max_zone_pickup_s);
    return (base.profit_usd - loo_profit) / anchor.soc_kwh;
}

Zone Valuation::predicted_zone(const MarketSnapshot& snap, NodeId center, double k_prime,
                               std::int64_t exclude_vehicle) const {
    Zone zone;
    zone.center = center;
    zone.radius_s = params_.zone_radius_s;

    for (const SupplyProjection& proj : snap.projections) {
        if (proj.vehicle_id == exclude_vehicle) continue;
        if (proj.vacant_at_s > k_prime) continue;
        if (net_.travel_time(center, proj.node) > params_.zone_radius_s) continue;
        zone.vehicles.push_back({proj.vehicle_id, proj.node, proj.soc_kwh,
                                 proj.soc_max_kwh, proj.consumption_kw});
    }

    if (k_prime == snap.clock_s) {
        // Zero horizon: the prediction is the observation.
        for (const PassengerRequest& p : snap.waiting)
            if (net_.travel_time(center, p.origin) <= params_.zone_radius_s)
                zone.passengers.push_back({p.id, p.origin, p.trip_time_s});
    } else if (demand_ != nullptr) {
        const auto nodes = net_.nodes_within(center, params_.zone_radius_s);
        const auto expected = demand_->expected_waiting(nodes, k_prime);
        for (long i = 0; i < expected.expected_count; ++i)
            zone.passengers.push_back({-(i + 1), center, expected.mean_trip_s});
    }
    return zone;
}

double Valuation::add_one_in_gain(const Zone& zone, const ZoneVehicle& candidate) const {
    const double base = local_market_profit(zone, net_, params_.fare_margin_per_s,
                                            params_.max_zone_pickup_s);
    Zone with = zone;
    auto at = std::lower_bound(with.vehicles.begin(), with.vehicles.end(), candidate.id,
                               [](const ZoneVehicle& v, std::int64_t id) { return v.id < id; });
    with.vehicles.insert(at, candidate);
    const double gained = local_market_profit(with, net_, params_.fare_margin_per_s,
                                              params_.max_zone_pickup_s);
    return gained - base;
}

double Valuation::predicted_mvoc_passenger(const MarketSnapshot& snap, const Vehicle& v,
                                           const PassengerRequest& p, double pickup_s) const {
    const double soc_after = v.soc_kwh - energy_kwh(v.consumption_kw, pickup_s + p.trip_time_s);
    if (soc_after <= 0) return 0;  // feasibility keeps this non-negative; 0 denominator adds nothing
    const double k_prime = snap.clock_s + pickup_s + p.trip_time_s;
    const Zone zone = predicted_zone(snap, p.destination, k_prime, v.id);
    const double gain = add_one_in_gain(
        zone, {v.id, p.destination, soc_after, v.soc_max_kwh, v.consumption_kw});
    return gain / soc_after;
}

double Valuation::predicted_mvoc_charging(const MarketSnapshot& snap, const Vehicle& v,
                                          const Charger& ch, const ChargingPlan& plan) const {
    const double soc_after = 0.9 * v.soc_max_kwh;
    const double k_prime = snap.clock_s + plan.total_s;
    const Zone zone = predicted_zone(snap, ch.location, k_prime, v.id);
    const double gain = add_one_in_gain(
        zone, {v.id, ch.location, soc_after, v.soc_max_kwh, v.consumption_kw});
    return gain / soc_after;
}

}  // namespace evsim
