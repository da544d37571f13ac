#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evsim/demand.hpp"
#include "evsim/market.hpp"
#include "evsim/network.hpp"

namespace evsim {

// One planned charging trip: travel, queue, recharge amount, total duration.
// total_s = travel_s + queue_s + recharge_kwh / charger speed, exactly.
struct ChargingPlan {
    double travel_s = 0;
    double queue_s = 0;
    double recharge_kwh = 0;
    double total_s = 0;
};

// Amount needed to land at 90% of capacity after driving to the charger.
// Throws when the SoC cannot cover the approach. May be negative when the
// vehicle would arrive above the 90% target; such pairs are not chargeable.
double recharge_amount(const Vehicle& v, double travel_s);

double queue_time(const Charger& ch, double k, double travel_s);

// nullopt when the approach is infeasible or the vehicle would arrive above
// the 90% target.
std::optional<ChargingPlan> plan_charging(const Vehicle& v, const Charger& ch,
                                          double k, double travel_s);

double passenger_benefit(const Vehicle& v, const PassengerRequest& p, double pickup_s,
                         double clock_s, double delta_mvoc_p, const PricingConfig& pricing);

double charging_benefit(const ChargingPlan& plan, double r, double delta_mvoc_c,
                        const PricingConfig& pricing, double k);

// Local market around a zone center: vacant vehicles and waiting passengers
// whose locations lie within the travel-time radius of the center.
struct ZoneVehicle {
    std::int64_t id = 0;
    NodeId node = 0;
    double soc_kwh = 0;
    double soc_max_kwh = 0;
    double consumption_kw = 0;
};

struct ZonePassenger {
    std::int64_t id = 0;       // negative for model-predicted passengers
    NodeId origin = 0;
    double trip_time_s = 0;
};

struct Zone {
    NodeId center = 0;
    double radius_s = 0;
    std::vector<ZoneVehicle> vehicles;      // ascending id
    std::vector<ZonePassenger> passengers;  // ascending id
};

struct ZoneMatchOutcome {
    double profit_usd = 0;                        // fare margin times matched trip time
    std::vector<int> vehicle_to_passenger;        // index into zone.passengers, -1 unmatched
};

// Batch matching inside a zone: maximize the total reciprocal pickup time
// (fixed-point, so engine and enumeration oracles agree bit-for-bit), then
// the total matched trip time. An edge exists when the pickup is within
// max_pickup_s and the vehicle SoC covers pickup plus trip. Profit is the
// fare margin times total matched trip time (milliseconds resolution).
ZoneMatchOutcome zone_match(const Zone& zone, const Network& net,
                            double fare_margin_per_s, double max_pickup_s);

double local_market_profit(const Zone& zone, const Network& net,
                           double fare_margin_per_s, double max_pickup_s);

struct ValuationParams {
    double zone_radius_s = 300;
    double max_zone_pickup_s = 450;   // mean pickup patience
    double fare_margin_per_s = 0;     // f - w
};

// Marginal-value-of-charge estimation: leave-one-out in the present zone,
// add-one-in at the predicted destination zone.
class Valuation {
public:
    Valuation(const Network& net, const DemandModel* demand, ValuationParams params)
        : net_(net), demand_(demand), params_(params) {}

    Zone present_zone(const MarketSnapshot& snap, NodeId center) const;

    // rho_e(z_i, k); 0 for an unmatched or zero-SoC anchor.
    double present_mvoc(const MarketSnapshot& snap, const Vehicle& anchor) const;

    // Supply rolled forward to k_prime (committed itineraries complete on
    // schedule, vacant vehicles stay put, exclude_vehicle omitted); demand
    // from the model, except at zero horizon where the observed waiting
    // passengers are used.
    Zone predicted_zone(const MarketSnapshot& snap, NodeId center, double k_prime,
                        std::int64_t exclude_vehicle) const;

    // Profit gain from adding `candidate` to the zone; >= 0.
    double add_one_in_gain(const Zone& zone, const ZoneVehicle& candidate) const;

    // rho^p: gain at the passenger destination zone at k + pickup + trip,
    // divided by the post-trip SoC.
    double predicted_mvoc_passenger(const MarketSnapshot& snap, const Vehicle& v,
                                    const PassengerRequest& p, double pickup_s) const;

    // rho^c: gain at the charger zone at k + total charging time, divided by
    // 0.9 * capacity.
    double predicted_mvoc_charging(const MarketSnapshot& snap, const Vehicle& v,
                                   const Charger& ch, const ChargingPlan& plan) const;

    const ValuationParams& params() const { return params_; }
    const Network& network() const { return net_; }

private:
    const Network& net_;
    const DemandModel* demand_;  // may be null (no predicted demand)
    ValuationParams params_;
};

inline double delta_mvoc(double present, double predicted) { return predicted - present; }

}  // namespace evsim
