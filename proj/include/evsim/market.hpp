#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "evsim/network.hpp"

namespace evsim {

// Time instances are seconds from simulation start (midnight). Travel times
// are real-valued; nothing is rounded inside the engine.
constexpr double kSecondsPerHour = 3600.0;
constexpr double kSecondsPerDay = 86400.0;

// kW sustained for `seconds` -> kWh.
inline double energy_kwh(double kw, double seconds) { return kw * seconds / kSecondsPerHour; }

enum class VehicleStatus { vacant, pickup, occupied, to_charger, queuing, charging, exited };

const char* to_string(VehicleStatus s);

// Allowed driver decision-graph transitions.
bool can_transition(VehicleStatus from, VehicleStatus to);

struct DriverAttributes {
    double gamma1 = 0;        // compliance intercept
    double gamma2 = 0;        // compliance incentive slope, > 0
    double gamma3 = 0;        // compliance charge-time slope, < 0
    double gamma4 = 0;        // fatigue midpoint, hours, > 0
    double gamma5 = 0;        // fatigue spread, > 0
    double gamma6 = 0;        // depletion SoC sensitivity, > 0
    double shift_start_s = 0;
};

struct DriverState {
    double entry_time_s = -1;                 // < 0 until the driver joins
    double exit_time_s = -1;                  // < 0 while active
    double last_exit_decision_s = -std::numeric_limits<double>::infinity();
    double occupied_s = 0;
    double charging_fees_paid_usd = 0;
    double initial_soc_kwh = 0;
};

// Where and when a dispatched vehicle next becomes vacant, with the SoC it
// will have then. Committed itineraries complete on schedule, which is all
// the short-horizon supply projection needs.
struct Commitment {
    double vacant_at_s = 0;
    NodeId vacant_node = 0;
    double vacant_soc_kwh = 0;
};

struct Vehicle {
    std::int64_t id = 0;
    NodeId location = 0;
    double soc_kwh = 0;
    double soc_max_kwh = 0;
    double consumption_kw = 0;                // Q^o, drains only while driving
    VehicleStatus status = VehicleStatus::vacant;
    DriverAttributes attrs;
    DriverState driver;
    Commitment commitment;                    // meaningful while dispatched
};

enum class PassengerState { waiting, matched, riding, served, cancelled_type1, cancelled_type2 };

struct PassengerRequest {
    std::int64_t id = 0;
    NodeId origin = 0;
    NodeId destination = 0;
    double request_time_s = 0;
    double trip_time_s = 0;                   // t^o, via shortest path
    double matching_patience_s = 0;
    double pickup_patience_s = 0;
    PassengerState state = PassengerState::waiting;
    double match_time_s = -1;
    double offered_pickup_s = -1;
};

struct Charger {
    std::int64_t id = 0;
    NodeId location = 0;
    double speed_kw = 0;                      // Q^x
    double next_available_s = 0;              // k^q, reservation-aware
};

struct TouWindow {
    double start_s = 0;                       // seconds of day, half-open [start, end)
    double end_s = 0;
    double rate_usd_per_kwh = 0;
};

struct PricingConfig {
    double fare_per_s = 0;                    // f
    double wage_per_s = 0;                    // w
    double margin_usd_per_kwh = 0;            // e1
    double infrastructure_usd_per_kwh = 0;    // e2
    std::vector<TouWindow> tou;               // e3(k), covers 24 h
    double vot_match_per_s = 0;               // rho_t^pm
    double vot_pickup_per_s = 0;              // rho_t^pp
    double vot_charge_per_s = 0;              // rho_t^c

    // Checks f > w, rho^pm > rho^pp > rho^c, and gapless/non-overlapping
    // 24-hour tariff coverage.
    void validate() const;
};

// Tariff component whose window contains k (clock wraps modulo 24 h).
double tou_tariff(const PricingConfig& pricing, double k);

// TNC unit charging profit e1 - r * (e1 + e2 + e3(k)); may be negative.
double charging_price(const PricingConfig& pricing, double r, double k);

// Projection of a vehicle's committed itinerary: when, where, and with what
// SoC it next becomes vacant. Vacant vehicles stay put.
struct SupplyProjection {
    std::int64_t vehicle_id = 0;
    double vacant_at_s = 0;
    NodeId node = 0;
    double soc_kwh = 0;
    double soc_max_kwh = 0;
    double consumption_kw = 0;
};

// Immutable per-interval view handed to the valuation and matching steps.
struct MarketSnapshot {
    double clock_s = 0;
    std::vector<Vehicle> vacant;              // ascending id
    std::vector<PassengerRequest> waiting;    // ascending id
    std::vector<Charger> chargers;            // ascending id
    double avg_incentive = 0;                 // r~, trailing-window mean
    std::vector<SupplyProjection> projections;  // all active vehicles
};

}  // namespace evsim
