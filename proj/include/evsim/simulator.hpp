#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "evsim/config.hpp"
#include "evsim/demand.hpp"
#include "evsim/market.hpp"
#include "evsim/network.hpp"
#include "evsim/optimizer.hpp"
#include "evsim/report.hpp"
#include "evsim/valuation.hpp"

namespace evsim {

// Same-timestamp events process in this order (arrivals, deadlines, the
// matching tick, completions, exit decisions), then by subject id.
enum class EventKind {
    driver_entry = 0,
    passenger_arrival = 1,
    type1_deadline = 2,
    matching_tick = 3,
    pickup_complete = 4,
    dropoff_complete = 5,
    charger_arrival = 6,
    charging_complete = 7,
    exit_decision = 8,
};

struct Event {
    double time_s = 0;
    EventKind kind = EventKind::matching_tick;
    std::int64_t subject = 0;
};

// Deterministic discrete-event engine over [0, horizon): passenger arrivals
// and cancellations, per-interval matching under the configured strategy,
// trip and charging execution with reservation-aware piles, and driver
// entries/exits. Identical config and seed give byte-identical reports.
class Simulation {
public:
    explicit Simulation(const ScenarioConfig& config);
    Simulation(const ScenarioConfig& config, Network net,
               std::vector<DemandRequest> demand, std::vector<Charger> chargers);

    RunReport run();

    // Instrumentation hook, called after every processed event.
    using Probe = std::function<void(const Simulation&, const Event&)>;
    void set_probe(Probe probe) { probe_ = std::move(probe); }

    double clock() const { return clock_s_; }
    const std::vector<Vehicle>& vehicles() const { return vehicles_; }
    const std::vector<PassengerRequest>& passengers() const { return passengers_; }
    const std::vector<Charger>& chargers() const { return chargers_; }

    // Charger a vehicle is currently travelling to, queuing at, or charging
    // at; nullopt otherwise.
    std::optional<std::int64_t> session_charger(std::int64_t vehicle_id) const;

    long charging_vehicle_count() const;  // status charging or queuing

private:
    struct ActiveTrip {
        std::int64_t passenger_id = 0;
        double pickup_s = 0;
        double arrival_s = 0;
        double dropoff_s = 0;
    };

    struct ChargingSession {
        std::int64_t charger_id = 0;
        double match_clock_s = 0;
        double incentive = 0;
        double recharge_kwh = 0;
        double travel_s = 0;
        double arrival_s = 0;
        double start_s = 0;
        double complete_s = 0;
    };

    void schedule(double time_s, EventKind kind, std::int64_t subject);
    void dispatch_event(const Event& e);

    void on_driver_entry(std::int64_t vehicle_id);
    void on_passenger_arrival(std::int64_t passenger_id);
    void on_type1_deadline(std::int64_t passenger_id);
    void on_matching_tick();
    void on_pickup_complete(std::int64_t vehicle_id);
    void on_dropoff_complete(std::int64_t vehicle_id);
    void on_charger_arrival(std::int64_t vehicle_id);
    void on_charging_complete(std::int64_t vehicle_id);
    void on_exit_decision(std::int64_t vehicle_id);

    MarketSnapshot take_snapshot() const;
    void apply_passenger_match(Vehicle& v, PassengerRequest& p, double pickup_s);
    void apply_charging_dispatch(Vehicle& v, std::int64_t charger_id, double incentive,
                                 const ChargingPlan& plan);
    void set_status(Vehicle& v, VehicleStatus to);
    void record_cancellation(const PassengerRequest& p, bool type1);
    void sweep_type1(double now);
    double current_avg_incentive(double now);
    bool is_tick_time(double t) const;
    int charger_index(std::int64_t charger_id) const;
    void sample_series_until(double t);

    ScenarioConfig config_;
    Network net_;
    DemandModel demand_model_;
    Valuation valuation_;

    std::vector<Vehicle> vehicles_;           // id == index
    std::vector<EntityRng> vehicle_rng_;
    std::vector<std::optional<ActiveTrip>> trips_;
    std::vector<std::optional<ChargingSession>> sessions_;

    std::vector<PassengerRequest> passengers_;  // id == index
    std::set<std::int64_t> waiting_;

    std::vector<Charger> chargers_;           // ascending id
    std::map<std::int64_t, int> charger_index_;
    std::vector<std::deque<std::int64_t>> pile_queue_;  // reservation order

    struct EventAfter {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time_s != b.time_s) return a.time_s > b.time_s;
            if (a.kind != b.kind) return a.kind > b.kind;
            return a.subject > b.subject;
        }
    };
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;

    double clock_s_ = 0;
    std::deque<std::pair<double, double>> incentive_offers_;  // (time, r)
    double avg_incentive_ = 0;

    // accumulators
    double trip_profit_usd_ = 0;
    double charging_profit_usd_ = 0;
    double charging_profit_off_peak_usd_ = 0;
    double charging_profit_peak_usd_ = 0;
    long charging_sessions_ = 0;
    long charging_sessions_off_peak_ = 0;
    long charging_sessions_peak_ = 0;
    long served_ = 0;
    long cancelled_type1_ = 0;
    long cancelled_type2_ = 0;
    long accepted_matches_ = 0;
    double sum_matching_time_s_ = 0;
    double sum_pickup_time_s_ = 0;
    double min_tou_rate_ = 0;

    std::vector<RunReport::SeriesBin> series_;
    std::size_t next_sample_bin_ = 0;

    Probe probe_;
};

}  // namespace evsim
