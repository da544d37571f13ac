#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace evsim {

// Per-run market performance summary plus 5-minute time series.
struct RunReport {
    struct Scenario {
        std::string strategy;
        std::uint64_t seed = 0;
        double horizon_s = 0;
        double matching_interval_s = 0;
        int network_nodes = 0;
        int network_edges = 0;
        int total_drivers = 0;
        int chargers = 0;
        bool operator==(const Scenario&) const = default;
    } scenario;

    struct Passengers {
        long requests = 0;
        long served = 0;
        double served_pct = 0;
        long cancelled_type1 = 0;
        long cancelled_type2 = 0;
        long in_system_at_end = 0;
        double mean_matching_time_s = 0;
        double mean_pickup_time_s = 0;
        bool operator==(const Passengers&) const = default;
    } passengers;

    struct Charging {
        long sessions = 0;
        long sessions_off_peak = 0;
        long sessions_peak = 0;
        double profit_usd = 0;
        double profit_off_peak_usd = 0;
        double profit_peak_usd = 0;
        bool operator==(const Charging&) const = default;
    } charging;

    struct Profit {
        double trip_usd = 0;
        double charging_usd = 0;
        double monetary_usd = 0;
        bool operator==(const Profit&) const = default;
    } profit;

    struct Drivers {
        long entered = 0;
        long exited = 0;
        double mean_income_usd = 0;        // after deducting charging fees
        double mean_shift_length_h = 0;
        double mean_initial_soc_kwh = 0;
        double mean_final_soc_kwh = 0;
        double total_occupied_s = 0;
        bool operator==(const Drivers&) const = default;
    } drivers;

    struct SeriesBin {
        double start_s = 0;
        long type1 = 0;
        long type2 = 0;
        long charging_vehicles = 0;  // queuing vehicles included, sampled at bin start
        bool operator==(const SeriesBin&) const = default;
    };
    double series_bin_s = 300;
    std::vector<SeriesBin> series;

    bool operator==(const RunReport&) const = default;

    std::string to_json() const;               // stable key order, byte-deterministic
    static RunReport from_json(const std::string& text);

    void write_json_file(const std::string& path) const;
    static RunReport load_json_file(const std::string& path);

    void write_cancellation_csv(std::ostream& out) const;
    void write_charging_csv(std::ostream& out) const;
};

}  // namespace evsim
