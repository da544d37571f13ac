#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evsim/behavior.hpp"
#include "evsim/demand.hpp"
#include "evsim/market.hpp"
#include "evsim/network.hpp"

namespace evsim {

enum class Strategy { proposed, benchmark_no_incentive, benchmark_free_charging };

Strategy strategy_from_string(const std::string& name);  // throws ConfigError
const char* to_string(Strategy s);

struct NetworkConfig {
    std::string file;        // either a network file...
    int grid_rows = 0;       // ...or a generated lattice
    int grid_cols = 0;
    double grid_edge_time_s = 30;
};

struct FleetConfig {
    int total_drivers = 28000;
    int initial_drivers = 2000;
    double soc_max_kwh = 54;
    double consumption_kw = 6;
    double initial_soc_min_frac = 0.2;
    double initial_soc_max_frac = 1.0;
};

struct ChargerConfig {
    std::string file;            // charger_id,node,speed_kW
    int stations = 30;           // random placement when no file is given
    int piles_per_station = 6;
    double speed_kw = 120;
};

struct SimConfig {
    double matching_interval_s = 10;
    double zone_radius_s = 300;
    double horizon_s = 86400;
    Strategy strategy = Strategy::proposed;
    std::uint64_t seed = 1;
    double exit_decision_gap_s = 60;
    double incentive_window_s = 3600;   // trailing window of the mean offered incentive
    double demand_bin_s = 900;
    double series_bin_s = 300;
    bool precompute_all_pairs = false;
};

// A full scenario. Everything except the network and demand sources carries
// defaults matching the reference setup (fleet, pricing, behavioral tables).
struct ScenarioConfig {
    NetworkConfig network;
    std::string demand_file;
    ChargerConfig chargers;
    FleetConfig fleet;
    PricingConfig pricing;
    BehaviorConfig behavior;
    SimConfig sim;

    static ScenarioConfig defaults();
    static ScenarioConfig from_json_text(const std::string& text,
                                         const std::string& base_dir = "");
    static ScenarioConfig load_file(const std::string& path);

    void validate() const;

    Network build_network() const;
    std::vector<DemandRequest> load_demand() const;
    std::vector<Charger> build_chargers(const Network& net) const;
};

std::vector<Charger> load_chargers_file(const std::string& path);

std::vector<Charger> random_chargers(const Network& net, std::uint64_t seed, int stations,
                                     int piles_per_station, double speed_kw);

}  // namespace evsim
