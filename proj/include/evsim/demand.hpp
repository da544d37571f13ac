#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "evsim/network.hpp"
#include "evsim/rng.hpp"

namespace evsim {

struct DemandRequest {
    double time_s = 0;
    NodeId origin = 0;
    NodeId destination = 0;
};

// CSV rows `request_time_s,origin_node,dest_node`; `#` comments and an
// optional header line are skipped.
std::vector<DemandRequest> load_demand_csv(std::istream& in);
std::vector<DemandRequest> load_demand_file(const std::string& path);

// Canonical demand order: by (time, origin, destination). Passenger ids are
// assigned in this order, so reordering rows with equal timestamps cannot
// change a simulation.
void canonicalize(std::vector<DemandRequest>& requests);

// Piecewise-constant arrival-rate model per (origin node, time bin),
// estimated from the scenario's demand in a preprocessing pass. Predictions
// return the expected number of waiting passengers in a node set (arrival
// rate times the mean matching-patience window) and the bin's mean trip time.
class DemandModel {
public:
    DemandModel() = default;
    DemandModel(const std::vector<DemandRequest>& requests, const Network& net,
                double bin_s, double patience_window_s);

    struct ZoneDemand {
        long expected_count = 0;   // rounded to nearest
        double mean_trip_s = 0;    // over the contributing (node, bin) cells
    };

    ZoneDemand expected_waiting(const std::vector<NodeId>& zone_nodes, double at_s) const;

    double bin_s() const { return bin_s_; }

private:
    struct Cell {
        long count = 0;
        double trip_s_sum = 0;
    };

    double bin_s_ = 900;
    double patience_window_s_ = 60;
    long bin_count_ = 0;
    std::unordered_map<NodeId, std::vector<Cell>> by_origin_;
};

// Poisson arrivals with per-hour rates (requests per second, 24 entries,
// wrapping daily); origins and destinations uniform over nodes unless OD
// weights are given. Destinations always differ from origins.
struct OdWeight {
    NodeId origin = 0;
    NodeId destination = 0;
    double weight = 0;
};

std::vector<DemandRequest> generate_demand(EntityRng& rng, const Network& net,
                                           const std::vector<double>& hourly_rates_per_s,
                                           double horizon_s,
                                           const std::vector<OdWeight>& od_weights = {});

std::vector<OdWeight> load_od_weights_file(const std::string& path);

void write_demand_csv(std::ostream& out, const std::vector<DemandRequest>& requests);

}  // namespace evsim
