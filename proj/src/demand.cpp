#include "evsim/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "evsim/error.hpp"
#include "evsim/market.hpp"

namespace evsim {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    return fields;
}

bool numeric_leading(const std::string& s) {
    for (char c : s) {
        if (c == ' ' || c == '\t') continue;
        return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
    }
    return false;
}

}  // namespace

std::vector<DemandRequest> load_demand_csv(std::istream& in) {
    std::vector<DemandRequest> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && !numeric_leading(line)) continue;  // header
        const auto fields = split_csv(line);
        if (fields.size() != 3)
            throw ParseError("demand line " + std::to_string(line_no) +
                             ": expected request_time_s,origin_node,dest_node");
        try {
            DemandRequest r;
            r.time_s = std::stod(fields[0]);
            r.origin = std::stoll(fields[1]);
            r.destination = std::stoll(fields[2]);
            if (r.time_s < 0) throw ParseError("negative request time");
            out.push_back(r);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("demand line " + std::to_string(line_no) +
                             ": malformed field");
        }
    }
    return out;
}

std::vector<DemandRequest> load_demand_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open demand file: " + path);
    return load_demand_csv(in);
}

void canonicalize(std::vector<DemandRequest>& requests) {
    std::stable_sort(requests.begin(), requests.end(),
                     [](const DemandRequest& a, const DemandRequest& b) {
                         if (a.time_s != b.time_s) return a.time_s < b.time_s;
                         if (a.origin != b.origin) return a.origin < b.origin;
                         return a.destination < b.destination;
                     });
}

DemandModel::DemandModel(const std::vector<DemandRequest>& requests, const Network& net,
                         double bin_s, double patience_window_s)
    : bin_s_(bin_s), patience_window_s_(patience_window_s) {
    if (!(bin_s > 0)) throw ConfigError("demand bin length must be positive");
    double max_t = 0;
    for (const auto& r : requests) max_t = std::max(max_t, r.time_s);
    bin_count_ = static_cast<long>(std::floor(max_t / bin_s_)) + 1;
    for (const auto& r : requests) {
        auto& cells = by_origin_[r.origin];
        if (cells.empty()) cells.resize(static_cast<std::size_t>(bin_count_));
        auto& cell = cells[static_cast<std::size_t>(r.time_s / bin_s_)];
        cell.count += 1;
        cell.trip_s_sum += net.travel_time(r.origin, r.destination);
    }
}

DemandModel::ZoneDemand DemandModel::expected_waiting(const std::vector<NodeId>& zone_nodes,
                                                      double at_s) const {
    ZoneDemand result;
    const long bin = static_cast<long>(std::floor(at_s / bin_s_));
    if (bin < 0 || bin >= bin_count_) return result;
    long count = 0;
    double trip_sum = 0;
    for (NodeId n : zone_nodes) {
        auto it = by_origin_.find(n);
        if (it == by_origin_.end()) continue;
        const Cell& cell = it->second[static_cast<std::size_t>(bin)];
        count += cell.count;
        trip_sum += cell.trip_s_sum;
    }
    if (count == 0) return result;
    const double rate = static_cast<double>(count) / bin_s_;
    result.expected_count = std::lround(rate * patience_window_s_);
    result.mean_trip_s = trip_sum / static_cast<double>(count);
    return result;
}

std::vector<DemandRequest> generate_demand(EntityRng& rng, const Network& net,
                                           const std::vector<double>& hourly_rates_per_s,
                                           double horizon_s,
                                           const std::vector<OdWeight>& od_weights) {
    if (hourly_rates_per_s.empty()) throw ConfigError("no demand rates given");
    for (double r : hourly_rates_per_s)
        if (r < 0) throw ConfigError("demand rates must be non-negative");
    if (!(horizon_s > 0)) throw ConfigError("demand horizon must be positive");

    double weight_total = 0;
    for (const auto& w : od_weights) {
        if (w.weight < 0) throw ConfigError("OD weights must be non-negative");
        if (w.origin == w.destination)
            throw ConfigError("OD weight pairs a node with itself");
        if (!net.has_node(w.origin) || !net.has_node(w.destination))
            throw ConfigError("OD weight references an unknown node");
        weight_total += w.weight;
    }
    if (!od_weights.empty() && !(weight_total > 0))
        throw ConfigError("OD weights are all zero");

    const auto nodes = net.node_ids();
    std::vector<DemandRequest> out;

    // Thinned exponential interarrival draws against the hourly-max rate.
    double rate_max = 0;
    for (double r : hourly_rates_per_s) rate_max = std::max(rate_max, r);
    if (rate_max == 0) return out;

    double t = 0;
    for (;;) {
        t += -std::log(rng.uniform_pos()) / rate_max;
        if (t >= horizon_s) break;
        const auto hour = static_cast<std::size_t>(std::fmod(t, kSecondsPerDay) / kSecondsPerHour);
        const double rate = hourly_rates_per_s[hour % hourly_rates_per_s.size()];
        if (rng.uniform() * rate_max >= rate) continue;

        DemandRequest r;
        r.time_s = t;
        if (od_weights.empty()) {
            r.origin = nodes[static_cast<std::size_t>(rng.uniform() * static_cast<double>(nodes.size()))];
            do {
                r.destination =
                    nodes[static_cast<std::size_t>(rng.uniform() * static_cast<double>(nodes.size()))];
            } while (r.destination == r.origin);
        } else {
            double pick = rng.uniform() * weight_total;
            const OdWeight* chosen = &od_weights.back();
            for (const auto& w : od_weights) {
                pick -= w.weight;
                if (pick < 0) {
                    chosen = &w;
                    break;
                }
            }
            r.origin = chosen->origin;
            r.destination = chosen->destination;
        }
        out.push_back(r);
    }
    return out;
}

std::vector<OdWeight> load_od_weights_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open OD weight file: " + path);
    std::vector<OdWeight> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && !numeric_leading(line)) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 3)
            throw ParseError("OD weight line " + std::to_string(line_no) +
                             ": expected origin,dest,weight");
        OdWeight w;
        w.origin = std::stoll(fields[0]);
        w.destination = std::stoll(fields[1]);
        w.weight = std::stod(fields[2]);
        out.push_back(w);
    }
    return out;
}

void write_demand_csv(std::ostream& out, const std::vector<DemandRequest>& requests) {
    out << "request_time_s,origin_node,dest_node\n";
    for (const auto& r : requests) {
        std::ostringstream line;
        line.precision(17);
        line << r.time_s << ',' << r.origin << ',' << r.destination << '\n';
        out << line.str();
    }
}

}  // namespace evsim
