#include "evsim/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "evsim/error.hpp"
#include "evsim/rng.hpp"

namespace evsim {

namespace {

using Json = nlohmann::json;

void check_keys(const Json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.contains(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

TruncatedNormalSpec read_spec(const Json& j, const std::string& where) {
    check_keys(j, where, {"min", "mean", "max", "sd"});
    TruncatedNormalSpec s;
    s.min = j.at("min").get<double>();
    s.mean = j.at("mean").get<double>();
    s.max = j.at("max").get<double>();
    s.sd = j.at("sd").get<double>();
    return s;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || base_dir.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

Strategy strategy_from_string(const std::string& name) {
    if (name == "proposed") return Strategy::proposed;
    if (name == "benchmark_no_incentive") return Strategy::benchmark_no_incentive;
    if (name == "benchmark_free_charging") return Strategy::benchmark_free_charging;
    throw ConfigError("unknown strategy '" + name +
                      "' (expected proposed, benchmark_no_incentive, or "
                      "benchmark_free_charging)");
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::proposed: return "proposed";
        case Strategy::benchmark_no_incentive: return "benchmark_no_incentive";
        case Strategy::benchmark_free_charging: return "benchmark_free_charging";
    }
    return "?";
}

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig c;
    c.pricing.fare_per_s = 42.0 / kSecondsPerHour;
    c.pricing.wage_per_s = 30.0 / kSecondsPerHour;
    c.pricing.margin_usd_per_kwh = 0.10;
    c.pricing.infrastructure_usd_per_kwh = 0.05;
    c.pricing.tou = {{0, 8 * kSecondsPerHour, 0.018},
                     {8 * kSecondsPerHour, kSecondsPerDay, 0.255}};
    c.pricing.vot_match_per_s = 0.010;
    c.pricing.vot_pickup_per_s = 0.005;
    c.pricing.vot_charge_per_s = 0.002;

    c.behavior.matching_patience = {30, 60, 90, 6};
    c.behavior.pickup_patience = {5 * 60, 7.5 * 60, 10 * 60, 60};
    c.behavior.gamma1 = {1.5, 1.8, 2.1, 0.1};
    c.behavior.gamma2 = {1.2, 1.5, 1.8, 0.1};
    c.behavior.gamma3 = {-1.9, -1.6, -1.3, 0.1};
    c.behavior.gamma4 = {0.5, 4, 8, 1};
    c.behavior.gamma5 = {0.8, 2, 4.2, 0.4};
    c.behavior.gamma6 = {0.05, 0.2, 0.35, 0.05};
    c.behavior.shift_start.hourly_weights.fill(1.0);
    return c;
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text,
                                              const std::string& base_dir) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }

    ScenarioConfig c = defaults();
    check_keys(j, "config",
               {"network", "demand", "chargers", "fleet", "pricing", "behavior", "sim"});

    if (!j.contains("network")) throw ConfigError("config is missing 'network'");
    {
        const Json& n = j.at("network");
        check_keys(n, "network", {"file", "grid"});
        if (n.contains("file")) c.network.file = resolve(base_dir, n.at("file").get<std::string>());
        if (n.contains("grid")) {
            const Json& g = n.at("grid");
            check_keys(g, "network.grid", {"rows", "cols", "edge_time_s"});
            c.network.grid_rows = g.at("rows").get<int>();
            c.network.grid_cols = g.at("cols").get<int>();
            c.network.grid_edge_time_s = g.value("edge_time_s", 30.0);
        }
        if (c.network.file.empty() && c.network.grid_rows == 0)
            throw ConfigError("network needs either 'file' or 'grid'");
        if (!c.network.file.empty() && c.network.grid_rows != 0)
            throw ConfigError("network takes 'file' or 'grid', not both");
    }

    if (!j.contains("demand")) throw ConfigError("config is missing 'demand'");
    {
        const Json& d = j.at("demand");
        check_keys(d, "demand", {"file"});
        c.demand_file = resolve(base_dir, d.at("file").get<std::string>());
    }

    if (j.contains("chargers")) {
        const Json& ch = j.at("chargers");
        check_keys(ch, "chargers", {"file", "stations", "piles_per_station", "speed_kw"});
        if (ch.contains("file")) c.chargers.file = resolve(base_dir, ch.at("file").get<std::string>());
        c.chargers.stations = ch.value("stations", c.chargers.stations);
        c.chargers.piles_per_station = ch.value("piles_per_station", c.chargers.piles_per_station);
        c.chargers.speed_kw = ch.value("speed_kw", c.chargers.speed_kw);
    }

    if (j.contains("fleet")) {
        const Json& f = j.at("fleet");
        check_keys(f, "fleet",
                   {"total_drivers", "initial_drivers", "soc_max_kwh", "consumption_kw",
                    "initial_soc_min_frac", "initial_soc_max_frac"});
        c.fleet.total_drivers = f.value("total_drivers", c.fleet.total_drivers);
        c.fleet.initial_drivers = f.value("initial_drivers", c.fleet.initial_drivers);
        c.fleet.soc_max_kwh = f.value("soc_max_kwh", c.fleet.soc_max_kwh);
        c.fleet.consumption_kw = f.value("consumption_kw", c.fleet.consumption_kw);
        c.fleet.initial_soc_min_frac = f.value("initial_soc_min_frac", c.fleet.initial_soc_min_frac);
        c.fleet.initial_soc_max_frac = f.value("initial_soc_max_frac", c.fleet.initial_soc_max_frac);
    }

    if (j.contains("pricing")) {
        const Json& p = j.at("pricing");
        check_keys(p, "pricing",
                   {"fare_per_hour", "wage_per_hour", "e1", "e2", "tou", "vot_match_per_s",
                    "vot_pickup_per_s", "vot_charge_per_s"});
        if (p.contains("fare_per_hour"))
            c.pricing.fare_per_s = p.at("fare_per_hour").get<double>() / kSecondsPerHour;
        if (p.contains("wage_per_hour"))
            c.pricing.wage_per_s = p.at("wage_per_hour").get<double>() / kSecondsPerHour;
        c.pricing.margin_usd_per_kwh = p.value("e1", c.pricing.margin_usd_per_kwh);
        c.pricing.infrastructure_usd_per_kwh = p.value("e2", c.pricing.infrastructure_usd_per_kwh);
        if (p.contains("tou")) {
            c.pricing.tou.clear();
            for (const Json& w : p.at("tou")) {
                check_keys(w, "pricing.tou[]", {"start_s", "end_s", "rate"});
                c.pricing.tou.push_back({w.at("start_s").get<double>(),
                                         w.at("end_s").get<double>(),
                                         w.at("rate").get<double>()});
            }
        }
        c.pricing.vot_match_per_s = p.value("vot_match_per_s", c.pricing.vot_match_per_s);
        c.pricing.vot_pickup_per_s = p.value("vot_pickup_per_s", c.pricing.vot_pickup_per_s);
        c.pricing.vot_charge_per_s = p.value("vot_charge_per_s", c.pricing.vot_charge_per_s);
    }

    if (j.contains("behavior")) {
        const Json& b = j.at("behavior");
        check_keys(b, "behavior",
                   {"matching_patience", "pickup_patience", "gamma1", "gamma2", "gamma3",
                    "gamma4", "gamma5", "gamma6", "shift_start_weights"});
        if (b.contains("matching_patience"))
            c.behavior.matching_patience = read_spec(b.at("matching_patience"), "matching_patience");
        if (b.contains("pickup_patience"))
            c.behavior.pickup_patience = read_spec(b.at("pickup_patience"), "pickup_patience");
        if (b.contains("gamma1")) c.behavior.gamma1 = read_spec(b.at("gamma1"), "gamma1");
        if (b.contains("gamma2")) c.behavior.gamma2 = read_spec(b.at("gamma2"), "gamma2");
        if (b.contains("gamma3")) c.behavior.gamma3 = read_spec(b.at("gamma3"), "gamma3");
        if (b.contains("gamma4")) c.behavior.gamma4 = read_spec(b.at("gamma4"), "gamma4");
        if (b.contains("gamma5")) c.behavior.gamma5 = read_spec(b.at("gamma5"), "gamma5");
        if (b.contains("gamma6")) c.behavior.gamma6 = read_spec(b.at("gamma6"), "gamma6");
        if (b.contains("shift_start_weights")) {
            const Json& w = b.at("shift_start_weights");
            if (!w.is_array() || w.size() != 24)
                throw ConfigError("shift_start_weights must list 24 hourly weights");
            for (int h = 0; h < 24; ++h)
                c.behavior.shift_start.hourly_weights[static_cast<std::size_t>(h)] =
                    w[static_cast<std::size_t>(h)].get<double>();
        }
    }

    if (j.contains("sim")) {
        const Json& s = j.at("sim");
        check_keys(s, "sim",
                   {"matching_interval_s", "zone_radius_s", "horizon_s", "strategy", "seed",
                    "exit_decision_gap_s", "incentive_window_s", "demand_bin_s",
                    "series_bin_s", "precompute_all_pairs"});
        c.sim.matching_interval_s = s.value("matching_interval_s", c.sim.matching_interval_s);
        c.sim.zone_radius_s = s.value("zone_radius_s", c.sim.zone_radius_s);
        c.sim.horizon_s = s.value("horizon_s", c.sim.horizon_s);
        if (s.contains("strategy"))
            c.sim.strategy = strategy_from_string(s.at("strategy").get<std::string>());
        c.sim.seed = s.value("seed", c.sim.seed);
        c.sim.exit_decision_gap_s = s.value("exit_decision_gap_s", c.sim.exit_decision_gap_s);
        c.sim.incentive_window_s = s.value("incentive_window_s", c.sim.incentive_window_s);
        c.sim.demand_bin_s = s.value("demand_bin_s", c.sim.demand_bin_s);
        c.sim.series_bin_s = s.value("series_bin_s", c.sim.series_bin_s);
        c.sim.precompute_all_pairs = s.value("precompute_all_pairs", c.sim.precompute_all_pairs);
    }

    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return from_json_text(text.str(), std::filesystem::path(path).parent_path().string());
}

void ScenarioConfig::validate() const {
    pricing.validate();
    behavior.validate();
    if (fleet.total_drivers < 0 || fleet.initial_drivers < 0 ||
        fleet.initial_drivers > fleet.total_drivers)
        throw ConfigError("fleet sizes must satisfy 0 <= initial <= total");
    if (!(fleet.soc_max_kwh > 0) || !(fleet.consumption_kw > 0))
        throw ConfigError("fleet capacity and consumption must be positive");
    if (!(fleet.initial_soc_min_frac >= 0 && fleet.initial_soc_min_frac <= fleet.initial_soc_max_frac &&
          fleet.initial_soc_max_frac <= 1))
        throw ConfigError("initial SoC fractions must satisfy 0 <= min <= max <= 1");
    if (!(sim.matching_interval_s > 0)) throw ConfigError("matching interval must be positive");
    if (!(sim.horizon_s > 0)) throw ConfigError("horizon must be positive");
    if (sim.zone_radius_s < 0) throw ConfigError("zone radius must be non-negative");
    if (!(sim.exit_decision_gap_s > 0)) throw ConfigError("exit decision gap must be positive");
    if (!(sim.incentive_window_s > 0)) throw ConfigError("incentive window must be positive");
    if (!(sim.demand_bin_s > 0)) throw ConfigError("demand bin must be positive");
    if (!(sim.series_bin_s > 0)) throw ConfigError("series bin must be positive");
    if (chargers.file.empty()) {
        if (chargers.stations < 0 || chargers.piles_per_station < 0)
            throw ConfigError("charger counts must be non-negative");
        if (!(chargers.speed_kw > 0)) throw ConfigError("charger speed must be positive");
    }
}

Network ScenarioConfig::build_network() const {
    Network net = network.file.empty()
                      ? Network::grid(network.grid_rows, network.grid_cols,
                                      network.grid_edge_time_s)
                      : Network::load_file(network.file);
    if (sim.precompute_all_pairs) net.precompute_all_sources();
    return net;
}

std::vector<DemandRequest> ScenarioConfig::load_demand() const {
    auto requests = load_demand_file(demand_file);
    canonicalize(requests);
    return requests;
}

std::vector<Charger> load_chargers_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open charger file: " + path);
    std::vector<Charger> out;
    std::string line;
    int line_no = 0;
    std::set<std::int64_t> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && (line.find("charger") != std::string::npos)) continue;
        std::istringstream ls(line);
        std::string f1, f2, f3;
        if (!std::getline(ls, f1, ',') || !std::getline(ls, f2, ',') || !std::getline(ls, f3))
            throw ParseError("charger line " + std::to_string(line_no) +
                             ": expected charger_id,node,speed_kW");
        Charger c;
        c.id = std::stoll(f1);
        c.location = std::stoll(f2);
        c.speed_kw = std::stod(f3);
        if (!(c.speed_kw > 0))
            throw ParseError("charger line " + std::to_string(line_no) +
                             ": speed must be positive");
        if (!seen.insert(c.id).second)
            throw ParseError("duplicate charger id " + std::to_string(c.id));
        out.push_back(c);
    }
    std::sort(out.begin(), out.end(),
              [](const Charger& a, const Charger& b) { return a.id < b.id; });
    return out;
}

std::vector<Charger> random_chargers(const Network& net, std::uint64_t seed, int stations,
                                     int piles_per_station, double speed_kw) {
    EntityRng rng(seed, rng_domain::charger_placement, 0);
    auto nodes = net.node_ids();
    std::vector<Charger> out;
    std::int64_t next_id = 0;
    for (int s = 0; s < stations && !nodes.empty(); ++s) {
        const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(nodes.size()));
        const NodeId node = nodes[pick];
        nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(pick));
        for (int p = 0; p < piles_per_station; ++p)
            out.push_back({next_id++, node, speed_kw, 0});
    }
    return out;
}

std::vector<Charger> ScenarioConfig::build_chargers(const Network& net) const {
    std::vector<Charger> out;
    if (!chargers.file.empty()) {
        out = load_chargers_file(chargers.file);
        for (const Charger& c : out)
            if (!net.has_node(c.location))
                throw ConfigError("charger " + std::to_string(c.id) +
                                  " sits on an unknown node");
    } else {
        out = random_chargers(net, sim.seed, chargers.stations, chargers.piles_per_station,
                              chargers.speed_kw);
    }
    return out;
}

}  // namespace evsim
