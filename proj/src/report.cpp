#include "evsim/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "evsim/error.hpp"

namespace evsim {

namespace {
using Json = nlohmann::ordered_json;
}

std::string RunReport::to_json() const {
    Json j;
    j["scenario"] = {{"strategy", scenario.strategy},
                     {"seed", scenario.seed},
                     {"horizon_s", scenario.horizon_s},
                     {"matching_interval_s", scenario.matching_interval_s},
                     {"network_nodes", scenario.network_nodes},
                     {"network_edges", scenario.network_edges},
                     {"total_drivers", scenario.total_drivers},
                     {"chargers", scenario.chargers}};
    j["passengers"] = {{"requests", passengers.requests},
                       {"served", passengers.served},
                       {"served_pct", passengers.served_pct},
                       {"cancelled_type1", passengers.cancelled_type1},
                       {"cancelled_type2", passengers.cancelled_type2},
                       {"in_system_at_end", passengers.in_system_at_end},
                       {"mean_matching_time_s", passengers.mean_matching_time_s},
                       {"mean_pickup_time_s", passengers.mean_pickup_time_s}};
    j["charging"] = {{"sessions", charging.sessions},
                     {"sessions_off_peak", charging.sessions_off_peak},
                     {"sessions_peak", charging.sessions_peak},
                     {"profit_usd", charging.profit_usd},
                     {"profit_off_peak_usd", charging.profit_off_peak_usd},
                     {"profit_peak_usd", charging.profit_peak_usd}};
    j["profit"] = {{"trip_usd", profit.trip_usd},
                   {"charging_usd", profit.charging_usd},
                   {"monetary_usd", profit.monetary_usd}};
    j["drivers"] = {{"entered", drivers.entered},
                    {"exited", drivers.exited},
                    {"mean_income_usd", drivers.mean_income_usd},
                    {"mean_shift_length_h", drivers.mean_shift_length_h},
                    {"mean_initial_soc_kwh", drivers.mean_initial_soc_kwh},
                    {"mean_final_soc_kwh", drivers.mean_final_soc_kwh},
                    {"total_occupied_s", drivers.total_occupied_s}};
    j["series_bin_s"] = series_bin_s;
    Json bins = Json::array();
    for (const SeriesBin& b : series)
        bins.push_back({{"start_s", b.start_s},
                        {"type1", b.type1},
                        {"type2", b.type2},
                        {"charging_vehicles", b.charging_vehicles}});
    j["series"] = std::move(bins);
    return j.dump(2) + "\n";
}

RunReport RunReport::from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("report parse failure: ") + e.what());
    }
    RunReport r;
    const auto& sc = j.at("scenario");
    r.scenario.strategy = sc.at("strategy").get<std::string>();
    r.scenario.seed = sc.at("seed").get<std::uint64_t>();
    r.scenario.horizon_s = sc.at("horizon_s").get<double>();
    r.scenario.matching_interval_s = sc.at("matching_interval_s").get<double>();
    r.scenario.network_nodes = sc.at("network_nodes").get<int>();
    r.scenario.network_edges = sc.at("network_edges").get<int>();
    r.scenario.total_drivers = sc.at("total_drivers").get<int>();
    r.scenario.chargers = sc.at("chargers").get<int>();
    const auto& pa = j.at("passengers");
    r.passengers.requests = pa.at("requests").get<long>();
    r.passengers.served = pa.at("served").get<long>();
    r.passengers.served_pct = pa.at("served_pct").get<double>();
    r.passengers.cancelled_type1 = pa.at("cancelled_type1").get<long>();
    r.passengers.cancelled_type2 = pa.at("cancelled_type2").get<long>();
    r.passengers.in_system_at_end = pa.at("in_system_at_end").get<long>();
    r.passengers.mean_matching_time_s = pa.at("mean_matching_time_s").get<double>();
    r.passengers.mean_pickup_time_s = pa.at("mean_pickup_time_s").get<double>();
    const auto& ch = j.at("charging");
    r.charging.sessions = ch.at("sessions").get<long>();
    r.charging.sessions_off_peak = ch.at("sessions_off_peak").get<long>();
    r.charging.sessions_peak = ch.at("sessions_peak").get<long>();
    r.charging.profit_usd = ch.at("profit_usd").get<double>();
    r.charging.profit_off_peak_usd = ch.at("profit_off_peak_usd").get<double>();
    r.charging.profit_peak_usd = ch.at("profit_peak_usd").get<double>();
    const auto& pr = j.at("profit");
    r.profit.trip_usd = pr.at("trip_usd").get<double>();
    r.profit.charging_usd = pr.at("charging_usd").get<double>();
    r.profit.monetary_usd = pr.at("monetary_usd").get<double>();
    const auto& dr = j.at("drivers");
    r.drivers.entered = dr.at("entered").get<long>();
    r.drivers.exited = dr.at("exited").get<long>();
    r.drivers.mean_income_usd = dr.at("mean_income_usd").get<double>();
    r.drivers.mean_shift_length_h = dr.at("mean_shift_length_h").get<double>();
    r.drivers.mean_initial_soc_kwh = dr.at("mean_initial_soc_kwh").get<double>();
    r.drivers.mean_final_soc_kwh = dr.at("mean_final_soc_kwh").get<double>();
    r.drivers.total_occupied_s = dr.at("total_occupied_s").get<double>();
    r.series_bin_s = j.at("series_bin_s").get<double>();
    for (const auto& b : j.at("series")) {
        SeriesBin bin;
        bin.start_s = b.at("start_s").get<double>();
        bin.type1 = b.at("type1").get<long>();
        bin.type2 = b.at("type2").get<long>();
        bin.charging_vehicles = b.at("charging_vehicles").get<long>();
        r.series.push_back(bin);
    }
    return r;
}

void RunReport::write_json_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report file: " + path);
    out << to_json();
}

RunReport RunReport::load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open report file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return from_json(text.str());
}

void RunReport::write_cancellation_csv(std::ostream& out) const {
    out << "bin_start_s,type1,type2\n";
    for (const SeriesBin& b : series)
        out << b.start_s << ',' << b.type1 << ',' << b.type2 << '\n';
}

void RunReport::write_charging_csv(std::ostream& out) const {
    out << "bin_start_s,charging_vehicles\n";
    for (const SeriesBin& b : series)
        out << b.start_s << ',' << b.charging_vehicles << '\n';
}

}  // namespace evsim
