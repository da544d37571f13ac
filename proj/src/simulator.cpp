#include "evsim/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "evsim/behavior.hpp"
#include "evsim/error.hpp"

namespace evsim {

namespace {
// Valuation parameters derive from the scenario: zone radius from sim config,
// zone pickup cap from the mean pickup patience, margin from pricing.
ValuationParams valuation_params(const ScenarioConfig& c) {
    ValuationParams p;
    p.zone_radius_s = c.sim.zone_radius_s;
    p.max_zone_pickup_s = c.behavior.pickup_patience.mean;
    p.fare_margin_per_s = c.pricing.fare_per_s - c.pricing.wage_per_s;
    return p;
}
}  // namespace

Simulation::Simulation(const ScenarioConfig& config)
    : Simulation(config, config.build_network(), config.load_demand(), {}) {
    chargers_ = config.build_chargers(net_);
    std::sort(chargers_.begin(), chargers_.end(),
              [](const Charger& a, const Charger& b) { return a.id < b.id; });
    charger_index_.clear();
    for (int i = 0; i < static_cast<int>(chargers_.size()); ++i)
        charger_index_[chargers_[static_cast<std::size_t>(i)].id] = i;
    pile_queue_.assign(chargers_.size(), {});
}

Simulation::Simulation(const ScenarioConfig& config, Network net,
                       std::vector<DemandRequest> demand, std::vector<Charger> chargers)
    : config_(config),
      net_(std::move(net)),
      demand_model_(demand, net_, config.sim.demand_bin_s,
                    config.behavior.matching_patience.mean),
      valuation_(net_, &demand_model_, valuation_params(config)),
      chargers_(std::move(chargers)) {
    config_.validate();
    std::sort(chargers_.begin(), chargers_.end(),
              [](const Charger& a, const Charger& b) { return a.id < b.id; });
    for (int i = 0; i < static_cast<int>(chargers_.size()); ++i)
        charger_index_[chargers_[static_cast<std::size_t>(i)].id] = i;
    pile_queue_.assign(chargers_.size(), {});

    min_tou_rate_ = config_.pricing.tou.front().rate_usd_per_kwh;
    for (const TouWindow& w : config_.pricing.tou)
        min_tou_rate_ = std::min(min_tou_rate_, w.rate_usd_per_kwh);

    // Fleet: attributes, entry times, initial placement. Per-entity streams
    // keep every draw independent of event interleaving.
    const auto node_ids = net_.node_ids();
    const int total = config_.fleet.total_drivers;
    vehicles_.reserve(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) {
        EntityRng rng(config_.sim.seed, rng_domain::driver, static_cast<std::uint64_t>(i));
        Vehicle v;
        v.id = i;
        v.soc_max_kwh = config_.fleet.soc_max_kwh;
        v.consumption_kw = config_.fleet.consumption_kw;
        v.attrs = config_.behavior.sample_attributes(rng);
        if (i < config_.fleet.initial_drivers) v.attrs.shift_start_s = 0;
        v.location = node_ids[static_cast<std::size_t>(
            rng.uniform() * static_cast<double>(node_ids.size()))];
        v.soc_kwh = rng.uniform(config_.fleet.initial_soc_min_frac,
                                config_.fleet.initial_soc_max_frac) *
                    v.soc_max_kwh;
        v.driver.initial_soc_kwh = v.soc_kwh;
        vehicles_.push_back(v);
        vehicle_rng_.push_back(rng);
    }
    trips_.assign(vehicles_.size(), std::nullopt);
    sessions_.assign(vehicles_.size(), std::nullopt);

    // Demand: canonical order, patience draws keyed per passenger.
    canonicalize(demand);
    std::int64_t pid = 0;
    for (const DemandRequest& r : demand) {
        if (r.time_s >= config_.sim.horizon_s) continue;
        if (!net_.has_node(r.origin) || !net_.has_node(r.destination))
            throw ConfigError("demand references an unknown node");
        EntityRng rng(config_.sim.seed, rng_domain::passenger,
                      static_cast<std::uint64_t>(pid));
        PassengerRequest p;
        p.id = pid++;
        p.origin = r.origin;
        p.destination = r.destination;
        p.request_time_s = r.time_s;
        p.trip_time_s = net_.travel_time(r.origin, r.destination);
        p.matching_patience_s = sample_truncated_normal(rng, config_.behavior.matching_patience);
        p.pickup_patience_s = sample_truncated_normal(rng, config_.behavior.pickup_patience);
        passengers_.push_back(p);
    }

    const double horizon = config_.sim.horizon_s;
    const long bins = static_cast<long>(std::ceil(horizon / config_.sim.series_bin_s));
    series_.resize(static_cast<std::size_t>(bins));
    for (long b = 0; b < bins; ++b)
        series_[static_cast<std::size_t>(b)].start_s =
            static_cast<double>(b) * config_.sim.series_bin_s;

    for (const Vehicle& v : vehicles_)
        if (v.attrs.shift_start_s < horizon)
            schedule(v.attrs.shift_start_s, EventKind::driver_entry, v.id);
    for (const PassengerRequest& p : passengers_)
        schedule(p.request_time_s, EventKind::passenger_arrival, p.id);
    for (double t = 0; t < horizon; t += config_.sim.matching_interval_s)
        schedule(t, EventKind::matching_tick, 0);
}

void Simulation::schedule(double time_s, EventKind kind, std::int64_t subject) {
    queue_.push({time_s, kind, subject});
}

bool Simulation::is_tick_time(double t) const {
    const double interval = config_.sim.matching_interval_s;
    const double i = std::round(t / interval);
    return i * interval == t && t < config_.sim.horizon_s;
}

int Simulation::charger_index(std::int64_t charger_id) const {
    return charger_index_.at(charger_id);
}

std::optional<std::int64_t> Simulation::session_charger(std::int64_t vehicle_id) const {
    const auto& s = sessions_[static_cast<std::size_t>(vehicle_id)];
    if (!s) return std::nullopt;
    return s->charger_id;
}

long Simulation::charging_vehicle_count() const {
    long n = 0;
    for (const Vehicle& v : vehicles_)
        if (v.status == VehicleStatus::charging || v.status == VehicleStatus::queuing) ++n;
    return n;
}

void Simulation::set_status(Vehicle& v, VehicleStatus to) {
    if (!can_transition(v.status, to))
        throw Error(std::string("illegal status transition ") + to_string(v.status) +
                    " -> " + to_string(to) + " for vehicle " + std::to_string(v.id));
    v.status = to;
}

void Simulation::sample_series_until(double t) {
    // Record the charging-vehicle count at each series bin start; the sample
    // reflects the state before any event at that exact instant.
    while (next_sample_bin_ < series_.size() &&
           series_[next_sample_bin_].start_s <= t) {
        series_[next_sample_bin_].charging_vehicles = charging_vehicle_count();
        ++next_sample_bin_;
    }
}

RunReport Simulation::run() {
    while (!queue_.empty()) {
        const Event e = queue_.top();
        if (e.time_s >= config_.sim.horizon_s) break;
        queue_.pop();
        sample_series_until(e.time_s);
        clock_s_ = e.time_s;
        dispatch_event(e);
        if (probe_) probe_(*this, e);
    }
    sample_series_until(config_.sim.horizon_s);

    RunReport r;
    r.scenario.strategy = to_string(config_.sim.strategy);
    r.scenario.seed = config_.sim.seed;
    r.scenario.horizon_s = config_.sim.horizon_s;
    r.scenario.matching_interval_s = config_.sim.matching_interval_s;
    r.scenario.network_nodes = net_.node_count();
    r.scenario.network_edges = net_.edge_count();
    r.scenario.total_drivers = config_.fleet.total_drivers;
    r.scenario.chargers = static_cast<int>(chargers_.size());

    r.passengers.requests = static_cast<long>(passengers_.size());
    r.passengers.served = served_;
    r.passengers.cancelled_type1 = cancelled_type1_;
    r.passengers.cancelled_type2 = cancelled_type2_;
    long in_system = 0;
    for (const PassengerRequest& p : passengers_)
        if (p.state == PassengerState::waiting || p.state == PassengerState::matched ||
            p.state == PassengerState::riding)
            ++in_system;
    r.passengers.in_system_at_end = in_system;
    r.passengers.served_pct =
        r.passengers.requests > 0
            ? 100.0 * static_cast<double>(served_) / static_cast<double>(r.passengers.requests)
            : 0.0;
    r.passengers.mean_matching_time_s =
        accepted_matches_ > 0 ? sum_matching_time_s_ / static_cast<double>(accepted_matches_) : 0.0;
    r.passengers.mean_pickup_time_s =
        accepted_matches_ > 0 ? sum_pickup_time_s_ / static_cast<double>(accepted_matches_) : 0.0;

    r.charging.sessions = charging_sessions_;
    r.charging.sessions_off_peak = charging_sessions_off_peak_;
    r.charging.sessions_peak = charging_sessions_peak_;
    r.charging.profit_usd = charging_profit_usd_;
    r.charging.profit_off_peak_usd = charging_profit_off_peak_usd_;
    r.charging.profit_peak_usd = charging_profit_peak_usd_;

    r.profit.trip_usd = trip_profit_usd_;
    r.profit.charging_usd = charging_profit_usd_;
    r.profit.monetary_usd = trip_profit_usd_ + charging_profit_usd_;

    long entered = 0, exited = 0;
    double income_sum = 0, shift_sum_h = 0, initial_soc_sum = 0, final_soc_sum = 0,
           occupied_sum = 0;
    long active = 0;
    for (const Vehicle& v : vehicles_) {
        if (v.driver.entry_time_s < 0) continue;
        ++entered;
        income_sum += config_.pricing.wage_per_s * v.driver.occupied_s -
                      v.driver.charging_fees_paid_usd;
        const double end = v.driver.exit_time_s >= 0 ? v.driver.exit_time_s
                                                     : config_.sim.horizon_s;
        shift_sum_h += (end - v.driver.entry_time_s) / kSecondsPerHour;
        initial_soc_sum += v.driver.initial_soc_kwh;
        occupied_sum += v.driver.occupied_s;
        if (v.status == VehicleStatus::exited) {
            ++exited;
        } else {
            final_soc_sum += v.soc_kwh;
            ++active;
        }
    }
    r.drivers.entered = entered;
    r.drivers.exited = exited;
    r.drivers.mean_income_usd = entered > 0 ? income_sum / static_cast<double>(entered) : 0.0;
    r.drivers.mean_shift_length_h = entered > 0 ? shift_sum_h / static_cast<double>(entered) : 0.0;
    r.drivers.mean_initial_soc_kwh =
        entered > 0 ? initial_soc_sum / static_cast<double>(entered) : 0.0;
    r.drivers.mean_final_soc_kwh = active > 0 ? final_soc_sum / static_cast<double>(active) : 0.0;
    r.drivers.total_occupied_s = occupied_sum;

    r.series_bin_s = config_.sim.series_bin_s;
    r.series = series_;
    return r;
}

void Simulation::dispatch_event(const Event& e) {
    switch (e.kind) {
        case EventKind::driver_entry: on_driver_entry(e.subject); break;
        case EventKind::passenger_arrival: on_passenger_arrival(e.subject); break;
        case EventKind::type1_deadline: on_type1_deadline(e.subject); break;
        case EventKind::matching_tick: on_matching_tick(); break;
        case EventKind::pickup_complete: on_pickup_complete(e.subject); break;
        case EventKind::dropoff_complete: on_dropoff_complete(e.subject); break;
        case EventKind::charger_arrival: on_charger_arrival(e.subject); break;
        case EventKind::charging_complete: on_charging_complete(e.subject); break;
        case EventKind::exit_decision: on_exit_decision(e.subject); break;
    }
}

void Simulation::on_driver_entry(std::int64_t vehicle_id) {
    Vehicle& v = vehicles_[static_cast<std::size_t>(vehicle_id)];
    v.driver.entry_time_s = clock_s_;
}

void Simulation::on_passenger_arrival(std::int64_t passenger_id) {
    PassengerRequest& p = passengers_[static_cast<std::size_t>(passenger_id)];
    waiting_.insert(p.id);
    schedule(type1_cancel_deadline(p), EventKind::type1_deadline, p.id);
}

void Simulation::on_type1_deadline(std::int64_t passenger_id) {
    PassengerRequest& p = passengers_[static_cast<std::size_t>(passenger_id)];
    if (p.state != PassengerState::waiting) return;
    // A deadline on a matching instant defers to the tick (inclusive
    // patience): the tick matches first and sweeps the leftovers.
    if (is_tick_time(clock_s_)) return;
    p.state = PassengerState::cancelled_type1;
    waiting_.erase(p.id);
    record_cancellation(p, true);
}

void Simulation::record_cancellation(const PassengerRequest& p, bool type1) {
    (void)p;
    if (type1)
        ++cancelled_type1_;
    else
        ++cancelled_type2_;
    const auto bin = static_cast<std::size_t>(clock_s_ / config_.sim.series_bin_s);
    if (bin < series_.size()) {
        if (type1)
            ++series_[bin].type1;
        else
            ++series_[bin].type2;
    }
}

double Simulation::current_avg_incentive(double now) {
    while (!incentive_offers_.empty() &&
           incentive_offers_.front().first < now - config_.sim.incentive_window_s)
        incentive_offers_.pop_front();
    if (incentive_offers_.empty()) return 0;
    double sum = 0;
    for (const auto& [t, r] : incentive_offers_) sum += r;
    return sum / static_cast<double>(incentive_offers_.size());
}

MarketSnapshot Simulation::take_snapshot() const {
    MarketSnapshot snap;
    snap.clock_s = clock_s_;
    snap.avg_incentive = avg_incentive_;
    for (const Vehicle& v : vehicles_) {
        if (v.driver.entry_time_s < 0 || v.status == VehicleStatus::exited) continue;
        if (v.status == VehicleStatus::vacant) {
            snap.vacant.push_back(v);
            snap.projections.push_back(
                {v.id, clock_s_, v.location, v.soc_kwh, v.soc_max_kwh, v.consumption_kw});
        } else {
            snap.projections.push_back({v.id, v.commitment.vacant_at_s,
                                        v.commitment.vacant_node,
                                        v.commitment.vacant_soc_kwh, v.soc_max_kwh,
                                        v.consumption_kw});
        }
    }
    for (std::int64_t pid : waiting_)
        snap.waiting.push_back(passengers_[static_cast<std::size_t>(pid)]);
    snap.chargers = chargers_;
    return snap;
}

void Simulation::apply_passenger_match(Vehicle& v, PassengerRequest& p, double pickup_s) {
    p.state = PassengerState::matched;
    p.match_time_s = clock_s_;
    p.offered_pickup_s = pickup_s;
    waiting_.erase(p.id);
    ++accepted_matches_;
    sum_matching_time_s_ += clock_s_ - p.request_time_s;
    sum_pickup_time_s_ += pickup_s;

    set_status(v, VehicleStatus::pickup);
    ActiveTrip trip;
    trip.passenger_id = p.id;
    trip.pickup_s = pickup_s;
    trip.arrival_s = clock_s_ + pickup_s;
    trip.dropoff_s = trip.arrival_s + p.trip_time_s;
    trips_[static_cast<std::size_t>(v.id)] = trip;
    v.commitment = {trip.dropoff_s, p.destination,
                    v.soc_kwh - energy_kwh(v.consumption_kw, pickup_s + p.trip_time_s)};
    schedule(trip.arrival_s, EventKind::pickup_complete, v.id);
}

void Simulation::apply_charging_dispatch(Vehicle& v, std::int64_t charger_id,
                                         double incentive, const ChargingPlan& plan) {
    Charger& pile = chargers_[static_cast<std::size_t>(charger_index(charger_id))];
    ChargingSession s;
    s.charger_id = charger_id;
    s.match_clock_s = clock_s_;
    s.incentive = incentive;
    s.recharge_kwh = plan.recharge_kwh;
    s.travel_s = plan.travel_s;
    s.arrival_s = clock_s_ + plan.travel_s;
    // Realized schedule: queued behind all reservations placed so far.
    s.start_s = std::max(s.arrival_s, pile.next_available_s);
    s.complete_s = s.start_s + s.recharge_kwh / pile.speed_kw * kSecondsPerHour;
    pile.next_available_s = s.complete_s;
    pile_queue_[static_cast<std::size_t>(charger_index(charger_id))].push_back(v.id);
    sessions_[static_cast<std::size_t>(v.id)] = s;

    set_status(v, VehicleStatus::to_charger);
    v.commitment = {s.complete_s, pile.location, 0.9 * v.soc_max_kwh};
    schedule(s.arrival_s, EventKind::charger_arrival, v.id);
}

void Simulation::sweep_type1(double now) {
    std::vector<std::int64_t> expired;
    for (std::int64_t pid : waiting_) {
        const PassengerRequest& p = passengers_[static_cast<std::size_t>(pid)];
        if (type1_cancel_deadline(p) <= now) expired.push_back(pid);
    }
    for (std::int64_t pid : expired) {
        PassengerRequest& p = passengers_[static_cast<std::size_t>(pid)];
        p.state = PassengerState::cancelled_type1;
        waiting_.erase(pid);
        record_cancellation(p, true);
    }
}

void Simulation::on_matching_tick() {
    avg_incentive_ = current_avg_incentive(clock_s_);
    const MarketSnapshot snap = take_snapshot();

    // Vehicles that end the tick unmatched or having refused a charging
    // dispatch face an exit decision (rate-limited to one per minute).
    std::set<std::int64_t> exit_candidates;
    for (const Vehicle& v : snap.vacant) exit_candidates.insert(v.id);

    auto offer_charging = [&](Vehicle& v, std::int64_t charger_id, double r,
                              const ChargingPlan& plan, double compliance_prob) {
        incentive_offers_.emplace_back(clock_s_, r);
        const bool comply =
            vehicle_rng_[static_cast<std::size_t>(v.id)].bernoulli(compliance_prob);
        if (comply) {
            apply_charging_dispatch(v, charger_id, r, plan);
            exit_candidates.erase(v.id);
        }
        // refusal: stays vacant and remains an exit candidate
    };

    if (config_.sim.strategy == Strategy::proposed) {
        const BenefitMatrix matrix = build_benefit_matrix(snap, valuation_, config_.pricing);
        const Assignment asg = solve_assignment(matrix);
        validate_assignment(snap, matrix, asg, config_.pricing);

        std::map<std::pair<std::int64_t, std::pair<int, std::int64_t>>, const PairEvaluation*>
            eval_of;
        for (const PairEvaluation& pair : matrix.pairs)
            eval_of[{pair.vehicle_id,
                     {static_cast<int>(pair.target.kind), pair.target.id}}] = &pair;

        for (const auto& [vehicle_id, target] : asg.pairs) {
            Vehicle& v = vehicles_[static_cast<std::size_t>(vehicle_id)];
            const PairEvaluation& pair = *eval_of.at(
                {vehicle_id, {static_cast<int>(target.kind), target.id}});
            if (target.kind == TargetKind::passenger) {
                PassengerRequest& p = passengers_[static_cast<std::size_t>(target.id)];
                exit_candidates.erase(vehicle_id);  // matched, even if rejected
                if (type2_accepts(p, pair.pickup_s)) {
                    apply_passenger_match(v, p, pair.pickup_s);
                } else {
                    p.state = PassengerState::cancelled_type2;
                    waiting_.erase(p.id);
                    record_cancellation(p, false);
                    // vehicle returns to the vacant set for the next interval
                }
            } else {
                offer_charging(v, target.id, pair.incentive, *pair.plan, pair.compliance);
            }
        }
    } else {
        const Assignment asg = benchmark_assignment(snap, net_);
        for (const auto& [vehicle_id, target] : asg.pairs) {
            Vehicle& v = vehicles_[static_cast<std::size_t>(vehicle_id)];
            PassengerRequest& p = passengers_[static_cast<std::size_t>(target.id)];
            const double pickup_s = net_.travel_time(v.location, p.origin);
            exit_candidates.erase(vehicle_id);
            if (type2_accepts(p, pickup_s)) {
                apply_passenger_match(v, p, pickup_s);
            } else {
                p.state = PassengerState::cancelled_type2;
                waiting_.erase(p.id);
                record_cancellation(p, false);
            }
        }

        // Reactive charging for the vehicles still vacant after trip
        // dispatch, type-II returns included.
        std::vector<Vehicle> still_vacant;
        for (const Vehicle& sv : snap.vacant) {
            const Vehicle& live = vehicles_[static_cast<std::size_t>(sv.id)];
            if (live.status == VehicleStatus::vacant) still_vacant.push_back(sv);
        }
        const bool full = config_.sim.strategy == Strategy::benchmark_free_charging;
        for (const ChargingOrder& order :
             reactive_charging_orders(still_vacant, snap.chargers, net_, clock_s_, full)) {
            Vehicle& v = vehicles_[static_cast<std::size_t>(order.vehicle_id)];
            const double prob = compliance(v.attrs, order.incentive, order.plan.total_s);
            offer_charging(v, order.charger_id, order.incentive, order.plan, prob);
        }
    }

    sweep_type1(clock_s_);

    for (std::int64_t vid : exit_candidates) {
        const Vehicle& v = vehicles_[static_cast<std::size_t>(vid)];
        if (clock_s_ - v.driver.last_exit_decision_s >= config_.sim.exit_decision_gap_s)
            schedule(clock_s_, EventKind::exit_decision, vid);
    }
}

void Simulation::on_pickup_complete(std::int64_t vehicle_id) {
    Vehicle& v = vehicles_[static_cast<std::size_t>(vehicle_id)];
    const ActiveTrip& trip = *trips_[static_cast<std::size_t>(vehicle_id)];
    PassengerRequest& p = passengers_[static_cast<std::size_t>(trip.passenger_id)];
    v.location = p.origin;
    v.soc_kwh -= energy_kwh(v.consumption_kw, trip.pickup_s);
    set_status(v, VehicleStatus::occupied);
    p.state = PassengerState::riding;
    schedule(trip.dropoff_s, EventKind::dropoff_complete, vehicle_id);
}

void Simulation::on_dropoff_complete(std::int64_t vehicle_id) {
    Vehicle& v = vehicles_[static_cast<std::size_t>(vehicle_id)];
    const ActiveTrip& trip = *trips_[static_cast<std::size_t>(vehicle_id)];
    PassengerRequest& p = passengers_[static_cast<std::size_t>(trip.passenger_id)];
    v.location = p.destination;
    v.soc_kwh -= energy_kwh(v.consumption_kw, p.trip_time_s);
    set_status(v, VehicleStatus::vacant);
    p.state = PassengerState::served;
    ++served_;
    trip_profit_usd_ += (config_.pricing.fare_per_s - config_.pricing.wage_per_s) * p.trip_time_s;
    v.driver.occupied_s += p.trip_time_s;
    trips_[static_cast<std::size_t>(vehicle_id)].reset();
}

void Simulation::on_charger_arrival(std::int64_t vehicle_id) {
    Vehicle& v = vehicles_[static_cast<std::size_t>(vehicle_id)];
    const ChargingSession& s = *sessions_[static_cast<std::size_t>(vehicle_id)];
    v.location = chargers_[static_cast<std::size_t>(charger_index(s.charger_id))].location;
    v.soc_kwh -= energy_kwh(v.consumption_kw, s.travel_s);
    set_status(v, clock_s_ < s.start_s ? VehicleStatus::queuing : VehicleStatus::charging);
    schedule(s.complete_s, EventKind::charging_complete, vehicle_id);
}

void Simulation::on_charging_complete(std::int64_t vehicle_id) {
    Vehicle& v = vehicles_[static_cast<std::size_t>(vehicle_id)];
    const ChargingSession s = *sessions_[static_cast<std::size_t>(vehicle_id)];
    v.soc_kwh = 0.9 * v.soc_max_kwh;  // exact top-up target
    set_status(v, VehicleStatus::vacant);
    sessions_[static_cast<std::size_t>(vehicle_id)].reset();

    // Pricing is fixed at the matching instant.
    const double unit_profit = charging_price(config_.pricing, s.incentive, s.match_clock_s);
    const double tariff = tou_tariff(config_.pricing, s.match_clock_s);
    const double profit = unit_profit * s.recharge_kwh;
    const double fee = (1.0 - s.incentive) *
                       (config_.pricing.margin_usd_per_kwh +
                        config_.pricing.infrastructure_usd_per_kwh + tariff) *
                       s.recharge_kwh;
    v.driver.charging_fees_paid_usd += fee;
    charging_profit_usd_ += profit;
    ++charging_sessions_;
    if (tariff == min_tou_rate_) {
        ++charging_sessions_off_peak_;
        charging_profit_off_peak_usd_ += profit;
    } else {
        ++charging_sessions_peak_;
        charging_profit_peak_usd_ += profit;
    }

    // Promote the next reserved vehicle if it is already waiting.
    const int ci = charger_index(s.charger_id);
    auto& fifo = pile_queue_[static_cast<std::size_t>(ci)];
    assert(!fifo.empty() && fifo.front() == vehicle_id);
    fifo.pop_front();
    if (!fifo.empty()) {
        Vehicle& next = vehicles_[static_cast<std::size_t>(fifo.front())];
        if (next.status == VehicleStatus::queuing) set_status(next, VehicleStatus::charging);
    }
}

void Simulation::on_exit_decision(std::int64_t vehicle_id) {
    Vehicle& v = vehicles_[static_cast<std::size_t>(vehicle_id)];
    if (v.status != VehicleStatus::vacant) return;
    v.driver.last_exit_decision_s = clock_s_;
    const double worked_h = (clock_s_ - v.driver.entry_time_s) / kSecondsPerHour;
    const double p_exit = exit_probability(v.attrs, worked_h, v.soc_kwh, avg_incentive_);
    if (vehicle_rng_[static_cast<std::size_t>(vehicle_id)].bernoulli(p_exit)) {
        set_status(v, VehicleStatus::exited);
        v.driver.exit_time_s = clock_s_;
    }
}

}  // namespace evsim
