#include <doctest.h>

#include <cmath>

#include "evsim/config.hpp"
#include "evsim/error.hpp"
#include "evsim/rng.hpp"
#include "evsim/valuation.hpp"
#include "oracles.hpp"

using namespace evsim;

namespace {

Vehicle make_vehicle(std::int64_t id, NodeId node, double soc, double soc_max = 54,
                     double consumption = 6) {
    Vehicle v;
    v.id = id;
    v.location = node;
    v.soc_kwh = soc;
    v.soc_max_kwh = soc_max;
    v.consumption_kw = consumption;
    return v;
}

PassengerRequest make_passenger(std::int64_t id, NodeId origin, NodeId dest,
                                double request_time, double trip_time) {
    PassengerRequest p;
    p.id = id;
    p.origin = origin;
    p.destination = dest;
    p.request_time_s = request_time;
    p.trip_time_s = trip_time;
    return p;
}

const double kMargin = 12.0 / 3600.0;  // $42/h fare, $30/h wage

ValuationParams desk_params(double radius = 300) {
    ValuationParams p;
    p.zone_radius_s = radius;
    p.max_zone_pickup_s = 450;
    p.fare_margin_per_s = kMargin;
    return p;
}

}  // namespace

TEST_CASE("recharge amount") {
    Vehicle v = make_vehicle(0, 0, 48.6);
    CHECK(recharge_amount(v, 0) == doctest::Approx(0.0).epsilon(1e-12));

    v.soc_kwh = 30;
    CHECK(recharge_amount(v, 600) == doctest::Approx(19.6).epsilon(1e-12));

    v.soc_kwh = 0.5;
    CHECK_THROWS_AS(recharge_amount(v, 600), Error);  // 1 kWh en route > 0.5
}

TEST_CASE("queue time") {
    Charger ch;
    ch.next_available_s = 500;
    CHECK(queue_time(ch, 0, 300) == 200.0);
    ch.next_available_s = 250;
    CHECK(queue_time(ch, 0, 300) == 0.0);
    ch.next_available_s = 1500;
    CHECK(queue_time(ch, 1000, 200) == 300.0);
}

TEST_CASE("charging plan") {
    Charger ch;
    ch.id = 0;
    ch.speed_kw = 120;
    ch.next_available_s = 0;

    Vehicle v = make_vehicle(0, 0, 30);
    auto plan = plan_charging(v, ch, 0, 600);
    REQUIRE(plan.has_value());
    CHECK(plan->recharge_kwh == doctest::Approx(19.6).epsilon(1e-12));
    CHECK(plan->total_s == doctest::Approx(1188.0).epsilon(1e-12));
    CHECK(plan->total_s ==
          plan->travel_s + plan->queue_s + plan->recharge_kwh / 120.0 * 3600.0);

    SUBCASE("zero recharge leaves only travel and queue") {
        v.soc_kwh = 48.6;
        ch.next_available_s = 100;
        auto p2 = plan_charging(v, ch, 0, 0);
        REQUIRE(p2.has_value());
        CHECK(p2->recharge_kwh == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(p2->total_s == doctest::Approx(p2->travel_s + p2->queue_s).epsilon(1e-12));
    }
    SUBCASE("arriving above the 90% target is not chargeable") {
        v.soc_kwh = 54;
        CHECK_FALSE(plan_charging(v, ch, 0, 0).has_value());
    }
    SUBCASE("unreachable charger is not chargeable") {
        v.soc_kwh = 0.5;
        CHECK_FALSE(plan_charging(v, ch, 0, 600).has_value());
    }
}

TEST_CASE("Eq-3 identity holds on random plans") {
    EntityRng rng(77, 0, 0);
    Charger ch;
    ch.speed_kw = 120;
    for (int i = 0; i < 300; ++i) {
        Vehicle v = make_vehicle(0, 0, rng.uniform(5, 48), 54, 6);
        ch.next_available_s = rng.uniform(0, 2000);
        const double k = rng.uniform(0, 1000);
        const double travel = rng.uniform(0, 1200);
        const auto plan = plan_charging(v, ch, k, travel);
        if (!plan) continue;
        CHECK(plan->total_s ==
              plan->travel_s + plan->queue_s + plan->recharge_kwh / ch.speed_kw * 3600.0);
        CHECK(plan->recharge_kwh + (v.soc_kwh - energy_kwh(v.consumption_kw, travel)) ==
              doctest::Approx(0.9 * v.soc_max_kwh).epsilon(1e-12));
        CHECK(plan->recharge_kwh >= 0);
        CHECK(plan->queue_s >= 0);
    }
}

TEST_CASE("passenger benefit hand evaluation") {
    PricingConfig pricing = ScenarioConfig::defaults().pricing;
    Vehicle v = make_vehicle(0, 0, 54);
    PassengerRequest p = make_passenger(0, 0, 1, 970, 900);
    // t_m = 30, t_p = 300, t_o = 900, delta mvoc 0.05
    const double benefit = passenger_benefit(v, p, 300, 1000, 0.05, pricing);
    CHECK(benefit == doctest::Approx(3.00 + 0.30 - 1.50 + 0.05 * 2.0).epsilon(1e-9));
    CHECK(benefit == doctest::Approx(1.90).epsilon(1e-9));

    SUBCASE("zero waits and zero delta reduce to the fare term") {
        p.request_time_s = 1000;
        CHECK(passenger_benefit(v, p, 0, 1000, 0, pricing) ==
              doctest::Approx(kMargin * 900).epsilon(1e-12));
    }
    SUBCASE("insufficient SoC throws") {
        v.soc_kwh = 1.0;
        CHECK_THROWS_AS(passenger_benefit(v, p, 300, 1000, 0, pricing), Error);
    }
}

TEST_CASE("charging benefit hand evaluation") {
    PricingConfig pricing = ScenarioConfig::defaults().pricing;
    ChargingPlan plan;
    plan.travel_s = 600;
    plan.queue_s = 0;
    plan.recharge_kwh = 20;
    plan.total_s = 1800;
    const double off_peak = 3600;
    CHECK(charging_benefit(plan, 0, 0.3, pricing, off_peak) ==
          doctest::Approx(2.0 - 3.6 + 6.0).epsilon(1e-9));

    SUBCASE("zero recharge is pure time cost") {
        plan.recharge_kwh = 0;
        plan.total_s = 700;
        CHECK(charging_benefit(plan, 0, 0.3, pricing, off_peak) ==
              doctest::Approx(-0.002 * 700).epsilon(1e-12));
    }
    SUBCASE("full incentive at peak prices the energy at -0.305") {
        const double peak = 12 * 3600;
        CHECK(charging_benefit(plan, 1, 0, pricing, peak) ==
              doctest::Approx(-0.305 * plan.recharge_kwh - 0.002 * plan.total_s)
                  .epsilon(1e-9));
    }
}

TEST_CASE("zone matching profit") {
    Network net = Network::grid(4, 4, 30);
    Zone zone;
    zone.center = 0;
    zone.radius_s = 300;

    SUBCASE("no passengers means no profit") {
        zone.vehicles.push_back({0, 0, 54, 54, 6});
        CHECK(local_market_profit(zone, net, kMargin, 450) == 0.0);
    }
    SUBCASE("single pair") {
        zone.vehicles.push_back({0, 0, 54, 54, 6});
        zone.passengers.push_back({0, 1, 600});
        CHECK(local_market_profit(zone, net, kMargin, 450) ==
              doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("one vehicle serves only the pickup-optimal passenger") {
        zone.vehicles.push_back({0, 0, 54, 54, 6});
        zone.passengers.push_back({0, 1, 600});   // pickup 30
        zone.passengers.push_back({1, 5, 900});   // pickup 60
        const auto outcome = zone_match(zone, net, kMargin, 450);
        CHECK(outcome.vehicle_to_passenger == std::vector<int>{0});
        CHECK(outcome.profit_usd == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("pickup cap and SoC feasibility prune edges") {
        zone.vehicles.push_back({0, 0, 0.2, 54, 6});  // cannot cover any trip
        zone.passengers.push_back({0, 1, 600});
        CHECK(local_market_profit(zone, net, kMargin, 450) == 0.0);
        zone.vehicles[0].soc_kwh = 54;
        CHECK(local_market_profit(zone, net, kMargin, 20) == 0.0);  // pickup 30 > cap
    }
}

TEST_CASE("zone profit is monotone in the vehicle set") {
    Network net = Network::grid(5, 5, 30);
    EntityRng rng(31, 0, 0);
    for (int trial = 0; trial < 80; ++trial) {
        Zone zone;
        zone.center = 12;
        zone.radius_s = 1e9;
        const int nv = static_cast<int>(rng.uniform() * 5);
        const int np = 1 + static_cast<int>(rng.uniform() * 5);
        for (int i = 0; i < nv; ++i)
            zone.vehicles.push_back({i, static_cast<NodeId>(rng.uniform() * 25),
                                     rng.uniform(1, 54), 54, 6});
        for (int j = 0; j < np; ++j)
            zone.passengers.push_back({j, static_cast<NodeId>(rng.uniform() * 25),
                                       rng.uniform(60, 900)});
        const double base = local_market_profit(zone, net, kMargin, 450);
        Zone bigger = zone;
        bigger.vehicles.push_back({nv, static_cast<NodeId>(rng.uniform() * 25),
                                   rng.uniform(1, 54), 54, 6});
        const double grown = local_market_profit(bigger, net, kMargin, 450);
        CHECK(grown >= base);
    }
}

TEST_CASE("zone matching equals the enumeration oracle bit for bit") {
    Network net = Network::grid(5, 5, 30);
    EntityRng rng(32, 0, 0);
    for (int trial = 0; trial < 150; ++trial) {
        Zone zone;
        zone.center = 0;
        zone.radius_s = 1e9;
        const int nv = 1 + static_cast<int>(rng.uniform() * 5);
        const int np = 1 + static_cast<int>(rng.uniform() * 5);
        for (int i = 0; i < nv; ++i)
            zone.vehicles.push_back({i, static_cast<NodeId>(rng.uniform() * 25),
                                     rng.uniform(0.5, 54), 54, 6});
        for (int j = 0; j < np; ++j)
            zone.passengers.push_back({j, static_cast<NodeId>(rng.uniform() * 25),
                                       std::floor(rng.uniform(60, 900))});
        const double engine = local_market_profit(zone, net, kMargin, 450);
        const double brute = oracle::zone_profit_usd(zone, net, kMargin, 450);
        CHECK(engine == brute);
    }
}

TEST_CASE("marginal value of charge") {
    Network net = Network::grid(4, 4, 30);

    SUBCASE("leave-one-out hand case") {
        MarketSnapshot snap;
        snap.clock_s = 0;
        Vehicle v = make_vehicle(0, 0, 30);
        snap.vacant.push_back(v);
        snap.waiting.push_back(make_passenger(0, 1, 2, 0, 600));
        Valuation val(net, nullptr, desk_params());
        CHECK(val.present_mvoc(snap, v) == doctest::Approx(2.0 / 30.0).epsilon(1e-12));
    }
    SUBCASE("anchor unmatched in the baseline gives zero") {
        MarketSnapshot snap;
        snap.clock_s = 0;
        Vehicle near = make_vehicle(0, 1, 54);
        Vehicle far = make_vehicle(1, 15, 54);
        snap.vacant = {near, far};
        snap.waiting.push_back(make_passenger(0, 1, 2, 0, 600));
        Valuation val(net, nullptr, desk_params(1e9));
        CHECK(val.present_mvoc(snap, far) == 0.0);
        CHECK(val.present_mvoc(snap, near) > 0.0);
    }
    SUBCASE("redundant co-located twins are both worth zero") {
        MarketSnapshot snap;
        snap.clock_s = 0;
        Vehicle a = make_vehicle(0, 0, 30);
        Vehicle b = make_vehicle(1, 0, 30);
        snap.vacant = {a, b};
        snap.waiting.push_back(make_passenger(0, 1, 2, 0, 600));
        Valuation val(net, nullptr, desk_params());
        CHECK(val.present_mvoc(snap, a) == 0.0);
        CHECK(val.present_mvoc(snap, b) == 0.0);
    }
    SUBCASE("zero-SoC anchor is zero by definition") {
        MarketSnapshot snap;
        snap.clock_s = 0;
        Vehicle v = make_vehicle(0, 0, 0);
        snap.vacant.push_back(v);
        snap.waiting.push_back(make_passenger(0, 1, 2, 0, 600));
        Valuation val(net, nullptr, desk_params());
        CHECK(val.present_mvoc(snap, v) == 0.0);
    }
}

TEST_CASE("marginal value of charge equals leave-one-out enumeration") {
    Network net = Network::grid(5, 5, 30);
    EntityRng rng(33, 0, 0);
    Valuation val(net, nullptr, desk_params(1e9));
    for (int trial = 0; trial < 100; ++trial) {
        MarketSnapshot snap;
        snap.clock_s = 0;
        const int nv = 1 + static_cast<int>(rng.uniform() * 5);
        const int np = static_cast<int>(rng.uniform() * 5);
        for (int i = 0; i < nv; ++i)
            snap.vacant.push_back(make_vehicle(i, static_cast<NodeId>(rng.uniform() * 25),
                                               rng.uniform(0.5, 54)));
        for (int j = 0; j < np; ++j)
            snap.waiting.push_back(make_passenger(j, static_cast<NodeId>(rng.uniform() * 25),
                                                  0, 0, std::floor(rng.uniform(60, 900))));
        const Vehicle& anchor = snap.vacant[static_cast<std::size_t>(rng.uniform() * nv)];

        Zone zone;
        zone.center = anchor.location;
        zone.radius_s = 1e9;
        for (const Vehicle& v : snap.vacant)
            zone.vehicles.push_back({v.id, v.location, v.soc_kwh, 54, 6});
        for (const PassengerRequest& p : snap.waiting)
            zone.passengers.push_back({p.id, p.origin, p.trip_time_s});
        Zone without = zone;
        without.vehicles.erase(
            without.vehicles.begin() +
            (std::find_if(without.vehicles.begin(), without.vehicles.end(),
                          [&](const ZoneVehicle& zv) { return zv.id == anchor.id; }) -
             without.vehicles.begin()));
        const double expect = (oracle::zone_profit_usd(zone, net, kMargin, 450) -
                               oracle::zone_profit_usd(without, net, kMargin, 450)) /
                              anchor.soc_kwh;
        CHECK(val.present_mvoc(snap, anchor) == expect);
    }
}

TEST_CASE("zone prediction") {
    Network net = Network::grid(4, 4, 30);
    Valuation val(net, nullptr, desk_params());

    MarketSnapshot snap;
    snap.clock_s = 1000;
    Vehicle idle = make_vehicle(0, 5, 40);
    snap.vacant.push_back(idle);
    snap.projections.push_back({0, 1000, 5, 40, 54, 6});
    // a vehicle dropping off at node 6 at t = 1300
    snap.projections.push_back({1, 1300, 6, 25, 54, 6});
    snap.waiting.push_back(make_passenger(0, 5, 9, 980, 300));

    SUBCASE("zero horizon is the observed market") {
        const Zone zone = val.predicted_zone(snap, 5, 1000, -1);
        REQUIRE(zone.vehicles.size() == 1);  // the in-flight vehicle is hidden
        CHECK(zone.vehicles[0].id == 0);
        REQUIRE(zone.passengers.size() == 1);
        CHECK(zone.passengers[0].id == 0);
    }
    SUBCASE("itinerary roll-forward adds the dropoff") {
        const Zone zone = val.predicted_zone(snap, 5, 1400, -1);
        REQUIRE(zone.vehicles.size() == 2);
        CHECK(zone.vehicles[1].id == 1);
        CHECK(zone.vehicles[1].node == 6);
        CHECK(zone.vehicles[1].soc_kwh == 25);
    }
    SUBCASE("excluded vehicle is omitted") {
        const Zone zone = val.predicted_zone(snap, 5, 1400, 1);
        REQUIRE(zone.vehicles.size() == 1);
        CHECK(zone.vehicles[0].id == 0);
    }
}

TEST_CASE("predicted marginal values") {
    Network net = Network::grid(4, 4, 30);
    Valuation val(net, nullptr, desk_params());

    MarketSnapshot snap;
    snap.clock_s = 0;
    Vehicle v = make_vehicle(0, 0, 54);
    snap.vacant.push_back(v);
    snap.projections.push_back({0, 0, 0, 54, 54, 6});

    SUBCASE("empty destination zone gains nothing") {
        PassengerRequest p = make_passenger(0, 1, 15, 0, 600);
        CHECK(val.predicted_mvoc_passenger(snap, v, p, 30) == 0.0);
    }
    SUBCASE("charging trip denominator is the 90% target") {
        // A waiting passenger at the charger node would be served by the
        // freshly charged vehicle; gain = margin * trip over 0.9 * 54.
        Charger ch;
        ch.id = 0;
        ch.location = 15;
        ch.speed_kw = 120;
        Vehicle low = make_vehicle(0, 14, 10);
        MarketSnapshot s2;
        s2.clock_s = 0;
        s2.vacant.push_back(low);
        s2.projections.push_back({0, 0, 14, 10, 54, 6});
        const auto plan = plan_charging(low, ch, 0, 30);
        REQUIRE(plan.has_value());
        // no demand model attached: predicted demand is empty -> gain 0
        CHECK(val.predicted_mvoc_charging(s2, low, ch, *plan) == 0.0);
    }
}

TEST_CASE("demand model expectation and horizon demand") {
    Network net = Network::grid(3, 3, 30);
    // constant rate: one request every 5 s at node 4 for 900 s
    std::vector<DemandRequest> reqs;
    for (int i = 0; i < 180; ++i) reqs.push_back({i * 5.0, 4, 5});
    DemandModel model(reqs, net, 900, 60);

    const auto zone_nodes = net.nodes_within(4, 30);
    const auto expected = model.expected_waiting(zone_nodes, 450);
    // rate 0.2/s * 60 s window = 12 expected waiting passengers
    CHECK(expected.expected_count == 12);
    CHECK(expected.mean_trip_s == doctest::Approx(30.0).epsilon(1e-12));

    SUBCASE("outside the observed bins the expectation is zero") {
        CHECK(model.expected_waiting(zone_nodes, 5000).expected_count == 0);
    }
    SUBCASE("prediction feeds the predicted zone") {
        Valuation val(net, &model, desk_params(30));
        MarketSnapshot snap;
        snap.clock_s = 100;
        const Zone zone = val.predicted_zone(snap, 4, 450, -1);
        CHECK(zone.passengers.size() == 12);
        CHECK(zone.passengers[0].origin == 4);
        CHECK(zone.passengers[0].trip_time_s == doctest::Approx(30.0).epsilon(1e-12));
    }
}

TEST_CASE("expected waiting count matches a Monte-Carlo arrival process") {
    // Poisson arrivals at rate 0.1/s; passengers wait 60 s unless served.
    // The steady-state waiting count is rate * window.
    EntityRng rng(55, 0, 0);
    const double rate = 0.1, window = 60;
    double total = 0;
    const int runs = 4000;
    for (int run = 0; run < runs; ++run) {
        double t = 0;
        int waiting = 0;
        while (true) {
            t += -std::log(rng.uniform_pos()) / rate;
            if (t >= 600) break;
            if (t > 600 - window) ++waiting;
        }
        total += waiting;
    }
    const double mc_mean = total / runs;
    CHECK(mc_mean == doctest::Approx(rate * window).epsilon(0.05));

    Network net = Network::grid(2, 2, 30);
    std::vector<DemandRequest> reqs;
    for (int i = 0; i < 90; ++i) reqs.push_back({i / 0.1, 0, 1});  // rate 0.1/s
    DemandModel model(reqs, net, 900, window);
    CHECK(model.expected_waiting({0}, 500).expected_count == std::lround(rate * window));
}

TEST_CASE("delta mvoc is a plain difference") {
    CHECK(delta_mvoc(0, 0) == 0.0);
    CHECK(delta_mvoc(0.02, 0.05) == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(delta_mvoc(2.0 / 30.0, 0) == doctest::Approx(-2.0 / 30.0).epsilon(1e-12));
}
