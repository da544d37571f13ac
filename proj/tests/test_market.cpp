#include <doctest.h>

#include "evsim/config.hpp"
#include "evsim/error.hpp"
#include "evsim/market.hpp"

using namespace evsim;

namespace {
PricingConfig paper_pricing() { return ScenarioConfig::defaults().pricing; }
}  // namespace

TEST_CASE("time-of-use tariff lookup") {
    const PricingConfig pricing = paper_pricing();
    CHECK(tou_tariff(pricing, 4 * 3600.0) == 0.018);
    CHECK(tou_tariff(pricing, 12 * 3600.0) == 0.255);
    CHECK(tou_tariff(pricing, 0.0) == 0.018);
    CHECK(tou_tariff(pricing, 8 * 3600.0) == 0.255);  // half-open windows

    SUBCASE("wraps modulo 24 h") {
        CHECK(tou_tariff(pricing, 86400.0 + 4 * 3600.0) == 0.018);
        CHECK(tou_tariff(pricing, 3 * 86400.0 + 12 * 3600.0) == 0.255);
    }

    SUBCASE("constant schedule") {
        PricingConfig flat = pricing;
        flat.tou = {{0, kSecondsPerDay, 0.1}};
        CHECK(tou_tariff(flat, 123.0) == 0.1);
        CHECK(tou_tariff(flat, 86000.0) == 0.1);
    }
}

TEST_CASE("unit charging profit") {
    const PricingConfig pricing = paper_pricing();
    const double peak = 12 * 3600.0;
    CHECK(charging_price(pricing, 0.0, peak) == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(charging_price(pricing, 1.0, peak) == doctest::Approx(-0.305).epsilon(1e-12));
    CHECK(charging_price(pricing, 0.5, peak) == doctest::Approx(-0.1025).epsilon(1e-12));
    CHECK(charging_price(pricing, 1.0, 3600.0) == doctest::Approx(-0.068).epsilon(1e-12));
    CHECK_THROWS_AS(charging_price(pricing, -0.1, peak), Error);
    CHECK_THROWS_AS(charging_price(pricing, 1.1, peak), Error);
}

TEST_CASE("charging profit is affine and strictly decreasing in the discount") {
    const PricingConfig pricing = paper_pricing();
    const double k = 10 * 3600.0;
    double prev = charging_price(pricing, 0.0, k);
    double first_step = 0;
    for (int i = 1; i <= 10; ++i) {
        const double cur = charging_price(pricing, i / 10.0, k);
        CHECK(cur < prev);
        if (i == 1) first_step = cur - prev;
        else CHECK(cur - prev == doctest::Approx(first_step).epsilon(1e-9));
        prev = cur;
    }
    CHECK(charging_price(pricing, 0.0, k) == pricing.margin_usd_per_kwh);
    CHECK(charging_price(pricing, 1.0, k) ==
          doctest::Approx(-(pricing.infrastructure_usd_per_kwh + tou_tariff(pricing, k)))
              .epsilon(1e-12));
}

TEST_CASE("pricing validation") {
    PricingConfig p = paper_pricing();
    CHECK_NOTHROW(p.validate());

    SUBCASE("fare must exceed wage") {
        p.fare_per_s = p.wage_per_s;
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
    SUBCASE("value-of-time ordering") {
        p.vot_pickup_per_s = p.vot_match_per_s;
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
    SUBCASE("schedule gap") {
        p.tou = {{0, 1000, 0.1}, {2000, kSecondsPerDay, 0.2}};
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
    SUBCASE("schedule overlap") {
        p.tou = {{0, 50000, 0.1}, {40000, kSecondsPerDay, 0.2}};
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
    SUBCASE("schedule must close the day") {
        p.tou = {{0, 50000, 0.1}};
        CHECK_THROWS_AS(p.validate(), ConfigError);
    }
}

TEST_CASE("vehicle status transitions follow the decision graph") {
    using S = VehicleStatus;
    CHECK(can_transition(S::vacant, S::pickup));
    CHECK(can_transition(S::vacant, S::to_charger));
    CHECK(can_transition(S::vacant, S::exited));
    CHECK(can_transition(S::vacant, S::vacant));
    CHECK(can_transition(S::pickup, S::occupied));
    CHECK(can_transition(S::occupied, S::vacant));
    CHECK(can_transition(S::to_charger, S::queuing));
    CHECK(can_transition(S::to_charger, S::charging));
    CHECK(can_transition(S::queuing, S::charging));
    CHECK(can_transition(S::charging, S::vacant));

    CHECK_FALSE(can_transition(S::pickup, S::vacant));     // no skipped states
    CHECK_FALSE(can_transition(S::occupied, S::pickup));
    CHECK_FALSE(can_transition(S::vacant, S::occupied));
    CHECK_FALSE(can_transition(S::exited, S::vacant));     // exits are final
    CHECK_FALSE(can_transition(S::exited, S::exited));
    CHECK_FALSE(can_transition(S::queuing, S::vacant));
}

TEST_CASE("energy conversion") {
    CHECK(energy_kwh(6.0, 3600.0) == 6.0);
    CHECK(energy_kwh(6.0, 600.0) == 1.0);
    CHECK(energy_kwh(120.0, 588.0) == doctest::Approx(19.6).epsilon(1e-12));
}
