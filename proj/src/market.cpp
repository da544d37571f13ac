#include "evsim/market.hpp"

#include <algorithm>
#include <cmath>

#include "evsim/error.hpp"

namespace evsim {

const char* to_string(VehicleStatus s) {
    switch (s) {
        case VehicleStatus::vacant: return "vacant";
        case VehicleStatus::pickup: return "pickup";
        case VehicleStatus::occupied: return "occupied";
        case VehicleStatus::to_charger: return "to_charger";
        case VehicleStatus::queuing: return "queuing";
        case VehicleStatus::charging: return "charging";
        case VehicleStatus::exited: return "exited";
    }
    return "?";
}

bool can_transition(VehicleStatus from, VehicleStatus to) {
    using S = VehicleStatus;
    switch (from) {
        case S::vacant:
            return to == S::pickup || to == S::to_charger || to == S::vacant ||
                   to == S::exited;
        case S::pickup: return to == S::occupied;
        case S::occupied: return to == S::vacant;
        case S::to_charger: return to == S::queuing || to == S::charging;
        case S::queuing: return to == S::charging;
        case S::charging: return to == S::vacant || to == S::exited;
        case S::exited: return false;
    }
    return false;
}

void PricingConfig::validate() const {
    if (!(fare_per_s > wage_per_s))
        throw ConfigError("fare rate must exceed wage rate");
    if (!(vot_match_per_s > vot_pickup_per_s && vot_pickup_per_s > vot_charge_per_s))
        throw ConfigError("values of time must satisfy match > pickup > charge");
    if (tou.empty()) throw ConfigError("time-of-use schedule is empty");

    auto windows = tou;
    std::sort(windows.begin(), windows.end(),
              [](const TouWindow& a, const TouWindow& b) { return a.start_s < b.start_s; });
    double cursor = 0;
    for (const TouWindow& w : windows) {
        if (w.start_s != cursor)
            throw ConfigError("time-of-use schedule has a gap or overlap at " +
                              std::to_string(cursor) + " s");
        if (!(w.end_s > w.start_s))
            throw ConfigError("time-of-use window must have positive length");
        cursor = w.end_s;
    }
    if (cursor != kSecondsPerDay)
        throw ConfigError("time-of-use schedule must cover exactly 24 hours");
}

double tou_tariff(const PricingConfig& pricing, double k) {
    double day_s = std::fmod(k, kSecondsPerDay);
    if (day_s < 0) day_s += kSecondsPerDay;
    for (const TouWindow& w : pricing.tou)
        if (day_s >= w.start_s && day_s < w.end_s) return w.rate_usd_per_kwh;
    // validate() guarantees coverage; fmod can land exactly on 86400 only via
    // floating noise, fold it to the first window.
    return pricing.tou.front().rate_usd_per_kwh;
}

double charging_price(const PricingConfig& pricing, double r, double k) {
    if (r < 0 || r > 1) throw Error("charging discount must lie in [0, 1]");
    const double full = pricing.margin_usd_per_kwh + pricing.infrastructure_usd_per_kwh +
                        tou_tariff(pricing, k);
    return pricing.margin_usd_per_kwh - r * full;
}

}  // namespace evsim
