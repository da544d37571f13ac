#include "evsim/behavior.hpp"

#include <algorithm>
#include <cmath>

#include "evsim/error.hpp"

namespace evsim {

void TruncatedNormalSpec::validate() const {
    if (!(min <= mean && mean <= max))
        throw ConfigError("truncated normal requires min <= mean <= max");
    if (!(sd > 0)) throw ConfigError("truncated normal requires sd > 0");
}

void ShiftStartDistribution::validate() const {
    double total = 0;
    for (double w : hourly_weights) {
        if (w < 0) throw ConfigError("shift-start weights must be non-negative");
        total += w;
    }
    if (!(total > 0)) throw ConfigError("shift-start weights are all zero");
}

double compliance(const DriverAttributes& attrs, double r, double charge_time_s) {
    const double arg = attrs.gamma1 + attrs.gamma2 * r +
                       attrs.gamma3 * charge_time_s / kSecondsPerHour;
    if (arg <= 0) return 0;
    return std::clamp(std::log(arg), 0.0, 1.0);
}

double fatigue_probability(const DriverAttributes& attrs, double worked_h) {
    const double d = worked_h - attrs.gamma4;
    return 0.5 + d / (2.0 * std::sqrt(attrs.gamma5 + d * d));
}

double depletion_probability(const DriverAttributes& attrs, double soc_kwh,
                             double avg_incentive) {
    return (1.0 - avg_incentive) / std::exp(attrs.gamma6 * soc_kwh);
}

double exit_probability(const DriverAttributes& attrs, double worked_h,
                        double soc_kwh, double avg_incentive) {
    const double pf = fatigue_probability(attrs, worked_h);
    const double pd = depletion_probability(attrs, soc_kwh, avg_incentive);
    return pf + pd - pf * pd;
}

double type1_cancel_deadline(const PassengerRequest& p) {
    return p.request_time_s + p.matching_patience_s;
}

bool type2_accepts(const PassengerRequest& p, double offered_pickup_s) {
    return offered_pickup_s <= p.pickup_patience_s;
}

double sample_truncated_normal(EntityRng& rng, const TruncatedNormalSpec& spec) {
    for (;;) {
        const double x = rng.normal(spec.mean, spec.sd);
        if (x >= spec.min && x <= spec.max) return x;
    }
}

double sample_shift_start(EntityRng& rng, const ShiftStartDistribution& dist) {
    double total = 0;
    for (double w : dist.hourly_weights) total += w;
    const double pick = rng.uniform() * total;
    double cumulative = 0;
    for (int h = 0; h < 24; ++h) {
        cumulative += dist.hourly_weights[static_cast<std::size_t>(h)];
        if (pick < cumulative)
            return h * kSecondsPerHour + rng.uniform() * kSecondsPerHour;
    }
    return 23 * kSecondsPerHour + rng.uniform() * kSecondsPerHour;
}

void BehaviorConfig::validate() const {
    matching_patience.validate();
    pickup_patience.validate();
    gamma1.validate();
    gamma2.validate();
    gamma3.validate();
    gamma4.validate();
    gamma5.validate();
    gamma6.validate();
    shift_start.validate();
    if (gamma2.min <= 0) throw ConfigError("gamma2 must be positive");
    if (gamma3.max >= 0) throw ConfigError("gamma3 must be negative");
    if (gamma4.min <= 0 || gamma5.min <= 0 || gamma6.min <= 0)
        throw ConfigError("gamma4, gamma5, gamma6 must be positive");
}

DriverAttributes BehaviorConfig::sample_attributes(EntityRng& rng) const {
    DriverAttributes a;
    a.gamma1 = sample_truncated_normal(rng, gamma1);
    a.gamma2 = sample_truncated_normal(rng, gamma2);
    a.gamma3 = sample_truncated_normal(rng, gamma3);
    a.gamma4 = sample_truncated_normal(rng, gamma4);
    a.gamma5 = sample_truncated_normal(rng, gamma5);
    a.gamma6 = sample_truncated_normal(rng, gamma6);
    a.shift_start_s = sample_shift_start(rng, shift_start);
    return a;
}

}  // namespace evsim
