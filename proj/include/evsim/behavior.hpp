#pragma once

#include <array>

#include "evsim/market.hpp"
#include "evsim/rng.hpp"

namespace evsim {

struct TruncatedNormalSpec {
    double min = 0;
    double mean = 0;
    double max = 0;
    double sd = 0;

    void validate() const;  // min <= mean <= max, sd > 0
};

struct ShiftStartDistribution {
    std::array<double, 24> hourly_weights{};

    void validate() const;  // non-negative, at least one positive
};

// Probability a driver obeys a charging dispatch: clamp of
// ln(g1 + g2 * r + g3 * charge_time / 3600) to [0, 1]; 0 when the log
// argument is non-positive. Passenger trips are always accepted (the caller
// uses compliance 1 for them).
double compliance(const DriverAttributes& attrs, double r, double charge_time_s);

double fatigue_probability(const DriverAttributes& attrs, double worked_h);

double depletion_probability(const DriverAttributes& attrs, double soc_kwh,
                             double avg_incentive);

// Inclusion-exclusion of fatigue and depletion.
double exit_probability(const DriverAttributes& attrs, double worked_h,
                        double soc_kwh, double avg_incentive);

// Instant at which an unmatched passenger abandons (type I).
double type1_cancel_deadline(const PassengerRequest& p);

// Type II: inclusive threshold on the offered pickup time.
bool type2_accepts(const PassengerRequest& p, double offered_pickup_s);

// Rejection sampling from the untruncated normal; exactly the truncated law.
double sample_truncated_normal(EntityRng& rng, const TruncatedNormalSpec& spec);

// Hour drawn proportional to the weights, uniform within the hour; seconds.
double sample_shift_start(EntityRng& rng, const ShiftStartDistribution& dist);

// Behavioral distribution set of a scenario (passenger patience plus the six
// driver attributes and shift-start weights).
struct BehaviorConfig {
    TruncatedNormalSpec matching_patience;
    TruncatedNormalSpec pickup_patience;
    TruncatedNormalSpec gamma1, gamma2, gamma3, gamma4, gamma5, gamma6;
    ShiftStartDistribution shift_start;

    void validate() const;
    DriverAttributes sample_attributes(EntityRng& rng) const;
};

}  // namespace evsim
