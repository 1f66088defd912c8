#pragma once

#include <optional>
#include <vector>

namespace seednet {

/// Parameters of the signal-aggregation learning environment.
struct LearningParams {
    double alpha;  // signal accuracy, in (0, 1)
    double pi_hi;  // high profit level
    double pi_lo;  // low profit level
    double cost;   // adoption cost, with pi_lo < cost < pi_hi
    double eta = 0.0; // per-signal acquisition cost, >= 0

    /// Throws ConfigError when any constraint fails.
    void validate() const;

    /// The normalized cost ratio the posterior is compared against; strictly
    /// inside (0, 1) for valid parameters.
    double adoption_ratio() const { return (cost - pi_lo) / (pi_hi - pi_lo); }
};

/// Signals observed by one farmer: how many contacts were informed and how
/// many of them reported the high-profit signal.
struct SignalTally {
    int informed_contacts = 0; // D
    int high_signals = 0;      // H, with 0 <= H <= D
};

/// Posterior probability of the high-profit state after aggregating D signals
/// of which H were high, starting from a uniform prior:
/// alpha^(2H-D) / (alpha^(2H-D) + (1-alpha)^(2H-D)).
double posterior(double alpha, const SignalTally& tally);

/// Whether the farmer adopts: posterior >= cost ratio (weak inequality).
bool adopts(const LearningParams& params, const SignalTally& tally);

/// Smallest number of informed connections at which unanimous high signals
/// make information-seeking worthwhile (strict inequality), or nullopt when
/// no count suffices.
std::optional<int> min_informed_connections(const LearningParams& params);

/// Whether a farmer with `informed_contacts` informed connections chooses to
/// acquire signals at all (the small-eta condition).
bool seeks_information(const LearningParams& params, int informed_contacts);

/// Expected value of acquiring d signals, for d = 0..informed_contacts:
/// binomial-weighted payoff of the adopt/reject rule minus eta * d.
std::vector<double> information_value_table(const LearningParams& params, int informed_contacts);

struct InformationValue {
    int signal_count = 0;      // smallest maximizing d
    double expected_value = 0; // value at that d
};

/// Maximizes the value table; ties resolved toward the smallest d.
InformationValue value_of_information(const LearningParams& params, int informed_contacts);

} // namespace seednet
