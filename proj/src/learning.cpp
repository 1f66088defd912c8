#include "seednet/learning.hpp"

#include <cmath>

#include "seednet/errors.hpp"

namespace seednet {

void LearningParams::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("signal accuracy alpha must lie strictly in (0, 1)");
    if (!(pi_lo < cost && cost < pi_hi))
        throw ConfigError("adoption cost must lie strictly between the profit levels");
    if (!(eta >= 0.0)) throw ConfigError("signal cost eta must be non-negative");
}

double posterior(double alpha, const SignalTally& tally) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("signal accuracy alpha must lie strictly in (0, 1)");
    if (tally.informed_contacts < 0 || tally.high_signals < 0 ||
        tally.high_signals > tally.informed_contacts)
        throw ConfigError("signal tally requires 0 <= high_signals <= informed_contacts");
    // alpha^k / (alpha^k + (1-alpha)^k) with k = 2H - D, computed as
    // 1 / (1 + ((1-alpha)/alpha)^k) to stay stable for large |k|.
    const int k = 2 * tally.high_signals - tally.informed_contacts;
    const double ratio = std::pow((1.0 - alpha) / alpha, static_cast<double>(k));
    return 1.0 / (1.0 + ratio);
}

bool adopts(const LearningParams& params, const SignalTally& tally) {
    params.validate();
    return posterior(params.alpha, tally) >= params.adoption_ratio();
}

namespace {

// Posterior after `count` unanimous high signals.
double unanimous_posterior(double alpha, int count) {
    return posterior(alpha, SignalTally{count, count});
}

} // namespace

std::optional<int> min_informed_connections(const LearningParams& params) {
    params.validate();
    const double r = params.adoption_ratio();
    if (unanimous_posterior(params.alpha, 1) > r) return 1;
    if (params.alpha <= 0.5) return std::nullopt; // unanimity never gains strength
    // alpha > 0.5: the unanimous posterior rises toward 1, so a finite count
    // exists for every r < 1. Jump near the analytic crossing, then settle the
    // strict inequality by scanning.
    const double logit = std::log(r / (1.0 - r));
    const double step = std::log(params.alpha / (1.0 - params.alpha));
    int guess = static_cast<int>(std::floor(logit / step));
    if (guess < 1) guess = 1;
    int lambda = guess;
    while (unanimous_posterior(params.alpha, lambda) > r && lambda > 1) --lambda;
    while (unanimous_posterior(params.alpha, lambda) <= r) ++lambda;
    return lambda;
}

bool seeks_information(const LearningParams& params, int informed_contacts) {
    params.validate();
    if (informed_contacts < 0) throw ConfigError("informed contact count must be >= 0");
    return unanimous_posterior(params.alpha, informed_contacts) > params.adoption_ratio();
}

std::vector<double> information_value_table(const LearningParams& params, int informed_contacts) {
    params.validate();
    if (informed_contacts < 0) throw ConfigError("informed contact count must be >= 0");
    const double r = params.adoption_ratio();
    const double alpha = params.alpha;
    const double gain_hi = params.pi_hi - params.cost;
    const double gain_lo = params.pi_lo - params.cost;

    std::vector<double> table(static_cast<std::size_t>(informed_contacts) + 1, 0.0);
    for (int d = 0; d <= informed_contacts; ++d) {
        double value = 0.0;
        double binom = 1.0; // C(d, h), updated incrementally over h
        for (int h = 0; h <= d; ++h) {
            if (h > 0) binom *= static_cast<double>(d - h + 1) / static_cast<double>(h);
            if (posterior(alpha, SignalTally{d, h}) >= r) {
                // Outcome probability under each state, uniform prior over states.
                const double p_given_hi =
                    std::pow(alpha, h) * std::pow(1.0 - alpha, d - h);
                const double p_given_lo =
                    std::pow(1.0 - alpha, h) * std::pow(alpha, d - h);
                value += 0.5 * binom * (p_given_hi * gain_hi + p_given_lo * gain_lo);
            }
        }
        table[static_cast<std::size_t>(d)] = value - params.eta * d;
    }
    return table;
}

InformationValue value_of_information(const LearningParams& params, int informed_contacts) {
    const auto table = information_value_table(params, informed_contacts);
    InformationValue best{0, table[0]};
    for (int d = 1; d < static_cast<int>(table.size()); ++d)
        if (table[static_cast<std::size_t>(d)] > best.expected_value) {
            best.signal_count = d;
            best.expected_value = table[static_cast<std::size_t>(d)];
        }
    return best;
}

} // namespace seednet
