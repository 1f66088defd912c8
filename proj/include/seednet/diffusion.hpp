#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seednet/network.hpp"

namespace seednet {

/// Parameters of the stochastic linear-threshold contagion process.
struct DiffusionConfig {
    double lambda_mean = 2.0;    // threshold mean
    double threshold_sd = 0.5;   // 0 gives the deterministic tau = lambda_mean
    int periods = 4;
    int replications = 2000;
    std::uint64_t master_seed = 0;

    void validate() const;
};

/// One threshold per individual, indexed like the network; every tau > 0.
struct ThresholdDraw {
    std::vector<double> tau;
};

/// Informed sets and rates for periods 0..T. Sets are sorted person-id lists
/// and weakly nested across periods; rates are weakly increasing.
struct DiffusionOutcome {
    std::vector<std::vector<std::string>> informed_by_period;
    std::vector<double> information_rate_by_period;
};

/// Per-period mean information rates with Monte Carlo standard errors,
/// averaged over `replications` independent threshold draws.
struct RateSummary {
    std::vector<double> mean;      // periods + 1 entries
    std::vector<double> std_error; // same shape
};

/// Samples thresholds Normal(lambda_mean, threshold_sd) by rejection until
/// strictly positive, one per individual in index order. Deterministic given
/// (master_seed, substream_id); replication r uses substream_id = r.
ThresholdDraw draw_thresholds(const VillageNetwork& net, const DiffusionConfig& config,
                              std::uint64_t substream_id);

/// Runs one deterministic-threshold cascade. Period 0 informs the seeds plus
/// their household members; in each later period an uninformed individual
/// becomes informed when the count of neighbors informed at the start of the
/// period reaches tau, with household closure applied within the period.
/// Informed is absorbing; updates are synchronous.
DiffusionOutcome run_once(const VillageNetwork& net, const std::vector<std::string>& seed_ids,
                          const ThresholdDraw& thresholds, int periods);

/// Averages run_once information rates over config.replications threshold
/// draws (replication r = substream r), in ascending replication order.
RateSummary mean_information_rate(const VillageNetwork& net,
                                  const std::vector<std::string>& seed_ids,
                                  const DiffusionConfig& config);

// ---------------------------------------------------------------------------
// Lower-level engine pieces, shared with the pair optimizer.

/// Integer thresholds kappa = ceil(tau): an individual needs at least kappa
/// informed neighbors, which is equivalent to "count >= tau" for counts.
std::vector<std::int32_t> thresholds_to_kappa(const ThresholdDraw& draw);

/// Standard error of the mean information rate from exact integer sums of
/// per-replication informed counts (count_sum = sum of counts, count_sq = sum
/// of squared counts over R replications; n = village size). Working on the
/// integer sums avoids the catastrophic cancellation of the float two-sum
/// formula, so a constant count sequence yields exactly zero.
inline double count_std_error(std::int64_t count_sum, std::int64_t count_sq, int replications,
                              double n) {
    if (replications < 2 || n <= 0.0) return 0.0;
    const auto num = static_cast<__int128>(replications) * count_sq -
                     static_cast<__int128>(count_sum) * count_sum;
    double var = static_cast<double>(num) /
                 (static_cast<double>(replications) * static_cast<double>(replications - 1) * n * n);
    if (var < 0.0) var = 0.0; // impossible for exact sums; guards misuse
    return std::sqrt(var / replications);
}

/// Precomputed integer thresholds for every replication (row r reproduces
/// draw_thresholds(net, config, r) exactly). Read-only once built; safe to
/// share across worker threads.
class ThresholdTable {
public:
    ThresholdTable(const VillageNetwork& net, const DiffusionConfig& config);

    int replications() const { return replications_; }
    std::span<const std::int32_t> kappa(int replication) const {
        const std::size_t offset =
            static_cast<std::size_t>(replication) * static_cast<std::size_t>(stride_);
        return {kappa_.data() + offset, static_cast<std::size_t>(stride_)};
    }

private:
    int replications_;
    int stride_;
    std::vector<std::int32_t> kappa_;
};

/// Frontier-based cascade propagation with reusable scratch buffers. One
/// engine instance serves many propagations on the same network; it is not
/// thread-safe, so parallel callers use one engine per worker.
class DiffusionEngine {
public:
    explicit DiffusionEngine(const VillageNetwork& net);

    /// Propagates from `seed_indices` under integer thresholds `kappa` and
    /// writes the cumulative informed count for periods 0..periods into
    /// `informed_count_out` (periods + 1 entries). When `newly_informed` is
    /// non-null it receives the individuals newly informed in each period.
    void propagate(std::span<const int> seed_indices, std::span<const std::int32_t> kappa,
                   int periods, std::span<std::int32_t> informed_count_out,
                   std::vector<std::vector<int>>* newly_informed = nullptr);

private:
    const VillageNetwork& net_;
    std::vector<std::int32_t> informed_mark_;
    std::vector<std::int32_t> count_mark_;
    std::vector<std::int32_t> informed_neighbors_;
    std::vector<int> frontier_;
    std::vector<int> next_frontier_;
    std::vector<int> candidates_;
    std::int32_t epoch_ = 0;
};

} // namespace seednet
