#include "seednet/diffusion.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "seednet/errors.hpp"
#include "seednet/rng.hpp"

namespace seednet {

void DiffusionConfig::validate() const {
    if (periods < 1) throw ConfigError("periods must be at least 1");
    if (replications < 1) throw ConfigError("replications must be at least 1");
    if (!(threshold_sd >= 0.0)) throw ConfigError("threshold sd must be non-negative");
    if (threshold_sd == 0.0 && !(lambda_mean > 0.0))
        throw ConfigError("threshold sd 0 requires a positive threshold mean");
}

ThresholdDraw draw_thresholds(const VillageNetwork& net, const DiffusionConfig& config,
                              std::uint64_t substream_id) {
    config.validate();
    rng::Stream stream(rng::stream_key(config.master_seed, rng::Domain::thresholds, substream_id));
    ThresholdDraw draw;
    draw.tau.resize(net.size());
    for (int i = 0; i < net.size(); ++i)
        draw.tau[i] = stream.truncated_normal_positive(config.lambda_mean, config.threshold_sd);
    return draw;
}

std::vector<std::int32_t> thresholds_to_kappa(const ThresholdDraw& draw) {
    std::vector<std::int32_t> kappa(draw.tau.size());
    for (std::size_t i = 0; i < draw.tau.size(); ++i) {
        const double c = std::ceil(draw.tau[i]);
        // count >= tau for an integer count is exactly count >= ceil(tau)
        kappa[i] = c >= 2147483647.0 ? std::numeric_limits<std::int32_t>::max()
                                     : static_cast<std::int32_t>(c);
        if (kappa[i] < 1) kappa[i] = 1;
    }
    return kappa;
}

ThresholdTable::ThresholdTable(const VillageNetwork& net, const DiffusionConfig& config)
    : replications_(config.replications), stride_(net.size()) {
    config.validate();
    kappa_.resize(static_cast<std::size_t>(replications_) * static_cast<std::size_t>(stride_));
    for (int r = 0; r < replications_; ++r) {
        const ThresholdDraw draw = draw_thresholds(net, config, static_cast<std::uint64_t>(r));
        const std::vector<std::int32_t> row = thresholds_to_kappa(draw);
        std::copy(row.begin(), row.end(),
                  kappa_.begin() + static_cast<std::size_t>(r) * static_cast<std::size_t>(stride_));
    }
}

DiffusionEngine::DiffusionEngine(const VillageNetwork& net)
    : net_(net),
      informed_mark_(net.size(), 0),
      count_mark_(net.size(), 0),
      informed_neighbors_(net.size(), 0) {
    frontier_.reserve(net.size());
    next_frontier_.reserve(net.size());
    candidates_.reserve(net.size());
}

void DiffusionEngine::propagate(std::span<const int> seed_indices,
                                std::span<const std::int32_t> kappa, int periods,
                                std::span<std::int32_t> informed_count_out,
                                std::vector<std::vector<int>>* newly_informed) {
    assert(static_cast<int>(informed_count_out.size()) == periods + 1);
    assert(kappa.size() == static_cast<std::size_t>(net_.size()));
    if (epoch_ == std::numeric_limits<std::int32_t>::max()) {
        std::fill(informed_mark_.begin(), informed_mark_.end(), 0);
        std::fill(count_mark_.begin(), count_mark_.end(), 0);
        epoch_ = 0;
    }
    ++epoch_;
    if (newly_informed) {
        newly_informed->assign(static_cast<std::size_t>(periods) + 1, {});
    }

    // Period 0: seeds plus household closure.
    frontier_.clear();
    for (int s : seed_indices) {
        for (int m : net_.household_members(net_.household_of(s))) {
            if (informed_mark_[m] != epoch_) {
                informed_mark_[m] = epoch_;
                frontier_.push_back(m);
            }
        }
    }
    std::int32_t informed_total = static_cast<std::int32_t>(frontier_.size());
    informed_count_out[0] = informed_total;
    if (newly_informed) (*newly_informed)[0] = frontier_;

    for (int t = 1; t <= periods; ++t) {
        if (frontier_.empty()) {
            informed_count_out[t] = informed_total;
            continue;
        }
        // Credit last period's newly informed to their uninformed neighbors;
        // a node crossing its threshold becomes a candidate exactly once.
        candidates_.clear();
        for (int u : frontier_) {
            for (int v : net_.neighbors(u)) {
                if (informed_mark_[v] == epoch_) continue;
                if (count_mark_[v] != epoch_) {
                    count_mark_[v] = epoch_;
                    informed_neighbors_[v] = 0;
                }
                if (++informed_neighbors_[v] == kappa[v]) candidates_.push_back(v);
            }
        }
        // Inform candidates synchronously, with household closure inside the
        // period (closure is idempotent per household, so one pass is stable).
        next_frontier_.clear();
        for (int c : candidates_) {
            if (informed_mark_[c] == epoch_) continue;
            for (int m : net_.household_members(net_.household_of(c))) {
                if (informed_mark_[m] != epoch_) {
                    informed_mark_[m] = epoch_;
                    next_frontier_.push_back(m);
                }
            }
        }
        informed_total += static_cast<std::int32_t>(next_frontier_.size());
        informed_count_out[t] = informed_total;
        if (newly_informed) (*newly_informed)[t] = next_frontier_;
        std::swap(frontier_, next_frontier_);
    }
}

namespace {

std::vector<int> resolve_seed_indices(const VillageNetwork& net,
                                      const std::vector<std::string>& seed_ids) {
    std::vector<int> indices;
    indices.reserve(seed_ids.size());
    for (const std::string& id : seed_ids) {
        const int idx = net.index_of(id);
        if (idx < 0) throw DataError("unknown seed person_id " + id);
        indices.push_back(idx);
    }
    return indices;
}

} // namespace

DiffusionOutcome run_once(const VillageNetwork& net, const std::vector<std::string>& seed_ids,
                          const ThresholdDraw& thresholds, int periods) {
    if (periods < 1) throw ConfigError("periods must be at least 1");
    if (static_cast<int>(thresholds.tau.size()) != net.size())
        throw DataError("threshold draw does not match village size");
    const std::vector<int> seeds = resolve_seed_indices(net, seed_ids);
    const std::vector<std::int32_t> kappa = thresholds_to_kappa(thresholds);

    DiffusionEngine engine(net);
    std::vector<std::int32_t> counts(static_cast<std::size_t>(periods) + 1);
    std::vector<std::vector<int>> newly;
    engine.propagate(seeds, kappa, periods, counts, &newly);

    DiffusionOutcome out;
    out.informed_by_period.resize(static_cast<std::size_t>(periods) + 1);
    out.information_rate_by_period.resize(static_cast<std::size_t>(periods) + 1);
    std::vector<std::string> cumulative;
    for (int t = 0; t <= periods; ++t) {
        for (int idx : newly[static_cast<std::size_t>(t)])
            cumulative.push_back(net.person_id(idx));
        std::sort(cumulative.begin(), cumulative.end());
        out.informed_by_period[static_cast<std::size_t>(t)] = cumulative;
        out.information_rate_by_period[static_cast<std::size_t>(t)] =
            net.size() == 0 ? 0.0
                            : static_cast<double>(counts[static_cast<std::size_t>(t)]) /
                                  static_cast<double>(net.size());
    }
    return out;
}

RateSummary mean_information_rate(const VillageNetwork& net,
                                  const std::vector<std::string>& seed_ids,
                                  const DiffusionConfig& config) {
    config.validate();
    const std::vector<int> seeds = resolve_seed_indices(net, seed_ids);
    const int T = config.periods;
    const int R = config.replications;
    const double n = static_cast<double>(net.size());

    DiffusionEngine engine(net);
    std::vector<std::int32_t> counts(static_cast<std::size_t>(T) + 1);
    std::vector<double> sum(static_cast<std::size_t>(T) + 1, 0.0);
    std::vector<std::int64_t> count_sum(static_cast<std::size_t>(T) + 1, 0);
    std::vector<std::int64_t> count_sq(static_cast<std::size_t>(T) + 1, 0);
    for (int r = 0; r < R; ++r) {
        const ThresholdDraw draw = draw_thresholds(net, config, static_cast<std::uint64_t>(r));
        const std::vector<std::int32_t> kappa = thresholds_to_kappa(draw);
        engine.propagate(seeds, kappa, T, counts, nullptr);
        for (int t = 0; t <= T; ++t) {
            const std::int32_t c = counts[static_cast<std::size_t>(t)];
            const double rate = net.size() == 0 ? 0.0 : c / n;
            sum[static_cast<std::size_t>(t)] += rate;
            count_sum[static_cast<std::size_t>(t)] += c;
            count_sq[static_cast<std::size_t>(t)] += static_cast<std::int64_t>(c) * c;
        }
    }

    RateSummary summary;
    summary.mean.resize(static_cast<std::size_t>(T) + 1);
    summary.std_error.resize(static_cast<std::size_t>(T) + 1);
    for (int t = 0; t <= T; ++t) {
        summary.mean[static_cast<std::size_t>(t)] = sum[static_cast<std::size_t>(t)] / R;
        summary.std_error[static_cast<std::size_t>(t)] =
            count_std_error(count_sum[static_cast<std::size_t>(t)],
                            count_sq[static_cast<std::size_t>(t)], R, n);
    }
    return summary;
}

} // namespace seednet
