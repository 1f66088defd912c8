#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "seednet/diffusion.hpp"
#include "seednet/network.hpp"

namespace seednet {

/// Unordered pair of distinct people, stored with first < second.
struct SeedPair {
    std::string first;
    std::string second;

    static SeedPair normalized(std::string a, std::string b);

    friend bool operator==(const SeedPair& x, const SeedPair& y) {
        return x.first == y.first && x.second == y.second;
    }
    friend bool operator<(const SeedPair& x, const SeedPair& y) {
        return x.first != y.first ? x.first < y.first : x.second < y.second;
    }
};

/// Monte Carlo score for one candidate pair. per_period_rates holds the mean
/// information rate for periods 0..T (weakly increasing); mean_rate and
/// std_error refer to the objective (horizon) period.
struct PairScore {
    SeedPair pair;
    double mean_rate = 0.0;
    double std_error = 0.0;
    std::vector<double> per_period_rates;
};

struct PairSearchOptions {
    int objective_period = -1;               // -1: final simulated period
    bool require_distinct_households = true; // same-household pairs collapse to one seed
    int workers = 1;
};

struct PairSearchResult {
    SeedPair best;
    std::vector<PairScore> ranked; // every eligible pair, best first
    int horizon_period = 0;
};

/// Scores every eligible unordered pair with common random numbers (the same
/// threshold draw per replication index for all pairs) and returns the pair
/// with the highest horizon-period mean rate; exact ties go to the
/// lexicographically smallest (first, second) pair. `eligibility` filters
/// individuals by network index; empty means everyone.
PairSearchResult optimal_pair(const VillageNetwork& net, const DiffusionConfig& config,
                              const std::function<bool(int)>& eligibility = {},
                              const PairSearchOptions& options = {});

enum class TreatmentModel { simple, complex, geo };

TreatmentModel treatment_model_from_name(const std::string& name);
const char* treatment_model_name(TreatmentModel model);

/// Treatment-specific pair selection: simple forces lambda=1 on the social
/// network, complex lambda=2 on the social network, geo lambda=2 on the
/// geographic-proximity network over the same individuals. Remaining config
/// fields (sd, periods, replications, master_seed) pass through unchanged.
PairSearchResult select_seeds(const VillageNetwork& net, TreatmentModel model,
                              const DiffusionConfig& config, const PairSearchOptions& options = {},
                              double geo_radius_miles = kDefaultGeoRadiusMiles);

// ---------------------------------------------------------------------------
// Interview-based targeting strategies.

enum class Strategy { A, B, C, D, E, F };

char strategy_letter(Strategy s);
Strategy strategy_from_letter(const std::string& letter);

struct StrategyTrace {
    Strategy strategy = Strategy::A;
    int initial_interviews = 0;
    int total_interviews = 0;
    SeedPair chosen_pair;
    std::vector<std::string> interviewed_ids; // in interview order
};

/// Simulates one field run of a targeting strategy: interview n_initial
/// random people with degree >= 2, then pick two trainees per the strategy
/// rule (trainees are also screened to degree >= 2; degree ties go to the
/// smallest person_id). Deterministic given (net, strategy, n_initial,
/// rng_substream). Throws InfeasibleError when a required choice set is
/// empty.
StrategyTrace run_strategy(const VillageNetwork& net, Strategy strategy, int n_initial,
                           std::uint64_t rng_substream);

/// One (strategy, n_initial) cell of the percent-of-optimal table. Ratios are
/// per-(village, trial) samples of strategy-pair rate over complex-optimal
/// rate at the horizon period, scored with common random numbers.
struct StrategyCell {
    Strategy strategy = Strategy::A;
    int n_initial = 0;
    int samples = 0;    // feasible (village, trial) runs
    int infeasible = 0; // runs that threw InfeasibleError
    double mean_ratio = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double mean_total_interviews = 0.0;
};

struct StrategyEvaluation {
    std::vector<StrategyCell> cells; // strategy-major, n_initial-minor order
    int villages_used = 0;
    int villages_skipped = 0; // no eligible seed pair for the optimal search
};

/// Evaluates all six strategies on an ensemble of villages against the
/// complex-contagion (lambda=2) optimal pair of each village. config.lambda_mean
/// is ignored; everything runs at lambda=2 with the shared threshold table.
StrategyEvaluation evaluate_strategies(const std::vector<VillageNetwork>& villages,
                                       const DiffusionConfig& config,
                                       const std::vector<int>& n_initial_grid,
                                       int trials_per_cell, int workers = 1);

} // namespace seednet
