#include "seednet/seeding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "seednet/errors.hpp"
#include "seednet/parallel.hpp"
#include "seednet/rng.hpp"

namespace seednet {

SeedPair SeedPair::normalized(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return SeedPair{std::move(a), std::move(b)};
}

namespace {

int resolve_horizon(const DiffusionConfig& config, const PairSearchOptions& options) {
    const int horizon = options.objective_period < 0 ? config.periods : options.objective_period;
    if (horizon > config.periods)
        throw ConfigError("objective period exceeds simulated periods");
    return horizon;
}

std::vector<std::pair<int, int>> eligible_pairs(const VillageNetwork& net,
                                                const std::function<bool(int)>& eligibility,
                                                bool require_distinct_households) {
    std::vector<int> eligible;
    for (int i = 0; i < net.size(); ++i)
        if (!eligibility || eligibility(i)) eligible.push_back(i);
    if (eligible.size() < 2)
        throw InfeasibleError("fewer than 2 eligible individuals in village " + net.village_id());
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(eligible.size() * (eligible.size() - 1) / 2);
    for (std::size_t a = 0; a < eligible.size(); ++a) {
        for (std::size_t b = a + 1; b < eligible.size(); ++b) {
            const int i = eligible[a];
            const int j = eligible[b];
            if (require_distinct_households && net.household_of(i) == net.household_of(j))
                continue;
            pairs.emplace_back(i, j);
        }
    }
    if (pairs.empty())
        throw InfeasibleError("no eligible seed pair in village " + net.village_id());
    return pairs;
}

} // namespace

PairSearchResult optimal_pair(const VillageNetwork& net, const DiffusionConfig& config,
                              const std::function<bool(int)>& eligibility,
                              const PairSearchOptions& options) {
    config.validate();
    const int T = config.periods;
    const int horizon = resolve_horizon(config, options);
    const std::vector<std::pair<int, int>> pairs =
        eligible_pairs(net, eligibility, options.require_distinct_households);

    const ThresholdTable table(net, config);
    const int R = config.replications;
    const double n = static_cast<double>(net.size());

    std::vector<PairScore> scores(pairs.size());
    parallel_for_chunks(
        static_cast<int>(pairs.size()), options.workers, [&](int begin, int end) {
            DiffusionEngine engine(net);
            std::vector<std::int32_t> counts(static_cast<std::size_t>(T) + 1);
            std::vector<double> sums(static_cast<std::size_t>(T) + 1);
            for (int p = begin; p < end; ++p) {
                const int seeds[2] = {pairs[static_cast<std::size_t>(p)].first,
                                      pairs[static_cast<std::size_t>(p)].second};
                std::fill(sums.begin(), sums.end(), 0.0);
                std::int64_t count_sum_h = 0;
                std::int64_t count_sq_h = 0;
                for (int r = 0; r < R; ++r) {
                    engine.propagate(seeds, table.kappa(r), T, counts);
                    for (int t = 0; t <= T; ++t)
                        sums[static_cast<std::size_t>(t)] +=
                            counts[static_cast<std::size_t>(t)] / n;
                    const std::int32_t c_h = counts[static_cast<std::size_t>(horizon)];
                    count_sum_h += c_h;
                    count_sq_h += static_cast<std::int64_t>(c_h) * c_h;
                }
                PairScore& score = scores[static_cast<std::size_t>(p)];
                score.pair = SeedPair::normalized(net.person_id(seeds[0]), net.person_id(seeds[1]));
                score.per_period_rates.resize(static_cast<std::size_t>(T) + 1);
                for (int t = 0; t <= T; ++t)
                    score.per_period_rates[static_cast<std::size_t>(t)] =
                        sums[static_cast<std::size_t>(t)] / R;
                score.mean_rate = score.per_period_rates[static_cast<std::size_t>(horizon)];
                score.std_error = count_std_error(count_sum_h, count_sq_h, R, n);
            }
        });

    std::sort(scores.begin(), scores.end(), [](const PairScore& x, const PairScore& y) {
        if (x.mean_rate != y.mean_rate) return x.mean_rate > y.mean_rate;
        return x.pair < y.pair;
    });

    PairSearchResult result;
    result.best = scores.front().pair;
    result.ranked = std::move(scores);
    result.horizon_period = horizon;
    return result;
}

TreatmentModel treatment_model_from_name(const std::string& name) {
    if (name == "simple") return TreatmentModel::simple;
    if (name == "complex") return TreatmentModel::complex;
    if (name == "geo") return TreatmentModel::geo;
    throw ConfigError("unknown treatment model '" + name + "' (expected simple, complex, or geo)");
}

const char* treatment_model_name(TreatmentModel model) {
    switch (model) {
    case TreatmentModel::simple: return "simple";
    case TreatmentModel::complex: return "complex";
    case TreatmentModel::geo: return "geo";
    }
    return "?";
}

PairSearchResult select_seeds(const VillageNetwork& net, TreatmentModel model,
                              const DiffusionConfig& config, const PairSearchOptions& options,
                              double geo_radius_miles) {
    DiffusionConfig c = config;
    switch (model) {
    case TreatmentModel::simple:
        c.lambda_mean = 1.0;
        return optimal_pair(net, c, {}, options);
    case TreatmentModel::complex:
        c.lambda_mean = 2.0;
        return optimal_pair(net, c, {}, options);
    case TreatmentModel::geo: {
        c.lambda_mean = 2.0;
        const VillageNetwork geo_net =
            geo_adjacency(net.village_id(), net.individuals(), geo_radius_miles);
        return optimal_pair(geo_net, c, {}, options);
    }
    }
    throw ConfigError("unknown treatment model");
}

// ---------------------------------------------------------------------------
// Interview strategies.

char strategy_letter(Strategy s) {
    return static_cast<char>('A' + static_cast<int>(s));
}

Strategy strategy_from_letter(const std::string& letter) {
    if (letter.size() == 1) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(letter[0])));
        if (c >= 'A' && c <= 'F') return static_cast<Strategy>(c - 'A');
    }
    throw ConfigError("unknown strategy '" + letter + "' (expected A..F)");
}

namespace {

// Degree comparisons break ties on the smallest person_id.
bool degree_before(const VillageNetwork& net, int a, int b) {
    const int da = net.degree(a);
    const int db = net.degree(b);
    if (da != db) return da > db;
    return net.person_id(a) < net.person_id(b);
}

int highest_degree_member(const VillageNetwork& net, const std::vector<int>& among) {
    int best = among.front();
    for (std::size_t i = 1; i < among.size(); ++i)
        if (degree_before(net, among[i], best)) best = among[i];
    return best;
}

std::vector<int> top_two_by_degree(const VillageNetwork& net, std::vector<int> candidates) {
    std::sort(candidates.begin(), candidates.end(),
              [&net](int a, int b) { return degree_before(net, a, b); });
    candidates.resize(2);
    return candidates;
}

std::vector<int> screened(const VillageNetwork& net, std::span<const int> candidates,
                          int exclude = -1) {
    std::vector<int> out;
    for (int c : candidates)
        if (net.degree(c) >= 2 && c != exclude) out.push_back(c);
    return out;
}

int random_member(const std::vector<int>& candidates, rng::Stream& stream) {
    return candidates[stream.below(candidates.size())];
}

std::vector<int> random_two(const std::vector<int>& candidates, rng::Stream& stream) {
    const std::vector<int> picks =
        rng::sample_without_replacement(static_cast<int>(candidates.size()), 2, stream);
    return {candidates[static_cast<std::size_t>(picks[0])],
            candidates[static_cast<std::size_t>(picks[1])]};
}

[[noreturn]] void infeasible(const VillageNetwork& net, Strategy strategy, const char* what) {
    throw InfeasibleError(std::string("strategy ") + strategy_letter(strategy) + " infeasible in village " +
                          net.village_id() + ": " + what);
}

} // namespace

StrategyTrace run_strategy(const VillageNetwork& net, Strategy strategy, int n_initial,
                           std::uint64_t rng_substream) {
    if (n_initial < 2) throw ConfigError("n_initial must be at least 2");

    std::vector<int> pool;
    for (int i = 0; i < net.size(); ++i)
        if (net.degree(i) >= 2) pool.push_back(i);
    if (pool.size() < 2) infeasible(net, strategy, "fewer than 2 people with degree >= 2");

    rng::Stream stream(rng::stream_key(
        rng_substream, rng::Domain::strategy, static_cast<std::uint64_t>(strategy)));

    // Initial interviews: a random sample of the screened pool, capped by the
    // pool size, in draw order.
    const int k = std::min<int>(n_initial, static_cast<int>(pool.size()));
    const std::vector<int> picks =
        rng::sample_without_replacement(static_cast<int>(pool.size()), k, stream);
    std::vector<int> list(picks.size());
    for (std::size_t i = 0; i < picks.size(); ++i)
        list[i] = pool[static_cast<std::size_t>(picks[i])];

    StrategyTrace trace;
    trace.strategy = strategy;
    trace.initial_interviews = k;
    trace.total_interviews = k;
    for (int i : list) trace.interviewed_ids.push_back(net.person_id(i));

    int trainee_a = -1;
    int trainee_b = -1;
    switch (strategy) {
    case Strategy::A: {
        const std::vector<int> two = random_two(list, stream);
        trainee_a = two[0];
        trainee_b = two[1];
        break;
    }
    case Strategy::B: {
        const std::vector<int> two = top_two_by_degree(net, list);
        trainee_a = two[0];
        trainee_b = two[1];
        break;
    }
    case Strategy::C: {
        const int top = highest_degree_member(net, list);
        const std::vector<int> friends = screened(net, net.neighbors(top));
        if (friends.size() < 2) infeasible(net, strategy, "top respondent has fewer than 2 eligible friends");
        const std::vector<int> two = random_two(friends, stream);
        trainee_a = two[0];
        trainee_b = two[1];
        break;
    }
    case Strategy::D: {
        const int top = highest_degree_member(net, list);
        // The top respondent's whole contact list is interviewed to learn
        // the contacts' degrees.
        trace.total_interviews += net.degree(top);
        for (int c : net.neighbors(top)) trace.interviewed_ids.push_back(net.person_id(c));
        const std::vector<int> contacts = screened(net, net.neighbors(top));
        if (contacts.size() < 2) infeasible(net, strategy, "top respondent has fewer than 2 eligible contacts");
        const std::vector<int> two = top_two_by_degree(net, contacts);
        trainee_a = two[0];
        trainee_b = two[1];
        break;
    }
    case Strategy::E: {
        // Two branches: list member -> one random contact interviewed -> one
        // random eligible contact-of-contact trained (4 interviews total at
        // n_initial = 2). The second branch avoids the first trainee so the
        // pair is two distinct people.
        const std::vector<int> branch_roots = random_two(list, stream);
        for (int branch = 0; branch < 2; ++branch) {
            const int root = branch_roots[static_cast<std::size_t>(branch)];
            const std::vector<int> contacts(net.neighbors(root).begin(),
                                            net.neighbors(root).end());
            const int contact = random_member(contacts, stream);
            trace.total_interviews += 1;
            trace.interviewed_ids.push_back(net.person_id(contact));
            const std::vector<int> candidates =
                screened(net, net.neighbors(contact), /*exclude=*/trainee_a);
            if (candidates.empty())
                infeasible(net, strategy, "interviewed contact has no eligible connections");
            const int trainee = random_member(candidates, stream);
            (branch == 0 ? trainee_a : trainee_b) = trainee;
        }
        break;
    }
    case Strategy::F: {
        const int top = highest_degree_member(net, list);
        const std::vector<int> friends = screened(net, net.neighbors(top));
        if (friends.empty()) infeasible(net, strategy, "top respondent has no eligible friends");
        trainee_a = top;
        trainee_b = random_member(friends, stream);
        break;
    }
    }

    trace.chosen_pair = SeedPair::normalized(net.person_id(trainee_a), net.person_id(trainee_b));
    return trace;
}

// ---------------------------------------------------------------------------
// Strategy evaluation against the complex-optimal pair.

namespace {

// Mean final-period rate for one pair under the shared threshold table,
// accumulated in ascending replication order so the value is bit-identical
// to the optimal_pair table entry for the same pair.
double score_pair_final(const VillageNetwork& net, const ThresholdTable& table,
                        DiffusionEngine& engine, std::vector<std::int32_t>& counts, int i, int j,
                        int periods) {
    const int seeds[2] = {i, j};
    const double n = static_cast<double>(net.size());
    double sum = 0.0;
    for (int r = 0; r < table.replications(); ++r) {
        engine.propagate(seeds, table.kappa(r), periods, counts);
        sum += counts[static_cast<std::size_t>(periods)] / n;
    }
    return sum / table.replications();
}

std::uint64_t pack_cell(Strategy strategy, int n_initial, int trial) {
    return (static_cast<std::uint64_t>(strategy) << 48) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n_initial) & 0xFFFF) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(trial));
}

} // namespace

StrategyEvaluation evaluate_strategies(const std::vector<VillageNetwork>& villages,
                                       const DiffusionConfig& config,
                                       const std::vector<int>& n_initial_grid,
                                       int trials_per_cell, int workers) {
    if (villages.empty()) throw ConfigError("strategy evaluation needs at least one village");
    if (n_initial_grid.empty()) throw ConfigError("n_initial grid is empty");
    for (int n : n_initial_grid)
        if (n < 2) throw ConfigError("n_initial must be at least 2");
    if (trials_per_cell < 1) throw ConfigError("trials_per_cell must be at least 1");

    DiffusionConfig c = config;
    c.lambda_mean = 2.0;
    c.validate();
    const int T = c.periods;

    constexpr int kStrategies = 6;
    struct Accum {
        int samples = 0;
        int infeasible = 0;
        double sum = 0.0;
        double sum_sq = 0.0;
        double interviews = 0.0;
    };
    std::vector<Accum> accum(static_cast<std::size_t>(kStrategies) * n_initial_grid.size());

    StrategyEvaluation eval;
    for (std::size_t v = 0; v < villages.size(); ++v) {
        const VillageNetwork& net = villages[v];
        PairSearchOptions options;
        options.workers = workers;
        PairSearchResult best;
        try {
            best = optimal_pair(net, c, {}, options);
        } catch (const InfeasibleError&) {
            ++eval.villages_skipped;
            continue;
        }
        ++eval.villages_used;
        const double denom = best.ranked.front().mean_rate;

        const ThresholdTable table(net, c);
        DiffusionEngine engine(net);
        std::vector<std::int32_t> counts(static_cast<std::size_t>(T) + 1);
        std::unordered_map<std::uint64_t, double> score_cache;
        const std::uint64_t village_key =
            rng::stream_key(c.master_seed, rng::Domain::strategy, static_cast<std::uint64_t>(v));

        for (int s = 0; s < kStrategies; ++s) {
            const Strategy strategy = static_cast<Strategy>(s);
            for (std::size_t g = 0; g < n_initial_grid.size(); ++g) {
                Accum& cell = accum[static_cast<std::size_t>(s) * n_initial_grid.size() + g];
                for (int trial = 0; trial < trials_per_cell; ++trial) {
                    const std::uint64_t substream = rng::stream_key(
                        village_key, rng::Domain::strategy,
                        pack_cell(strategy, n_initial_grid[g], trial));
                    StrategyTrace trace;
                    try {
                        trace = run_strategy(net, strategy, n_initial_grid[g], substream);
                    } catch (const InfeasibleError&) {
                        ++cell.infeasible;
                        continue;
                    }
                    const int i = net.index_of(trace.chosen_pair.first);
                    const int j = net.index_of(trace.chosen_pair.second);
                    const std::uint64_t cache_key =
                        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                        static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
                    double num;
                    if (auto it = score_cache.find(cache_key); it != score_cache.end()) {
                        num = it->second;
                    } else {
                        num = score_pair_final(net, table, engine, counts, i, j, T);
                        score_cache.emplace(cache_key, num);
                    }
                    ++cell.samples;
                    const double ratio = num / denom;
                    cell.sum += ratio;
                    cell.sum_sq += ratio * ratio;
                    cell.interviews += trace.total_interviews;
                }
            }
        }
    }

    if (eval.villages_used == 0)
        throw InfeasibleError("no village admits an eligible seed pair");

    for (int s = 0; s < kStrategies; ++s) {
        for (std::size_t g = 0; g < n_initial_grid.size(); ++g) {
            const Accum& a = accum[static_cast<std::size_t>(s) * n_initial_grid.size() + g];
            StrategyCell cell;
            cell.strategy = static_cast<Strategy>(s);
            cell.n_initial = n_initial_grid[g];
            cell.samples = a.samples;
            cell.infeasible = a.infeasible;
            if (a.samples > 0) {
                cell.mean_ratio = a.sum / a.samples;
                cell.mean_total_interviews = a.interviews / a.samples;
                double half = 0.0;
                if (a.samples > 1) {
                    double var =
                        (a.sum_sq - a.samples * cell.mean_ratio * cell.mean_ratio) /
                        (a.samples - 1);
                    if (var < 0.0) var = 0.0;
                    half = 1.959963984540054 * std::sqrt(var / a.samples);
                }
                cell.ci_low = cell.mean_ratio - half;
                cell.ci_high = cell.mean_ratio + half;
            }
            eval.cells.push_back(cell);
        }
    }
    return eval;
}

} // namespace seednet
