#include "seednet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "seednet/errors.hpp"
#include "seednet/rng.hpp"

namespace seednet {

void SampleDesign::validate() const {
    if (sample_size < 1) throw ConfigError("sample_size must be at least 1");
}

VillageOutcome sample_outcome_informed(const std::vector<char>& informed,
                                       const VillageNetwork& net, const SeedPair& seeds,
                                       const SampleDesign& design, std::uint64_t rng_substream,
                                       std::string treatment_label) {
    design.validate();
    if (static_cast<int>(informed.size()) != net.size())
        throw DataError("informed flags do not match village size");
    const int a = net.index_of(seeds.first);
    const int b = net.index_of(seeds.second);
    if (a < 0) throw DataError("unknown seed person_id " + seeds.first);
    if (b < 0) throw DataError("unknown seed person_id " + seeds.second);

    const int n_households = net.household_count();
    std::vector<char> is_seed_household(static_cast<std::size_t>(n_households), 0);
    is_seed_household[static_cast<std::size_t>(net.household_of(a))] = 1;
    is_seed_household[static_cast<std::size_t>(net.household_of(b))] = 1;
    std::vector<int> non_seed;
    non_seed.reserve(static_cast<std::size_t>(n_households));
    for (int h = 0; h < n_households; ++h)
        if (!is_seed_household[static_cast<std::size_t>(h)]) non_seed.push_back(h);

    // Seed households are always surveyed; the remaining quota is a uniform
    // draw from the others.
    const int seed_households = n_households - static_cast<int>(non_seed.size());
    int quota = design.sample_size - seed_households;
    if (quota < 0) quota = 0;
    std::vector<int> sampled;
    for (int h = 0; h < n_households; ++h)
        if (is_seed_household[static_cast<std::size_t>(h)]) sampled.push_back(h);
    if (quota >= static_cast<int>(non_seed.size())) {
        if (quota > static_cast<int>(non_seed.size()) && !design.include_all_if_smaller)
            throw InfeasibleError("village " + net.village_id() + " has fewer than " +
                                  std::to_string(design.sample_size) + " households");
        sampled.insert(sampled.end(), non_seed.begin(), non_seed.end());
    } else {
        rng::Stream stream(rng::stream_key(rng_substream, rng::Domain::sampling, 0));
        const std::vector<int> picks =
            rng::sample_without_replacement(static_cast<int>(non_seed.size()), quota, stream);
        for (int p : picks) sampled.push_back(non_seed[static_cast<std::size_t>(p)]);
    }

    VillageOutcome out;
    out.village_id = net.village_id();
    out.treatment_label = std::move(treatment_label);
    int observed_people = 0;
    int informed_people = 0;
    for (int h : sampled) {
        out.sampled_households.push_back(net.household_id(h));
        if (is_seed_household[static_cast<std::size_t>(h)]) continue;
        bool household_informed = false;
        for (int m : net.household_members(h)) {
            ++observed_people;
            if (informed[static_cast<std::size_t>(m)]) {
                ++informed_people;
                household_informed = true;
            }
        }
        if (household_informed) out.any_adoption = true;
    }
    out.adoption_rate =
        observed_people == 0 ? 0.0 : static_cast<double>(informed_people) / observed_people;
    std::sort(out.sampled_households.begin(), out.sampled_households.end());
    return out;
}

VillageOutcome sample_outcome(const DiffusionOutcome& outcome, const VillageNetwork& net,
                              const SeedPair& seeds, const SampleDesign& design,
                              std::uint64_t rng_substream, std::string treatment_label) {
    if (outcome.informed_by_period.empty()) throw DataError("diffusion outcome has no periods");
    std::vector<char> informed(static_cast<std::size_t>(net.size()), 0);
    for (const std::string& id : outcome.informed_by_period.back()) {
        const int idx = net.index_of(id);
        if (idx < 0) throw DataError("informed person_id " + id + " not in village");
        informed[static_cast<std::size_t>(idx)] = 1;
    }
    return sample_outcome_informed(informed, net, seeds, design, rng_substream,
                                   std::move(treatment_label));
}

TreatmentSpec TreatmentSpec::from_model(TreatmentModel m) {
    TreatmentSpec spec;
    spec.label = treatment_model_name(m);
    spec.model = m;
    return spec;
}

TreatmentSpec TreatmentSpec::from_pairs(std::string label, std::map<std::string, SeedPair> pairs) {
    TreatmentSpec spec;
    spec.label = std::move(label);
    spec.pairs = std::move(pairs);
    return spec;
}

namespace {

struct MeanAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    int n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    double mean() const { return n == 0 ? 0.0 : sum / n; }
    // Variance of the sample mean (sample variance / n).
    double mean_variance() const {
        if (n < 2) return 0.0;
        double var = (sum_sq - n * mean() * mean()) / (n - 1);
        if (var < 0.0) var = 0.0;
        return var / n;
    }
};

constexpr double kZ95 = 1.959963984540054;

} // namespace

EnsembleReport ensemble_report(const std::vector<VillageNetwork>& villages,
                               const std::vector<TreatmentSpec>& treatments,
                               const DiffusionConfig& config, const SampleDesign& design,
                               int workers) {
    if (villages.empty()) throw ConfigError("ensemble is empty");
    if (treatments.empty()) throw ConfigError("no treatments given");
    config.validate();
    design.validate();

    EnsembleReport report;
    for (std::size_t t = 0; t < treatments.size(); ++t) {
        const TreatmentSpec& treatment = treatments[t];

        // Resolve one seed pair per village for this treatment.
        std::vector<SeedPair> pair_by_village;
        pair_by_village.reserve(villages.size());
        for (const VillageNetwork& net : villages) {
            if (treatment.model) {
                PairSearchOptions options;
                options.workers = workers;
                pair_by_village.push_back(
                    select_seeds(net, *treatment.model, config, options).best);
            } else {
                const auto it = treatment.pairs.find(net.village_id());
                if (it == treatment.pairs.end())
                    throw DataError("treatment '" + treatment.label +
                                    "' has no seed pair for village " + net.village_id());
                pair_by_village.push_back(it->second);
            }
        }

        for (int lambda_index = 0; lambda_index < 2; ++lambda_index) {
            DiffusionConfig run = config;
            run.lambda_mean = lambda_index == 0 ? 1.0 : 2.0;
            const int T = run.periods;

            // Per-village Monte Carlo means; the cell aggregates them with
            // simulation-noise CIs (the village list itself is fixed).
            double any_sum = 0.0;
            double any_var_sum = 0.0;
            double rate_sum = 0.0;
            double rate_var_sum = 0.0;
            for (std::size_t v = 0; v < villages.size(); ++v) {
                const VillageNetwork& net = villages[v];
                const SeedPair& pair = pair_by_village[v];
                const int a = net.index_of(pair.first);
                const int b = net.index_of(pair.second);
                if (a < 0 || b < 0)
                    throw DataError("treatment '" + treatment.label +
                                    "' names an unknown person in village " + net.village_id());
                const int seeds[2] = {a, b};

                DiffusionEngine engine(net);
                std::vector<std::int32_t> counts(static_cast<std::size_t>(T) + 1);
                std::vector<std::vector<int>> newly;
                std::vector<char> informed(static_cast<std::size_t>(net.size()));
                const std::uint64_t village_key = rng::stream_key(
                    run.master_seed, rng::Domain::sampling,
                    (static_cast<std::uint64_t>(t) << 17) |
                        (static_cast<std::uint64_t>(lambda_index) << 16) |
                        static_cast<std::uint64_t>(v));

                MeanAccumulator any_acc;
                MeanAccumulator rate_acc;
                for (int r = 0; r < run.replications; ++r) {
                    const ThresholdDraw draw =
                        draw_thresholds(net, run, static_cast<std::uint64_t>(r));
                    const std::vector<std::int32_t> kappa = thresholds_to_kappa(draw);
                    engine.propagate(seeds, kappa, T, counts, &newly);
                    std::fill(informed.begin(), informed.end(), 0);
                    for (const std::vector<int>& period : newly)
                        for (int idx : period) informed[static_cast<std::size_t>(idx)] = 1;
                    const std::uint64_t substream = rng::stream_key(
                        village_key, rng::Domain::sampling, static_cast<std::uint64_t>(r));
                    const VillageOutcome outcome = sample_outcome_informed(
                        informed, net, pair, design, substream, treatment.label);
                    any_acc.add(outcome.any_adoption ? 1.0 : 0.0);
                    rate_acc.add(outcome.adoption_rate);
                }
                any_sum += any_acc.mean();
                any_var_sum += any_acc.mean_variance();
                rate_sum += rate_acc.mean();
                rate_var_sum += rate_acc.mean_variance();
            }

            const double n_villages = static_cast<double>(villages.size());
            EnsembleCell cell;
            cell.treatment = treatment.label;
            cell.lambda = run.lambda_mean;
            cell.villages = static_cast<int>(villages.size());
            cell.any_share = any_sum / n_villages;
            cell.adoption_mean = rate_sum / n_villages;
            const double any_se = std::sqrt(any_var_sum) / n_villages;
            const double rate_se = std::sqrt(rate_var_sum) / n_villages;
            cell.any_ci_low = cell.any_share - kZ95 * any_se;
            cell.any_ci_high = cell.any_share + kZ95 * any_se;
            cell.adoption_ci_low = cell.adoption_mean - kZ95 * rate_se;
            cell.adoption_ci_high = cell.adoption_mean + kZ95 * rate_se;
            report.cells.push_back(cell);
        }
    }
    return report;
}

} // namespace seednet
