#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seednet/diffusion.hpp"
#include "seednet/network.hpp"
#include "seednet/seeding.hpp"

namespace seednet {

/// Household survey design: how many households are observed per village.
struct SampleDesign {
    int sample_size = 30;
    bool include_all_if_smaller = true;

    void validate() const;
};

/// Outcome of surveying one simulated village under one treatment.
struct VillageOutcome {
    std::string village_id;
    std::string treatment_label;
    bool any_adoption = false;  // some sampled non-seed household informed
    double adoption_rate = 0.0; // informed share of sampled non-seed individuals
    std::vector<std::string> sampled_households; // sorted household ids, seeds included
};

/// Surveys `design.sample_size` households: the seed households are always
/// included, the rest drawn uniformly without replacement. Both statistics
/// exclude the seed households; informed status at the final simulated period
/// stands in for adoption. Deterministic given rng_substream.
VillageOutcome sample_outcome(const DiffusionOutcome& outcome, const VillageNetwork& net,
                              const SeedPair& seeds, const SampleDesign& design,
                              std::uint64_t rng_substream, std::string treatment_label = "");

/// Index-level variant used by the simulation loops: `informed` flags
/// individuals by network index at the period being surveyed.
VillageOutcome sample_outcome_informed(const std::vector<char>& informed,
                                       const VillageNetwork& net, const SeedPair& seeds,
                                       const SampleDesign& design, std::uint64_t rng_substream,
                                       std::string treatment_label = "");

/// One treatment arm of an ensemble run: either a per-village computed model
/// or user-supplied pairs keyed by village id.
struct TreatmentSpec {
    std::string label;
    std::optional<TreatmentModel> model; // computed when set
    std::map<std::string, SeedPair> pairs; // used when model is empty

    static TreatmentSpec from_model(TreatmentModel m);
    static TreatmentSpec from_pairs(std::string label, std::map<std::string, SeedPair> pairs);
};

/// Mean outcomes for one (treatment, lambda) cell with Monte Carlo 95% CIs.
/// any_share averages the per-village probability that a sampled non-seed
/// household is informed; adoption_mean averages the per-village mean
/// adoption rate. CIs reflect simulation noise only (villages are fixed).
struct EnsembleCell {
    std::string treatment;
    double lambda = 0.0;
    int villages = 0;
    double any_share = 0.0;
    double any_ci_low = 0.0;
    double any_ci_high = 0.0;
    double adoption_mean = 0.0;
    double adoption_ci_low = 0.0;
    double adoption_ci_high = 0.0;
};

struct EnsembleReport {
    std::vector<EnsembleCell> cells; // treatment-major, lambda in {1,2} minor
};

/// Simulates every treatment on every village under both contagion
/// assumptions (lambda = 1 and lambda = 2) and reports sampled outcome means.
/// Pair-computing treatments resolve their seed pair once per village using
/// `config` (lambda forced by the treatment model); the diffusion that is
/// then surveyed always runs on the social network.
EnsembleReport ensemble_report(const std::vector<VillageNetwork>& villages,
                               const std::vector<TreatmentSpec>& treatments,
                               const DiffusionConfig& config, const SampleDesign& design,
                               int workers = 1);

} // namespace seednet
