#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "seednet/errors.hpp"
#include "seednet/evaluation.hpp"
#include "test_util.hpp"

using namespace seednet;

namespace {

// 58 single-person households: household k = {person k}.
VillageNetwork survey_village() {
    std::vector<std::vector<std::string>> households;
    for (int h = 0; h < 58; ++h) households.push_back({pid(h)});
    return make_village("survey", households, {});
}

std::vector<char> flags(const VillageNetwork& net, const std::vector<int>& on) {
    std::vector<char> f(static_cast<std::size_t>(net.size()), 0);
    for (int i : on) f[static_cast<std::size_t>(i)] = 1;
    return f;
}

} // namespace

TEST_CASE("sample design validation") {
    SampleDesign design;
    CHECK_NOTHROW(design.validate());
    design.sample_size = 0;
    CHECK_THROWS_AS(design.validate(), ConfigError);
}

TEST_CASE("saturated village reports universal adoption") {
    const auto net = survey_village();
    std::vector<char> informed(static_cast<std::size_t>(net.size()), 1);
    const SeedPair seeds = SeedPair::normalized(pid(0), pid(1));
    SampleDesign design;
    design.sample_size = 30;

    const VillageOutcome out =
        sample_outcome_informed(informed, net, seeds, design, 7, "demo");
    CHECK(out.any_adoption);
    CHECK(out.adoption_rate == 1.0);
    CHECK(out.village_id == "survey");
    CHECK(out.treatment_label == "demo");
    REQUIRE(out.sampled_households.size() == 30);
    CHECK(std::is_sorted(out.sampled_households.begin(), out.sampled_households.end()));
    // Seed households are always on the survey roster.
    CHECK(std::count(out.sampled_households.begin(), out.sampled_households.end(), hid(0)) == 1);
    CHECK(std::count(out.sampled_households.begin(), out.sampled_households.end(), hid(1)) == 1);
}

TEST_CASE("seed households do not count toward adoption") {
    const auto net = survey_village();
    const SeedPair seeds = SeedPair::normalized(pid(0), pid(1));
    SampleDesign design;
    design.sample_size = 30;

    // Only the seed households are informed: the survey sees nothing.
    const VillageOutcome out =
        sample_outcome_informed(flags(net, {0, 1}), net, seeds, design, 3);
    CHECK_FALSE(out.any_adoption);
    CHECK(out.adoption_rate == 0.0);
}

TEST_CASE("sampling hits informed households at the hypergeometric rate") {
    // 2 seed households are forced into the survey; 28 of the 56 others are
    // drawn uniformly. With 3 informed non-seed households, P(at least one
    // surveyed) = 1 - C(53,28)/C(56,28) = 1 - (28*27*26)/(56*55*54).
    const auto net = survey_village();
    const SeedPair seeds = SeedPair::normalized(pid(0), pid(1));
    const std::vector<char> informed = flags(net, {0, 1, 2, 3, 4});
    SampleDesign design;
    design.sample_size = 30;

    const double expected = 1.0 - (28.0 * 27.0 * 26.0) / (56.0 * 55.0 * 54.0);
    int hits = 0;
    const int draws = 10000;
    for (int s = 0; s < draws; ++s) {
        const VillageOutcome out = sample_outcome_informed(
            informed, net, seeds, design, static_cast<std::uint64_t>(s));
        REQUIRE(out.sampled_households.size() == 30);
        if (out.any_adoption) ++hits;
        // Rate counts people: 28 observed singles, 0..3 informed.
        CHECK(out.adoption_rate >= 0.0);
        CHECK(out.adoption_rate <= 3.0 / 28.0 + 1e-12);
    }
    const double share = static_cast<double>(hits) / draws;
    CHECK(std::abs(share - expected) < 0.01);
}

TEST_CASE("survey draws are deterministic per substream") {
    const auto net = survey_village();
    const SeedPair seeds = SeedPair::normalized(pid(4), pid(40));
    const std::vector<char> informed = flags(net, {4, 40, 10, 20, 30});
    SampleDesign design;
    design.sample_size = 12;

    const VillageOutcome a = sample_outcome_informed(informed, net, seeds, design, 99);
    const VillageOutcome b = sample_outcome_informed(informed, net, seeds, design, 99);
    CHECK(a.sampled_households == b.sampled_households);
    CHECK(a.any_adoption == b.any_adoption);
    CHECK(a.adoption_rate == b.adoption_rate);

    bool saw_different = false;
    for (std::uint64_t s = 0; s < 20 && !saw_different; ++s)
        saw_different = sample_outcome_informed(informed, net, seeds, design, s)
                            .sampled_households != a.sampled_households;
    CHECK(saw_different);
}

TEST_CASE("more informed people can only raise the surveyed outcome") {
    for (int g = 0; g < 20; ++g) {
        const auto net = random_village(9900 + g, 24, 0.1);
        const SeedPair seeds = SeedPair::normalized(net.person_id(0), net.person_id(5));
        SampleDesign design;
        design.sample_size = std::max(2, net.household_count() / 2);

        rng::Stream stream(rng::stream_key(42, rng::Domain::generic, g));
        std::vector<int> base;
        for (int i = 0; i < net.size(); ++i)
            if (stream.uniform01() < 0.3) base.push_back(i);
        std::vector<int> more = base;
        for (int i = 0; i < net.size(); ++i)
            if (stream.uniform01() < 0.3) more.push_back(i);

        const std::uint64_t substream = 1000 + g;
        const VillageOutcome small =
            sample_outcome_informed(flags(net, base), net, seeds, design, substream);
        const VillageOutcome large =
            sample_outcome_informed(flags(net, more), net, seeds, design, substream);
        // Same substream, same roster: outcomes are monotone in the flags.
        CHECK(small.sampled_households == large.sampled_households);
        CHECK(large.adoption_rate >= small.adoption_rate);
        if (small.any_adoption) CHECK(large.any_adoption);
    }
}

TEST_CASE("small villages are surveyed whole, or rejected when required") {
    const auto net = make_village(
        "small",
        {{pid(0), pid(1)}, {pid(2)}, {pid(3)}, {pid(4), pid(5)}, {pid(6)}},
        {{pid(1), pid(2)}});
    const SeedPair seeds = SeedPair::normalized(pid(0), pid(2));
    const std::vector<char> informed = flags(net, {0, 1, 2, 3});

    SampleDesign design;
    design.sample_size = 30;
    const VillageOutcome out = sample_outcome_informed(informed, net, seeds, design, 0);
    CHECK(out.sampled_households.size() == 5); // every household
    CHECK(out.any_adoption);                   // person 3 is non-seed and informed
    // Non-seed observed people: 3, 4, 5, 6; only 3 is informed.
    CHECK(out.adoption_rate == doctest::Approx(0.25));

    design.include_all_if_smaller = false;
    CHECK_THROWS_AS(sample_outcome_informed(informed, net, seeds, design, 0),
                    InfeasibleError);

    // Asking for exactly the household count is fine either way.
    design.sample_size = 5;
    CHECK_NOTHROW(sample_outcome_informed(informed, net, seeds, design, 0));
}

TEST_CASE("partial household adoption counts people, not households") {
    const auto net = make_village("partial",
                                  {{pid(0), pid(1)},
                                   {pid(2), pid(3)},
                                   {pid(4), pid(5)},
                                   {pid(6), pid(7)}},
                                  {{pid(1), pid(2)}, {pid(3), pid(4)}, {pid(5), pid(6)}});
    const SeedPair seeds = SeedPair::normalized(pid(0), pid(3));
    SampleDesign design;
    design.sample_size = 30;

    // Non-seed households: {4,5} and {6,7}. One informed person out of four.
    const VillageOutcome out =
        sample_outcome_informed(flags(net, {0, 1, 2, 3, 4}), net, seeds, design, 0);
    CHECK(out.any_adoption);
    CHECK(out.adoption_rate == doctest::Approx(0.25));
}

TEST_CASE("sample_outcome wraps the final simulated period") {
    const auto net = make_simple_graph("wrap", 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    ThresholdDraw draw;
    draw.tau.assign(5, 1.0);
    const DiffusionOutcome outcome = run_once(net, {pid(0)}, draw, 2);
    const SeedPair seeds = SeedPair::normalized(pid(0), pid(1));
    SampleDesign design;
    design.sample_size = 5;

    const VillageOutcome via_ids = sample_outcome(outcome, net, seeds, design, 5, "x");
    const VillageOutcome via_flags =
        sample_outcome_informed(flags(net, {0, 1, 2}), net, seeds, design, 5, "x");
    CHECK(via_ids.any_adoption == via_flags.any_adoption);
    CHECK(via_ids.adoption_rate == via_flags.adoption_rate);
    CHECK(via_ids.sampled_households == via_flags.sampled_households);

    DiffusionOutcome empty;
    CHECK_THROWS_AS(sample_outcome(empty, net, seeds, design, 0), DataError);
    DiffusionOutcome alien;
    alien.informed_by_period = {{"nobody"}};
    CHECK_THROWS_AS(sample_outcome(alien, net, seeds, design, 0), DataError);
}

TEST_CASE("survey errors on malformed input") {
    const auto net = survey_village();
    SampleDesign design;
    const std::vector<char> informed(static_cast<std::size_t>(net.size()), 0);
    CHECK_THROWS_AS(sample_outcome_informed(informed, net,
                                            SeedPair::normalized("ghost", pid(1)), design, 0),
                    DataError);
    const std::vector<char> short_flags(10, 0);
    CHECK_THROWS_AS(sample_outcome_informed(short_flags, net,
                                            SeedPair::normalized(pid(0), pid(1)), design, 0),
                    DataError);
}

// ---------------------------------------------------------------------------
// Ensemble reports.

TEST_CASE("ensemble report layout and bounds") {
    SynthParams params;
    params.n_households = 16;
    params.mean_household_size = 2.0;
    params.rng_seed = 5;
    const VillageNetwork village = synth_village(params);

    const SeedPair pair = SeedPair::normalized(village.person_id(0), village.person_id(5));
    std::map<std::string, SeedPair> pairs{{village.village_id(), pair}};
    const std::vector<TreatmentSpec> treatments{
        TreatmentSpec::from_pairs("bench", pairs),
        TreatmentSpec::from_model(TreatmentModel::complex),
    };

    DiffusionConfig config;
    config.replications = 150;
    config.master_seed = 9;
    SampleDesign design;
    design.sample_size = 10;

    const EnsembleReport report =
        ensemble_report({village}, treatments, config, design, 1);
    REQUIRE(report.cells.size() == 4); // two treatments x lambda in {1, 2}
    CHECK(report.cells[0].treatment == "bench");
    CHECK(report.cells[0].lambda == 1.0);
    CHECK(report.cells[1].treatment == "bench");
    CHECK(report.cells[1].lambda == 2.0);
    CHECK(report.cells[2].treatment == "complex");
    CHECK(report.cells[3].lambda == 2.0);

    for (const EnsembleCell& cell : report.cells) {
        CHECK(cell.villages == 1);
        CHECK(cell.any_share >= 0.0);
        CHECK(cell.any_share <= 1.0);
        CHECK(cell.adoption_mean >= 0.0);
        CHECK(cell.adoption_mean <= 1.0);
        CHECK(cell.any_ci_low <= cell.any_share);
        CHECK(cell.any_ci_high >= cell.any_share);
        CHECK(cell.adoption_ci_low <= cell.adoption_mean);
        CHECK(cell.adoption_ci_high >= cell.adoption_mean);
    }

    // The ring-connected synth village saturates under simple contagion, so
    // the surveyed share under lambda = 1 dominates the lambda = 2 share.
    CHECK(report.cells[0].any_share > 0.9);
    CHECK(report.cells[0].any_share >= report.cells[1].any_share);
}

TEST_CASE("ensemble report is deterministic") {
    std::vector<VillageNetwork> villages;
    for (int v = 0; v < 2; ++v) {
        SynthParams params;
        params.n_households = 10;
        params.rng_seed = 20 + v;
        villages.push_back(synth_village(params));
    }
    const std::vector<TreatmentSpec> treatments{TreatmentSpec::from_model(TreatmentModel::simple)};
    DiffusionConfig config;
    config.replications = 80;
    config.master_seed = 31;
    SampleDesign design;
    design.sample_size = 6;

    const EnsembleReport a = ensemble_report(villages, treatments, config, design, 1);
    const EnsembleReport b = ensemble_report(villages, treatments, config, design, 1);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].any_share == b.cells[i].any_share);
        CHECK(a.cells[i].adoption_mean == b.cells[i].adoption_mean);
        CHECK(a.cells[i].any_ci_low == b.cells[i].any_ci_low);
        CHECK(a.cells[i].adoption_ci_high == b.cells[i].adoption_ci_high);
    }
}

TEST_CASE("ensemble report validates treatments and villages") {
    SynthParams params;
    params.n_households = 8;
    params.rng_seed = 3;
    const VillageNetwork village = synth_village(params);
    DiffusionConfig config;
    config.replications = 10;
    SampleDesign design;

    CHECK_THROWS_AS(ensemble_report({}, {TreatmentSpec::from_model(TreatmentModel::simple)},
                                    config, design, 1),
                    ConfigError);
    CHECK_THROWS_AS(ensemble_report({village}, {}, config, design, 1), ConfigError);

    // Pair treatments must cover every village...
    const std::vector<TreatmentSpec> missing{
        TreatmentSpec::from_pairs("bench", {{"elsewhere", SeedPair::normalized("a", "b")}})};
    CHECK_THROWS_AS(ensemble_report({village}, missing, config, design, 1), DataError);

    // ...with people who actually live there.
    const std::vector<TreatmentSpec> ghosts{TreatmentSpec::from_pairs(
        "bench", {{village.village_id(), SeedPair::normalized("ghost1", "ghost2")}})};
    CHECK_THROWS_AS(ensemble_report({village}, ghosts, config, design, 1), DataError);
}
