// seednet command-line tool: seed-pair selection, diffusion simulation,
// targeting strategies, learning thresholds, centrality, and synthetic data.
//
// Exit codes: 0 success, 2 usage/config error, 3 data error, 4 infeasible.
// All reports are deterministic byte-for-byte given the same inputs and
// --seed, independent of --workers.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seednet/centrality.hpp"
#include "seednet/diffusion.hpp"
#include "seednet/errors.hpp"
#include "seednet/evaluation.hpp"
#include "seednet/learning.hpp"
#include "seednet/network.hpp"
#include "seednet/network_io.hpp"
#include "seednet/rng.hpp"
#include "seednet/seeding.hpp"
#include "seednet/version.hpp"

#include "json_writer.hpp"

namespace {

using namespace seednet;

std::string fmt17(double d) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

// Writes the finished report text to --out ("-" means stdout) in one shot so
// failed runs never leave partial files behind.
void deliver(const std::string& out_path, const std::string& text) {
    if (out_path == "-" || out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + out_path);
    out << text;
    if (!out) throw ConfigError("failed writing output file " + out_path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + path);
    out << text;
    if (!out) throw ConfigError("failed writing output file " + path);
}

void report_header(JsonWriter& json, const char* command) {
    json.kv("tool", "seednet");
    json.kv("version", kVersion);
    json.kv("command", command);
}

void village_summary(JsonWriter& json, const VillageNetwork& net) {
    json.key("village");
    json.begin_object();
    json.kv("id", net.village_id());
    json.kv("individuals", net.size());
    json.kv("households", net.household_count());
    json.kv("edges", static_cast<std::int64_t>(net.edge_count()));
    json.end_object();
}

// ---------------------------------------------------------------------------
// Shared option bundles.

struct CommonOpts {
    std::uint64_t seed = 0;
    int workers = 1;
    bool deterministic = false;
    std::string out = "-";
};

struct DiffusionOpts {
    double lambda = 2.0;
    double sd = 0.5;
    int periods = 4;
    int replications = 2000;
};

// Applies a key=value config file to a subcommand's options. CLI11 only
// processes set_config at the root app, so subcommand config files are wired
// by hand: every key must name an option of the subcommand, and options
// already given on the command line keep their values (flags win).
void apply_config_file(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    std::vector<CLI::Option*> filled;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = CLI::detail::trim_copy(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file " + path + " line " + std::to_string(lineno) +
                              ": expected key=value");
        const std::string key = CLI::detail::trim_copy(text.substr(0, eq));
        const std::string value = CLI::detail::trim_copy(text.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config file " + path + " line " + std::to_string(lineno) +
                              ": empty key");
        if (key == "config")
            throw ConfigError("config file " + path + ": config files cannot nest");
        CLI::Option* op = sub->get_option_no_throw("--" + key);
        if (op == nullptr)
            throw ConfigError("config file " + path + ": unknown option " + key);
        if (op->count() > 0) continue; // set on the command line; flags win
        op->add_result(value);
        filled.push_back(op);
    }
    // Run the callbacks now: options earlier in the subcommand's option list
    // have already been passed over by CLI11's callback sweep.
    for (CLI::Option* op : filled) op->run_callback();
}

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--seed", opts.seed, "Master RNG seed")->capture_default_str();
    sub->add_option("--workers", opts.workers, "Worker threads (does not affect results)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--deterministic", opts.deterministic,
                  "Use fixed thresholds (threshold sd = 0)");
    sub->add_option("-o,--out", opts.out, "Report path, - for stdout")->capture_default_str();
    sub->add_option("--config", "Read options from a key=value file (flags win)")
        ->type_name("TEXT")
        ->each([sub](const std::string& path) { apply_config_file(sub, path); });
}

void add_diffusion(CLI::App* sub, DiffusionOpts& opts, bool with_lambda) {
    if (with_lambda)
        sub->add_option("--lambda", opts.lambda, "Threshold mean")->capture_default_str();
    sub->add_option("--sd", opts.sd, "Threshold standard deviation")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--periods", opts.periods, "Simulated periods")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("-R,--replications", opts.replications, "Monte Carlo replications")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

DiffusionConfig make_config(const CommonOpts& common, const DiffusionOpts& diffusion) {
    DiffusionConfig config;
    config.lambda_mean = diffusion.lambda;
    config.threshold_sd = common.deterministic ? 0.0 : diffusion.sd;
    config.periods = diffusion.periods;
    config.replications = diffusion.replications;
    config.master_seed = common.seed;
    return config;
}

// Minimal CSV split for the benchmark-pairs file (ids must not contain
// commas or quotes, as in the main schemas).
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    for (std::string& f : fields)
        while (!f.empty() && (f.back() == '\r' || f.back() == '\n')) f.pop_back();
    return fields;
}

std::map<std::string, SeedPair> load_benchmark_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    const std::vector<std::string> header = split_csv(line);
    int vi = -1, ai = -1, bi = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "village_id") vi = static_cast<int>(c);
        else if (header[c] == "person_a") ai = static_cast<int>(c);
        else if (header[c] == "person_b") bi = static_cast<int>(c);
    }
    if (vi < 0 || ai < 0 || bi < 0)
        throw DataError(path + ": header must name village_id, person_a, person_b");
    std::map<std::string, SeedPair> pairs;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        const std::size_t need =
            static_cast<std::size_t>(std::max(vi, std::max(ai, bi))) + 1;
        if (fields.size() < need)
            throw DataError(path + ":" + std::to_string(row) + ": too few fields");
        const std::string& village = fields[static_cast<std::size_t>(vi)];
        const std::string& a = fields[static_cast<std::size_t>(ai)];
        const std::string& b = fields[static_cast<std::size_t>(bi)];
        if (village.empty() || a.empty() || b.empty() || a == b)
            throw DataError(path + ":" + std::to_string(row) + ": invalid pair row");
        if (!pairs.emplace(village, SeedPair::normalized(a, b)).second)
            throw DataError(path + ":" + std::to_string(row) + ": duplicate village " + village);
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// select-seeds

struct SelectSeedsOpts {
    CommonOpts common;
    DiffusionOpts diffusion;
    std::string individuals;
    std::string edges;
    std::string village;
    std::string model = "complex";
    int horizon = -1;
    int top_k = 10;
    double geo_radius = kDefaultGeoRadiusMiles;
    std::string pairs_csv;
};

void run_select_seeds(const SelectSeedsOpts& opts) {
    const VillageNetwork net =
        load_village_from_files(opts.individuals, opts.edges, opts.village);
    const TreatmentModel model = treatment_model_from_name(opts.model);
    DiffusionConfig config = make_config(opts.common, opts.diffusion);
    PairSearchOptions options;
    options.objective_period = opts.horizon;
    options.workers = opts.common.workers;
    const PairSearchResult result =
        select_seeds(net, model, config, options, opts.geo_radius);

    // The lambda the model resolved to, for the embedded config.
    const double lambda = model == TreatmentModel::simple ? 1.0 : 2.0;

    std::ostringstream buffer;
    {
        JsonWriter json(buffer);
        json.begin_object();
        report_header(json, "select-seeds");
        json.key("config");
        json.begin_object();
        json.kv("individuals", opts.individuals);
        json.kv("edges", opts.edges);
        json.kv("village", net.village_id());
        json.kv("model", opts.model);
        json.kv("lambda", lambda);
        json.kv("threshold_sd", config.threshold_sd);
        json.kv("periods", config.periods);
        json.kv("replications", config.replications);
        json.kv("horizon_period", result.horizon_period);
        json.kv("geo_radius_miles", opts.geo_radius);
        json.kv("top_k", opts.top_k);
        json.kv("seed", config.master_seed);
        json.end_object();
        village_summary(json, net);
        json.key("best_pair");
        json.begin_object();
        json.kv("first", result.best.first);
        json.kv("second", result.best.second);
        json.end_object();
        json.kv("pairs_evaluated", static_cast<std::int64_t>(result.ranked.size()));
        json.key("ranked");
        json.begin_array();
        const std::size_t limit = opts.top_k <= 0
                                      ? result.ranked.size()
                                      : std::min<std::size_t>(result.ranked.size(),
                                                              static_cast<std::size_t>(opts.top_k));
        for (std::size_t i = 0; i < limit; ++i) {
            const PairScore& score = result.ranked[i];
            json.begin_object();
            json.kv("rank", static_cast<std::int64_t>(i + 1));
            json.kv("first", score.pair.first);
            json.kv("second", score.pair.second);
            json.kv("mean_rate", score.mean_rate);
            json.kv("std_error", score.std_error);
            json.key("per_period_rates");
            json.begin_array();
            for (double r : score.per_period_rates) json.value(r);
            json.end_array();
            json.end_object();
        }
        json.end_array();
        json.end_object();
    }
    buffer << '\n';

    if (!opts.pairs_csv.empty()) {
        std::ostringstream csv;
        csv << "rank,person_a,person_b,mean_rate,std_error";
        const int T = config.periods;
        for (int t = 0; t <= T; ++t) csv << ",rate_p" << t;
        csv << "\n";
        for (std::size_t i = 0; i < result.ranked.size(); ++i) {
            const PairScore& score = result.ranked[i];
            csv << (i + 1) << ',' << score.pair.first << ',' << score.pair.second << ','
                << fmt17(score.mean_rate) << ',' << fmt17(score.std_error);
            for (double r : score.per_period_rates) csv << ',' << fmt17(r);
            csv << "\n";
        }
        write_text_file(opts.pairs_csv, csv.str());
    }

    deliver(opts.common.out, buffer.str());
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
    CommonOpts common;
    DiffusionOpts diffusion;
    std::string individuals;
    std::string edges;
    std::string village;
    std::vector<std::string> seeds;
};

void run_simulate(const SimulateOpts& opts) {
    const VillageNetwork net =
        load_village_from_files(opts.individuals, opts.edges, opts.village);
    const DiffusionConfig config = make_config(opts.common, opts.diffusion);
    const RateSummary summary = mean_information_rate(net, opts.seeds, config);

    std::ostringstream buffer;
    {
        JsonWriter json(buffer);
        json.begin_object();
        report_header(json, "simulate");
        json.key("config");
        json.begin_object();
        json.kv("individuals", opts.individuals);
        json.kv("edges", opts.edges);
        json.kv("village", net.village_id());
        json.key("seeds");
        json.begin_array();
        for (const std::string& s : opts.seeds) json.value(s);
        json.end_array();
        json.kv("lambda", config.lambda_mean);
        json.kv("threshold_sd", config.threshold_sd);
        json.kv("periods", config.periods);
        json.kv("replications", config.replications);
        json.kv("seed", config.master_seed);
        json.end_object();
        village_summary(json, net);
        json.key("information_rate");
        json.begin_array();
        for (std::size_t t = 0; t < summary.mean.size(); ++t) {
            json.begin_object();
            json.kv("period", static_cast<std::int64_t>(t));
            json.kv("mean", summary.mean[t]);
            json.kv("std_error", summary.std_error[t]);
            json.end_object();
        }
        json.end_array();
        json.end_object();
    }
    buffer << '\n';
    deliver(opts.common.out, buffer.str());
}

// ---------------------------------------------------------------------------
// strategies

struct StrategiesOpts {
    CommonOpts common;
    DiffusionOpts diffusion; // lambda fixed at 2 by the evaluation
    std::string individuals;
    std::string edges;
    std::string strategy = "all";
    std::vector<int> initial{2};
    int trials = 10;
};

void run_strategies(const StrategiesOpts& opts) {
    const std::vector<VillageNetwork> villages =
        load_villages_from_files(opts.individuals, opts.edges);
    const DiffusionConfig config = make_config(opts.common, opts.diffusion);
    std::optional<Strategy> only;
    if (opts.strategy != "all") only = strategy_from_letter(opts.strategy);
    const StrategyEvaluation eval = evaluate_strategies(
        villages, config, opts.initial, opts.trials, opts.common.workers);

    std::ostringstream buffer;
    {
        JsonWriter json(buffer);
        json.begin_object();
        report_header(json, "strategies");
        json.key("config");
        json.begin_object();
        json.kv("individuals", opts.individuals);
        json.kv("edges", opts.edges);
        json.kv("strategy", opts.strategy);
        json.key("initial");
        json.begin_array();
        for (int k : opts.initial) json.value(k);
        json.end_array();
        json.kv("trials", opts.trials);
        json.kv("lambda", 2.0);
        json.kv("threshold_sd", config.threshold_sd);
        json.kv("periods", config.periods);
        json.kv("replications", config.replications);
        json.kv("seed", config.master_seed);
        json.end_object();
        json.kv("villages_used", eval.villages_used);
        json.kv("villages_skipped", eval.villages_skipped);
        json.key("cells");
        json.begin_array();
        for (const StrategyCell& cell : eval.cells) {
            if (only && cell.strategy != *only) continue;
            json.begin_object();
            json.kv("strategy", std::string(1, strategy_letter(cell.strategy)));
            json.kv("n_initial", cell.n_initial);
            json.kv("samples", cell.samples);
            json.kv("infeasible", cell.infeasible);
            json.kv("mean_ratio", cell.mean_ratio);
            json.kv("ci_low", cell.ci_low);
            json.kv("ci_high", cell.ci_high);
            json.kv("mean_total_interviews", cell.mean_total_interviews);
            json.end_object();
        }
        json.end_array();
        json.end_object();
    }
    buffer << '\n';
    deliver(opts.common.out, buffer.str());
}

// ---------------------------------------------------------------------------
// learning

struct LearningOpts {
    CommonOpts common;
    double alpha = 0.0;
    double pi_hi = 1.3;
    double pi_lo = 0.0;
    double cost = 1.0;
    double eta = 0.0;
    int contacts = 5;
};

void run_learning(const LearningOpts& opts) {
    LearningParams params;
    params.alpha = opts.alpha;
    params.pi_hi = opts.pi_hi;
    params.pi_lo = opts.pi_lo;
    params.cost = opts.cost;
    params.eta = opts.eta;
    params.validate();
    if (opts.contacts < 0) throw ConfigError("contacts must be non-negative");

    const std::optional<int> min_connections = min_informed_connections(params);
    const std::vector<double> table = information_value_table(params, opts.contacts);
    const InformationValue best = value_of_information(params, opts.contacts);

    std::ostringstream buffer;
    {
        JsonWriter json(buffer);
        json.begin_object();
        report_header(json, "learning");
        json.key("config");
        json.begin_object();
        json.kv("alpha", params.alpha);
        json.kv("pi_hi", params.pi_hi);
        json.kv("pi_lo", params.pi_lo);
        json.kv("cost", params.cost);
        json.kv("eta", params.eta);
        json.kv("contacts", opts.contacts);
        json.end_object();
        json.kv("adoption_ratio", params.adoption_ratio());
        json.key("min_informed_connections");
        if (min_connections) json.value(*min_connections);
        else json.value("never");
        json.kv("seeks_information", seeks_information(params, opts.contacts));
        json.key("unanimous_posteriors");
        json.begin_array();
        for (int d = 0; d <= opts.contacts; ++d) {
            json.begin_object();
            json.kv("contacts", d);
            json.kv("posterior", posterior(params.alpha, SignalTally{d, d}));
            json.kv("adopts", adopts(params, SignalTally{d, d}));
            json.end_object();
        }
        json.end_array();
        json.key("value_table");
        json.begin_array();
        for (std::size_t d = 0; d < table.size(); ++d) {
            json.begin_object();
            json.kv("signals", static_cast<std::int64_t>(d));
            json.kv("expected_value", table[d]);
            json.end_object();
        }
        json.end_array();
        json.key("optimal");
        json.begin_object();
        json.kv("signals", best.signal_count);
        json.kv("expected_value", best.expected_value);
        json.end_object();
        json.end_object();
    }
    buffer << '\n';
    deliver(opts.common.out, buffer.str());
}

// ---------------------------------------------------------------------------
// geo-adjacency

struct GeoOpts {
    CommonOpts common;
    std::string individuals;
    std::string edges;
    std::string village;
    double radius = kDefaultGeoRadiusMiles;
    std::string edges_csv;
};

void run_geo(const GeoOpts& opts) {
    VillageNetwork base = [&] {
        if (!opts.edges.empty())
            return load_village_from_files(opts.individuals, opts.edges, opts.village);
        std::ifstream individuals(opts.individuals);
        if (!individuals) throw DataError("cannot open file " + opts.individuals);
        std::istringstream no_edges("village_id,person_a,person_b\n");
        return load_village(individuals, no_edges, opts.village, opts.individuals, "edges");
    }();
    const VillageNetwork geo = geo_adjacency(base.village_id(), base.individuals(), opts.radius);

    std::ostringstream buffer;
    {
        JsonWriter json(buffer);
        json.begin_object();
        report_header(json, "geo-adjacency");
        json.key("config");
        json.begin_object();
        json.kv("individuals", opts.individuals);
        json.kv("edges", opts.edges);
        json.kv("village", geo.village_id());
        json.kv("radius_miles", opts.radius);
        json.end_object();
        village_summary(json, geo);
        json.key("degrees");
        json.begin_array();
        for (int i = 0; i < geo.size(); ++i) {
            json.begin_object();
            json.kv("person_id", geo.person_id(i));
            json.kv("degree", geo.degree(i));
            json.end_object();
        }
        json.end_array();
        json.end_object();
    }
    buffer << '\n';

    if (!opts.edges_csv.empty()) {
        std::ostringstream csv;
        csv << "village_id,person_a,person_b\n";
        for (const auto& [a, b] : geo.edge_list())
            csv << geo.village_id() << ',' << geo.person_id(a) << ',' << geo.person_id(b)
                << "\n";
        write_text_file(opts.edges_csv, csv.str());
    }

    deliver(opts.common.out, buffer.str());
}

// ---------------------------------------------------------------------------
// centrality

struct CentralityOpts {
    CommonOpts common;
    std::string individuals;
    std::string edges;
    std::string village;
    std::string table_csv;
};

void run_centrality(const CentralityOpts& opts) {
    const VillageNetwork net =
        load_village_from_files(opts.individuals, opts.edges, opts.village);
    const CentralityReport report = centrality(net);

    std::ostringstream buffer;
    {
        JsonWriter json(buffer);
        json.begin_object();
        report_header(json, "centrality");
        json.key("config");
        json.begin_object();
        json.kv("individuals", opts.individuals);
        json.kv("edges", opts.edges);
        json.kv("village", net.village_id());
        json.end_object();
        village_summary(json, net);
        json.key("people");
        json.begin_array();
        for (int i = 0; i < net.size(); ++i) {
            json.begin_object();
            json.kv("person_id", net.person_id(i));
            json.kv("degree", report.degree[static_cast<std::size_t>(i)]);
            json.kv("betweenness", report.betweenness[static_cast<std::size_t>(i)]);
            json.kv("eigenvector", report.eigenvector[static_cast<std::size_t>(i)]);
            json.end_object();
        }
        json.end_array();
        json.end_object();
    }
    buffer << '\n';

    if (!opts.table_csv.empty()) {
        std::ostringstream csv;
        csv << "person_id,degree,betweenness,eigenvector\n";
        for (int i = 0; i < net.size(); ++i)
            csv << net.person_id(i) << ',' << report.degree[static_cast<std::size_t>(i)] << ','
                << fmt17(report.betweenness[static_cast<std::size_t>(i)]) << ','
                << fmt17(report.eigenvector[static_cast<std::size_t>(i)]) << "\n";
        write_text_file(opts.table_csv, csv.str());
    }

    deliver(opts.common.out, buffer.str());
}

// ---------------------------------------------------------------------------
// report

struct ReportOpts {
    CommonOpts common;
    DiffusionOpts diffusion;
    std::string individuals;
    std::string edges;
    std::vector<std::string> treatments{"simple", "complex"};
    std::string benchmark_pairs;
    int sample_size = 30;
};

void run_report(const ReportOpts& opts) {
    const std::vector<VillageNetwork> villages =
        load_villages_from_files(opts.individuals, opts.edges);
    const DiffusionConfig config = make_config(opts.common, opts.diffusion);
    SampleDesign design;
    design.sample_size = opts.sample_size;

    std::vector<TreatmentSpec> treatments;
    for (const std::string& name : opts.treatments)
        treatments.push_back(TreatmentSpec::from_model(treatment_model_from_name(name)));
    if (!opts.benchmark_pairs.empty())
        treatments.push_back(
            TreatmentSpec::from_pairs("benchmark", load_benchmark_pairs(opts.benchmark_pairs)));
    const EnsembleReport report =
        ensemble_report(villages, treatments, config, design, opts.common.workers);

    std::ostringstream buffer;
    {
        JsonWriter json(buffer);
        json.begin_object();
        report_header(json, "report");
        json.key("config");
        json.begin_object();
        json.kv("individuals", opts.individuals);
        json.kv("edges", opts.edges);
        json.key("treatments");
        json.begin_array();
        for (const TreatmentSpec& t : treatments) json.value(t.label);
        json.end_array();
        json.kv("benchmark_pairs", opts.benchmark_pairs);
        json.kv("sample_size", design.sample_size);
        json.kv("threshold_sd", config.threshold_sd);
        json.kv("periods", config.periods);
        json.kv("replications", config.replications);
        json.kv("seed", config.master_seed);
        json.end_object();
        json.kv("villages", static_cast<std::int64_t>(villages.size()));
        json.key("cells");
        json.begin_array();
        for (const EnsembleCell& cell : report.cells) {
            json.begin_object();
            json.kv("treatment", cell.treatment);
            json.kv("lambda", cell.lambda);
            json.kv("villages", cell.villages);
            json.kv("any_adoption_share", cell.any_share);
            json.kv("any_ci_low", cell.any_ci_low);
            json.kv("any_ci_high", cell.any_ci_high);
            json.kv("adoption_rate_mean", cell.adoption_mean);
            json.kv("adoption_ci_low", cell.adoption_ci_low);
            json.kv("adoption_ci_high", cell.adoption_ci_high);
            json.end_object();
        }
        json.end_array();
        json.end_object();
    }
    buffer << '\n';
    deliver(opts.common.out, buffer.str());
}

// ---------------------------------------------------------------------------
// gen

struct GenOpts {
    CommonOpts common;
    int villages = 1;
    int households = 58;
    double mean_size = 2.0;
    double clustering = 0.7;
    std::string prefix = "synth_";
};

void run_gen(const GenOpts& opts) {
    if (opts.villages < 1) throw ConfigError("villages must be at least 1");
    std::vector<VillageNetwork> villages;
    villages.reserve(static_cast<std::size_t>(opts.villages));
    for (int v = 0; v < opts.villages; ++v) {
        SynthParams params;
        params.n_households = opts.households;
        params.mean_household_size = opts.mean_size;
        params.clustering_knob = opts.clustering;
        params.rng_seed = rng::stream_key(opts.common.seed, rng::Domain::synth,
                                          static_cast<std::uint64_t>(v));
        params.village_id = "v" + std::to_string(v + 1);
        villages.push_back(synth_village(params));
    }

    const std::string individuals_path = opts.prefix + "individuals.csv";
    const std::string edges_path = opts.prefix + "edges.csv";
    {
        std::ostringstream csv;
        write_individuals_csv(csv, villages);
        write_text_file(individuals_path, csv.str());
    }
    {
        std::ostringstream csv;
        write_edges_csv(csv, villages);
        write_text_file(edges_path, csv.str());
    }

    std::ostringstream buffer;
    {
        JsonWriter json(buffer);
        json.begin_object();
        report_header(json, "gen");
        json.key("config");
        json.begin_object();
        json.kv("villages", opts.villages);
        json.kv("households", opts.households);
        json.kv("mean_household_size", opts.mean_size);
        json.kv("clustering", opts.clustering);
        json.kv("seed", opts.common.seed);
        json.kv("prefix", opts.prefix);
        json.end_object();
        json.kv("individuals_csv", individuals_path);
        json.kv("edges_csv", edges_path);
        json.key("generated");
        json.begin_array();
        for (const VillageNetwork& net : villages) {
            json.begin_object();
            json.kv("village_id", net.village_id());
            json.kv("individuals", net.size());
            json.kv("households", net.household_count());
            json.kv("edges", static_cast<std::int64_t>(net.edge_count()));
            json.end_object();
        }
        json.end_array();
        json.end_object();
    }
    buffer << '\n';
    deliver(opts.common.out, buffer.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Village-network seed selection and diffusion toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", seednet::kVersion);

    SelectSeedsOpts select_opts;
    StrategiesOpts strategies_opts;
    SimulateOpts simulate_opts;
    LearningOpts learning_opts;
    GeoOpts geo_opts;
    CentralityOpts centrality_opts;
    ReportOpts report_opts;
    GenOpts gen_opts;

    {
        CLI::App* sub = app.add_subcommand(
            "select-seeds", "Find the optimal seed pair for a treatment model");
        sub->add_option("--individuals", select_opts.individuals, "Individuals CSV")->required();
        sub->add_option("--edges", select_opts.edges, "Edges CSV")->required();
        sub->add_option("--village", select_opts.village, "Village id (for multi-village files)");
        sub->add_option("--model", select_opts.model, "simple, complex, or geo")
            ->capture_default_str();
        sub->add_option("--horizon", select_opts.horizon,
                        "Objective period (default: final period)");
        sub->add_option("--top-k", select_opts.top_k, "Ranked pairs in the report; 0 = all")
            ->capture_default_str();
        sub->add_option("--geo-radius", select_opts.geo_radius, "Geo adjacency radius in miles")
            ->capture_default_str();
        sub->add_option("--pairs-csv", select_opts.pairs_csv, "Write the full ranked table here");
        add_diffusion(sub, select_opts.diffusion, /*with_lambda=*/false);
        add_common(sub, select_opts.common);
        sub->callback([&] { run_select_seeds(select_opts); });
    }
    {
        CLI::App* sub =
            app.add_subcommand("simulate", "Mean per-period information rates for fixed seeds");
        sub->add_option("--individuals", simulate_opts.individuals, "Individuals CSV")->required();
        sub->add_option("--edges", simulate_opts.edges, "Edges CSV")->required();
        sub->add_option("--village", simulate_opts.village, "Village id");
        sub->add_option("--seeds", simulate_opts.seeds, "Comma-separated seed person ids")
            ->required()
            ->delimiter(',');
        add_diffusion(sub, simulate_opts.diffusion, /*with_lambda=*/true);
        add_common(sub, simulate_opts.common);
        sub->callback([&] { run_simulate(simulate_opts); });
    }
    {
        CLI::App* sub = app.add_subcommand(
            "strategies", "Percent-of-optimal table for interview-based targeting");
        sub->add_option("--individuals", strategies_opts.individuals, "Individuals CSV")
            ->required();
        sub->add_option("--edges", strategies_opts.edges, "Edges CSV")->required();
        sub->add_option("--strategy", strategies_opts.strategy, "A..F or all")
            ->capture_default_str();
        sub->add_option("--initial", strategies_opts.initial,
                        "Initial interview counts (comma-separated)")
            ->delimiter(',')
            ->capture_default_str();
        sub->add_option("--trials", strategies_opts.trials, "Trials per cell and village")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_diffusion(sub, strategies_opts.diffusion, /*with_lambda=*/false);
        add_common(sub, strategies_opts.common);
        sub->callback([&] { run_strategies(strategies_opts); });
    }
    {
        CLI::App* sub = app.add_subcommand(
            "learning", "Adoption thresholds and the value of acquiring signals");
        sub->add_option("--alpha", learning_opts.alpha, "Signal accuracy in (0,1)")->required();
        sub->add_option("--pi-hi", learning_opts.pi_hi, "High profit")->capture_default_str();
        sub->add_option("--pi-lo", learning_opts.pi_lo, "Low profit")->capture_default_str();
        sub->add_option("--cost", learning_opts.cost, "Adoption cost")->capture_default_str();
        sub->add_option("--eta", learning_opts.eta, "Per-signal acquisition cost")
            ->capture_default_str();
        sub->add_option("--contacts", learning_opts.contacts, "Informed connections D")
            ->capture_default_str();
        add_common(sub, learning_opts.common);
        sub->callback([&] { run_learning(learning_opts); });
    }
    {
        CLI::App* sub =
            app.add_subcommand("geo-adjacency", "Build the geographic proximity network");
        sub->add_option("--individuals", geo_opts.individuals, "Individuals CSV with lat/lon")
            ->required();
        sub->add_option("--edges", geo_opts.edges,
                        "Optional edges CSV (only for village grouping)");
        sub->add_option("--village", geo_opts.village, "Village id");
        sub->add_option("--radius", geo_opts.radius, "Radius in miles")->capture_default_str();
        sub->add_option("--edges-csv", geo_opts.edges_csv, "Write geo edges CSV here");
        add_common(sub, geo_opts.common);
        sub->callback([&] { run_geo(geo_opts); });
    }
    {
        CLI::App* sub = app.add_subcommand("centrality", "Degree, betweenness, and eigenvector");
        sub->add_option("--individuals", centrality_opts.individuals, "Individuals CSV")
            ->required();
        sub->add_option("--edges", centrality_opts.edges, "Edges CSV")->required();
        sub->add_option("--village", centrality_opts.village, "Village id");
        sub->add_option("--table", centrality_opts.table_csv, "Write a per-person CSV here");
        add_common(sub, centrality_opts.common);
        sub->callback([&] { run_centrality(centrality_opts); });
    }
    {
        CLI::App* sub = app.add_subcommand(
            "report", "Sampled any-adoption and adoption-rate table for an ensemble");
        sub->add_option("--individuals", report_opts.individuals, "Individuals CSV")->required();
        sub->add_option("--edges", report_opts.edges, "Edges CSV")->required();
        sub->add_option("--treatments", report_opts.treatments,
                        "Comma-separated models (simple, complex, geo)")
            ->delimiter(',')
            ->capture_default_str();
        sub->add_option("--benchmark-pairs", report_opts.benchmark_pairs,
                        "CSV of village_id,person_a,person_b benchmark seeds");
        sub->add_option("--sample-size", report_opts.sample_size, "Households surveyed per village")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_diffusion(sub, report_opts.diffusion, /*with_lambda=*/false);
        add_common(sub, report_opts.common);
        sub->callback([&] { run_report(report_opts); });
    }
    {
        CLI::App* sub = app.add_subcommand("gen", "Generate a synthetic village ensemble");
        sub->add_option("--villages", gen_opts.villages, "Number of villages")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--households", gen_opts.households, "Households per village")
            ->capture_default_str();
        sub->add_option("--mean-size", gen_opts.mean_size, "Mean household size")
            ->capture_default_str();
        sub->add_option("--clustering", gen_opts.clustering, "Triangle-closing share in [0,1]")
            ->capture_default_str();
        sub->add_option("--prefix", gen_opts.prefix, "Output file prefix")->capture_default_str();
        add_common(sub, gen_opts.common);
        sub->callback([&] { run_gen(gen_opts); });
    }

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const seednet::ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const seednet::DataError& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 3;
    } catch (const seednet::InfeasibleError& e) {
        std::cerr << "error: infeasible: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
}
