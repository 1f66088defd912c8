// End-to-end checks of the seednet binary: exit codes, output stability, and
// config-file handling. The binary path comes in through SEEDNET_CLI_PATH.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#ifndef SEEDNET_CLI_PATH
#error "SEEDNET_CLI_PATH must point at the seednet binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("seednet_cli_test." + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

RunResult run_cli(const std::string& args) {
    static int call = 0;
    const fs::path out_path = work_dir() / ("stdout." + std::to_string(call));
    const fs::path err_path = work_dir() / ("stderr." + std::to_string(call));
    ++call;
    const std::string cmd = std::string(SEEDNET_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

// One three-household village the size of a postage stamp.
void write_tiny_village(const fs::path& individuals, const fs::path& edges) {
    spit(individuals,
         "village_id,person_id,household_id\n"
         "v1,a1,h1\n"
         "v1,a2,h1\n"
         "v1,b1,h2\n"
         "v1,c1,h3\n");
    spit(edges,
         "village_id,person_a,person_b\n"
         "v1,a1,b1\n"
         "v1,b1,c1\n"
         "v1,a2,c1\n");
}

} // namespace

TEST_CASE("version and help exit cleanly") {
    CHECK(run_cli("--version").exit_code == 0);
    const RunResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("select-seeds") != std::string::npos);
    CHECK(run_cli("select-seeds --help").exit_code == 0);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("").exit_code == 2); // a subcommand is required
    const fs::path ind = work_dir() / "tiny_individuals.csv";
    const fs::path edg = work_dir() / "tiny_edges.csv";
    write_tiny_village(ind, edg);
    // Flag-level validation failure (periods must be positive).
    const RunResult bad = run_cli("select-seeds --individuals " + ind.string() +
                                  " --edges " + edg.string() + " --periods 0");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("missing input files exit with code 3") {
    const RunResult result = run_cli(
        "select-seeds --individuals /nonexistent/individuals.csv --edges /nonexistent/edges.csv");
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("error: data:") != std::string::npos);
}

TEST_CASE("infeasible villages exit with code 4") {
    // Every resident shares one household: no eligible seed pair exists.
    const fs::path ind = work_dir() / "onehh_individuals.csv";
    const fs::path edg = work_dir() / "onehh_edges.csv";
    spit(ind,
         "village_id,person_id,household_id\n"
         "v1,a1,h1\n"
         "v1,a2,h1\n"
         "v1,a3,h1\n");
    spit(edg, "village_id,person_a,person_b\n");
    const RunResult result =
        run_cli("select-seeds --individuals " + ind.string() + " --edges " + edg.string());
    CHECK(result.exit_code == 4);
    CHECK(result.err.find("error: infeasible:") != std::string::npos);
}

TEST_CASE("gen then select-seeds round trip produces valid JSON") {
    const fs::path prefix = work_dir() / "ensemble_";
    const RunResult gen = run_cli("gen --villages 2 --households 10 --seed 5 --prefix " +
                                  prefix.string() + " -o " + (work_dir() / "gen.json").string());
    REQUIRE(gen.exit_code == 0);

    const auto gen_json = nlohmann::json::parse(slurp(work_dir() / "gen.json"));
    CHECK(gen_json.at("tool") == "seednet");
    CHECK(gen_json.at("command") == "gen");
    CHECK(gen_json.at("generated").size() == 2);

    const std::string ind = prefix.string() + "individuals.csv";
    const std::string edg = prefix.string() + "edges.csv";
    const RunResult select =
        run_cli("select-seeds --individuals " + ind + " --edges " + edg +
                " --village v1 --model complex -R 60 --seed 3 --top-k 5");
    REQUIRE(select.exit_code == 0);

    const auto report = nlohmann::json::parse(select.out);
    CHECK(report.at("command") == "select-seeds");
    CHECK(report.at("config").at("model") == "complex");
    CHECK(report.at("best_pair").at("first").is_string());
    CHECK(report.at("ranked").size() == 5);
    const double best_rate = report.at("ranked")[0].at("mean_rate").get<double>();
    CHECK(best_rate > 0.0);
    CHECK(best_rate <= 1.0);
    // The ranking is sorted by mean rate, best first.
    double prev = best_rate;
    for (const auto& entry : report.at("ranked")) {
        const double rate = entry.at("mean_rate").get<double>();
        CHECK(rate <= prev);
        prev = rate;
    }
}

TEST_CASE("reports are byte-identical across reruns and worker counts") {
    const fs::path prefix = work_dir() / "stable_";
    REQUIRE(run_cli("gen --villages 1 --households 12 --seed 11 --prefix " + prefix.string() +
                    " -o /dev/null")
                .exit_code == 0);
    const std::string base = "select-seeds --individuals " + prefix.string() +
                             "individuals.csv --edges " + prefix.string() +
                             "edges.csv -R 40 --seed 9";

    const fs::path out1 = work_dir() / "run1.json";
    const fs::path out2 = work_dir() / "run2.json";
    const fs::path out8 = work_dir() / "run8.json";
    REQUIRE(run_cli(base + " --workers 1 -o " + out1.string()).exit_code == 0);
    REQUIRE(run_cli(base + " --workers 1 -o " + out2.string()).exit_code == 0);
    REQUIRE(run_cli(base + " --workers 8 -o " + out8.string()).exit_code == 0);

    const std::string bytes1 = slurp(out1);
    CHECK(!bytes1.empty());
    CHECK(bytes1 == slurp(out2));
    CHECK(bytes1 == slurp(out8));
}

TEST_CASE("deterministic flag equals an explicit zero sd") {
    const fs::path ind = work_dir() / "tiny_individuals.csv";
    const fs::path edg = work_dir() / "tiny_edges.csv";
    write_tiny_village(ind, edg);
    const std::string base =
        "simulate --individuals " + ind.string() + " --edges " + edg.string() + " --seeds a1,b1";

    const RunResult det = run_cli(base + " --deterministic");
    const RunResult sd0 = run_cli(base + " --sd 0");
    REQUIRE(det.exit_code == 0);
    REQUIRE(sd0.exit_code == 0);
    const auto jd = nlohmann::json::parse(det.out);
    const auto js = nlohmann::json::parse(sd0.out);
    CHECK(jd.at("config").at("threshold_sd") == 0.0);
    CHECK(jd.at("information_rate") == js.at("information_rate"));

    // With fixed thresholds the replication count cannot matter.
    const RunResult more = run_cli(base + " --deterministic -R 7");
    CHECK(nlohmann::json::parse(more.out).at("information_rate") ==
          jd.at("information_rate"));
}

TEST_CASE("config files feed options and flags override them") {
    const fs::path ind = work_dir() / "tiny_individuals.csv";
    const fs::path edg = work_dir() / "tiny_edges.csv";
    write_tiny_village(ind, edg);
    const fs::path conf = work_dir() / "sim.conf";
    spit(conf, "replications=25\nlambda=1\nseeds=a1,b1\nindividuals=" + ind.string() +
                   "\nedges=" + edg.string() + "\n");

    const RunResult from_file = run_cli("simulate --config " + conf.string());
    REQUIRE(from_file.exit_code == 0);
    const auto jf = nlohmann::json::parse(from_file.out);
    CHECK(jf.at("config").at("replications") == 25);
    CHECK(jf.at("config").at("lambda") == 1.0);

    const RunResult overridden =
        run_cli("simulate --config " + conf.string() + " --lambda 2 -R 30");
    REQUIRE(overridden.exit_code == 0);
    const auto jo = nlohmann::json::parse(overridden.out);
    CHECK(jo.at("config").at("replications") == 30);
    CHECK(jo.at("config").at("lambda") == 2.0);
}

TEST_CASE("learning subcommand reports the adoption cutoff") {
    const RunResult result = run_cli("learning --alpha 0.75 --contacts 4");
    REQUIRE(result.exit_code == 0);
    const auto report = nlohmann::json::parse(result.out);
    CHECK(report.at("adoption_ratio").get<double>() == doctest::Approx(1.0 / 1.3));
    CHECK(report.at("min_informed_connections") == 2);
    CHECK(report.at("unanimous_posteriors").size() == 5); // d = 0..4

    // alpha outside (0,1) is a config error.
    CHECK(run_cli("learning --alpha 1.5").exit_code == 2);
}

TEST_CASE("simulate validates seed ids against the roster") {
    const fs::path ind = work_dir() / "tiny_individuals.csv";
    const fs::path edg = work_dir() / "tiny_edges.csv";
    write_tiny_village(ind, edg);
    const RunResult result = run_cli("simulate --individuals " + ind.string() + " --edges " +
                                     edg.string() + " --seeds a1,zz");
    CHECK(result.exit_code == 3);
    CHECK(result.err.find("error: data:") != std::string::npos);
}
