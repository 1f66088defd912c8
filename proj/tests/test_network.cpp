#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "seednet/errors.hpp"
#include "seednet/network.hpp"
#include "seednet/network_io.hpp"
#include "test_util.hpp"

using namespace seednet;

TEST_CASE("construction validates ids and rejects duplicates") {
    std::vector<Individual> people{{"a", "h1", std::nullopt}, {"b", "h1", std::nullopt}};
    CHECK_NOTHROW(VillageNetwork("v", people, {}));

    std::vector<Individual> dup{{"a", "h1", std::nullopt}, {"a", "h2", std::nullopt}};
    CHECK_THROWS_AS(VillageNetwork("v", dup, {}), DataError);

    std::vector<Individual> blank{{"", "h1", std::nullopt}};
    CHECK_THROWS_AS(VillageNetwork("v", blank, {}), DataError);

    std::vector<Individual> no_household{{"a", "", std::nullopt}};
    CHECK_THROWS_AS(VillageNetwork("v", no_household, {}), DataError);

    CHECK_THROWS_AS(VillageNetwork("v", people, {{"a", "zz"}}), DataError);

    std::vector<Individual> bad_coord{{"a", "h1", Coordinates{95.0, 0.0}}};
    CHECK_THROWS_AS(VillageNetwork("v", bad_coord, {}), DataError);
}

TEST_CASE("household closure links all members pairwise") {
    const VillageNetwork net = make_village(
        "v", {{"a", "b", "c"}, {"d"}}, {{"c", "d"}});
    const int a = net.index_of("a");
    const int b = net.index_of("b");
    const int c = net.index_of("c");
    const int d = net.index_of("d");
    CHECK(net.has_edge(a, b));
    CHECK(net.has_edge(a, c));
    CHECK(net.has_edge(b, c));
    CHECK(net.has_edge(c, d));
    CHECK_FALSE(net.has_edge(a, d));
    CHECK(net.edge_count() == 4);
    CHECK(net.degree(a) == 2);
    CHECK(net.degree(c) == 3);
}

TEST_CASE("self-loops and duplicate edges are dropped") {
    const VillageNetwork net = make_village(
        "v", {{"a"}, {"b"}}, {{"a", "b"}, {"b", "a"}, {"a", "a"}, {"a", "b"}});
    CHECK(net.edge_count() == 1);
    CHECK(net.degree(net.index_of("a")) == 1);
}

TEST_CASE("index_of returns -1 for unknown ids") {
    const VillageNetwork net = make_village("v", {{"a"}}, {});
    CHECK(net.index_of("a") == 0);
    CHECK(net.index_of("nope") == -1);
}

TEST_CASE("graph_distance is BFS distance, -1 across components") {
    // path a-b-c-d plus isolated e
    const VillageNetwork net = make_simple_graph("v", 5, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(net.graph_distance(0, 0) == 0);
    CHECK(net.graph_distance(0, 3) == 3);
    CHECK(net.graph_distance(3, 0) == 3);
    CHECK(net.graph_distance(0, 4) == -1);
}

TEST_CASE("great_circle_miles matches hand-computed reference points") {
    // One degree of latitude at the equator on a 3958.7613-mile sphere:
    // 2*pi*R/360 = 69.0933 miles.
    const Coordinates a{0.0, 0.0};
    const Coordinates b{1.0, 0.0};
    CHECK(great_circle_miles(a, b) == doctest::Approx(69.09329).epsilon(1e-5));
    // Same point: zero.
    CHECK(great_circle_miles(a, a) == 0.0);
    // Quarter circumference: pole to equator.
    const Coordinates pole{90.0, 17.0};
    CHECK(great_circle_miles(a, pole) == doctest::Approx(90.0 * 69.09329).epsilon(1e-5));
    // Longitude degree shrinks by cos(latitude): at 60N, ~34.5 miles.
    const Coordinates p{60.0, 10.0};
    const Coordinates q{60.0, 11.0};
    CHECK(great_circle_miles(p, q) ==
          doctest::Approx(69.09329 * 0.5).epsilon(1e-3)); // small-angle, slight excess
    // Symmetry.
    CHECK(great_circle_miles(p, q) == great_circle_miles(q, p));
}

TEST_CASE("geo_adjacency links within the radius inclusively") {
    // 0.05 miles of latitude is 0.05/69.0933 = 7.2366e-4 degrees. Bisect the
    // latitude offset down to adjacent doubles around the cutoff: b2 sits on
    // the last representable coordinate whose computed distance is <= 0.05
    // (usually exactly 0.05, exercising the inclusive comparison) and c2 on
    // the first one beyond it.
    const double deg = 0.05 / 69.093286335404;
    double lat_in = 0.9 * deg;
    double lat_out = 1.1 * deg;
    const Coordinates origin{0.0, 0.0};
    while (std::nextafter(lat_in, lat_out) < lat_out) {
        const double mid = 0.5 * (lat_in + lat_out);
        if (great_circle_miles(origin, Coordinates{mid, 0.0}) <= 0.05) lat_in = mid;
        else lat_out = mid;
    }
    std::vector<Individual> people{
        {"a", "h1", origin},
        {"b", "h2", Coordinates{0.9 * deg, 0.0}},  // clearly inside
        {"b2", "h4", Coordinates{lat_in, 0.0}},    // last coordinate inside the radius
        {"c2", "h5", Coordinates{lat_out, 0.0}},   // first coordinate beyond it
        {"c", "h3", Coordinates{2.5 * deg, 0.0}},  // out of range of a and b
        {"d", "h1", Coordinates{10.0, 10.0}},      // far away but same household as a
    };
    const VillageNetwork net = geo_adjacency("v", people, 0.05);
    const int a = net.index_of("a");
    const int b = net.index_of("b");
    const int b2 = net.index_of("b2");
    const int c2 = net.index_of("c2");
    const int c = net.index_of("c");
    const int d = net.index_of("d");
    CHECK(net.has_edge(a, b));
    CHECK(net.has_edge(a, b2)); // boundary is included
    CHECK_FALSE(net.has_edge(a, c2));
    CHECK_FALSE(net.has_edge(a, c));
    CHECK_FALSE(net.has_edge(b, c));
    CHECK(net.has_edge(a, d)); // household closure still applies
}

TEST_CASE("geo_adjacency requires coordinates and a positive radius") {
    std::vector<Individual> people{{"a", "h1", std::nullopt}};
    CHECK_THROWS_AS(geo_adjacency("v", people, 0.05), DataError);
    std::vector<Individual> ok{{"a", "h1", Coordinates{0, 0}}};
    CHECK_THROWS_AS(geo_adjacency("v", ok, 0.0), ConfigError);
    CHECK_THROWS_AS(geo_adjacency("v", ok, -1.0), ConfigError);
}

TEST_CASE("load_villages parses the schemas and groups by village") {
    std::istringstream individuals(
        "person_id,household_id,village_id,lat,lon\n"
        "a,h1,v1,0.1,0.2\n"
        "b,h1,v1,,\n"
        "c,h2,v1,0.3,0.4\n"
        "x,h9,v2,,\n"
        "y,h9,v2,,\n");
    std::istringstream edges(
        "village_id,person_a,person_b\n"
        "v1,a,c\n");
    const std::vector<VillageNetwork> villages = load_villages(individuals, edges);
    REQUIRE(villages.size() == 2);
    CHECK(villages[0].village_id() == "v1");
    CHECK(villages[0].size() == 3);
    CHECK(villages[0].individual(villages[0].index_of("a")).coordinates.has_value());
    CHECK_FALSE(villages[0].individual(villages[0].index_of("b")).coordinates.has_value());
    CHECK(villages[0].has_edge(villages[0].index_of("a"), villages[0].index_of("c")));
    // household closure edge
    CHECK(villages[0].has_edge(villages[0].index_of("a"), villages[0].index_of("b")));
    CHECK(villages[1].village_id() == "v2");
    CHECK(villages[1].size() == 2);
    CHECK(villages[1].edge_count() == 1); // closure only
}

TEST_CASE("individuals columns may omit lat/lon entirely") {
    std::istringstream individuals(
        "person_id,household_id,village_id\n"
        "a,h1,v1\n");
    std::istringstream edges("village_id,person_a,person_b\n");
    const std::vector<VillageNetwork> villages = load_villages(individuals, edges);
    REQUIRE(villages.size() == 1);
    CHECK_FALSE(villages[0].individual(0).coordinates.has_value());
}

TEST_CASE("loader errors carry the file label and row number") {
    SUBCASE("missing required column") {
        std::istringstream individuals("person_id,household_id\na,h1\n");
        std::istringstream edges("village_id,person_a,person_b\n");
        CHECK_THROWS_AS(load_villages(individuals, edges), DataError);
    }
    SUBCASE("lat without lon in a row") {
        std::istringstream individuals(
            "person_id,household_id,village_id,lat,lon\na,h1,v1,0.5,\n");
        std::istringstream edges("village_id,person_a,person_b\n");
        CHECK_THROWS_AS(load_villages(individuals, edges), DataError);
    }
    SUBCASE("edge references unknown village") {
        std::istringstream individuals("person_id,household_id,village_id\na,h1,v1\n");
        std::istringstream edges("village_id,person_a,person_b\nv9,a,b\n");
        CHECK_THROWS_AS(load_villages(individuals, edges), DataError);
    }
    SUBCASE("edge references unknown person") {
        std::istringstream individuals(
            "person_id,household_id,village_id\na,h1,v1\nb,h2,v1\n");
        std::istringstream edges("village_id,person_a,person_b\nv1,a,zz\n");
        CHECK_THROWS_AS(load_villages(individuals, edges), DataError);
    }
    SUBCASE("non-numeric coordinate") {
        std::istringstream individuals(
            "person_id,household_id,village_id,lat,lon\na,h1,v1,north,west\n");
        std::istringstream edges("village_id,person_a,person_b\n");
        CHECK_THROWS_AS(load_villages(individuals, edges), DataError);
    }
}

TEST_CASE("load_village selects a village or requires uniqueness") {
    const std::string people =
        "person_id,household_id,village_id\na,h1,v1\nx,h2,v2\ny,h2,v2\n";
    const std::string edge_text = "village_id,person_a,person_b\nv2,x,y\n";
    {
        std::istringstream individuals(people);
        std::istringstream edges(edge_text);
        const VillageNetwork v2 = load_village(individuals, edges, "v2");
        CHECK(v2.size() == 2);
    }
    {
        std::istringstream individuals(people);
        std::istringstream edges(edge_text);
        CHECK_THROWS_AS(load_village(individuals, edges, ""), DataError);
    }
    {
        std::istringstream individuals(people);
        std::istringstream edges(edge_text);
        CHECK_THROWS_AS(load_village(individuals, edges, "v7"), DataError);
    }
}

TEST_CASE("csv round trip preserves villages") {
    std::vector<VillageNetwork> villages;
    villages.push_back(make_village("v1", {{"a", "b"}, {"c"}}, {{"a", "c"}}));
    std::vector<Individual> located{{"p", "h1", Coordinates{1.25, -3.5}},
                                    {"q", "h2", Coordinates{1.2500001, -3.5}}};
    villages.emplace_back("v2", located, std::vector<std::pair<std::string, std::string>>{});

    std::ostringstream people_out;
    std::ostringstream edges_out;
    write_individuals_csv(people_out, villages);
    write_edges_csv(edges_out, villages);

    std::istringstream people_in(people_out.str());
    std::istringstream edges_in(edges_out.str());
    const std::vector<VillageNetwork> reloaded = load_villages(people_in, edges_in);
    REQUIRE(reloaded.size() == 2);
    CHECK(reloaded[0].size() == 3);
    CHECK(reloaded[0].edge_count() == villages[0].edge_count());
    CHECK(reloaded[1].individual(0).coordinates->latitude == 1.25);
    CHECK(reloaded[1].individual(1).coordinates->latitude == 1.2500001);
}

TEST_CASE("synth_village is deterministic, connected, and respects parameters") {
    SynthParams params;
    params.n_households = 20;
    params.mean_household_size = 2.0;
    params.clustering_knob = 0.7;
    params.rng_seed = 11;
    const VillageNetwork a = synth_village(params);
    const VillageNetwork b = synth_village(params);
    CHECK(a.household_count() == 20);
    CHECK(a.size() == b.size());
    CHECK(a.edge_count() == b.edge_count());
    CHECK(a.size() >= 20);
    // Same roster and edges.
    for (int i = 0; i < a.size(); ++i) CHECK(a.person_id(i) == b.person_id(i));
    CHECK(a.edge_list() == b.edge_list());
    // Connected: every node reachable from node 0.
    for (int i = 1; i < a.size(); ++i) CHECK(a.graph_distance(0, i) >= 1);

    params.rng_seed = 12;
    const VillageNetwork c = synth_village(params);
    CHECK((c.size() != a.size() || c.edge_list() != a.edge_list()));
}

TEST_CASE("synth_village minimal instance keeps the deterministic bridge") {
    SynthParams params;
    params.n_households = 2;
    params.mean_household_size = 1.0; // Poisson(0) extras, so exactly one member each
    params.clustering_knob = 0.0;
    params.rng_seed = 3;
    const VillageNetwork net = synth_village(params);
    CHECK(net.size() == 2);
    CHECK(net.household_count() == 2);
    CHECK(net.edge_count() >= 1);
    CHECK(net.graph_distance(0, 1) == 1);
}

TEST_CASE("clustering knob raises mean local clustering") {
    // Oracle: local clustering computed directly from the adjacency — the
    // share of linked pairs among each node's neighbors, zero for degree < 2,
    // averaged over all nodes, then averaged over an ensemble of seeds.
    auto mean_local_clustering = [](const VillageNetwork& net) {
        double total = 0.0;
        for (int i = 0; i < net.size(); ++i) {
            const auto nb = net.neighbors(i);
            const int d = static_cast<int>(nb.size());
            if (d < 2) continue;
            int links = 0;
            for (int a = 0; a < d; ++a)
                for (int b = a + 1; b < d; ++b)
                    if (net.has_edge(nb[static_cast<std::size_t>(a)],
                                     nb[static_cast<std::size_t>(b)]))
                        ++links;
            total += 2.0 * links / (static_cast<double>(d) * (d - 1));
        }
        return total / net.size();
    };

    double high = 0.0;
    double low = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SynthParams params;
        params.n_households = 58;
        params.mean_household_size = 2.0;
        params.rng_seed = seed;
        params.clustering_knob = 0.9;
        high += mean_local_clustering(synth_village(params));
        params.clustering_knob = 0.1;
        low += mean_local_clustering(synth_village(params));
    }
    CHECK(high / 20.0 > low / 20.0);
}

TEST_CASE("synth_village validates parameters") {
    SynthParams params;
    params.n_households = 1;
    CHECK_THROWS_AS(synth_village(params), ConfigError);
    params.n_households = 10;
    params.mean_household_size = 0.5;
    CHECK_THROWS_AS(synth_village(params), ConfigError);
    params.mean_household_size = 2.0;
    params.clustering_knob = 1.5;
    CHECK_THROWS_AS(synth_village(params), ConfigError);
}
