#include "seednet/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>

#include "seednet/errors.hpp"
#include "seednet/rng.hpp"

namespace seednet {

VillageNetwork::VillageNetwork(std::string village_id, std::vector<Individual> individuals,
                               const std::vector<std::pair<std::string, std::string>>& edges)
    : village_id_(std::move(village_id)), individuals_(std::move(individuals)) {
    const int n = size();
    index_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Individual& ind = individuals_[static_cast<std::size_t>(i)];
        if (ind.person_id.empty())
            throw DataError("individual with empty person_id in village " + village_id_);
        if (ind.household_id.empty())
            throw DataError("person " + ind.person_id + " has empty household_id");
        if (!index_.emplace(ind.person_id, i).second)
            throw DataError("duplicate person_id " + ind.person_id + " in village " + village_id_);
        if (ind.coordinates) {
            const auto& c = *ind.coordinates;
            if (c.latitude < -90.0 || c.latitude > 90.0 || c.longitude < -180.0 ||
                c.longitude > 180.0)
                throw DataError("person " + ind.person_id + " has out-of-range coordinates");
        }
    }

    // Household index in order of first appearance.
    std::unordered_map<std::string, int> household_index;
    household_of_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::string& hid = individuals_[static_cast<std::size_t>(i)].household_id;
        auto [it, inserted] = household_index.emplace(hid, static_cast<int>(household_ids_.size()));
        if (inserted) {
            household_ids_.push_back(hid);
            household_members_.emplace_back();
        }
        household_of_[static_cast<std::size_t>(i)] = it->second;
        household_members_[static_cast<std::size_t>(it->second)].push_back(i);
    }

    // Resolve explicit edges, then add household-closure edges; dedupe as a set
    // of (low, high) pairs.
    std::set<std::pair<int, int>> unique_edges;
    for (const auto& [a_id, b_id] : edges) {
        const int a = index_of(a_id);
        if (a < 0) throw DataError("edge references unknown person_id " + a_id);
        const int b = index_of(b_id);
        if (b < 0) throw DataError("edge references unknown person_id " + b_id);
        if (a == b) continue;
        unique_edges.emplace(std::min(a, b), std::max(a, b));
    }
    for (const auto& members : household_members_)
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                unique_edges.emplace(members[i], members[j]);

    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : unique_edges) {
        ++deg[static_cast<std::size_t>(a)];
        ++deg[static_cast<std::size_t>(b)];
    }
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i)
        offsets_[static_cast<std::size_t>(i) + 1] =
            offsets_[static_cast<std::size_t>(i)] + static_cast<std::size_t>(deg[static_cast<std::size_t>(i)]);
    targets_.resize(offsets_[static_cast<std::size_t>(n)]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [a, b] : unique_edges) {
        targets_[cursor[static_cast<std::size_t>(a)]++] = b;
        targets_[cursor[static_cast<std::size_t>(b)]++] = a;
    }
    // std::set iteration already yields sorted neighbor lists for the low
    // endpoint; sort explicitly to keep the invariant unconditional.
    for (int i = 0; i < n; ++i) {
        auto begin = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(i)]);
        auto end = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(i) + 1]);
        std::sort(begin, end);
    }
}

int VillageNetwork::index_of(std::string_view person_id) const {
    auto it = index_.find(std::string(person_id));
    return it == index_.end() ? -1 : it->second;
}

bool VillageNetwork::has_edge(int a, int b) const {
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<std::pair<int, int>> VillageNetwork::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count());
    for (int a = 0; a < size(); ++a)
        for (int b : neighbors(a))
            if (a < b) out.emplace_back(a, b);
    return out;
}

int VillageNetwork::graph_distance(int a, int b) const {
    if (a == b) return 0;
    std::vector<int> dist(static_cast<std::size_t>(size()), -1);
    std::deque<int> queue{a};
    dist[static_cast<std::size_t>(a)] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] >= 0) continue;
            dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
            if (v == b) return dist[static_cast<std::size_t>(v)];
            queue.push_back(v);
        }
    }
    return -1;
}

double great_circle_miles(const Coordinates& a, const Coordinates& b) {
    constexpr double kEarthRadiusMiles = 3958.7613;
    constexpr double kDegToRad = std::numbers::pi / 180.0;
    const double phi1 = a.latitude * kDegToRad;
    const double phi2 = b.latitude * kDegToRad;
    const double dphi = (b.latitude - a.latitude) * kDegToRad;
    const double dlam = (b.longitude - a.longitude) * kDegToRad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlam / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

VillageNetwork geo_adjacency(const std::string& village_id,
                             const std::vector<Individual>& individuals,
                             double radius_miles) {
    if (radius_miles <= 0.0) throw ConfigError("geo radius must be positive");
    for (const auto& ind : individuals)
        if (!ind.coordinates)
            throw DataError("person " + ind.person_id + " has no coordinates");

    std::vector<std::pair<std::string, std::string>> edges;
    const std::size_t n = individuals.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (great_circle_miles(*individuals[i].coordinates, *individuals[j].coordinates) <=
                radius_miles)
                edges.emplace_back(individuals[i].person_id, individuals[j].person_id);
    return VillageNetwork(village_id, individuals, edges);
}

namespace {

int draw_poisson(double mean, rng::Stream& stream) {
    // Knuth multiplication method; means here are small (household sizes).
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double product = 1.0;
    for (;;) {
        product *= stream.uniform01();
        if (product <= limit) return k;
        ++k;
    }
}

} // namespace

VillageNetwork synth_village(const SynthParams& params) {
    if (params.n_households < 2) throw ConfigError("synth village needs at least 2 households");
    if (params.mean_household_size < 1.0)
        throw ConfigError("mean household size must be at least 1");
    if (params.clustering_knob < 0.0 || params.clustering_knob > 1.0)
        throw ConfigError("clustering knob must lie in [0, 1]");

    rng::Stream stream(rng::stream_key(params.rng_seed, rng::Domain::synth, 0));

    const int households = params.n_households;
    std::vector<Individual> individuals;
    std::vector<int> head; // index of each household's first member
    head.reserve(static_cast<std::size_t>(households));
    for (int h = 0; h < households; ++h) {
        const int members = 1 + draw_poisson(params.mean_household_size - 1.0, stream);
        const std::string household_id = "h" + std::to_string(h);
        head.push_back(static_cast<int>(individuals.size()));
        for (int m = 0; m < members; ++m)
            individuals.push_back(Individual{
                "p" + std::to_string(individuals.size()), household_id, std::nullopt});
    }
    const int n = static_cast<int>(individuals.size());

    // Degree bookkeeping mirrors what VillageNetwork will build: household
    // cliques plus the explicit cross-household edges.
    std::set<std::pair<int, int>> edge_set;
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    auto add_edge = [&](int a, int b) {
        if (a == b) return false;
        const auto e = std::minmax(a, b);
        if (!edge_set.emplace(e.first, e.second).second) return false;
        ++degree[static_cast<std::size_t>(a)];
        ++degree[static_cast<std::size_t>(b)];
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
        return true;
    };
    std::vector<int> household_of(static_cast<std::size_t>(n));
    {
        int person = 0;
        for (int h = 0; h < households; ++h) {
            const int end = h + 1 < households ? head[static_cast<std::size_t>(h) + 1] : n;
            for (; person < end; ++person) household_of[static_cast<std::size_t>(person)] = h;
        }
    }
    for (int h = 0; h < households; ++h) {
        const int begin = head[static_cast<std::size_t>(h)];
        const int end = h + 1 < households ? head[static_cast<std::size_t>(h) + 1] : n;
        for (int a = begin; a < end; ++a)
            for (int b = a + 1; b < end; ++b) add_edge(a, b);
    }

    // Deterministic baseline: a triangulated ring over household heads. The
    // ring keeps the village in one component; the second-neighbor chords give
    // every adjacent household pair a shared contact, so a two-contact
    // contagion can travel along the ring while a lone household stays
    // contained. Self-loops and duplicates (tiny rings) dedupe in add_edge.
    for (int h = 0; h < households; ++h) {
        add_edge(head[static_cast<std::size_t>(h)], head[static_cast<std::size_t>((h + 1) % households)]);
        add_edge(head[static_cast<std::size_t>(h)], head[static_cast<std::size_t>((h + 2) % households)]);
    }

    auto draw_by_degree = [&]() {
        // Pick an individual with probability proportional to degree + 1.
        std::uint64_t total = static_cast<std::uint64_t>(n);
        for (int i = 0; i < n; ++i) total += static_cast<std::uint64_t>(degree[static_cast<std::size_t>(i)]);
        std::uint64_t ticket = stream.below(total);
        for (int i = 0; i < n; ++i) {
            const std::uint64_t weight = static_cast<std::uint64_t>(degree[static_cast<std::size_t>(i)]) + 1;
            if (ticket < weight) return i;
            ticket -= weight;
        }
        return n - 1;
    };

    const int extra_edges = static_cast<int>(std::lround(1.5 * households));
    for (int k = 0; k < extra_edges; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < 16 && !placed; ++attempt) {
            if (stream.uniform01() < params.clustering_knob) {
                // Triadic closure: connect two neighbors of a random pivot,
                // requiring all three households to differ. Same-household
                // picks are already linked by closure, and a pivot-household
                // pick would just double an existing household-to-household
                // tie; spanning three households adds a genuinely new wedge.
                const int u = static_cast<int>(stream.below(static_cast<std::uint64_t>(n)));
                const auto& nb = adj[static_cast<std::size_t>(u)];
                if (nb.size() < 2) continue;
                const int v = nb[stream.below(nb.size())];
                const int w = nb[stream.below(nb.size())];
                const int hu = household_of[static_cast<std::size_t>(u)];
                const int hv = household_of[static_cast<std::size_t>(v)];
                const int hw = household_of[static_cast<std::size_t>(w)];
                if (hv == hw || hv == hu || hw == hu) continue;
                placed = add_edge(v, w);
            } else {
                // Preferential attachment across households grows the hubs.
                const int v = draw_by_degree();
                const int w = draw_by_degree();
                if (household_of[static_cast<std::size_t>(v)] == household_of[static_cast<std::size_t>(w)])
                    continue;
                placed = add_edge(v, w);
            }
        }
    }

    std::vector<std::pair<std::string, std::string>> edges;
    edges.reserve(edge_set.size());
    for (const auto& [a, b] : edge_set)
        edges.emplace_back(individuals[static_cast<std::size_t>(a)].person_id,
                           individuals[static_cast<std::size_t>(b)].person_id);
    std::string vid = params.village_id.empty() ? "synth-" + std::to_string(params.rng_seed)
                                                : params.village_id;
    return VillageNetwork(std::move(vid), std::move(individuals), edges);
}

} // namespace seednet
