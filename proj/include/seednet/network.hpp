#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace seednet {

struct Coordinates {
    double latitude = 0.0;  // degrees, [-90, 90]
    double longitude = 0.0; // degrees, [-180, 180]
};

struct Individual {
    std::string person_id;
    std::string household_id;
    std::optional<Coordinates> coordinates;
};

/// Undirected village social network over a fixed roster of individuals.
///
/// Construction validates ids and coordinates, drops self-loops and duplicate
/// edges, and adds the household-closure edges so that every household is a
/// clique. Instances are immutable afterwards and safe to share across
/// threads.
class VillageNetwork {
public:
    VillageNetwork(std::string village_id, std::vector<Individual> individuals,
                   const std::vector<std::pair<std::string, std::string>>& edges);

    const std::string& village_id() const { return village_id_; }

    int size() const { return static_cast<int>(individuals_.size()); }
    const Individual& individual(int i) const { return individuals_[static_cast<std::size_t>(i)]; }
    const std::vector<Individual>& individuals() const { return individuals_; }
    const std::string& person_id(int i) const {
        return individuals_[static_cast<std::size_t>(i)].person_id;
    }

    /// Index of a person id, or -1 when absent.
    int index_of(std::string_view person_id) const;

    std::span<const int> neighbors(int i) const {
        return {targets_.data() + offsets_[static_cast<std::size_t>(i)],
                targets_.data() + offsets_[static_cast<std::size_t>(i) + 1]};
    }
    int degree(int i) const {
        return static_cast<int>(offsets_[static_cast<std::size_t>(i) + 1] -
                                offsets_[static_cast<std::size_t>(i)]);
    }
    bool has_edge(int a, int b) const;
    std::size_t edge_count() const { return targets_.size() / 2; }

    /// All edges as (low index, high index) pairs in ascending order.
    std::vector<std::pair<int, int>> edge_list() const;

    int household_count() const { return static_cast<int>(household_ids_.size()); }
    int household_of(int i) const { return household_of_[static_cast<std::size_t>(i)]; }
    const std::string& household_id(int h) const { return household_ids_[static_cast<std::size_t>(h)]; }
    const std::vector<int>& household_members(int h) const {
        return household_members_[static_cast<std::size_t>(h)];
    }

    /// Unweighted shortest-path distance between two individuals, or -1 when
    /// they sit in different components.
    int graph_distance(int a, int b) const;

private:
    std::string village_id_;
    std::vector<Individual> individuals_;
    std::unordered_map<std::string, int> index_;

    // CSR adjacency; neighbor lists sorted ascending.
    std::vector<std::size_t> offsets_;
    std::vector<int> targets_;

    std::vector<int> household_of_;
    std::vector<std::string> household_ids_;
    std::vector<std::vector<int>> household_members_;
};

/// Great-circle distance in miles (haversine, sphere radius 3958.7613 mi).
double great_circle_miles(const Coordinates& a, const Coordinates& b);

inline constexpr double kDefaultGeoRadiusMiles = 0.05;

/// Proxy network linking individuals whose locations are within
/// `radius_miles` of each other (inclusive). Household closure applies.
/// Throws DataError if any individual lacks coordinates.
VillageNetwork geo_adjacency(const std::string& village_id,
                             const std::vector<Individual>& individuals,
                             double radius_miles = kDefaultGeoRadiusMiles);

struct SynthParams {
    int n_households = 58;
    double mean_household_size = 2.0;
    double clustering_knob = 0.7; // in [0,1]; share of extra edges closing triangles
    std::uint64_t rng_seed = 0;
    std::string village_id; // default "synth-<rng_seed>"
};

/// Deterministic clustered village generator for desk-scale experiments.
///
/// Household heads are joined in a triangulated ring (each head tied to its
/// two nearest ring neighbors on either side), so the graph is always
/// connected and every adjacent pair of households shares a contact. Extra
/// cross-household edges either close a triangle spanning three households
/// (with probability `clustering_knob`) or attach two individuals chosen
/// preferentially by degree, which produces the hubs the interview
/// strategies rely on.
VillageNetwork synth_village(const SynthParams& params);

} // namespace seednet
