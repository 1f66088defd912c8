#pragma once

#include <vector>

#include "seednet/network.hpp"

namespace seednet {

/// Per-person centrality scores, indexed like the network's individuals.
struct CentralityReport {
    std::vector<int> degree;
    /// Raw (unnormalized) shortest-path betweenness over unordered pairs.
    std::vector<double> betweenness;
    /// Leading adjacency eigenvector per connected component, non-negative and
    /// Euclidean-normalized over the component. Singleton components score 0.
    std::vector<double> eigenvector;
};

CentralityReport centrality(const VillageNetwork& net);

} // namespace seednet
