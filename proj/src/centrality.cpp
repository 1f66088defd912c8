#include "seednet/centrality.hpp"

#include <Eigen/Dense>

#include <deque>
#include <stack>

#include "seednet/errors.hpp"

namespace seednet {

namespace {

// Brandes (2001) accumulation for unweighted graphs. Dependencies are summed
// over ordered (source, target) pairs; halving at the end yields the unordered
// count for an undirected graph.
void accumulate_betweenness(const VillageNetwork& net, std::vector<double>& score) {
    const int n = net.size();
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<double> sigma(static_cast<std::size_t>(n));
    std::vector<double> delta(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));

    for (int source = 0; source < n; ++source) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        order.clear();

        dist[static_cast<std::size_t>(source)] = 0;
        sigma[static_cast<std::size_t>(source)] = 1.0;
        std::deque<int> queue{source};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            order.push_back(u);
            for (int v : net.neighbors(u)) {
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    queue.push_back(v);
                }
                if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(u)] + 1) {
                    sigma[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(u)];
                    preds[static_cast<std::size_t>(v)].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int p : preds[static_cast<std::size_t>(w)])
                delta[static_cast<std::size_t>(p)] +=
                    sigma[static_cast<std::size_t>(p)] / sigma[static_cast<std::size_t>(w)] *
                    (1.0 + delta[static_cast<std::size_t>(w)]);
            if (w != source) score[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
        }
    }
}

std::vector<std::vector<int>> connected_components(const VillageNetwork& net) {
    const int n = net.size();
    std::vector<int> component(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> components;
    for (int start = 0; start < n; ++start) {
        if (component[static_cast<std::size_t>(start)] >= 0) continue;
        const int id = static_cast<int>(components.size());
        components.emplace_back();
        std::stack<int> stack;
        stack.push(start);
        component[static_cast<std::size_t>(start)] = id;
        while (!stack.empty()) {
            const int u = stack.top();
            stack.pop();
            components[static_cast<std::size_t>(id)].push_back(u);
            for (int v : net.neighbors(u)) {
                if (component[static_cast<std::size_t>(v)] >= 0) continue;
                component[static_cast<std::size_t>(v)] = id;
                stack.push(v);
            }
        }
    }
    return components;
}

// Power iteration for the leading eigenvector of one component's adjacency.
// Iterating (A + I) keeps convergence clean on bipartite components without
// changing the eigenvector; the returned scores are >= 0 with unit norm.
void component_eigenvector(const VillageNetwork& net, const std::vector<int>& members,
                           std::vector<double>& out) {
    const std::size_t m = members.size();
    if (m == 1) {
        out[static_cast<std::size_t>(members[0])] = 0.0; // isolated node, by convention
        return;
    }
    std::vector<int> local(static_cast<std::size_t>(net.size()), -1);
    for (std::size_t i = 0; i < m; ++i) local[static_cast<std::size_t>(members[i])] = static_cast<int>(i);

    Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m),
                                                  1.0 / std::sqrt(static_cast<double>(m)));
    Eigen::VectorXd next(static_cast<Eigen::Index>(m));
    constexpr double kTolerance = 1e-10;
    constexpr int kMaxIterations = 10000;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        for (std::size_t i = 0; i < m; ++i) {
            double sum = v[static_cast<Eigen::Index>(i)]; // the +I shift
            for (int nb : net.neighbors(members[i]))
                sum += v[local[static_cast<std::size_t>(nb)]];
            next[static_cast<Eigen::Index>(i)] = sum;
        }
        next.normalize();
        const double change = (next - v).norm();
        v.swap(next);
        if (change < kTolerance) break;
    }
    for (std::size_t i = 0; i < m; ++i)
        out[static_cast<std::size_t>(members[i])] = std::abs(v[static_cast<Eigen::Index>(i)]);
}

} // namespace

CentralityReport centrality(const VillageNetwork& net) {
    if (net.size() == 0) throw ConfigError("centrality requires a non-empty network");
    const int n = net.size();
    CentralityReport report;
    report.degree.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) report.degree[static_cast<std::size_t>(i)] = net.degree(i);

    report.betweenness.assign(static_cast<std::size_t>(n), 0.0);
    accumulate_betweenness(net, report.betweenness);
    for (auto& b : report.betweenness) b /= 2.0;

    report.eigenvector.assign(static_cast<std::size_t>(n), 0.0);
    for (const auto& members : connected_components(net))
        component_eigenvector(net, members, report.eigenvector);
    return report;
}

} // namespace seednet
