#include "gnarex/network.hpp"

#include "gnarex/errors.hpp"

#include <algorithm>
#include <set>

namespace gnarex {

StaticNetwork::StaticNetwork(std::vector<std::string> node_labels, std::vector<Edge> edges)
    : labels_(std::move(node_labels)), edges_(std::move(edges)) {
    if (labels_.empty()) {
        throw ArgumentError("network must have at least one node");
    }
    for (NodeId i = 0; i < labels_.size(); ++i) {
        if (!node_index_.emplace(labels_[i], i).second) {
            throw ArgumentError("duplicate node label '" + labels_[i] + "'");
        }
    }
    out_.resize(labels_.size());
    in_.resize(labels_.size());
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        const auto [s, t] = edges_[e];
        if (s >= labels_.size() || t >= labels_.size()) {
            throw ArgumentError("edge " + std::to_string(e) + " references an unknown node");
        }
        if (s == t) {
            throw ArgumentError("self-loop on node '" + labels_[s] + "'");
        }
        if (!edge_index_.emplace(std::pair{s, t}, e).second) {
            throw ArgumentError("duplicate edge " + labels_[s] + "->" + labels_[t]);
        }
        out_[s].push_back(e);
        in_[t].push_back(e);
    }
}

StaticNetwork StaticNetwork::with_node_count(std::size_t node_count, std::vector<Edge> edges) {
    std::vector<std::string> labels;
    labels.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
        labels.push_back(std::to_string(i + 1));
    }
    return StaticNetwork(std::move(labels), std::move(edges));
}

const std::string& StaticNetwork::node_label(NodeId i) const {
    check_node(i);
    return labels_[i];
}

const Edge& StaticNetwork::edge(EdgeId e) const {
    check_edge(e);
    return edges_[e];
}

std::string StaticNetwork::edge_label(EdgeId e) const {
    const auto& ed = edge(e);
    return labels_[ed.source] + "->" + labels_[ed.target];
}

std::optional<EdgeId> StaticNetwork::find_edge(NodeId source, NodeId target) const {
    if (auto it = edge_index_.find({source, target}); it != edge_index_.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::optional<NodeId> StaticNetwork::find_node(const std::string& label) const {
    if (auto it = node_index_.find(label); it != node_index_.end()) {
        return it->second;
    }
    return std::nullopt;
}

const std::vector<EdgeId>& StaticNetwork::out_edges(NodeId i) const {
    check_node(i);
    return out_[i];
}

const std::vector<EdgeId>& StaticNetwork::in_edges(NodeId i) const {
    check_node(i);
    return in_[i];
}

double StaticNetwork::density() const noexcept {
    const double k = static_cast<double>(node_count());
    if (k < 2.0) {
        return 0.0;
    }
    return static_cast<double>(edge_count()) / (k * (k - 1.0));
}

void StaticNetwork::check_node(NodeId i) const {
    if (i >= labels_.size()) {
        throw ArgumentError("node index " + std::to_string(i) + " out of range (K=" +
                            std::to_string(labels_.size()) + ")");
    }
}

void StaticNetwork::check_edge(EdgeId e) const {
    if (e >= edges_.size()) {
        throw ArgumentError("edge index " + std::to_string(e) + " out of range (M=" +
                            std::to_string(edges_.size()) + ")");
    }
}

namespace {

void check_stage(int stage) {
    if (stage < 1) {
        throw ArgumentError("neighbour stage must be >= 1, got " + std::to_string(stage));
    }
}

std::vector<NodeId> undirected_adjacent(const StaticNetwork& net, NodeId i) {
    std::set<NodeId> out;
    for (EdgeId e : net.out_edges(i)) {
        out.insert(net.edges()[e].target);
    }
    for (EdgeId e : net.in_edges(i)) {
        out.insert(net.edges()[e].source);
    }
    return {out.begin(), out.end()};
}

std::vector<EdgeId> adjacent_edges(const StaticNetwork& net, EdgeId e) {
    const auto [i, j] = net.edges()[e];
    std::set<EdgeId> out;
    for (NodeId v : {i, j}) {
        out.insert(net.out_edges(v).begin(), net.out_edges(v).end());
        out.insert(net.in_edges(v).begin(), net.in_edges(v).end());
    }
    out.erase(e);
    return {out.begin(), out.end()};
}

// Level sets 1..max_stage of a breadth-first search from `start`, where
// `adjacent(x)` lists the 1-stage neighbours of x.
template <typename Adjacent>
std::vector<std::vector<std::size_t>> level_sets(std::size_t start, std::size_t universe, int max_stage,
                                                 Adjacent&& adjacent) {
    std::vector<std::vector<std::size_t>> levels;
    levels.reserve(static_cast<std::size_t>(max_stage));
    std::vector<bool> seen(universe, false);
    seen[start] = true;
    std::vector<std::size_t> frontier{start};
    for (int r = 1; r <= max_stage; ++r) {
        std::vector<std::size_t> next;
        for (std::size_t x : frontier) {
            for (std::size_t y : adjacent(x)) {
                if (!seen[y]) {
                    seen[y] = true;
                    next.push_back(y);
                }
            }
        }
        std::sort(next.begin(), next.end());
        levels.push_back(next);
        frontier = std::move(next);
    }
    return levels;
}

}  // namespace

std::vector<NodeId> node_neighbors(const StaticNetwork& net, NodeId i, int stage) {
    net.check_node(i);
    check_stage(stage);
    auto levels = level_sets(i, net.node_count(), stage,
                             [&](NodeId x) { return undirected_adjacent(net, x); });
    return std::move(levels.back());
}

std::vector<EdgeId> edge_neighbors(const StaticNetwork& net, EdgeId e, int stage) {
    net.check_edge(e);
    check_stage(stage);
    auto levels = level_sets(e, net.edge_count(), stage,
                             [&](EdgeId x) { return adjacent_edges(net, x); });
    return std::move(levels.back());
}

std::vector<EdgeId> incident_edges(const StaticNetwork& net, NodeId i) {
    net.check_node(i);
    std::vector<EdgeId> out = net.out_edges(i);
    out.insert(out.end(), net.in_edges(i).begin(), net.in_edges(i).end());
    std::sort(out.begin(), out.end());
    return out;
}

NeighborhoodTables::NeighborhoodTables(const StaticNetwork& net, int max_stage)
    : max_stage_(max_stage), edge_endpoints_(net.edges()) {
    if (max_stage < 0) {
        throw ArgumentError("max_stage must be >= 0");
    }
    const std::size_t k = net.node_count();
    const std::size_t m = net.edge_count();

    incident_.reserve(k);
    for (NodeId i = 0; i < k; ++i) {
        incident_.push_back(incident_edges(net, i));
    }

    const auto stages = static_cast<std::size_t>(max_stage);
    node_.assign(stages, std::vector<std::vector<NodeId>>(k));
    edge_.assign(stages, std::vector<std::vector<EdgeId>>(m));
    endpoint_nodes_.assign(stages, std::vector<std::vector<NodeId>>(m));
    if (stages == 0) {
        return;
    }

    std::vector<std::vector<NodeId>> node_adj(k);
    for (NodeId i = 0; i < k; ++i) {
        node_adj[i] = undirected_adjacent(net, i);
    }
    for (NodeId i = 0; i < k; ++i) {
        auto levels = level_sets(i, k, max_stage, [&](NodeId x) -> const auto& { return node_adj[x]; });
        for (std::size_t r = 0; r < stages; ++r) {
            node_[r][i] = std::move(levels[r]);
        }
    }

    std::vector<std::vector<EdgeId>> edge_adj(m);
    for (EdgeId e = 0; e < m; ++e) {
        edge_adj[e] = adjacent_edges(net, e);
    }
    for (EdgeId e = 0; e < m; ++e) {
        auto levels = level_sets(e, m, max_stage, [&](EdgeId x) -> const auto& { return edge_adj[x]; });
        for (std::size_t r = 0; r < stages; ++r) {
            edge_[r][e] = std::move(levels[r]);
        }
    }

    for (std::size_t r = 0; r < stages; ++r) {
        for (EdgeId e = 0; e < m; ++e) {
            const auto [i, j] = edge_endpoints_[e];
            std::set<NodeId> merged(node_[r][i].begin(), node_[r][i].end());
            merged.insert(node_[r][j].begin(), node_[r][j].end());
            merged.erase(i);
            merged.erase(j);
            endpoint_nodes_[r][e].assign(merged.begin(), merged.end());
        }
    }
}

const std::vector<NodeId>& NeighborhoodTables::node(NodeId i, int stage) const {
    if (stage < 1 || stage > max_stage_ || i >= incident_.size()) {
        throw ArgumentError("node neighbourhood (" + std::to_string(i) + ", " + std::to_string(stage) +
                            ") not covered by tables (max_stage=" + std::to_string(max_stage_) + ")");
    }
    return node_[static_cast<std::size_t>(stage - 1)][i];
}

const std::vector<EdgeId>& NeighborhoodTables::edge(EdgeId e, int stage) const {
    if (stage < 1 || stage > max_stage_ || e >= edge_endpoints_.size()) {
        throw ArgumentError("edge neighbourhood (" + std::to_string(e) + ", " + std::to_string(stage) +
                            ") not covered by tables (max_stage=" + std::to_string(max_stage_) + ")");
    }
    return edge_[static_cast<std::size_t>(stage - 1)][e];
}

const std::vector<EdgeId>& NeighborhoodTables::incident(NodeId i) const {
    if (i >= incident_.size()) {
        throw ArgumentError("node index " + std::to_string(i) + " out of range");
    }
    return incident_[i];
}

const Edge& NeighborhoodTables::endpoints(EdgeId e) const {
    if (e >= edge_endpoints_.size()) {
        throw ArgumentError("edge index " + std::to_string(e) + " out of range");
    }
    return edge_endpoints_[e];
}

const std::vector<NodeId>& NeighborhoodTables::edge_endpoint_nodes(EdgeId e, int stage) const {
    if (stage < 1 || stage > max_stage_ || e >= edge_endpoints_.size()) {
        throw ArgumentError("edge endpoint neighbourhood not covered by tables");
    }
    return endpoint_nodes_[static_cast<std::size_t>(stage - 1)][e];
}

NeighborhoodTables build_neighborhood_tables(const StaticNetwork& net, int max_stage) {
    return NeighborhoodTables(net, max_stage);
}

}  // namespace gnarex
