#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gnarex {

using NodeId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
    NodeId source;
    NodeId target;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Fixed directed simple graph with a labelled edge list.
 *
 * Nodes are indexed 0..K-1 and edges 0..M-1; the edge index is the position
 * in the edge list passed to the constructor (the edge labelling). Self-loops
 * and duplicate directed pairs are rejected; (i,j) and (j,i) are distinct.
 */
class StaticNetwork {
public:
    StaticNetwork(std::vector<std::string> node_labels, std::vector<Edge> edges);

    // Nodes labelled "1".."K".
    static StaticNetwork with_node_count(std::size_t node_count, std::vector<Edge> edges);

    [[nodiscard]] std::size_t node_count() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
    [[nodiscard]] const std::vector<std::string>& node_labels() const noexcept { return labels_; }
    [[nodiscard]] const std::string& node_label(NodeId i) const;
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const Edge& edge(EdgeId e) const;
    // "source->target" using node labels.
    [[nodiscard]] std::string edge_label(EdgeId e) const;

    [[nodiscard]] std::optional<EdgeId> find_edge(NodeId source, NodeId target) const;
    [[nodiscard]] std::optional<NodeId> find_node(const std::string& label) const;

    // delta+(i) and delta-(i), ascending edge index.
    [[nodiscard]] const std::vector<EdgeId>& out_edges(NodeId i) const;
    [[nodiscard]] const std::vector<EdgeId>& in_edges(NodeId i) const;

    // Directed density M / (K (K-1)).
    [[nodiscard]] double density() const noexcept;

    void check_node(NodeId i) const;
    void check_edge(EdgeId e) const;

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::map<std::pair<NodeId, NodeId>, EdgeId> edge_index_;
    std::map<std::string, NodeId> node_index_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
};

// r-stage neighbours on the undirected skeleton. Stage r >= 1; result sorted.
std::vector<NodeId> node_neighbors(const StaticNetwork& net, NodeId i, int stage);

// r-stage neighbouring edges (edges adjacent when they share an endpoint).
std::vector<EdgeId> edge_neighbors(const StaticNetwork& net, EdgeId e, int stage);

// Every edge from or to node i, ascending.
std::vector<EdgeId> incident_edges(const StaticNetwork& net, NodeId i);

/// Precomputed neighbour sets for stages 1..max_stage plus incident edges.
class NeighborhoodTables {
public:
    NeighborhoodTables(const StaticNetwork& net, int max_stage);

    [[nodiscard]] int max_stage() const noexcept { return max_stage_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return incident_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edge_endpoints_.size(); }

    [[nodiscard]] const std::vector<NodeId>& node(NodeId i, int stage) const;
    [[nodiscard]] const std::vector<EdgeId>& edge(EdgeId e, int stage) const;
    [[nodiscard]] const std::vector<EdgeId>& incident(NodeId i) const;
    [[nodiscard]] const Edge& endpoints(EdgeId e) const;

    // node(i,r) U node(j,r) minus {i,j} for edge e = (i,j); sorted.
    [[nodiscard]] const std::vector<NodeId>& edge_endpoint_nodes(EdgeId e, int stage) const;

private:
    int max_stage_;
    std::vector<Edge> edge_endpoints_;
    std::vector<std::vector<EdgeId>> incident_;
    // [stage-1][index]
    std::vector<std::vector<std::vector<NodeId>>> node_;
    std::vector<std::vector<std::vector<EdgeId>>> edge_;
    std::vector<std::vector<std::vector<NodeId>>> endpoint_nodes_;
};

NeighborhoodTables build_neighborhood_tables(const StaticNetwork& net, int max_stage);

}  // namespace gnarex
