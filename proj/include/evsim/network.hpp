#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace evsim {

using NodeId = std::int64_t;

// Directed road graph with fixed positive edge travel times. Immutable after
// load; all queries are const and thread-safe (the per-source shortest-path
// cache is serialized behind a mutex).
class Network {
public:
    struct Node {
        NodeId id = 0;
        std::optional<double> x;
        std::optional<double> y;
    };

    struct Edge {
        NodeId tail = 0;
        NodeId head = 0;
        double travel_time_s = 0;
    };

    // Line-oriented text format:
    //   # comment
    //   N <id> [<x> <y>]
    //   E <tail> <head> <travel_time_seconds>
    // Rejects duplicate ids, dangling endpoints, non-positive times, and
    // graphs that are not strongly connected.
    static Network load(std::istream& in);
    static Network load_file(const std::string& path);

    // Bidirectional lattice; rows, cols >= 2. Node id = row * cols + col.
    static Network grid(int rows, int cols, double edge_time_s);

    static Network from_parts(std::vector<Node> nodes, std::vector<Edge> edges);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int edge_count() const { return static_cast<int>(num_edges_); }

    bool has_node(NodeId id) const { return index_of_.contains(id); }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::vector<NodeId> node_ids() const;
    const Node& node(NodeId id) const;

    // Minimal directed path cost in seconds; 0 for origin == dest.
    double travel_time(NodeId origin, NodeId dest) const;

    // { v : travel_time(center, v) <= radius }, ascending by id.
    std::vector<NodeId> nodes_within(NodeId center, double radius_s) const;

    // Optionally warm the whole single-source cache (config flag for large
    // networks; desk-scale graphs fill it lazily).
    void precompute_all_sources() const;

    Network(const Network& other);
    Network& operator=(const Network& other);
    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;

private:
    Network() = default;

    struct Cache {
        std::mutex mutex;
        std::unordered_map<int, std::vector<double>> distances;
    };

    int index_of(NodeId id) const;
    const std::vector<double>& source_distances(int source_index) const;

    std::vector<Node> nodes_;                    // index-aligned, ascending id
    std::unordered_map<NodeId, int> index_of_;
    std::vector<int> adj_start_;                 // CSR over node indices
    std::vector<std::pair<int, double>> adj_;    // (head index, travel time)
    std::size_t num_edges_ = 0;

    mutable std::unique_ptr<Cache> cache_ = std::make_unique<Cache>();
};

}  // namespace evsim
