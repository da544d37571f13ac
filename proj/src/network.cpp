#include "evsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "evsim/error.hpp"

namespace evsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Network::Network(const Network& other)
    : nodes_(other.nodes_),
      index_of_(other.index_of_),
      adj_start_(other.adj_start_),
      adj_(other.adj_),
      num_edges_(other.num_edges_),
      cache_(std::make_unique<Cache>()) {}

Network& Network::operator=(const Network& other) {
    if (this != &other) {
        nodes_ = other.nodes_;
        index_of_ = other.index_of_;
        adj_start_ = other.adj_start_;
        adj_ = other.adj_;
        num_edges_ = other.num_edges_;
        cache_ = std::make_unique<Cache>();
    }
    return *this;
}

Network Network::from_parts(std::vector<Node> nodes, std::vector<Edge> edges) {
    if (nodes.empty()) throw ParseError("network has no nodes");

    std::sort(nodes.begin(), nodes.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });

    Network net;
    net.nodes_ = std::move(nodes);
    net.index_of_.reserve(net.nodes_.size());
    for (int i = 0; i < static_cast<int>(net.nodes_.size()); ++i) {
        const NodeId id = net.nodes_[i].id;
        if (!net.index_of_.emplace(id, i).second)
            throw ParseError("duplicate node id " + std::to_string(id));
    }

    std::vector<std::vector<std::pair<int, double>>> adj(net.nodes_.size());
    for (const Edge& e : edges) {
        if (!(e.travel_time_s > 0))
            throw ParseError("edge " + std::to_string(e.tail) + " -> " +
                             std::to_string(e.head) +
                             " has non-positive travel time");
        auto tail = net.index_of_.find(e.tail);
        auto head = net.index_of_.find(e.head);
        if (tail == net.index_of_.end() || head == net.index_of_.end())
            throw ParseError("edge " + std::to_string(e.tail) + " -> " +
                             std::to_string(e.head) +
                             " references an unknown node");
        adj[tail->second].emplace_back(head->second, e.travel_time_s);
    }

    net.adj_start_.assign(net.nodes_.size() + 1, 0);
    for (std::size_t i = 0; i < adj.size(); ++i) {
        std::sort(adj[i].begin(), adj[i].end());
        net.adj_start_[i + 1] = net.adj_start_[i] + static_cast<int>(adj[i].size());
        net.adj_.insert(net.adj_.end(), adj[i].begin(), adj[i].end());
    }
    net.num_edges_ = net.adj_.size();

    // Strong connectivity: every node reachable from node 0 and node 0
    // reachable from every node.
    const int n = net.node_count();
    auto reach = [n](const auto& next_of) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            next_of(u, [&](int v) {
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            });
        }
        return count;
    };
    const int forward = reach([&](int u, auto&& visit) {
        for (int k = net.adj_start_[u]; k < net.adj_start_[u + 1]; ++k)
            visit(net.adj_[k].first);
    });
    std::vector<std::vector<int>> rev(n);
    for (int u = 0; u < n; ++u)
        for (int k = net.adj_start_[u]; k < net.adj_start_[u + 1]; ++k)
            rev[net.adj_[k].first].push_back(u);
    const int backward = reach([&](int u, auto&& visit) {
        for (int v : rev[u]) visit(v);
    });
    if (forward != n || backward != n)
        throw ParseError("network is not strongly connected");

    return net;
}

Network Network::load(std::istream& in) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;  // blank or comment-only line
        auto fail = [&](const std::string& what) -> ParseError {
            return ParseError("network line " + std::to_string(line_no) + ": " + what);
        };
        if (tag == "N") {
            Node node;
            if (!(ls >> node.id)) throw fail("expected node id");
            double x = 0, y = 0;
            if (ls >> x) {
                if (!(ls >> y)) throw fail("node has x without y");
                node.x = x;
                node.y = y;
            }
            std::string extra;
            if (ls >> extra) throw fail("trailing tokens on node line");
            nodes.push_back(node);
        } else if (tag == "E") {
            Edge edge;
            if (!(ls >> edge.tail >> edge.head >> edge.travel_time_s))
                throw fail("expected: E <tail> <head> <travel_time_seconds>");
            std::string extra;
            if (ls >> extra) throw fail("trailing tokens on edge line");
            edges.push_back(edge);
        } else {
            throw fail("unknown record '" + tag + "'");
        }
    }
    return from_parts(std::move(nodes), std::move(edges));
}

Network Network::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file: " + path);
    return load(in);
}

Network Network::grid(int rows, int cols, double edge_time_s) {
    if (rows < 2 || cols < 2)
        throw ConfigError("grid needs rows >= 2 and cols >= 2");
    if (!(edge_time_s > 0)) throw ConfigError("grid edge time must be positive");

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    nodes.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            Node node;
            node.id = static_cast<NodeId>(r) * cols + c;
            node.x = static_cast<double>(c);
            node.y = static_cast<double>(r);
            nodes.push_back(node);
            auto link = [&](int r2, int c2) {
                if (r2 < 0 || r2 >= rows || c2 < 0 || c2 >= cols) return;
                edges.push_back({node.id, static_cast<NodeId>(r2) * cols + c2,
                                 edge_time_s});
            };
            link(r - 1, c);
            link(r + 1, c);
            link(r, c - 1);
            link(r, c + 1);
        }
    }
    return from_parts(std::move(nodes), std::move(edges));
}

std::vector<NodeId> Network::node_ids() const {
    std::vector<NodeId> ids;
    ids.reserve(nodes_.size());
    for (const Node& n : nodes_) ids.push_back(n.id);
    return ids;
}

const Network::Node& Network::node(NodeId id) const {
    return nodes_[static_cast<std::size_t>(index_of(id))];
}

int Network::index_of(NodeId id) const {
    auto it = index_of_.find(id);
    if (it == index_of_.end())
        throw Error("unknown node id " + std::to_string(id));
    return it->second;
}

const std::vector<double>& Network::source_distances(int source_index) const {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->distances.find(source_index);
    if (it != cache_->distances.end()) return it->second;

    std::vector<double> dist(nodes_.size(), kInf);
    dist[source_index] = 0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0.0, source_index);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (int k = adj_start_[u]; k < adj_start_[u + 1]; ++k) {
            const auto [v, w] = adj_[k];
            if (d + w < dist[v]) {
                dist[v] = d + w;
                heap.emplace(dist[v], v);
            }
        }
    }
    return cache_->distances.emplace(source_index, std::move(dist)).first->second;
}

double Network::travel_time(NodeId origin, NodeId dest) const {
    const int s = index_of(origin);
    const int t = index_of(dest);
    return source_distances(s)[static_cast<std::size_t>(t)];
}

std::vector<NodeId> Network::nodes_within(NodeId center, double radius_s) const {
    if (radius_s < 0) throw Error("nodes_within radius must be >= 0");
    const auto& dist = source_distances(index_of(center));
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (dist[i] <= radius_s) out.push_back(nodes_[i].id);
    return out;  // nodes_ ascending by id, so output is too
}

void Network::precompute_all_sources() const {
    for (int i = 0; i < node_count(); ++i) source_distances(i);
}

}  // namespace evsim
