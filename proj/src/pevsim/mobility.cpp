#include "mobility.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

namespace pevsim {

TravelEstimate euclidean_estimate(const Position& a, const Position& b, double speed) {
    if (!(speed > 0.0)) throw DomainError("speed must be positive");
    const double d = std::hypot(a.x - b.x, a.y - b.y);
    return TravelEstimate{d, d / speed};
}

RoadGraph RoadGraph::load(std::istream& in) {
    RoadGraph g;
    std::map<std::string, int> index;
    struct RawEdge {
        std::string from, to;
        double length;
        bool directed;
        int line;
    };
    std::vector<RawEdge> raw_edges;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "N") {
            std::string id;
            double x, y;
            if (!(ls >> id >> x >> y)) {
                throw GraphParseError("graph line " + std::to_string(line_no) + ": expected 'N <id> <x> <y>'");
            }
            if (index.count(id)) {
                throw GraphParseError("graph line " + std::to_string(line_no) + ": duplicate node '" + id + "'");
            }
            if (!std::isfinite(x) || !std::isfinite(y)) {
                throw GraphParseError("graph line " + std::to_string(line_no) + ": non-finite coordinate");
            }
            index[id] = static_cast<int>(g.nodes_.size());
            g.nodes_.push_back(Node{id, Position{x, y}});
        } else if (tag == "E") {
            RawEdge e;
            if (!(ls >> e.from >> e.to >> e.length)) {
                throw GraphParseError("graph line " + std::to_string(line_no) + ": expected 'E <from> <to> <length> [D]'");
            }
            std::string flag;
            e.directed = (ls >> flag) && flag == "D";
            e.line = line_no;
            raw_edges.push_back(e);
        } else {
            throw GraphParseError("graph line " + std::to_string(line_no) + ": unknown record '" + tag + "'");
        }
    }

    g.adjacency_.resize(g.nodes_.size());
    for (const auto& e : raw_edges) {
        auto fi = index.find(e.from);
        auto ti = index.find(e.to);
        if (fi == index.end() || ti == index.end()) {
            throw GraphParseError("graph line " + std::to_string(e.line) + ": edge references unknown node");
        }
        if (!(e.length > 0.0)) {
            throw GraphParseError("graph line " + std::to_string(e.line) + ": edge length must be positive");
        }
        g.adjacency_[fi->second].push_back(Arc{ti->second, e.length});
        if (!e.directed) g.adjacency_[ti->second].push_back(Arc{fi->second, e.length});
    }
    if (g.nodes_.empty()) throw GraphParseError("graph has no nodes");

    g.finalize();
    return g;
}

RoadGraph RoadGraph::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphParseError("cannot open graph file '" + path + "'");
    return load(in);
}

namespace {

// Dijkstra from one source; tie-breaking is deterministic because the queue
// orders by (distance, node index) and node indices follow file order.
std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj, int src) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(adj.size(), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : adj[u]) {
            if (dist[u] + w < dist[v]) {
                dist[v] = dist[u] + w;
                pq.emplace(dist[v], v);
            }
        }
    }
    return dist;
}

} // namespace

void RoadGraph::finalize() {
    const int n = node_count();
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (int u = 0; u < n; ++u) {
        for (const auto& arc : adjacency_[u]) adj[u].emplace_back(arc.to, arc.length);
        // sorted adjacency keeps relaxation order independent of file order
        std::sort(adj[u].begin(), adj[u].end());
    }

    dist_.resize(n);
    for (int u = 0; u < n; ++u) dist_[u] = dijkstra(adj, u);

    std::vector<std::string> unreachable;
    diameter_ = 0.0;
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (!std::isfinite(dist_[u][v])) {
                unreachable.push_back(nodes_[u].id + "->" + nodes_[v].id);
            } else {
                diameter_ = std::max(diameter_, dist_[u][v]);
            }
        }
    }
    if (!unreachable.empty()) {
        std::string detail;
        for (std::size_t i = 0; i < std::min<std::size_t>(unreachable.size(), 8); ++i) {
            detail += (i ? ", " : "") + unreachable[i];
        }
        if (unreachable.size() > 8) detail += ", ...";
        throw DisconnectedGraph("graph is not strongly connected; unreachable pairs: " + detail);
    }
}

int RoadGraph::index_of(const std::string& node_id) const {
    for (int i = 0; i < node_count(); ++i) {
        if (nodes_[i].id == node_id) return i;
    }
    throw Unreachable("node '" + node_id + "' not in graph");
}

double RoadGraph::shortest_distance(int from, int to) const {
    if (from < 0 || to < 0 || from >= node_count() || to >= node_count()) {
        throw Unreachable("node index out of range");
    }
    return dist_[from][to];
}

TravelEstimate shortest_path_estimate(const RoadGraph& g, const std::string& from,
                                      const std::string& to, double speed) {
    if (!(speed > 0.0)) throw DomainError("speed must be positive");
    const double d = g.shortest_distance(g.index_of(from), g.index_of(to));
    return TravelEstimate{d, d / speed};
}

TravelEstimate UnitSquareArena::estimate(const SpawnPoint& from, const StationSite& to) const {
    return euclidean_estimate(from.pos, to.pos, speed_);
}

double UnitSquareArena::d_max() const { return std::sqrt(2.0); }

SpawnPoint UnitSquareArena::sample_spawn(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    const double y = u(rng);
    return SpawnPoint{Position{x, y}, -1};
}

TravelEstimate RoadGraphArena::estimate(const SpawnPoint& from, const StationSite& to) const {
    const double d = graph_.shortest_distance(from.node, to.node);
    return TravelEstimate{d, d / speed_};
}

double RoadGraphArena::d_max() const { return graph_.diameter(); }

SpawnPoint RoadGraphArena::sample_spawn(Rng& rng) const {
    std::uniform_int_distribution<int> pick(0, graph_.node_count() - 1);
    const int node = pick(rng);
    return SpawnPoint{graph_.node(node).pos, node};
}

} // namespace pevsim
