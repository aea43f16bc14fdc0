#ifndef PEVSIM_MOBILITY_HPP
#define PEVSIM_MOBILITY_HPP

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "domain.hpp"

namespace pevsim {

struct TravelEstimate {
    double distance = 0.0;
    double travel_time_s = 0.0;
};

TravelEstimate euclidean_estimate(const Position& a, const Position& b, double speed);

// Line-oriented plain-text graph:
//   N <id> <x> <y>           node
//   E <from> <to> <length>   undirected edge (append D for directed)
// Blank lines and lines starting with # are ignored.
class RoadGraph {
  public:
    struct Node {
        std::string id;
        Position pos;
    };

    static RoadGraph load(std::istream& in);
    static RoadGraph load_file(const std::string& path);

    int index_of(const std::string& node_id) const; // throws Unreachable if absent
    const Node& node(int index) const { return nodes_[index]; }
    int node_count() const { return static_cast<int>(nodes_.size()); }

    // Shortest-path length over nonnegative edge weights; precomputed for all
    // pairs at load time (graphs here are desk scale).
    double shortest_distance(int from, int to) const;
    double diameter() const { return diameter_; }

  private:
    struct Arc {
        int to;
        double length;
    };

    void finalize(); // validates connectivity, builds distance table

    std::vector<Node> nodes_;
    std::vector<std::vector<Arc>> adjacency_;
    std::vector<std::vector<double>> dist_;
    double diameter_ = 0.0;
};

TravelEstimate shortest_path_estimate(const RoadGraph& g, const std::string& from,
                                      const std::string& to, double speed);

// Where a vehicle enters the world: a position, plus the node it stands on in
// road-graph mode.
struct SpawnPoint {
    Position pos;
    int node = -1;
};

struct StationSite {
    Position pos;
    int node = -1;
};

// The two arena modes expose one travel contract so the engine runs unchanged
// under either.
class Arena {
  public:
    virtual ~Arena() = default;
    virtual TravelEstimate estimate(const SpawnPoint& from, const StationSite& to) const = 0;
    virtual double d_max() const = 0;
    virtual SpawnPoint sample_spawn(Rng& rng) const = 0;
};

class UnitSquareArena final : public Arena {
  public:
    explicit UnitSquareArena(double speed) : speed_(speed) {}
    TravelEstimate estimate(const SpawnPoint& from, const StationSite& to) const override;
    double d_max() const override;
    SpawnPoint sample_spawn(Rng& rng) const override;

  private:
    double speed_;
};

class RoadGraphArena final : public Arena {
  public:
    RoadGraphArena(RoadGraph graph, double speed) : graph_(std::move(graph)), speed_(speed) {}
    TravelEstimate estimate(const SpawnPoint& from, const StationSite& to) const override;
    double d_max() const override;
    SpawnPoint sample_spawn(Rng& rng) const override;
    const RoadGraph& graph() const { return graph_; }

  private:
    RoadGraph graph_;
    double speed_;
};

} // namespace pevsim

#endif
