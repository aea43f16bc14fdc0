#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "pevsim/mobility.hpp"

using namespace pevsim;

namespace {

RoadGraph graph_from(const std::string& text) {
    std::istringstream in(text);
    return RoadGraph::load(in);
}

// Exhaustive simple-path enumeration, the oracle for Dijkstra.
double brute_force_shortest(const std::vector<std::vector<std::pair<int, double>>>& adj, int src,
                            int dst) {
    const int n = static_cast<int>(adj.size());
    std::vector<bool> visited(n, false);
    double best = std::numeric_limits<double>::infinity();
    std::function<void(int, double)> walk = [&](int u, double len) {
        if (u == dst) {
            best = std::min(best, len);
            return;
        }
        visited[u] = true;
        for (const auto& [v, w] : adj[u]) {
            if (!visited[v]) walk(v, len + w);
        }
        visited[u] = false;
    };
    walk(src, 0.0);
    return best;
}

} // namespace

TEST_SUITE("mobility") {

TEST_CASE("euclidean estimates") {
    const auto zero = euclidean_estimate(Position{0, 0}, Position{0, 0}, 0.02);
    CHECK(zero.distance == 0.0);
    CHECK(zero.travel_time_s == 0.0);

    const auto diag = euclidean_estimate(Position{0, 0}, Position{1, 1}, 0.02);
    CHECK(diag.distance == doctest::Approx(std::sqrt(2.0)));

    const auto triangle = euclidean_estimate(Position{0, 0}, Position{0.3, 0.4}, 0.02);
    CHECK(triangle.distance == doctest::Approx(0.5));
    CHECK(triangle.travel_time_s == doctest::Approx(25.0));

    CHECK_THROWS_AS(euclidean_estimate(Position{0, 0}, Position{1, 1}, 0.0), DomainError);
}

TEST_CASE("graph loader parses nodes and edges") {
    const auto g = graph_from("# toy\nN a 0 0\nN b 1 0\nE a b 5\n");
    CHECK(g.node_count() == 2);
    CHECK(shortest_path_estimate(g, "a", "b", 10.0).distance == doctest::Approx(5.0));
    CHECK(shortest_path_estimate(g, "a", "a", 10.0).distance == 0.0);
    CHECK(g.diameter() == doctest::Approx(5.0));
}

TEST_CASE("loader rejects malformed input") {
    CHECK_THROWS_AS(graph_from("N a 0\n"), GraphParseError);
    CHECK_THROWS_AS(graph_from("X what 1 2\n"), GraphParseError);
    CHECK_THROWS_AS(graph_from("N a 0 0\nN a 1 1\n"), GraphParseError);
    CHECK_THROWS_AS(graph_from("N a 0 0\nN b 1 1\nE a c 2\n"), GraphParseError);
    CHECK_THROWS_AS(graph_from("N a 0 0\nN b 1 1\nE a b 0\n"), GraphParseError);
    CHECK_THROWS_AS(graph_from(""), GraphParseError);
}

TEST_CASE("loader rejects disconnected graphs") {
    CHECK_THROWS_AS(graph_from("N a 0 0\nN b 1 0\n"), DisconnectedGraph);
    // directed edge one way only: not strongly connected
    CHECK_THROWS_AS(graph_from("N a 0 0\nN b 1 0\nE a b 1 D\n"), DisconnectedGraph);
}

TEST_CASE("diamond beats the direct edge") {
    const auto g = graph_from(
        "N a 0 0\nN b 1 0\nN c 2 0\nN d 1 1\n"
        "E a b 1\nE b c 1\nE a d 1\nE d c 1\nE a c 2.5\n");
    CHECK(shortest_path_estimate(g, "a", "c", 1.0).distance == doctest::Approx(2.0));
}

TEST_CASE("unknown nodes raise") {
    const auto g = graph_from("N a 0 0\nN b 1 0\nE a b 1\n");
    CHECK_THROWS_AS(shortest_path_estimate(g, "a", "zz", 1.0), Unreachable);
}

TEST_CASE("dijkstra equals exhaustive enumeration on random graphs") {
    Rng rng(2024);
    std::uniform_real_distribution<double> uw(0.5, 10.0);
    std::uniform_int_distribution<int> un(2, 6);
    int tested = 0;
    while (tested < 100) {
        const int n = un(rng);
        std::ostringstream text;
        text.precision(17);
        for (int i = 0; i < n; ++i) text << "N n" << i << ' ' << i << " 0\n";
        std::vector<std::vector<std::pair<int, double>>> adj(n);
        std::uniform_real_distribution<double> edge_p(0.0, 1.0);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const bool keep = j == i + 1 || edge_p(rng) < 0.5; // chain keeps it connected
                if (!keep) continue;
                const double w = uw(rng);
                text << "E n" << i << " n" << j << ' ' << w << "\n";
                adj[i].emplace_back(j, w);
                adj[j].emplace_back(i, w);
            }
        }
        const auto g = graph_from(text.str());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                CHECK(g.shortest_distance(i, j) ==
                      doctest::Approx(brute_force_shortest(adj, i, j)).epsilon(1e-12));
            }
        }
        ++tested;
    }
}

TEST_CASE("triangle inequality holds for shortest paths") {
    const auto g = graph_from(
        "N a 0 0\nN b 1 0\nN c 2 0\nN d 1 1\nN e 0 1\n"
        "E a b 2\nE b c 3\nE c d 1\nE d e 2\nE e a 1\nE b d 1.5\n");
    for (int i = 0; i < g.node_count(); ++i) {
        for (int j = 0; j < g.node_count(); ++j) {
            for (int k = 0; k < g.node_count(); ++k) {
                CHECK(g.shortest_distance(i, j) <=
                      g.shortest_distance(i, k) + g.shortest_distance(k, j) + 1e-12);
            }
        }
    }
}

TEST_CASE("both arenas expose the same travel contract") {
    const UnitSquareArena square(0.02);
    const auto e1 = square.estimate(SpawnPoint{Position{0, 0}, -1}, StationSite{Position{0.3, 0.4}, -1});
    CHECK(e1.travel_time_s == doctest::Approx(e1.distance / 0.02));
    CHECK(square.d_max() == doctest::Approx(std::sqrt(2.0)));

    RoadGraphArena road(graph_from("N a 0 0\nN b 300 400\nE a b 500\n"), 10.0);
    const auto e2 = road.estimate(SpawnPoint{Position{0, 0}, 0}, StationSite{Position{300, 400}, 1});
    CHECK(e2.distance == doctest::Approx(500.0));
    CHECK(e2.travel_time_s == doctest::Approx(50.0));
    CHECK(road.d_max() == doctest::Approx(500.0));

    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto sp = square.sample_spawn(rng);
        CHECK(sp.pos.x >= 0.0);
        CHECK(sp.pos.x <= 1.0);
        CHECK(sp.pos.y >= 0.0);
        CHECK(sp.pos.y <= 1.0);
        const auto rp = road.sample_spawn(rng);
        CHECK(rp.node >= 0);
        CHECK(rp.node < 2);
    }
}

} // TEST_SUITE
