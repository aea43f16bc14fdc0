#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pevsim/engine.hpp"

using namespace pevsim;

namespace {

ScenarioConfig tiny_config(const std::string& extra = "") {
    std::string text = R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 1, "placement": "explicit", "positions": [[0, 0]]},
        "sim": {"arrival_rate_per_s": 0, "horizon_s": 4000},
        "weights": {"mode": "fixed", "alpha": [1, 0, 0]},
        "monte_carlo": {"n_runs": 1, "base_seed": 5})";
    if (!extra.empty()) text += "," + extra;
    text += "}";
    return parse_config_text(text);
}

Vehicle vehicle_at(VehicleId id, Position pos, double kwh, std::array<double, 3> alpha,
                   double spawn_s = 0.0) {
    Vehicle v;
    v.id = id;
    v.position = pos;
    v.request = make_energy_request(kwh);
    v.weights = PreferenceWeights(alpha[0], alpha[1], alpha[2]);
    v.spawn_time_s = spawn_s;
    return v;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("a one-quantum request completes in exactly one step") {
    const auto cfg = tiny_config();
    const auto arena = build_arena(cfg);
    Engine engine(cfg, *arena, 1);
    engine.admit_vehicle(vehicle_at(0, Position{0, 0}, 0.0061, {1, 0, 0}));
    const auto result = engine.run();
    REQUIRE(result.vehicles.size() == 1);
    const auto& rec = result.vehicles[0];
    CHECK(rec.completed);
    CHECK(rec.arrival_s == 0.0);
    CHECK(rec.charge_start_s == 0.0);
    CHECK(rec.charge_end_s == 1.0);
}

TEST_CASE("a full 8 kWh request takes ceil(m / e_r) steps") {
    const auto cfg = tiny_config();
    const auto arena = build_arena(cfg);
    Engine engine(cfg, *arena, 1);
    engine.admit_vehicle(vehicle_at(0, Position{0, 0}, 8.0, {1, 0, 0}));
    const auto result = engine.run();
    const auto& rec = result.vehicles[0];
    CHECK(rec.completed);
    CHECK(rec.charge_end_s == std::ceil(8.0 / 0.0061)); // 1312 s, about 22 min
}

TEST_CASE("an empty world only advances the clock") {
    const auto cfg = tiny_config();
    const auto arena = build_arena(cfg);
    Engine engine(cfg, *arena, 1);
    for (int i = 0; i < 10; ++i) engine.step();
    CHECK(engine.clock_s() == 10.0);
    CHECK(engine.vehicles_spawned() == 0);
    CHECK(engine.station_queued_kwh(0) == 0.0);
}

TEST_CASE("queues serve strictly FIFO on one plug") {
    const auto cfg = tiny_config();
    const auto arena = build_arena(cfg);
    Engine engine(cfg, *arena, 1);
    engine.admit_vehicle(vehicle_at(0, Position{0, 0}, 2.0, {1, 0, 0}));
    engine.admit_vehicle(vehicle_at(1, Position{0, 0}, 2.0, {1, 0, 0}));
    const auto result = engine.run();
    const auto& v0 = result.vehicles[0];
    const auto& v1 = result.vehicles[1];
    REQUIRE(v0.completed);
    REQUIRE(v1.completed);
    CHECK(v0.charge_end_s < v1.charge_end_s);
    // one charging point: the second vehicle starts only after the first ends
    CHECK(v1.charge_start_s >= v0.charge_end_s);
    const double steps_each = std::ceil(2.0 / 0.0061);
    CHECK(v1.charge_end_s == doctest::Approx(2.0 * steps_each));
}

TEST_CASE("committed energy counts toward the queue from assignment time") {
    // station at the far corner: commitment appears immediately, arrival later
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 1, "placement": "explicit", "positions": [[1, 1]]},
        "sim": {"arrival_rate_per_s": 0, "horizon_s": 3000},
        "weights": {"mode": "fixed", "alpha": [1, 0, 0]},
        "monte_carlo": {"n_runs": 1, "base_seed": 5}
    })");
    const auto arena = build_arena(cfg);
    Engine engine(cfg, *arena, 1);
    engine.admit_vehicle(vehicle_at(0, Position{0, 0}, 5.0, {1, 0, 0}));
    CHECK(engine.station_queued_kwh(0) == doctest::Approx(5.0));
    engine.step();
    CHECK(engine.station_queued_kwh(0) == doctest::Approx(5.0)); // still in transit
    const auto result = engine.run();
    CHECK(result.vehicles[0].arrival_s == doctest::Approx(std::sqrt(2.0) / 0.02));
    CHECK(result.vehicles[0].completed);
}

TEST_CASE("poisson arrivals deliver about 500 vehicles over 7 hours") {
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 12, "renewables": "mixed"},
        "weights": {"mode": "fixed", "alpha": [1, 0, 0]},
        "monte_carlo": {"n_runs": 1, "base_seed": 11}
    })");
    const auto result = run_scenario(cfg, 11);
    const double n = static_cast<double>(result.vehicles.size());
    CHECK(n > 500.0 - 3.0 * std::sqrt(500.0));
    CHECK(n < 500.0 + 3.0 * std::sqrt(500.0));
}

TEST_CASE("identical seeds reproduce the identical run") {
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 4, "renewables": "mixed"},
        "sim": {"horizon_s": 4000, "arrival_rate_per_s": 0.004},
        "weights": {"mode": "fixed", "alpha": [0.4, 0.3, 0.3]},
        "monte_carlo": {"n_runs": 1, "base_seed": 2}
    })");
    const auto a = run_scenario(cfg, 9);
    const auto b = run_scenario(cfg, 9);
    REQUIRE(a.vehicles.size() == b.vehicles.size());
    for (std::size_t i = 0; i < a.vehicles.size(); ++i) {
        CHECK(a.vehicles[i].assigned_station == b.vehicles[i].assigned_station);
        CHECK(a.vehicles[i].spawn_s == b.vehicles[i].spawn_s);
        CHECK(a.vehicles[i].request_kwh == b.vehicles[i].request_kwh);
        CHECK(a.vehicles[i].charge_end_s == b.vehicles[i].charge_end_s);
    }
    const auto c = run_scenario(cfg, 10);
    CHECK(a.vehicles.size() != c.vehicles.size()); // different seed, different world
}

TEST_CASE("monte carlo runs are seeded by index and independent of scheduling") {
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 3},
        "sim": {"horizon_s": 2000, "arrival_rate_per_s": 0.003},
        "weights": {"mode": "fixed", "alpha": [1, 0, 0]},
        "monte_carlo": {"n_runs": 4, "base_seed": 100}
    })");
    const auto runs = run_monte_carlo(cfg, 4, 100);
    REQUIRE(runs.size() == 4);
    for (std::size_t k = 0; k < runs.size(); ++k) {
        CHECK(runs[k].seed == 100 + k);
        const auto solo = run_scenario(cfg, 100 + k);
        CHECK(solo.vehicles.size() == runs[k].vehicles.size());
    }
}

TEST_CASE("defectors leave a phantom entry until the purge deadline") {
    // assignment prefers the far PV station for price-driven vehicles; the
    // driver always defects to the nearest (origin) station
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 2, "placement": "explicit", "positions": [[0, 0], [1, 1]],
                      "renewables": ["none", "pv"]},
        "sim": {"arrival_rate_per_s": 0, "horizon_s": 3000},
        "weights": {"mode": "fixed", "alpha": [0, 1, 0]},
        "compliance": {"mode": "fixed", "q": 0},
        "ledger": {"enabled": true},
        "monte_carlo": {"n_runs": 1, "base_seed": 5}
    })");
    const auto arena = build_arena(cfg);
    Engine engine(cfg, *arena, 3);
    engine.admit_vehicle(vehicle_at(0, Position{0, 0}, 5.0, {0, 1, 0}));

    const double travel = std::sqrt(2.0) / 0.02; // to the assigned PV corner
    const double deadline = travel * 2.0;

    // phantom lives at the assigned station while the vehicle heads elsewhere
    CHECK(engine.station_queued_kwh(1) == doctest::Approx(5.0));
    while (engine.clock_s() <= deadline) engine.step();
    engine.step();
    CHECK(engine.station_queued_kwh(1) == 0.0);

    const auto result = engine.run();
    const auto& rec = result.vehicles[0];
    CHECK(rec.assigned_station == 1);
    CHECK(rec.actual_station == 0);
    CHECK(rec.defected);
    CHECK(rec.completed); // charged at the nearest station anyway
    CHECK(result.stations[1].forfeits == 1);

    bool saw_forfeit = false;
    for (const auto& e : result.events) saw_forfeit |= e.kind == "escrow_forfeit";
    CHECK(saw_forfeit);

    // the ledger dump replays cleanly
    std::istringstream dump(result.ledger_dump);
    CHECK(replay_ledger_dump(dump).ok);
}

TEST_CASE("compliant runs return every bond") {
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 3},
        "sim": {"horizon_s": 6000, "arrival_rate_per_s": 0.003},
        "weights": {"mode": "fixed", "alpha": [1, 0, 0]},
        "compliance": {"mode": "fixed", "q": 1},
        "ledger": {"enabled": true},
        "monte_carlo": {"n_runs": 1, "base_seed": 5}
    })");
    const auto result = run_scenario(cfg, 21);
    REQUIRE(result.vehicles.size() > 0);
    for (const auto& s : result.stations) CHECK(s.forfeits == 0);
    CHECK(result.ledger_dump.find("forfeit_bond") == std::string::npos);
    CHECK(result.ledger_dump.find("return_bond") != std::string::npos);
    std::istringstream dump(result.ledger_dump);
    CHECK(replay_ledger_dump(dump).ok);
}

TEST_CASE("mixed compliance keeps all invariants across a long run") {
    // invariant checks run inside every step; surviving the run is the test
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 6, "renewables": "mixed"},
        "sim": {"horizon_s": 12000, "arrival_rate_per_s": 0.006},
        "weights": {"mode": "fixed", "alpha": [0.5, 0.25, 0.25]},
        "compliance": {"mode": "fixed", "q": 0.5},
        "ledger": {"enabled": true},
        "monte_carlo": {"n_runs": 1, "base_seed": 5}
    })");
    const auto result = run_scenario(cfg, 33);
    CHECK(result.vehicles.size() > 50);
    long forfeits = 0;
    for (const auto& s : result.stations) forfeits += s.forfeits;
    CHECK(forfeits > 0);
    std::istringstream dump(result.ledger_dump);
    CHECK(replay_ledger_dump(dump).ok);
}

TEST_CASE("closed-loop compliance emits a controller trace") {
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 6},
        "sim": {"arrival_rate_per_s": 0.006},
        "weights": {"mode": "fixed", "alpha": [1, 0, 0]},
        "compliance": {"mode": "closed_loop", "q0": 0.4, "c0": 5, "q_bar": 0.9,
                        "k_p": 20, "k_i": 2, "window": 20},
        "ledger": {"enabled": true},
        "monte_carlo": {"n_runs": 1, "base_seed": 5}
    })");
    const auto result = run_scenario(cfg, 8);
    CHECK(result.controller.size() > 5);
    for (const auto& c : result.controller) {
        CHECK(c.bond_value >= 0.0);
        CHECK(c.bond_value <= 50.0);
        CHECK(c.q_estimate >= 0.0);
        CHECK(c.q_estimate <= 1.0);
    }
}

TEST_CASE("sweep-mode configs refuse to run directly") {
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "unit_square"},
        "stations": {"count": 2},
        "weights": {"mode": "sweep"},
        "monte_carlo": {"n_runs": 1, "base_seed": 5}
    })");
    CHECK_THROWS_AS(run_scenario(cfg, 1), ConfigError);
}

TEST_CASE("road-graph scenarios run under the same engine") {
    const std::string graph_text =
        "N a 0 0\nN b 400 0\nN c 400 300\nN d 0 300\n"
        "E a b 400\nE b c 300\nE c d 400\nE d a 300\n";
    {
        std::ofstream out("tiny_test_graph.txt");
        out << graph_text;
    }
    auto cfg = parse_config_text(R"({
        "arena": {"mode": "road_graph", "graph_file": "tiny_test_graph.txt"},
        "stations": {"count": 2, "placement": "explicit", "nodes": ["a", "c"]},
        "sim": {"horizon_s": 6000, "arrival_rate_per_s": 0.002},
        "weights": {"mode": "fixed", "alpha": [1, 0, 0]},
        "monte_carlo": {"n_runs": 1, "base_seed": 5}
    })");
    CHECK(cfg.params.vehicle_speed == 10.0); // road-mode default
    CHECK(cfg.params.d_max == doctest::Approx(700.0));
    const auto result = run_scenario(cfg, 4);
    CHECK(result.vehicles.size() > 0);
    long completions = 0;
    for (const auto& s : result.stations) completions += s.completions;
    CHECK(completions > 0);
}

} // TEST_SUITE
