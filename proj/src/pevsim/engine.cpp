#include "engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace pevsim {

std::unique_ptr<Arena> build_arena(const ScenarioConfig& cfg) {
    if (cfg.arena_mode == ArenaMode::unit_square) {
        return std::make_unique<UnitSquareArena>(cfg.params.vehicle_speed);
    }
    return std::make_unique<RoadGraphArena>(*cfg.graph, cfg.params.vehicle_speed);
}

namespace {

// Generation tables extend past the horizon so forecasts for late assignments
// still see the tail of the day; beyond the table the forecast is zero.
constexpr double kSeriesMarginS = 14400.0;

} // namespace

Engine::Engine(const ScenarioConfig& cfg, const Arena& arena, std::uint64_t run_seed)
    : cfg_(cfg),
      arena_(arena),
      seed_(run_seed),
      controller_{cfg.initial_bond, cfg.q_bar, cfg.k_p, cfg.k_i, 0.0, cfg.c_min, cfg.c_max},
      estimator_(cfg.settlement_window, cfg.q_bar),
      arrivals_rng_(make_stream(run_seed, Stream::arrivals)),
      assignment_rng_(make_stream(run_seed, Stream::assignment)),
      compliance_rng_(make_stream(run_seed, Stream::compliance)) {
    if (cfg.weights_mode == WeightsMode::sweep) {
        throw ConfigError("weights.mode 'sweep' does not run directly; use the sweep command");
    }
    if (cfg.ledger_enabled) {
        ledger_.emplace(cfg.pow_delay_steps,
                        splitmix64(run_seed ^ static_cast<std::uint64_t>(Stream::ledger)));
    }

    const double table_len = cfg.params.horizon_s + kSeriesMarginS;
    stations_.reserve(cfg.stations.size());
    for (std::size_t i = 0; i < cfg.stations.size(); ++i) {
        const StationSpec& spec = cfg.stations[i];
        StationRuntime rt;
        rt.station.id = static_cast<StationId>(i);
        rt.station.position = spec.position;
        rt.station.node = spec.node_id.empty() ? -1
                                               : cfg.graph->index_of(spec.node_id);
        rt.station.renewable = RenewableProfile{spec.renewable, spec.nominal_kw};
        rt.station.tariff_eur_per_kwh = cfg.tariff_eur_per_kwh;
        rt.station.account_id = "cs-" + std::to_string(i);
        rt.site = StationSite{spec.position, rt.station.node};
        Rng wind_rng = make_stream(run_seed, Stream::wind, i);
        rt.series = realize_generation(rt.station.renewable, table_len, cfg.daylight_start_s,
                                       cfg.daylight_end_s, wind_rng);
        rt.totals.id = rt.station.id;
        if (ledger_) ledger_->create_account(rt.station.account_id, 0.0, 0.0);
        stations_.push_back(std::move(rt));
    }
}

StationSnapshot Engine::snapshot_of(const StationRuntime& s) const {
    StationSnapshot snap;
    snap.id = s.station.id;
    snap.position = s.station.position;
    snap.node = s.station.node;
    snap.tariff_eur_per_kwh = s.station.tariff_eur_per_kwh;
    snap.queued_energy_kwh = std::max(0.0, s.queue_kwh + s.committed_kwh);
    snap.now_s = clock_s_;
    snap.res_energy_kwh = [series = &s.series](double from, double to) {
        return series->energy_kwh(from, to);
    };
    return snap;
}

double Engine::station_queued_kwh(StationId id) const {
    const auto& s = stations_.at(static_cast<std::size_t>(id));
    return s.queue_kwh + s.committed_kwh;
}

void Engine::record_event(const char* kind, VehicleId vehicle, StationId station, double value) {
    events_.push_back(EventRow{clock_s_, kind, vehicle, station, value});
}

double Engine::current_q() const {
    switch (cfg_.compliance_mode) {
        case ComplianceMode::off: return 1.0;
        case ComplianceMode::fixed: return cfg_.fixed_q;
        case ComplianceMode::closed_loop:
            return compliance_response(cfg_.model, controller_.bond_value);
    }
    return 1.0;
}

void Engine::admit_vehicle(const Vehicle& v) {
    if (v.id != records_.size()) {
        throw DomainError("vehicle ids must be dense and unique within a run");
    }
    VehicleBroadcast broadcast{v.position, v.node, v.weights, v.request.amount_kwh};

    std::vector<StationSnapshot> snapshots;
    std::vector<TravelEstimate> travels;
    snapshots.reserve(stations_.size());
    travels.reserve(stations_.size());
    const SpawnPoint origin{v.position, v.node};
    for (const auto& s : stations_) {
        snapshots.push_back(snapshot_of(s));
        travels.push_back(arena_.estimate(origin, s.site));
    }

    AssignmentOutcome outcome =
        cfg_.solver == SolverKind::centralized
            ? centralized_assign(v.id, broadcast, snapshots, travels, cfg_.params)
            : decentralized_assign(v.id, broadcast, snapshots, travels, cfg_.params,
                                   assignment_rng_, cfg_.signal_step_cap);

    const auto assigned = static_cast<std::size_t>(outcome.station_id);

    std::size_t nearest = 0;
    for (std::size_t i = 1; i < stations_.size(); ++i) {
        if (travels[i].distance < travels[nearest].distance) nearest = i;
    }

    VehicleRecord rec;
    rec.id = v.id;
    rec.spawn_s = v.spawn_time_s;
    rec.alpha = {v.weights.alpha_time(), v.weights.alpha_price(), v.weights.alpha_dist()};
    rec.request_kwh = v.request.amount_kwh;
    rec.assigned_station = outcome.station_id;
    rec.wait_steps = outcome.wait_steps;
    rec.assign_distance = travels[assigned].distance;
    stations_[assigned].totals.assignments += 1;
    record_event("assign", v.id, outcome.station_id, outcome.cost_at_assignment.aggregate);

    // Compliance resolution; going "elsewhere" to the station you were
    // assigned to is not a defection.
    std::size_t target = assigned;
    if (cfg_.compliance_mode != ComplianceMode::off) {
        const StationId chosen =
            resolve_compliance(outcome.station_id, stations_[nearest].station.id, current_q(),
                               compliance_rng_);
        target = static_cast<std::size_t>(chosen);
    }

    // Bond escrow; drivers who cannot post the bond are not admitted to the
    // matchmaking scheme and fall back to the nearest station, uncommitted.
    bool admitted = true;
    std::optional<ContractId> contract;
    const double deadline_s =
        v.spawn_time_s + travels[assigned].travel_time_s * cfg_.deadline_slack;
    if (ledger_) {
        const std::string account = "veh-" + std::to_string(v.id);
        ledger_->create_account(account, cfg_.resolved_initial_balance(), clock_s_);
        const double bond = cfg_.compliance_mode == ComplianceMode::closed_loop
                                ? controller_.bond_value
                                : cfg_.bond_tokens;
        try {
            contract = ledger_->open_escrow(account, stations_[assigned].station.account_id,
                                            outcome.station_id, bond, deadline_s, clock_s_);
            record_event("escrow_open", v.id, outcome.station_id, bond);
        } catch (const InsufficientBalance&) {
            admitted = false;
            target = nearest;
            record_event("rejected", v.id, outcome.station_id, bond);
        }
    }

    rec.admitted = admitted;
    rec.defected = target != assigned;
    rec.actual_station = stations_[target].station.id;
    rec.travel_time_s = travels[target].travel_time_s;
    rec.arrival_s = v.spawn_time_s + travels[target].travel_time_s;

    if (admitted) {
        stations_[assigned].committed_kwh += v.request.amount_kwh;
        if (rec.defected) {
            purges_.push_back(PendingPurge{v.id, outcome.station_id, deadline_s,
                                           v.request.amount_kwh, contract});
            record_event("defect", v.id, stations_[target].station.id,
                         travels[target].distance);
        }
    }

    // Price is locked now, against the station the vehicle will actually
    // charge at (forecast = realized).
    const CostBreakdown target_cost =
        target == assigned
            ? outcome.cost_at_assignment
            : evaluate_station_cost(broadcast, snapshots[target], travels[target], cfg_.params);
    rec.price_eur = price_eur(v.request.amount_kwh,
                              (1.0 - target_cost.p_component) * v.request.amount_kwh,
                              cfg_.tariff_eur_per_kwh);
    rec.res_used_kwh = (1.0 - target_cost.p_component) * v.request.amount_kwh;

    in_transit_.push_back(Transit{v.id, stations_[target].station.id, rec.arrival_s});
    records_.push_back(rec);
    contract_of_.push_back(contract);
}

void Engine::spawn_step() {
    int spawns = 0;
    if (cfg_.params.arrival_rate_per_s > 0.0) {
        std::poisson_distribution<int> pois(cfg_.params.arrival_rate_per_s);
        spawns = pois(arrivals_rng_);
    }
    for (int k = 0; k < spawns; ++k) {
        const SpawnPoint sp = arena_.sample_spawn(arrivals_rng_);
        const EnergyRequest req =
            sample_energy_request(arrivals_rng_, cfg_.energy_mean_kwh, cfg_.energy_std_kwh,
                                  cfg_.energy_min_kwh, cfg_.energy_max_kwh);
        std::array<double, 3> alpha = cfg_.fixed_alpha;
        if (cfg_.weights_mode == WeightsMode::mixture) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            double pick = u(arrivals_rng_);
            for (const auto& g : cfg_.groups) {
                if (pick < g.fraction || &g == &cfg_.groups.back()) {
                    alpha = g.alpha;
                    break;
                }
                pick -= g.fraction;
            }
        }
        Vehicle v;
        v.id = next_vehicle_id_++;
        v.position = sp.pos;
        v.node = sp.node;
        v.request = req;
        v.weights = PreferenceWeights(alpha[0], alpha[1], alpha[2]);
        v.spawn_time_s = clock_s_;
        record_event("spawn", v.id, -1, req.amount_kwh);
        admit_vehicle(v);
    }
}

void Engine::process_arrivals() {
    // Vehicles join queues in true arrival order; same-instant ties break by id.
    std::vector<Transit> due;
    for (std::size_t i = 0; i < in_transit_.size();) {
        if (in_transit_[i].arrival_s > clock_s_) {
            ++i;
        } else {
            due.push_back(in_transit_[i]);
            in_transit_[i] = in_transit_.back();
            in_transit_.pop_back();
        }
    }
    std::sort(due.begin(), due.end(), [](const Transit& a, const Transit& b) {
        return a.arrival_s != b.arrival_s ? a.arrival_s < b.arrival_s : a.vehicle < b.vehicle;
    });

    for (const Transit& t : due) {
        VehicleRecord& rec = records_[t.vehicle];
        auto& station = stations_[static_cast<std::size_t>(t.target)];
        if (rec.admitted && !rec.defected) {
            station.committed_kwh -= rec.request_kwh; // moves into the physical queue
        }
        station.queue.emplace_back(t.vehicle, rec.request_kwh);
        station.queue_kwh += rec.request_kwh;
        record_event("arrive", t.vehicle, t.target, rec.request_kwh);

        if (ledger_) {
            const std::string account = "veh-" + std::to_string(t.vehicle);
            ledger_->observers().record_presence(account, t.target, rec.arrival_s);
            if (rec.admitted && !rec.defected && contract_of_[t.vehicle]) {
                const std::string observer = "obs-cs-" + std::to_string(t.target);
                const PopAttestation pop = ledger_->observers().attest_position(
                    observer, account, t.target, rec.arrival_s);
                const EscrowContract& c =
                    ledger_->settle_escrow(*contract_of_[t.vehicle], pop, clock_s_);
                record_event("escrow_return", t.vehicle, t.target, c.bond_amount);
                settlement_observed(true);
            }
        }
    }
}

void Engine::process_purges() {
    std::vector<PendingPurge> due;
    for (std::size_t i = 0; i < purges_.size();) {
        if (purges_[i].purge_after_s >= clock_s_) {
            ++i;
        } else {
            due.push_back(purges_[i]);
            purges_[i] = purges_.back();
            purges_.pop_back();
        }
    }
    std::sort(due.begin(), due.end(), [](const PendingPurge& a, const PendingPurge& b) {
        return a.purge_after_s != b.purge_after_s ? a.purge_after_s < b.purge_after_s
                                                  : a.vehicle < b.vehicle;
    });

    for (const PendingPurge& p : due) {
        auto& station = stations_[static_cast<std::size_t>(p.station)];
        station.committed_kwh -= p.energy_kwh; // phantom entry expires
        record_event("purge", p.vehicle, p.station, p.energy_kwh);
        if (ledger_ && p.contract) {
            ledger_->settle_escrow(*p.contract, std::nullopt, clock_s_);
            station.totals.forfeits += 1;
            record_event("escrow_forfeit", p.vehicle, p.station,
                         ledger_->contract(*p.contract).bond_amount);
            settlement_observed(false);
        }
    }
}

void Engine::charge_step() {
    const double e_r = cfg_.params.charge_rate_kwh_per_s;
    for (auto& s : stations_) {
        if (s.queue.empty()) continue;
        auto& [vehicle, remaining] = s.queue.front();
        VehicleRecord& rec = records_[vehicle];
        if (rec.charge_start_s < 0.0) {
            rec.charge_start_s = clock_s_;
            record_event("charge_start", vehicle, s.station.id, remaining);
        }
        const double delivered = std::min(e_r, remaining);
        remaining -= delivered;
        s.queue_kwh -= delivered;
        s.totals.energy_delivered_kwh += delivered;
        if (remaining <= 1e-12) {
            s.queue_kwh -= remaining; // absorb float residue
            rec.charge_end_s = clock_s_ + 1.0;
            rec.completed = true;
            s.totals.completions += 1;
            record_event("complete", vehicle, s.station.id, rec.request_kwh);
            s.queue.pop_front();
            if (s.queue.empty()) s.queue_kwh = 0.0;
        }
    }
}

void Engine::verify_queue_accounting() const {
    std::vector<double> committed(stations_.size(), 0.0);
    for (const auto& t : in_transit_) {
        const VehicleRecord& rec = records_[t.vehicle];
        if (rec.admitted && !rec.defected) {
            committed[static_cast<std::size_t>(t.target)] += rec.request_kwh;
        }
    }
    for (const auto& p : purges_) {
        committed[static_cast<std::size_t>(p.station)] += p.energy_kwh;
    }
    for (std::size_t i = 0; i < stations_.size(); ++i) {
        const auto& s = stations_[i];
        double queue_sum = 0.0;
        for (const auto& [vehicle, remaining] : s.queue) queue_sum += remaining;
        if (std::abs(queue_sum - s.queue_kwh) > 1e-6 ||
            std::abs(committed[i] - s.committed_kwh) > 1e-6) {
            std::ostringstream os;
            os << "queue accounting broken at station " << i << ": tracked queue " << s.queue_kwh
               << " vs " << queue_sum << ", tracked committed " << s.committed_kwh << " vs "
               << committed[i];
            throw DomainError(os.str());
        }
    }
}

void Engine::settlement_observed(bool returned) {
    estimator_.record(returned);
    ++settlements_seen_;
    if (cfg_.compliance_mode == ComplianceMode::closed_loop &&
        settlements_seen_ % static_cast<std::size_t>(cfg_.settlement_window) == 0) {
        controller_ = controller_step(controller_, estimator_.estimate());
        controller_trace_.push_back(
            ControllerSample{clock_s_, estimator_.estimate(), controller_.bond_value});
    }
}

void Engine::step() {
    if (ledger_) ledger_->advance(clock_s_);
    spawn_step();
    process_arrivals();
    process_purges();
    charge_step();

    double total_queued = 0.0;
    for (const auto& s : stations_) total_queued += s.queue_kwh + s.committed_kwh;
    mean_queue_minutes_.push_back(total_queued / static_cast<double>(stations_.size()) /
                                  cfg_.params.charge_rate_kwh_per_s / 60.0);

    verify_queue_accounting();
    clock_s_ += 1.0;
}

RunResult Engine::run() {
    while (clock_s_ < cfg_.params.horizon_s) step();

    // Energy conservation: everything delivered is accounted to a vehicle.
    double delivered = 0.0;
    for (const auto& s : stations_) delivered += s.totals.energy_delivered_kwh;
    double accounted = 0.0;
    for (const auto& rec : records_) {
        if (rec.completed) accounted += rec.request_kwh;
    }
    for (const auto& s : stations_) {
        for (const auto& [vehicle, remaining] : s.queue) {
            accounted += records_[vehicle].request_kwh - remaining;
        }
    }
    if (std::abs(delivered - accounted) > 1e-6) {
        throw DomainError("energy conservation violated: delivered " + std::to_string(delivered) +
                          " kWh vs accounted " + std::to_string(accounted));
    }
    if (ledger_ && !ledger_->conservation_holds()) {
        throw DomainError("ledger token conservation violated");
    }

    RunResult result;
    result.seed = seed_;
    result.vehicles = records_;
    result.stations.reserve(stations_.size());
    for (auto& s : stations_) {
        s.totals.renewable_generated_kwh = s.series.energy_kwh(0.0, cfg_.params.horizon_s);
        result.stations.push_back(s.totals);
    }
    result.mean_queue_minutes = mean_queue_minutes_;
    result.controller = controller_trace_;
    result.events = events_;
    if (ledger_) {
        std::ostringstream dump;
        ledger_->dump(dump);
        result.ledger_dump = dump.str();
    }
    return result;
}

RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t run_seed) {
    const auto arena = build_arena(cfg);
    Engine engine(cfg, *arena, run_seed);
    return engine.run();
}

std::vector<RunResult> run_monte_carlo(const ScenarioConfig& cfg, int n_runs,
                                       std::uint64_t base_seed) {
    if (n_runs < 1) throw DomainError("n_runs must be >= 1");
    const auto arena = build_arena(cfg);
    std::vector<RunResult> results(static_cast<std::size_t>(n_runs));

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(n_runs));
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int k = next.fetch_add(1); k < n_runs; k = next.fetch_add(1)) {
                    Engine engine(cfg, *arena, base_seed + static_cast<std::uint64_t>(k));
                    results[static_cast<std::size_t>(k)] = engine.run();
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

} // namespace pevsim
