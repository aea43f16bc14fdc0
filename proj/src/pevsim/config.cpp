#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace pevsim {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) bad(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) bad(path + "." + key, "unknown key");
    }
}

double get_number(const json& obj, const std::string& path, const std::string& key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number()) bad(path + "." + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const std::string& key, int dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) bad(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_string()) bad(path + "." + key, "expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key, bool dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) bad(path + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::array<double, 3> get_alpha(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) bad(path, "expected an array of 3 weights");
    std::array<double, 3> a{};
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number()) bad(path, "weights must be numbers");
        a[i] = v[i].get<double>();
    }
    try {
        PreferenceWeights w(a[0], a[1], a[2]);
        (void)w;
    } catch (const NonConvexWeights& e) {
        bad(path, e.what());
    }
    return a;
}

std::vector<StationSpec> resolve_stations(const json& st, const std::string& path,
                                          const ScenarioConfig& cfg, int count,
                                          const std::string& placement, std::uint64_t base_seed) {
    std::vector<StationSpec> specs(count);

    if (cfg.arena_mode == ArenaMode::unit_square) {
        if (st.contains("nodes")) bad(path + ".nodes", "not meaningful in unit_square mode");
        if (placement == "explicit") {
            if (!st.contains("positions")) bad(path, "explicit placement needs 'positions'");
            const json& pos = st.at("positions");
            if (!pos.is_array() || static_cast<int>(pos.size()) != count) {
                bad(path + ".positions", "expected " + std::to_string(count) + " entries");
            }
            for (int i = 0; i < count; ++i) {
                const json& p = pos[i];
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                    bad(path + ".positions[" + std::to_string(i) + "]", "expected [x, y]");
                }
                specs[i].position = Position{p[0].get<double>(), p[1].get<double>()};
            }
        } else if (placement == "grid") {
            const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
            const int rows = (count + cols - 1) / cols;
            for (int i = 0; i < count; ++i) {
                specs[i].position = Position{(i % cols + 0.5) / cols, (i / cols + 0.5) / rows};
            }
        } else if (placement == "uniform") {
            Rng rng = make_stream(base_seed, Stream::placement);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (int i = 0; i < count; ++i) {
                const double x = u(rng);
                const double y = u(rng);
                specs[i].position = Position{x, y};
            }
        } else {
            bad(path + ".placement", "expected grid, uniform or explicit");
        }
        for (int i = 0; i < count; ++i) {
            const Position& p = specs[i].position;
            if (!p.finite() || p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0) {
                bad(path + ".positions[" + std::to_string(i) + "]", "outside the unit square");
            }
        }
    } else {
        const RoadGraph& g = *cfg.graph;
        if (st.contains("positions")) bad(path + ".positions", "not meaningful in road_graph mode");
        if (placement == "explicit") {
            if (!st.contains("nodes")) bad(path, "explicit placement needs 'nodes'");
            const json& nodes = st.at("nodes");
            if (!nodes.is_array() || static_cast<int>(nodes.size()) != count) {
                bad(path + ".nodes", "expected " + std::to_string(count) + " entries");
            }
            for (int i = 0; i < count; ++i) {
                if (!nodes[i].is_string()) bad(path + ".nodes", "node ids must be strings");
                specs[i].node_id = nodes[i].get<std::string>();
            }
        } else if (placement == "uniform") {
            if (count > g.node_count()) bad(path + ".count", "more stations than graph nodes");
            std::vector<int> order(g.node_count());
            std::iota(order.begin(), order.end(), 0);
            Rng rng = make_stream(base_seed, Stream::placement);
            std::shuffle(order.begin(), order.end(), rng);
            for (int i = 0; i < count; ++i) specs[i].node_id = g.node(order[i]).id;
        } else {
            bad(path + ".placement", "road-graph mode supports uniform or explicit placement");
        }
        for (int i = 0; i < count; ++i) {
            try {
                specs[i].position = g.node(g.index_of(specs[i].node_id)).pos;
            } catch (const Unreachable&) {
                bad(path + ".nodes[" + std::to_string(i) + "]",
                    "node '" + specs[i].node_id + "' not in graph");
            }
        }
    }

    // Renewable assignment: explicit array, or the mixed pv/wind/none pattern.
    std::vector<RenewableKind> kinds(count, RenewableKind::none);
    if (st.contains("renewables")) {
        const json& ren = st.at("renewables");
        if (ren.is_string()) {
            const std::string pattern = ren.get<std::string>();
            if (pattern == "mixed") {
                for (int i = 0; i < count; ++i) {
                    kinds[i] = i % 3 == 0   ? RenewableKind::pv
                               : i % 3 == 1 ? RenewableKind::wind
                                            : RenewableKind::none;
                }
            } else if (pattern != "none") {
                bad(path + ".renewables", "expected 'mixed', 'none' or an array");
            }
        } else if (ren.is_array()) {
            if (static_cast<int>(ren.size()) != count) {
                bad(path + ".renewables", "expected " + std::to_string(count) + " entries");
            }
            for (int i = 0; i < count; ++i) {
                if (!ren[i].is_string()) bad(path + ".renewables", "kinds must be strings");
                try {
                    kinds[i] = renewable_kind_from_string(ren[i].get<std::string>());
                } catch (const ConfigError& e) {
                    bad(path + ".renewables[" + std::to_string(i) + "]", e.what());
                }
            }
        } else {
            bad(path + ".renewables", "expected 'mixed', 'none' or an array");
        }
    }
    for (int i = 0; i < count; ++i) {
        specs[i].renewable = kinds[i];
        specs[i].nominal_kw = kinds[i] == RenewableKind::pv    ? cfg.pv_nominal_kw
                              : kinds[i] == RenewableKind::wind ? cfg.wind_nominal_kw
                                                                : 0.0;
    }
    return specs;
}

json build_echo(const ScenarioConfig& c) {
    json e;
    e["version"] = kConfigVersion;
    e["tool_version"] = kToolVersion;

    json arena;
    arena["mode"] = c.arena_mode == ArenaMode::unit_square ? "unit_square" : "road_graph";
    if (c.arena_mode == ArenaMode::road_graph) arena["graph_file"] = c.graph_file;
    e["arena"] = arena;

    json st;
    st["count"] = static_cast<int>(c.stations.size());
    st["placement"] = "explicit";
    if (c.arena_mode == ArenaMode::unit_square) {
        json pos = json::array();
        for (const auto& s : c.stations) pos.push_back({s.position.x, s.position.y});
        st["positions"] = pos;
    } else {
        json nodes = json::array();
        for (const auto& s : c.stations) nodes.push_back(s.node_id);
        st["nodes"] = nodes;
    }
    json ren = json::array();
    for (const auto& s : c.stations) ren.push_back(to_string(s.renewable));
    st["renewables"] = ren;
    st["pv_nominal_kw"] = c.pv_nominal_kw;
    st["wind_nominal_kw"] = c.wind_nominal_kw;
    st["pv_daylight_s"] = {c.daylight_start_s, c.daylight_end_s};
    st["tariff_eur_per_kwh"] = c.tariff_eur_per_kwh;
    e["stations"] = st;

    json sim;
    sim["charge_rate_kwh_per_s"] = c.params.charge_rate_kwh_per_s;
    sim["m_max_s"] = c.params.m_max_s;
    sim["d_max"] = c.params.d_max;
    sim["vehicle_speed"] = c.params.vehicle_speed;
    sim["arrival_rate_per_s"] = c.params.arrival_rate_per_s;
    sim["horizon_s"] = c.params.horizon_s;
    sim["energy_mean_kwh"] = c.energy_mean_kwh;
    sim["energy_std_kwh"] = c.energy_std_kwh;
    sim["energy_min_kwh"] = c.energy_min_kwh;
    sim["energy_max_kwh"] = c.energy_max_kwh;
    sim["signal_step_cap"] = c.signal_step_cap;
    e["sim"] = sim;

    json w;
    if (c.weights_mode == WeightsMode::fixed) {
        w["mode"] = "fixed";
        w["alpha"] = c.fixed_alpha;
    } else if (c.weights_mode == WeightsMode::mixture) {
        w["mode"] = "mixture";
        json groups = json::array();
        for (const auto& g : c.groups) {
            json jg;
            jg["alpha"] = g.alpha;
            jg["fraction"] = g.fraction;
            groups.push_back(jg);
        }
        w["groups"] = groups;
    } else {
        w["mode"] = "sweep";
    }
    e["weights"] = w;

    e["solver"] = to_string(c.solver);

    json comp;
    comp["mode"] = to_string(c.compliance_mode);
    if (c.compliance_mode == ComplianceMode::fixed) comp["q"] = c.fixed_q;
    if (c.compliance_mode == ComplianceMode::closed_loop) {
        comp["q0"] = c.model.q0;
        comp["c0"] = c.model.c0;
        comp["q_bar"] = c.q_bar;
        comp["k_p"] = c.k_p;
        comp["k_i"] = c.k_i;
        comp["c_min"] = c.c_min;
        comp["c_max"] = c.c_max;
        comp["window"] = c.settlement_window;
        comp["initial_bond"] = c.initial_bond;
    }
    e["compliance"] = comp;

    json led;
    led["enabled"] = c.ledger_enabled;
    led["pow_delay_steps"] = c.pow_delay_steps;
    led["bond_tokens"] = c.bond_tokens;
    led["deadline_slack"] = c.deadline_slack;
    led["initial_balance_tokens"] = c.initial_balance_tokens;
    e["ledger"] = led;

    json mc;
    mc["n_runs"] = c.n_runs;
    mc["base_seed"] = c.base_seed;
    e["monte_carlo"] = mc;

    json out;
    out["dir"] = c.output_dir;
    out["reports"] = c.reports;
    e["outputs"] = out;

    return e;
}

} // namespace

std::string to_string(SolverKind s) {
    return s == SolverKind::centralized ? "centralized" : "decentralized";
}

std::string to_string(ComplianceMode m) {
    switch (m) {
        case ComplianceMode::off: return "off";
        case ComplianceMode::fixed: return "fixed";
        case ComplianceMode::closed_loop: return "closed_loop";
    }
    return "off";
}

ScenarioConfig parse_and_validate(const json& raw, const std::string& base_dir) {
    ScenarioConfig c;
    require_keys(raw, "config",
                 {"version", "tool_version", "arena", "stations", "sim", "weights", "solver",
                  "compliance", "ledger", "monte_carlo", "outputs"});

    const int version = get_int(raw, "config", "version", kConfigVersion);
    if (version != kConfigVersion) {
        bad("config.version", "unsupported version " + std::to_string(version));
    }
    if (raw.contains("tool_version") && !raw.at("tool_version").is_string()) {
        bad("config.tool_version", "expected a string");
    }

    // arena
    if (!raw.contains("arena")) bad("config", "missing 'arena'");
    const json& arena = raw.at("arena");
    require_keys(arena, "config.arena", {"mode", "graph_file"});
    const std::string mode = get_string(arena, "config.arena", "mode", "");
    if (mode == "unit_square") {
        c.arena_mode = ArenaMode::unit_square;
        if (arena.contains("graph_file")) {
            bad("config.arena.graph_file", "not meaningful in unit_square mode");
        }
    } else if (mode == "road_graph") {
        c.arena_mode = ArenaMode::road_graph;
        c.graph_file = get_string(arena, "config.arena", "graph_file", "");
        if (c.graph_file.empty()) bad("config.arena", "road_graph mode needs 'graph_file'");
        std::filesystem::path p(c.graph_file);
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        try {
            c.graph = std::make_shared<RoadGraph>(RoadGraph::load_file(p.string()));
        } catch (const Error& e) {
            bad("config.arena.graph_file", e.what());
        }
        c.graph_file = p.lexically_normal().generic_string();
    } else {
        bad("config.arena.mode", "expected unit_square or road_graph");
    }

    // monte carlo first: placement may need the base seed
    if (!raw.contains("monte_carlo")) bad("config", "missing 'monte_carlo'");
    const json& mc = raw.at("monte_carlo");
    require_keys(mc, "config.monte_carlo", {"n_runs", "base_seed"});
    c.n_runs = get_int(mc, "config.monte_carlo", "n_runs", 20);
    if (c.n_runs < 1) bad("config.monte_carlo.n_runs", "must be >= 1");
    if (mc.contains("base_seed")) {
        if (!mc.at("base_seed").is_number_unsigned() && !mc.at("base_seed").is_number_integer()) {
            bad("config.monte_carlo.base_seed", "expected an integer");
        }
        c.base_seed = mc.at("base_seed").get<std::uint64_t>();
    }

    // sim
    const json sim = raw.contains("sim") ? raw.at("sim") : json::object();
    require_keys(sim, "config.sim",
                 {"charge_rate_kwh_per_s", "m_max_s", "d_max", "vehicle_speed",
                  "arrival_rate_per_s", "horizon_s", "energy_mean_kwh", "energy_std_kwh",
                  "energy_min_kwh", "energy_max_kwh", "signal_step_cap"});
    c.params.charge_rate_kwh_per_s = get_number(sim, "config.sim", "charge_rate_kwh_per_s", 0.0061);
    c.params.m_max_s = get_number(sim, "config.sim", "m_max_s", 3600.0);
    c.params.horizon_s = get_number(sim, "config.sim", "horizon_s", 25200.0);
    c.params.arrival_rate_per_s =
        get_number(sim, "config.sim", "arrival_rate_per_s", 500.0 / 25200.0);
    const double default_speed = c.arena_mode == ArenaMode::unit_square ? 0.02 : 10.0;
    c.params.vehicle_speed = get_number(sim, "config.sim", "vehicle_speed", default_speed);
    const double default_d_max =
        c.arena_mode == ArenaMode::unit_square ? std::sqrt(2.0) : c.graph->diameter();
    const double d_max_in = get_number(sim, "config.sim", "d_max", 0.0);
    c.params.d_max = d_max_in > 0.0 ? d_max_in : default_d_max;
    c.energy_mean_kwh = get_number(sim, "config.sim", "energy_mean_kwh", 5.0);
    c.energy_std_kwh = get_number(sim, "config.sim", "energy_std_kwh", 1.2);
    c.energy_min_kwh = get_number(sim, "config.sim", "energy_min_kwh", 1.0);
    c.energy_max_kwh = get_number(sim, "config.sim", "energy_max_kwh", kDefaultMaxRequestKwh);
    c.signal_step_cap = get_int(sim, "config.sim", "signal_step_cap", 10000);
    try {
        c.params.validate();
    } catch (const DomainError& e) {
        bad("config.sim", e.what());
    }
    if (!(c.energy_min_kwh > 0.0) || !(c.energy_max_kwh > c.energy_min_kwh)) {
        bad("config.sim", "energy bounds need 0 < min < max");
    }
    if (c.energy_std_kwh < 0.0) bad("config.sim.energy_std_kwh", "must be nonnegative");
    if (c.signal_step_cap < 1) bad("config.sim.signal_step_cap", "must be >= 1");

    // stations
    if (!raw.contains("stations")) bad("config", "missing 'stations'");
    const json& st = raw.at("stations");
    require_keys(st, "config.stations",
                 {"count", "placement", "positions", "nodes", "renewables", "pv_nominal_kw",
                  "wind_nominal_kw", "pv_daylight_s", "tariff_eur_per_kwh"});
    const int count = get_int(st, "config.stations", "count", 12);
    if (count < 1) bad("config.stations.count", "must be >= 1");
    c.tariff_eur_per_kwh = get_number(st, "config.stations", "tariff_eur_per_kwh", 0.45);
    if (!(c.tariff_eur_per_kwh > 0.0)) bad("config.stations.tariff_eur_per_kwh", "must be > 0");
    c.pv_nominal_kw = get_number(st, "config.stations", "pv_nominal_kw", 10.0);
    c.wind_nominal_kw = get_number(st, "config.stations", "wind_nominal_kw", 5.0);
    if (c.pv_nominal_kw < 0.0 || c.wind_nominal_kw < 0.0) {
        bad("config.stations", "nominal powers must be nonnegative");
    }
    c.daylight_start_s = 0.0;
    c.daylight_end_s = c.params.horizon_s;
    if (st.contains("pv_daylight_s")) {
        const json& dl = st.at("pv_daylight_s");
        if (!dl.is_array() || dl.size() != 2 || !dl[0].is_number() || !dl[1].is_number()) {
            bad("config.stations.pv_daylight_s", "expected [start_s, end_s]");
        }
        c.daylight_start_s = dl[0].get<double>();
        c.daylight_end_s = dl[1].get<double>();
        if (!(c.daylight_end_s > c.daylight_start_s)) {
            bad("config.stations.pv_daylight_s", "end must be after start");
        }
    }
    const std::string placement = get_string(st, "config.stations", "placement", "grid");
    c.stations = resolve_stations(st, "config.stations", c, count, placement, c.base_seed);

    // weights
    const json w = raw.contains("weights") ? raw.at("weights") : json::object();
    require_keys(w, "config.weights", {"mode", "alpha", "groups"});
    const std::string wmode = get_string(w, "config.weights", "mode", "fixed");
    if (wmode == "fixed") {
        c.weights_mode = WeightsMode::fixed;
        if (w.contains("alpha")) c.fixed_alpha = get_alpha(w.at("alpha"), "config.weights.alpha");
    } else if (wmode == "mixture") {
        c.weights_mode = WeightsMode::mixture;
        if (!w.contains("groups")) bad("config.weights", "mixture mode needs 'groups'");
        const json& groups = w.at("groups");
        if (!groups.is_array() || groups.empty()) {
            bad("config.weights.groups", "expected a non-empty array");
        }
        double total = 0.0;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const std::string gpath = "config.weights.groups[" + std::to_string(i) + "]";
            require_keys(groups[i], gpath, {"alpha", "fraction"});
            WeightGroup g;
            if (!groups[i].contains("alpha")) bad(gpath, "missing 'alpha'");
            g.alpha = get_alpha(groups[i].at("alpha"), gpath + ".alpha");
            g.fraction = get_number(groups[i], gpath, "fraction", -1.0);
            if (!(g.fraction >= 0.0)) bad(gpath + ".fraction", "must be nonnegative");
            total += g.fraction;
            c.groups.push_back(g);
        }
        if (std::abs(total - 1.0) > 1e-9) {
            bad("config.weights.groups", "fractions must sum to 1");
        }
    } else if (wmode == "sweep") {
        c.weights_mode = WeightsMode::sweep;
    } else {
        bad("config.weights.mode", "expected fixed, mixture or sweep");
    }

    // solver
    std::string solver = "decentralized";
    if (raw.contains("solver")) {
        if (!raw.at("solver").is_string()) bad("config.solver", "expected a string");
        solver = raw.at("solver").get<std::string>();
    }
    if (solver == "centralized") c.solver = SolverKind::centralized;
    else if (solver == "decentralized") c.solver = SolverKind::decentralized;
    else bad("config.solver", "expected centralized or decentralized");

    // ledger (before compliance: closed loop requires it)
    const json led = raw.contains("ledger") ? raw.at("ledger") : json::object();
    require_keys(led, "config.ledger",
                 {"enabled", "pow_delay_steps", "bond_tokens", "deadline_slack",
                  "initial_balance_tokens"});
    c.ledger_enabled = get_bool(led, "config.ledger", "enabled", false);
    c.pow_delay_steps = get_int(led, "config.ledger", "pow_delay_steps", 2);
    if (c.pow_delay_steps < 0) bad("config.ledger.pow_delay_steps", "must be >= 0");
    c.bond_tokens = get_number(led, "config.ledger", "bond_tokens", 5.0);
    if (c.bond_tokens < 0.0) bad("config.ledger.bond_tokens", "must be nonnegative");
    c.deadline_slack = get_number(led, "config.ledger", "deadline_slack", 2.0);
    if (c.deadline_slack < 1.0) {
        bad("config.ledger.deadline_slack", "must be >= 1 or compliant drivers miss deadlines");
    }
    c.initial_balance_tokens = get_number(led, "config.ledger", "initial_balance_tokens", 0.0);
    if (c.initial_balance_tokens < 0.0) {
        bad("config.ledger.initial_balance_tokens", "must be nonnegative");
    }

    // compliance
    const json comp = raw.contains("compliance") ? raw.at("compliance") : json::object();
    require_keys(comp, "config.compliance",
                 {"mode", "q", "q0", "c0", "q_bar", "k_p", "k_i", "c_min", "c_max", "window",
                  "initial_bond"});
    const std::string cmode = get_string(comp, "config.compliance", "mode", "off");
    if (cmode == "off") {
        c.compliance_mode = ComplianceMode::off;
    } else if (cmode == "fixed") {
        c.compliance_mode = ComplianceMode::fixed;
        c.fixed_q = get_number(comp, "config.compliance", "q", 1.0);
        if (c.fixed_q < 0.0 || c.fixed_q > 1.0) {
            bad("config.compliance.q", "must be in [0, 1]");
        }
    } else if (cmode == "closed_loop") {
        c.compliance_mode = ComplianceMode::closed_loop;
        c.model.q0 = get_number(comp, "config.compliance", "q0", 0.4);
        c.model.c0 = get_number(comp, "config.compliance", "c0", 5.0);
        c.q_bar = get_number(comp, "config.compliance", "q_bar", 0.9);
        c.k_p = get_number(comp, "config.compliance", "k_p", 20.0);
        c.k_i = get_number(comp, "config.compliance", "k_i", 2.0);
        c.c_min = get_number(comp, "config.compliance", "c_min", 0.0);
        c.c_max = get_number(comp, "config.compliance", "c_max", 50.0);
        c.settlement_window = get_int(comp, "config.compliance", "window", 20);
        c.initial_bond = get_number(comp, "config.compliance", "initial_bond", 5.0);
        if (c.model.q0 < 0.0 || c.model.q0 > 1.0) bad("config.compliance.q0", "must be in [0, 1]");
        if (!(c.model.c0 > 0.0)) bad("config.compliance.c0", "must be > 0");
        if (c.q_bar < 0.0 || c.q_bar > 1.0) bad("config.compliance.q_bar", "must be in [0, 1]");
        if (c.c_min < 0.0 || c.c_max < c.c_min) {
            bad("config.compliance", "bond bounds need 0 <= c_min <= c_max");
        }
        if (c.settlement_window < 1) bad("config.compliance.window", "must be >= 1");
        if (c.initial_bond < c.c_min || c.initial_bond > c.c_max) {
            bad("config.compliance.initial_bond", "must lie within [c_min, c_max]");
        }
        if (!c.ledger_enabled) {
            bad("config.compliance", "closed_loop compliance requires ledger.enabled = true");
        }
    } else {
        bad("config.compliance.mode", "expected off, fixed or closed_loop");
    }

    // outputs
    const json out = raw.contains("outputs") ? raw.at("outputs") : json::object();
    require_keys(out, "config.outputs", {"dir", "reports"});
    c.output_dir = get_string(out, "config.outputs", "dir", "out");
    c.reports = {"metrics", "events", "stations", "controller", "ledger"};
    if (out.contains("reports")) {
        const json& reps = out.at("reports");
        if (!reps.is_array()) bad("config.outputs.reports", "expected an array");
        const std::set<std::string> known{"metrics", "events",     "stations",
                                          "controller", "ledger", "timeseries"};
        c.reports.clear();
        for (const auto& r : reps) {
            if (!r.is_string() || !known.count(r.get<std::string>())) {
                bad("config.outputs.reports", "unknown report '" + r.dump() + "'");
            }
            c.reports.push_back(r.get<std::string>());
        }
    }

    c.echo_json = build_echo(c);
    return c;
}

ScenarioConfig parse_config_text(const std::string& json_text, const std::string& base_dir) {
    json raw;
    try {
        raw = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_and_validate(raw, base_dir);
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), std::filesystem::path(path).parent_path().string());
}

void apply_override(json& raw, const std::string& dotted_key, const std::string& value) {
    if (dotted_key.empty()) throw ConfigError("override key is empty");
    std::vector<std::string> parts;
    std::stringstream ss(dotted_key);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) throw ConfigError("override key '" + dotted_key + "' has an empty segment");
        parts.push_back(part);
    }
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value; // plain string
    }
    json* node = &raw;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object()) {
            throw ConfigError("override key '" + dotted_key + "' descends into a non-object");
        }
        node = &(*node)[parts[i]];
    }
    if (!node->is_object() && !node->is_null()) {
        throw ConfigError("override key '" + dotted_key + "' descends into a non-object");
    }
    (*node)[parts.back()] = parsed;
}

} // namespace pevsim
