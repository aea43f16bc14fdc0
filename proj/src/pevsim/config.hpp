#ifndef PEVSIM_CONFIG_HPP
#define PEVSIM_CONFIG_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "compliance.hpp"
#include "domain.hpp"
#include "mobility.hpp"

namespace pevsim {

inline constexpr int kConfigVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum class ArenaMode { unit_square, road_graph };
enum class SolverKind { centralized, decentralized };
enum class WeightsMode { fixed, mixture, sweep };
enum class ComplianceMode { off, fixed, closed_loop };

struct StationSpec {
    Position position;
    std::string node_id; // road-graph mode
    RenewableKind renewable = RenewableKind::none;
    double nominal_kw = 0.0;
};

struct WeightGroup {
    std::array<double, 3> alpha{1.0, 0.0, 0.0};
    double fraction = 1.0;
};

// Fully resolved experiment description.  Every default is materialized at
// parse time and echoed back, so a run is reproducible from its echo alone.
struct ScenarioConfig {
    ArenaMode arena_mode = ArenaMode::unit_square;
    std::string graph_file;
    std::shared_ptr<const RoadGraph> graph; // loaded during validation

    std::vector<StationSpec> stations;
    double tariff_eur_per_kwh = 0.45;
    double pv_nominal_kw = 10.0;
    double wind_nominal_kw = 5.0;
    double daylight_start_s = 0.0;
    double daylight_end_s = 0.0;

    SimParams params;
    double energy_mean_kwh = 5.0;
    double energy_std_kwh = 1.2;
    double energy_min_kwh = 1.0;
    double energy_max_kwh = 8.0;
    int signal_step_cap = 10000;

    WeightsMode weights_mode = WeightsMode::fixed;
    std::array<double, 3> fixed_alpha{1.0, 0.0, 0.0};
    std::vector<WeightGroup> groups;

    SolverKind solver = SolverKind::decentralized;

    ComplianceMode compliance_mode = ComplianceMode::off;
    double fixed_q = 1.0;
    ComplianceModel model;
    double q_bar = 0.9;
    double k_p = 20.0;
    double k_i = 2.0;
    double c_min = 0.0;
    double c_max = 50.0;
    int settlement_window = 20;
    double initial_bond = 5.0;

    bool ledger_enabled = false;
    int pow_delay_steps = 2;
    double bond_tokens = 5.0;
    double deadline_slack = 2.0;
    double initial_balance_tokens = 0.0; // 0 -> 10x the maximum bond

    int n_runs = 20;
    std::uint64_t base_seed = 42;

    std::string output_dir = "out";
    std::vector<std::string> reports;

    nlohmann::json echo_json; // canonical resolved form
    std::string echo() const { return echo_json.dump(2) + "\n"; }

    double resolved_bond() const {
        return compliance_mode == ComplianceMode::closed_loop ? initial_bond : bond_tokens;
    }
    double resolved_initial_balance() const {
        if (initial_balance_tokens > 0.0) return initial_balance_tokens;
        return 10.0 * (compliance_mode == ComplianceMode::closed_loop ? c_max : bond_tokens);
    }
};

// Parses, applies defaults, validates (unknown keys are errors), loads the
// road graph when one is referenced.  Paths are resolved against base_dir.
ScenarioConfig parse_and_validate(const nlohmann::json& raw, const std::string& base_dir = "");
ScenarioConfig parse_config_text(const std::string& json_text, const std::string& base_dir = "");
ScenarioConfig load_config_file(const std::string& path);

// Dotted-path override on the raw document, e.g. "sim.horizon_s=3600" or
// "weights.alpha=[0,1,0]".  The value is parsed as JSON when possible and
// treated as a string otherwise.
void apply_override(nlohmann::json& raw, const std::string& dotted_key, const std::string& value);

std::string to_string(SolverKind s);
std::string to_string(ComplianceMode m);

} // namespace pevsim

#endif
