#include "runner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "engine.hpp"
#include "ledger.hpp"
#include "metrics.hpp"
#include "report.hpp"

namespace pevsim {

namespace {

bool wants(const ScenarioConfig& cfg, const std::string& report) {
    return std::find(cfg.reports.begin(), cfg.reports.end(), report) != cfg.reports.end();
}

} // namespace

std::string cmd_run(const ScenarioConfig& cfg, const std::string& out_dir) {
    const auto results = run_monte_carlo(cfg, cfg.n_runs, cfg.base_seed);
    const auto summary = summarize(results, cfg.tariff_eur_per_kwh);

    write_resolved_config(out_dir, cfg);
    if (wants(cfg, "metrics")) write_metrics_csv(out_dir, cfg, results, summary);
    if (wants(cfg, "stations")) write_stations_csv(out_dir, cfg, results);
    for (std::size_t k = 0; k < results.size(); ++k) {
        const int idx = static_cast<int>(k);
        if (wants(cfg, "events")) write_events_csv(out_dir, cfg, results[k], idx);
        if (wants(cfg, "controller")) write_controller_csv(out_dir, cfg, results[k], idx);
        if (wants(cfg, "timeseries")) write_timeseries_csv(out_dir, cfg, results[k], idx);
        if (wants(cfg, "ledger")) write_ledger_dump(out_dir, cfg, results[k], idx);
    }

    std::ostringstream out;
    out << "i_ct_minutes " << fmt_g(summary.i_ct_minutes) << '\n';
    out << "i_ep_eur_per_kwh " << fmt_g(summary.i_ep_eur_per_kwh) << '\n';
    out << "i_d " << fmt_g(summary.i_d) << '\n';
    out << "completed " << summary.completed << " of " << summary.spawned << '\n';
    out << "mean_wait_steps " << fmt_g(summary.mean_wait_steps) << '\n';
    return out.str();
}

std::string cmd_sweep(const ScenarioConfig& cfg, const std::string& out_dir) {
    const auto surface = weight_sweep(cfg, cfg.n_runs, cfg.base_seed);
    write_resolved_config(out_dir, cfg);
    write_sweep_csv(out_dir, cfg, surface);

    const auto best_ct =
        std::min_element(surface.begin(), surface.end(), [](const auto& a, const auto& b) {
            return a.indices.i_ct_minutes < b.indices.i_ct_minutes;
        });
    std::ostringstream out;
    out << "points " << surface.size() << '\n';
    out << "min_i_ct_minutes " << fmt_g(best_ct->indices.i_ct_minutes) << " at alpha ("
        << fmt_g(best_ct->alpha[0]) << ", " << fmt_g(best_ct->alpha[1]) << ", "
        << fmt_g(best_ct->alpha[2]) << ")\n";
    return out.str();
}

std::string cmd_compare(const ScenarioConfig& cfg, const std::string& out_dir) {
    const auto cmp = compare_solvers(cfg, cfg.n_runs, cfg.base_seed);
    write_resolved_config(out_dir, cfg);
    write_compare_csv(out_dir, cfg, cmp);

    std::ostringstream out;
    out << "centralized_i_ct_minutes " << fmt_g(cmp.centralized_i_ct) << '\n';
    out << "decentralized_i_ct_minutes " << fmt_g(cmp.decentralized_i_ct) << '\n';
    out << "ratio " << fmt_g(cmp.ratio) << '\n';
    out << "rmse_minutes " << fmt_g(cmp.rmse_minutes) << '\n';
    return out.str();
}

std::string cmd_compliance_curve(const ScenarioConfig& cfg, const std::vector<double>& q_grid,
                                 const std::string& out_dir) {
    const auto curve = compliance_curve(cfg, q_grid, cfg.n_runs, cfg.base_seed);
    write_resolved_config(out_dir, cfg);
    write_compliance_curve_csv(out_dir, cfg, curve);

    std::ostringstream out;
    for (const auto& pt : curve) {
        out << "q " << fmt_g(pt.q) << " i_ct_minutes " << fmt_g(pt.i_ct_minutes) << " stderr "
            << fmt_g(pt.i_ct_stderr) << '\n';
    }
    return out.str();
}

std::string cmd_replay_ledger(const std::string& dump_path) {
    std::ifstream in(dump_path);
    if (!in) throw VerificationError("cannot open ledger dump '" + dump_path + "'");
    const ReplayReport report = replay_ledger_dump(in);
    std::ostringstream out;
    for (const auto& line : report.lines) out << line << '\n';
    if (!report.ok) throw VerificationError(out.str());
    return out.str();
}

} // namespace pevsim
