#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace pevsim {

namespace {

std::ofstream open_artifact(const std::string& dir, const std::string& name,
                            const ScenarioConfig& cfg, bool with_header = true) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write artifact '" + path.string() + "'");
    if (with_header) write_artifact_header(out, cfg);
    return out;
}

} // namespace

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_artifact_header(std::ostream& out, const ScenarioConfig& cfg) {
    out << "# pevsim " << kToolVersion << '\n';
    out << "# config " << cfg.echo_json.dump() << '\n';
}

void write_resolved_config(const std::string& dir, const ScenarioConfig& cfg) {
    auto out = open_artifact(dir, "config_resolved.json", cfg, /*with_header=*/false);
    out << cfg.echo();
}

void write_metrics_csv(const std::string& dir, const ScenarioConfig& cfg,
                       std::span<const RunResult> results, const IndexSummary& summary) {
    auto out = open_artifact(dir, "metrics.csv", cfg);
    out << "run,seed,spawned,completed,i_ct_minutes,i_ep_eur_per_kwh,i_d,mean_wait_steps\n";
    for (std::size_t k = 0; k < results.size(); ++k) {
        const RunResult& r = results[k];
        const std::array<const RunResult, 1> one{r};
        double ict = 0.0, iep = 0.0, id = 0.0, wait = 0.0;
        long completed = 0;
        try {
            const auto s = summarize(std::span<const RunResult>(one.data(), 1),
                                     cfg.tariff_eur_per_kwh);
            ict = s.i_ct_minutes;
            iep = s.i_ep_eur_per_kwh;
            id = s.i_d;
            wait = s.mean_wait_steps;
            completed = s.completed;
        } catch (const DomainError&) {
            // run with no completions; leave zeros
        }
        out << k << ',' << r.seed << ',' << r.vehicles.size() << ',' << completed << ','
            << fmt_g(ict) << ',' << fmt_g(iep) << ',' << fmt_g(id) << ',' << fmt_g(wait) << '\n';
    }
    out << "all,-," << summary.spawned << ',' << summary.completed << ','
        << fmt_g(summary.i_ct_minutes) << ',' << fmt_g(summary.i_ep_eur_per_kwh) << ','
        << fmt_g(summary.i_d) << ',' << fmt_g(summary.mean_wait_steps) << '\n';
}

void write_events_csv(const std::string& dir, const ScenarioConfig& cfg, const RunResult& run,
                      int run_index) {
    auto out = open_artifact(dir, "events_run" + std::to_string(run_index) + ".csv", cfg);
    out << "t_s,kind,vehicle,station,value\n";
    for (const auto& e : run.events) {
        out << fmt_g(e.t_s) << ',' << e.kind << ',' << e.vehicle << ',' << e.station << ','
            << fmt_g(e.value) << '\n';
    }
}

void write_stations_csv(const std::string& dir, const ScenarioConfig& cfg,
                        std::span<const RunResult> results) {
    auto out = open_artifact(dir, "stations.csv", cfg);
    const auto shares = participation_factors(results);
    out << "station,x,y,participation,assignments,completions,energy_delivered_kwh,"
           "renewable_generated_kwh,forfeits\n";
    std::map<StationId, StationTotals> agg;
    for (const auto& r : results) {
        for (const auto& s : r.stations) {
            auto& a = agg[s.id];
            a.id = s.id;
            a.assignments += s.assignments;
            a.completions += s.completions;
            a.energy_delivered_kwh += s.energy_delivered_kwh;
            a.renewable_generated_kwh += s.renewable_generated_kwh;
            a.forfeits += s.forfeits;
        }
    }
    for (const auto& [id, s] : agg) {
        const auto& spec = cfg.stations.at(static_cast<std::size_t>(id));
        const auto share = shares.count(id) ? shares.at(id) : 0.0;
        out << id << ',' << fmt_g(spec.position.x) << ',' << fmt_g(spec.position.y) << ','
            << fmt_g(share) << ',' << s.assignments << ',' << s.completions << ','
            << fmt_g(s.energy_delivered_kwh) << ',' << fmt_g(s.renewable_generated_kwh) << ','
            << s.forfeits << '\n';
    }
}

void write_controller_csv(const std::string& dir, const ScenarioConfig& cfg, const RunResult& run,
                          int run_index) {
    auto out = open_artifact(dir, "controller_run" + std::to_string(run_index) + ".csv", cfg);
    out << "t_s,q_estimate,bond_value\n";
    for (const auto& c : run.controller) {
        out << fmt_g(c.t_s) << ',' << fmt_g(c.q_estimate) << ',' << fmt_g(c.bond_value) << '\n';
    }
}

void write_timeseries_csv(const std::string& dir, const ScenarioConfig& cfg, const RunResult& run,
                          int run_index) {
    auto out = open_artifact(dir, "timeseries_run" + std::to_string(run_index) + ".csv", cfg);
    out << "t_s,mean_queue_minutes\n";
    for (std::size_t t = 0; t < run.mean_queue_minutes.size(); ++t) {
        out << t << ',' << fmt_g(run.mean_queue_minutes[t]) << '\n';
    }
}

void write_ledger_dump(const std::string& dir, const ScenarioConfig& cfg, const RunResult& run,
                       int run_index) {
    if (run.ledger_dump.empty()) return;
    auto out = open_artifact(dir, "ledger_run" + std::to_string(run_index) + ".log", cfg);
    out << run.ledger_dump;
}

void write_sweep_csv(const std::string& dir, const ScenarioConfig& cfg,
                     std::span<const SweepPoint> surface) {
    auto out = open_artifact(dir, "sweep.csv", cfg);
    out << "alpha_time,alpha_price,alpha_dist,i_ct_minutes,i_ct_stderr,i_ep_eur_per_kwh,i_d,"
           "completed,spawned\n";
    for (const auto& pt : surface) {
        out << fmt_g(pt.alpha[0]) << ',' << fmt_g(pt.alpha[1]) << ',' << fmt_g(pt.alpha[2]) << ','
            << fmt_g(pt.indices.i_ct_minutes) << ',' << fmt_g(pt.indices.i_ct_stderr) << ','
            << fmt_g(pt.indices.i_ep_eur_per_kwh) << ',' << fmt_g(pt.indices.i_d) << ','
            << pt.indices.completed << ',' << pt.indices.spawned << '\n';
    }
}

void write_compare_csv(const std::string& dir, const ScenarioConfig& cfg,
                       const SolverComparison& cmp) {
    {
        auto out = open_artifact(dir, "compare.csv", cfg);
        out << "metric,value\n";
        out << "rmse_minutes," << fmt_g(cmp.rmse_minutes) << '\n';
        out << "centralized_i_ct_minutes," << fmt_g(cmp.centralized_i_ct) << '\n';
        out << "decentralized_i_ct_minutes," << fmt_g(cmp.decentralized_i_ct) << '\n';
        out << "ratio," << fmt_g(cmp.ratio) << '\n';
    }
    auto out = open_artifact(dir, "compare_series.csv", cfg);
    out << "t_s,centralized_mean_queue_minutes,decentralized_mean_queue_minutes\n";
    const std::size_t n = std::min(cmp.centralized_series.size(), cmp.decentralized_series.size());
    for (std::size_t t = 0; t < n; ++t) {
        out << t << ',' << fmt_g(cmp.centralized_series[t]) << ','
            << fmt_g(cmp.decentralized_series[t]) << '\n';
    }
}

void write_compliance_curve_csv(const std::string& dir, const ScenarioConfig& cfg,
                                std::span<const CompliancePoint> curve) {
    auto out = open_artifact(dir, "compliance_curve.csv", cfg);
    out << "q,i_ct_minutes,i_ct_stderr,n_runs\n";
    for (const auto& pt : curve) {
        out << fmt_g(pt.q) << ',' << fmt_g(pt.i_ct_minutes) << ',' << fmt_g(pt.i_ct_stderr) << ','
            << pt.n_runs << '\n';
    }
}

} // namespace pevsim
