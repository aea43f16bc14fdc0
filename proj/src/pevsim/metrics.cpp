#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "engine.hpp"

namespace pevsim {

namespace {

std::vector<double> per_run_charging_minutes(std::span<const RunResult> results) {
    std::vector<double> means;
    for (const auto& run : results) {
        double sum = 0.0;
        long n = 0;
        for (const auto& v : run.vehicles) {
            if (!v.completed) continue;
            sum += (v.charge_end_s - v.spawn_s) / 60.0;
            ++n;
        }
        if (n > 0) means.push_back(sum / static_cast<double>(n));
    }
    return means;
}

} // namespace

double index_charging_time(std::span<const RunResult> results) {
    const auto means = per_run_charging_minutes(results);
    if (means.empty()) throw EmptyRun("no completed vehicles in any run");
    return std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
}

double index_energy_price(std::span<const RunResult> results, double tariff) {
    std::vector<double> per_run;
    for (const auto& run : results) {
        double charged = 0.0, res = 0.0;
        for (const auto& v : run.vehicles) {
            if (!v.completed) continue;
            charged += v.request_kwh;
            res += std::min(v.res_used_kwh, v.request_kwh);
        }
        if (charged > 0.0) per_run.push_back(tariff * (charged - res) / charged);
    }
    if (per_run.empty()) throw ZeroEnergy("no charged energy in any run");
    return std::accumulate(per_run.begin(), per_run.end(), 0.0) /
           static_cast<double>(per_run.size());
}

double index_distance(std::span<const RunResult> results) {
    double sum = 0.0;
    long n = 0;
    for (const auto& run : results) {
        for (const auto& v : run.vehicles) {
            sum += v.assign_distance;
            ++n;
        }
    }
    if (n == 0) throw EmptyRun("no assignments in any run");
    return sum / static_cast<double>(n);
}

std::map<StationId, double> participation_factors(std::span<const RunResult> results) {
    std::map<StationId, long> counts;
    long total = 0;
    for (const auto& run : results) {
        for (const auto& s : run.stations) counts[s.id] += s.assignments;
    }
    for (const auto& [id, c] : counts) total += c;
    std::map<StationId, double> shares;
    for (const auto& [id, c] : counts) {
        shares[id] = total > 0 ? static_cast<double>(c) / static_cast<double>(total) : 0.0;
    }
    return shares;
}

double participation_entropy(const std::map<StationId, double>& participation) {
    double h = 0.0;
    for (const auto& [id, p] : participation) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw DomainError("spearman needs two equally sized samples of length >= 2");
    }
    const auto ranks = [](std::span<const double> v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return v[a] < v[b];
        });
        std::vector<double> rank(n, 0.0);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
            i = j + 1;
        }
        return rank;
    };
    const auto rx = ranks(xs);
    const auto ry = ranks(ys);
    const double n = static_cast<double>(xs.size());
    const double mean = (n + 1.0) / 2.0;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (rx[i] - mean) * (ry[i] - mean);
        dx += (rx[i] - mean) * (rx[i] - mean);
        dy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

IndexSummary summarize(std::span<const RunResult> results, double tariff) {
    IndexSummary s;
    s.i_ct_minutes = index_charging_time(results);
    s.i_ep_eur_per_kwh = index_energy_price(results, tariff);
    s.i_d = index_distance(results);

    const auto means = per_run_charging_minutes(results);
    if (means.size() > 1) {
        double var = 0.0;
        for (double m : means) var += (m - s.i_ct_minutes) * (m - s.i_ct_minutes);
        var /= static_cast<double>(means.size() - 1);
        s.i_ct_stderr = std::sqrt(var / static_cast<double>(means.size()));
    }

    double wait_sum = 0.0;
    for (const auto& run : results) {
        s.spawned += static_cast<long>(run.vehicles.size());
        for (const auto& v : run.vehicles) {
            if (v.completed) ++s.completed;
            wait_sum += v.wait_steps;
        }
    }
    if (s.spawned > 0) s.mean_wait_steps = wait_sum / static_cast<double>(s.spawned);
    return s;
}

SolverComparison compare_solvers(const ScenarioConfig& cfg, int n_runs, std::uint64_t base_seed) {
    ScenarioConfig cen = cfg;
    cen.solver = SolverKind::centralized;
    ScenarioConfig dec = cfg;
    dec.solver = SolverKind::decentralized;

    const auto cen_runs = run_monte_carlo(cen, n_runs, base_seed);
    const auto dec_runs = run_monte_carlo(dec, n_runs, base_seed);

    SolverComparison cmp;
    cmp.centralized_i_ct = index_charging_time(cen_runs);
    cmp.decentralized_i_ct = index_charging_time(dec_runs);
    cmp.ratio = cmp.decentralized_i_ct / cmp.centralized_i_ct;

    // Mean over runs of each per-step series, then the RMSE between solvers.
    const auto mean_series = [](std::span<const RunResult> runs) {
        std::vector<double> mean;
        if (runs.empty()) return mean;
        mean.assign(runs[0].mean_queue_minutes.size(), 0.0);
        for (const auto& r : runs) {
            for (std::size_t t = 0; t < mean.size() && t < r.mean_queue_minutes.size(); ++t) {
                mean[t] += r.mean_queue_minutes[t];
            }
        }
        for (auto& v : mean) v /= static_cast<double>(runs.size());
        return mean;
    };
    cmp.centralized_series = mean_series(cen_runs);
    cmp.decentralized_series = mean_series(dec_runs);

    double sq = 0.0;
    const std::size_t n = std::min(cmp.centralized_series.size(), cmp.decentralized_series.size());
    for (std::size_t t = 0; t < n; ++t) {
        const double d = cmp.centralized_series[t] - cmp.decentralized_series[t];
        sq += d * d;
    }
    cmp.rmse_minutes = n > 0 ? std::sqrt(sq / static_cast<double>(n)) : 0.0;
    return cmp;
}

std::vector<SweepPoint> weight_sweep(const ScenarioConfig& cfg, int n_runs,
                                     std::uint64_t base_seed) {
    std::vector<SweepPoint> surface;
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10 - i; ++j) {
            const int k = 10 - i - j;
            SweepPoint pt;
            pt.alpha = {i / 10.0, j / 10.0, k / 10.0};
            ScenarioConfig point_cfg = cfg;
            point_cfg.weights_mode = WeightsMode::fixed;
            point_cfg.fixed_alpha = pt.alpha;
            const auto runs = run_monte_carlo(point_cfg, n_runs, base_seed);
            pt.indices = summarize(runs, cfg.tariff_eur_per_kwh);
            surface.push_back(pt);
        }
    }
    return surface;
}

std::vector<CompliancePoint> compliance_curve(const ScenarioConfig& cfg,
                                              std::span<const double> q_grid, int n_runs,
                                              std::uint64_t base_seed) {
    std::vector<CompliancePoint> curve;
    for (double q : q_grid) {
        if (q < 0.0 || q > 1.0) throw DomainError("compliance grid values must be in [0,1]");
        ScenarioConfig point_cfg = cfg;
        point_cfg.compliance_mode = ComplianceMode::fixed;
        point_cfg.fixed_q = q;
        const auto runs = run_monte_carlo(point_cfg, n_runs, base_seed);
        const auto s = summarize(runs, cfg.tariff_eur_per_kwh);
        curve.push_back(CompliancePoint{q, s.i_ct_minutes, s.i_ct_stderr, n_runs});
    }
    return curve;
}

} // namespace pevsim
