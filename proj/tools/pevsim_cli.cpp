// Command-line front end; talks to the simulator exclusively through the
// C API in pevsim.h.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pevsim.h"

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_out = true) {
    cmd->add_option("-c,--config", opts.config_path, "Scenario config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("-O,--override", opts.overrides,
                    "Dotted-path override, e.g. sim.horizon_s=3600 (repeatable)");
    if (needs_out) {
        cmd->add_option("-o,--out", opts.out_dir, "Artifact output directory");
    }
    cmd->add_flag("-v,--verbose", opts.verbose, "Echo the resolved config");
}

int fail(int rc) {
    std::fprintf(stderr, "pevsim: %s\n", pevsim_last_error());
    return rc;
}

pevsim_config* load_with_overrides(const CommonOptions& opts, int& rc) {
    pevsim_config* cfg = nullptr;
    rc = pevsim_config_load(opts.config_path.c_str(), &cfg);
    if (rc != PEVSIM_OK) return nullptr;
    for (const auto& ov : opts.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "pevsim: override '%s' must look like key=value\n", ov.c_str());
            pevsim_config_free(cfg);
            rc = PEVSIM_ERR_CONFIG;
            return nullptr;
        }
        rc = pevsim_config_override(cfg, ov.substr(0, eq).c_str(), ov.substr(eq + 1).c_str());
        if (rc != PEVSIM_OK) {
            pevsim_config_free(cfg);
            return nullptr;
        }
    }
    if (opts.verbose) {
        char* echo = nullptr;
        if (pevsim_config_echo(cfg, &echo) == PEVSIM_OK) {
            std::fputs(echo, stderr);
            pevsim_string_free(echo);
        }
    }
    return cfg;
}

int print_summary_and_free(char* summary) {
    if (summary != nullptr) {
        std::fputs(summary, stdout);
        pevsim_string_free(summary);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("pevsim ") + pevsim_version() +
                 " - PEV-to-charging-station assignment simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts, sweep_opts, compare_opts, curve_opts, validate_opts;
    std::string q_grid;
    std::string dump_path;

    auto* run = app.add_subcommand("run", "Run the scenario's Monte Carlo batch");
    add_common(run, run_opts);

    auto* sweep = app.add_subcommand("sweep", "Evaluate the 66-point convex weight grid");
    add_common(sweep, sweep_opts);

    auto* compare =
        app.add_subcommand("compare", "Centralized vs decentralized on shared arrivals");
    add_common(compare, compare_opts);

    auto* curve = app.add_subcommand("compliance-curve",
                                     "Charging time across fixed compliance levels");
    add_common(curve, curve_opts);
    curve->add_option("--q-grid", q_grid, "Comma-separated Q values (default 0,0.25,0.5,0.75,1)");

    auto* validate = app.add_subcommand("validate-config", "Validate and echo a scenario config");
    add_common(validate, validate_opts, /*needs_out=*/false);

    auto* replay = app.add_subcommand("replay-ledger", "Re-verify a ledger dump");
    replay->add_option("-d,--dump", dump_path, "Ledger dump file")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    int rc = PEVSIM_OK;
    if (run->parsed()) {
        pevsim_config* cfg = load_with_overrides(run_opts, rc);
        if (cfg == nullptr) return fail(rc);
        char* summary = nullptr;
        rc = pevsim_cmd_run(cfg, run_opts.out_dir.c_str(), &summary);
        pevsim_config_free(cfg);
        return rc == PEVSIM_OK ? print_summary_and_free(summary) : fail(rc);
    }
    if (sweep->parsed()) {
        pevsim_config* cfg = load_with_overrides(sweep_opts, rc);
        if (cfg == nullptr) return fail(rc);
        char* summary = nullptr;
        rc = pevsim_cmd_sweep(cfg, sweep_opts.out_dir.c_str(), &summary);
        pevsim_config_free(cfg);
        return rc == PEVSIM_OK ? print_summary_and_free(summary) : fail(rc);
    }
    if (compare->parsed()) {
        pevsim_config* cfg = load_with_overrides(compare_opts, rc);
        if (cfg == nullptr) return fail(rc);
        char* summary = nullptr;
        rc = pevsim_cmd_compare(cfg, compare_opts.out_dir.c_str(), &summary);
        pevsim_config_free(cfg);
        return rc == PEVSIM_OK ? print_summary_and_free(summary) : fail(rc);
    }
    if (curve->parsed()) {
        pevsim_config* cfg = load_with_overrides(curve_opts, rc);
        if (cfg == nullptr) return fail(rc);
        char* summary = nullptr;
        rc = pevsim_cmd_compliance_curve(cfg, q_grid.empty() ? nullptr : q_grid.c_str(),
                                         curve_opts.out_dir.c_str(), &summary);
        pevsim_config_free(cfg);
        return rc == PEVSIM_OK ? print_summary_and_free(summary) : fail(rc);
    }
    if (validate->parsed()) {
        pevsim_config* cfg = load_with_overrides(validate_opts, rc);
        if (cfg == nullptr) return fail(rc);
        char* echo = nullptr;
        rc = pevsim_config_echo(cfg, &echo);
        pevsim_config_free(cfg);
        return rc == PEVSIM_OK ? print_summary_and_free(echo) : fail(rc);
    }
    if (replay->parsed()) {
        char* report = nullptr;
        rc = pevsim_replay_ledger(dump_path.c_str(), &report);
        print_summary_and_free(report);
        return rc == PEVSIM_OK ? 0 : rc == PEVSIM_ERR_VERIFY
                                         ? PEVSIM_ERR_VERIFY
                                         : fail(rc);
    }
    return 0;
}
