#include "pevsim.h"

#include <cstring>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pevsim/config.hpp"
#include "pevsim/runner.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int set_error(const std::exception& e, int code) {
    g_last_error = e.what();
    return code;
}

template <typename F>
int guarded(F&& fn) {
    try {
        fn();
        g_last_error.clear();
        return PEVSIM_OK;
    } catch (const pevsim::Error& e) {
        return set_error(e, static_cast<int>(e.code()));
    } catch (const std::exception& e) {
        return set_error(e, PEVSIM_ERR_DOMAIN);
    }
}

std::vector<double> parse_q_grid(const char* q_grid) {
    if (q_grid == nullptr || *q_grid == '\0') return {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> grid;
    std::stringstream ss(q_grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            grid.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw pevsim::DomainError("q grid entry '" + item + "' is not a number");
        }
    }
    if (grid.empty()) throw pevsim::DomainError("q grid is empty");
    return grid;
}

} // namespace

// The handle keeps the raw document so overrides can re-validate from source.
struct pevsim_config {
    nlohmann::json raw;
    std::string base_dir;
    pevsim::ScenarioConfig resolved;
};

extern "C" {

const char* pevsim_version(void) { return pevsim::kToolVersion; }

const char* pevsim_last_error(void) { return g_last_error.c_str(); }

void pevsim_string_free(char* s) { delete[] s; }

int pevsim_config_load(const char* path, pevsim_config** out_cfg) {
    return guarded([&] {
        if (path == nullptr || out_cfg == nullptr) {
            throw pevsim::ConfigError("path and out_cfg must be non-null");
        }
        auto handle = std::make_unique<pevsim_config>();
        handle->resolved = pevsim::load_config_file(path);
        handle->raw = handle->resolved.echo_json;
        handle->base_dir =
            std::filesystem::path(path).parent_path().string();
        *out_cfg = handle.release();
    });
}

int pevsim_config_parse(const char* json_text, pevsim_config** out_cfg) {
    return guarded([&] {
        if (json_text == nullptr || out_cfg == nullptr) {
            throw pevsim::ConfigError("json_text and out_cfg must be non-null");
        }
        auto handle = std::make_unique<pevsim_config>();
        handle->resolved = pevsim::parse_config_text(json_text);
        handle->raw = handle->resolved.echo_json;
        *out_cfg = handle.release();
    });
}

int pevsim_config_override(pevsim_config* cfg, const char* dotted_key, const char* value) {
    return guarded([&] {
        if (cfg == nullptr || dotted_key == nullptr || value == nullptr) {
            throw pevsim::ConfigError("override arguments must be non-null");
        }
        nlohmann::json candidate = cfg->raw;
        pevsim::apply_override(candidate, dotted_key, value);
        cfg->resolved = pevsim::parse_and_validate(candidate, cfg->base_dir);
        cfg->raw = std::move(candidate);
    });
}

int pevsim_config_echo(const pevsim_config* cfg, char** out_json) {
    return guarded([&] {
        if (cfg == nullptr || out_json == nullptr) {
            throw pevsim::ConfigError("cfg and out_json must be non-null");
        }
        *out_json = dup_string(cfg->resolved.echo());
    });
}

void pevsim_config_free(pevsim_config* cfg) { delete cfg; }

int pevsim_cmd_run(const pevsim_config* cfg, const char* out_dir, char** out_summary) {
    return guarded([&] {
        if (cfg == nullptr || out_dir == nullptr) {
            throw pevsim::ConfigError("cfg and out_dir must be non-null");
        }
        const std::string summary = pevsim::cmd_run(cfg->resolved, out_dir);
        if (out_summary != nullptr) *out_summary = dup_string(summary);
    });
}

int pevsim_cmd_sweep(const pevsim_config* cfg, const char* out_dir, char** out_summary) {
    return guarded([&] {
        if (cfg == nullptr || out_dir == nullptr) {
            throw pevsim::ConfigError("cfg and out_dir must be non-null");
        }
        const std::string summary = pevsim::cmd_sweep(cfg->resolved, out_dir);
        if (out_summary != nullptr) *out_summary = dup_string(summary);
    });
}

int pevsim_cmd_compare(const pevsim_config* cfg, const char* out_dir, char** out_summary) {
    return guarded([&] {
        if (cfg == nullptr || out_dir == nullptr) {
            throw pevsim::ConfigError("cfg and out_dir must be non-null");
        }
        const std::string summary = pevsim::cmd_compare(cfg->resolved, out_dir);
        if (out_summary != nullptr) *out_summary = dup_string(summary);
    });
}

int pevsim_cmd_compliance_curve(const pevsim_config* cfg, const char* q_grid,
                                const char* out_dir, char** out_summary) {
    return guarded([&] {
        if (cfg == nullptr || out_dir == nullptr) {
            throw pevsim::ConfigError("cfg and out_dir must be non-null");
        }
        const auto grid = parse_q_grid(q_grid);
        const std::string summary = pevsim::cmd_compliance_curve(cfg->resolved, grid, out_dir);
        if (out_summary != nullptr) *out_summary = dup_string(summary);
    });
}

int pevsim_replay_ledger(const char* dump_path, char** out_report) {
    std::string report_text;
    const int rc = guarded([&] {
        if (dump_path == nullptr) throw pevsim::DomainError("dump_path must be non-null");
        report_text = pevsim::cmd_replay_ledger(dump_path);
    });
    if (out_report != nullptr) {
        // On verification failure the report rides in the error message.
        *out_report = dup_string(rc == PEVSIM_OK ? report_text : g_last_error);
    }
    return rc;
}

} // extern "C"
