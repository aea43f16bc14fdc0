#ifndef PEVSIM_H
#define PEVSIM_H

/* C API for the PEV charging-assignment simulator.
 *
 * All entry points return a status code:
 *   0  success
 *   1  domain error (simulation-level failure)
 *   2  config error (invalid scenario description)
 *   3  verification failure (ledger replay found violations)
 *
 * On failure pevsim_last_error() describes the problem (thread-local).
 * Strings returned through out-parameters are heap-allocated and must be
 * released with pevsim_string_free().
 */

#ifdef __cplusplus
extern "C" {
#endif

#define PEVSIM_OK 0
#define PEVSIM_ERR_DOMAIN 1
#define PEVSIM_ERR_CONFIG 2
#define PEVSIM_ERR_VERIFY 3

typedef struct pevsim_config pevsim_config; /* opaque scenario handle */

const char* pevsim_version(void);
const char* pevsim_last_error(void);
void pevsim_string_free(char* s);

/* Scenario lifecycle. Overrides use dotted paths ("sim.horizon_s=3600",
 * "weights.alpha=[0,1,0]") and re-validate the whole document. */
int pevsim_config_load(const char* path, pevsim_config** out_cfg);
int pevsim_config_parse(const char* json_text, pevsim_config** out_cfg);
int pevsim_config_override(pevsim_config* cfg, const char* dotted_key, const char* value);
int pevsim_config_echo(const pevsim_config* cfg, char** out_json);
void pevsim_config_free(pevsim_config* cfg);

/* Commands. Each writes its artifact files under out_dir and returns the
 * human-readable summary that a CLI would print. */
int pevsim_cmd_run(const pevsim_config* cfg, const char* out_dir, char** out_summary);
int pevsim_cmd_sweep(const pevsim_config* cfg, const char* out_dir, char** out_summary);
int pevsim_cmd_compare(const pevsim_config* cfg, const char* out_dir, char** out_summary);
/* q_grid is a comma-separated list such as "0,0.25,0.5,0.75,1"; NULL or empty
 * selects that default grid. */
int pevsim_cmd_compliance_curve(const pevsim_config* cfg, const char* q_grid,
                                const char* out_dir, char** out_summary);
int pevsim_replay_ledger(const char* dump_path, char** out_report);

#ifdef __cplusplus
}
#endif

#endif /* PEVSIM_H */
