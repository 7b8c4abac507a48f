/* C interface to the cohortsel toolkit: tiered cohort selection experiments
 * driven by a single JSON config document.
 *
 * All functions returning int use the status codes below. On any failure the
 * thread-local message from csel_last_error() describes the problem. Handles
 * are opaque; create/free in pairs. */

#ifndef COHORTSEL_H
#define COHORTSEL_H

#ifdef __cplusplus
extern "C" {
#endif

#define CSEL_OK 0
#define CSEL_ERR_CONFIG 1  /* malformed or inconsistent configuration */
#define CSEL_ERR_RUNTIME 2 /* I/O or execution failure */

/* Library version string, static storage. */
const char* csel_version(void);

/* Message for the most recent failure on this thread; empty if none. */
const char* csel_last_error(void);

typedef struct csel_experiment csel_experiment;

/* Parse and validate a JSON config. NULL on failure (see csel_last_error). */
csel_experiment* csel_experiment_from_json(const char* json_text);
csel_experiment* csel_experiment_from_file(const char* path);

void csel_experiment_free(csel_experiment* exp);

/* Override a config field. Keys: "seeds" (trial count), "base_seed",
 * "out" (output path), "format" ("csv" or "json"), "jobs". */
int csel_experiment_set(csel_experiment* exp, const char* key, const char* value);

/* Run a command: "simulate", "sweep", "hardness", "bounds", or "replay".
 * Writes the report to the configured output path when one is set. */
int csel_experiment_run(csel_experiment* exp, const char* command);

/* Rendered report of the last successful run; NULL before any run. The
 * pointer stays valid until the next run or free. */
const char* csel_experiment_result(const csel_experiment* exp);

/* Aggregate summary table of the last successful run ("" when the command
 * has none). Same lifetime as csel_experiment_result. */
const char* csel_experiment_summary(const csel_experiment* exp);

#ifdef __cplusplus
}
#endif

#endif /* COHORTSEL_H */
