/* boundary_snap.h - C API for the boundary-snap toolkit.
 *
 * All functions that can fail either return NULL (handle constructors) or a
 * nonzero bsnap_status. bsnap_last_error() returns a thread-local message
 * describing the most recent failure on the calling thread.
 *
 * Handles are opaque and must be released with the matching *_free function.
 * Strings returned as char* are heap-allocated; release with
 * bsnap_string_free.
 */
#ifndef BOUNDARY_SNAP_H
#define BOUNDARY_SNAP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BSNAP_API __declspec(dllexport)
#else
#define BSNAP_API __attribute__((visibility("default")))
#endif

typedef enum bsnap_status {
    BSNAP_OK = 0,
    /* findings present / mutants survived both detectors */
    BSNAP_FINDINGS = 1,
    /* usage, format, or runtime error; see bsnap_last_error() */
    BSNAP_ERROR = 2
} bsnap_status;

typedef struct bsnap_project bsnap_project;
typedef struct bsnap_footprint bsnap_footprint;
typedef struct bsnap_report bsnap_report;
typedef struct bsnap_campaign bsnap_campaign;

BSNAP_API const char* bsnap_version(void);

/* Thread-local message for the last failed call on this thread. */
BSNAP_API const char* bsnap_last_error(void);

BSNAP_API void bsnap_string_free(char* s);

/* ---- projects ---- */

/* Loads a MiniLang project (manifest.json) from a directory. */
BSNAP_API bsnap_project* bsnap_project_load(const char* root_dir);
BSNAP_API void bsnap_project_free(bsnap_project* p);
BSNAP_API size_t bsnap_project_test_count(const bsnap_project* p);
BSNAP_API size_t bsnap_project_api_symbol_count(const bsnap_project* p);

/* ---- footprints ---- */

BSNAP_API bsnap_footprint* bsnap_footprint_extract(const bsnap_project* p);
BSNAP_API bsnap_footprint* bsnap_footprint_read(const char* path);
BSNAP_API bsnap_status bsnap_footprint_write(const bsnap_footprint* fp,
                                             const char* path);
BSNAP_API void bsnap_footprint_free(bsnap_footprint* fp);
BSNAP_API size_t bsnap_footprint_symbol_count(const bsnap_footprint* fp);
/* Returns the i-th sorted symbol id (owned by the handle) or NULL. */
BSNAP_API const char* bsnap_footprint_symbol(const bsnap_footprint* fp, size_t i);

/* ---- recording ---- */

/* Runs the stability filter with `runs` repetitions, writes snapshots of run 1
 * for stable tests into out_dir plus flaky.json naming excluded tests.
 * flaky_count_out (optional) receives the number of flaky tests. */
BSNAP_API bsnap_status bsnap_record(const bsnap_project* p,
                                    const bsnap_footprint* fp, const char* out_dir,
                                    int runs, int record_internal,
                                    size_t* flaky_count_out);

/* ---- comparison ---- */

/* Compares two snapshot directories. Tests listed in flaky.json files found
 * in either directory are excluded. */
BSNAP_API bsnap_report* bsnap_compare(const char* old_dir, const char* new_dir,
                                      int all_positions, int exc_type_only);
BSNAP_API void bsnap_report_free(bsnap_report* r);
BSNAP_API size_t bsnap_report_finding_count(const bsnap_report* r);
/* format: "text" or "json"; returns a heap string. */
BSNAP_API char* bsnap_report_render(const bsnap_report* r, const char* format);

/* ---- mutation campaign ---- */

/* default_mode: "null" or "observed". jobs <= 0 selects hardware concurrency.
 * Reads the baseline snapshots from baseline_dir. */
BSNAP_API bsnap_campaign* bsnap_campaign_run(const bsnap_project* p,
                                             const bsnap_footprint* fp,
                                             const char* baseline_dir,
                                             const char* default_mode, int jobs);
BSNAP_API void bsnap_campaign_free(bsnap_campaign* c);
BSNAP_API size_t bsnap_campaign_mutant_count(const bsnap_campaign* c);
BSNAP_API size_t bsnap_campaign_tests_kill_count(const bsnap_campaign* c);
BSNAP_API size_t bsnap_campaign_snapshot_kill_count(const bsnap_campaign* c);
/* Number of mutants not detected by either detector. */
BSNAP_API size_t bsnap_campaign_survivor_count(const bsnap_campaign* c);
/* Writes <prefix>.csv and <prefix>.json. */
BSNAP_API bsnap_status bsnap_campaign_write(const bsnap_campaign* c,
                                            const char* out_prefix);
/* "0.500" style 3-decimal scores. */
BSNAP_API char* bsnap_campaign_scores(const bsnap_campaign* c);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BOUNDARY_SNAP_H */
