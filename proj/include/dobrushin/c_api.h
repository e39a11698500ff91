#ifndef DOBRUSHIN_C_API_H
#define DOBRUSHIN_C_API_H

/* C interface to the dobrushin library.
 *
 * Every int-returning function returns a status: 0 on success, otherwise one
 * of the DOB_E* codes below, with a message available from dob_last_error()
 * on the calling thread. Strings handed back through char** out-parameters are
 * owned by the caller and must be released with dob_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DOB_API __declspec(dllexport)
#else
#define DOB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  DOB_OK = 0,
  DOB_EINTERNAL = 1,
  DOB_EPARSE = 2,
  DOB_EINFEASIBLE = 3,
  DOB_ETOOLARGE = 4,
  DOB_EIO = 5,
  DOB_EVALIDATION = 6,
  DOB_EINVALID = 7,
  DOB_EINTERFACE = 8,
  DOB_EINADMISSIBLE = 9,
  DOB_EAUDIT = 10,
  DOB_ETHRESHOLD = 11,
  DOB_ENOSUCCESS = 12
};

DOB_API const char* dob_version(void);
/* Message of the last failed call on this thread ("" if none). */
DOB_API const char* dob_last_error(void);
DOB_API void dob_free(char* p);

/* Floors are "none", "interface:<h>" or "plus:<h>"; acceptance is
 * "metropolis" or "heat-bath" (NULL means metropolis). */
typedef struct dob_chain dob_chain;
DOB_API int dob_chain_new(int n, int m, int h, double beta, const char* floor, const char* acceptance,
                          uint64_t seed, dob_chain** out);
DOB_API int dob_chain_run(dob_chain* chain, uint64_t steps);
DOB_API int dob_chain_energy(const dob_chain* chain, int64_t* out);
/* {"dims": ..., "beta": ..., "spins": "<rle>"} */
DOB_API int dob_chain_snapshot(const dob_chain* chain, char** out_json);
DOB_API void dob_chain_free(dob_chain* chain);

/* Runs an experiment spec (JSON text) into out_dir. */
DOB_API int dob_simulate(const char* spec_json, const char* out_dir);
/* Recomputes out_dir/summary.csv from the per-seed streams. */
DOB_API int dob_reduce(const char* out_dir);

/* Exact distribution of a tiny box as JSON. cache_dir may be NULL. */
DOB_API int dob_enumerate(int n, int m, int h, double beta, const char* floor, const char* cache_dir,
                          char** out_json);
/* Admissible standard wall collections with total excess <= cap. */
DOB_API int dob_enumerate_walls(int n, int m, int cap, char** out_json);

/* Input is a snapshot as produced by dob_chain_snapshot or the simulate runs. */
DOB_API int dob_dump_interface(const char* snapshot_json, char** out_json);
DOB_API int dob_dump_walls(const char* snapshot_json, char** out_json);

typedef struct {
  int box;
  uint64_t burn_in_sweeps;
  uint64_t samples;
  uint64_t thin_sweeps;
  uint64_t batches;
  uint64_t seed;
  int telescoping;
} dob_alpha_options;

DOB_API dob_alpha_options dob_alpha_defaults(void);
DOB_API int dob_alpha(int h_max, double beta, const dob_alpha_options* options, char** out_json);
/* h* for base side n from an alpha table; includes the rate fit when the
 * table has at least 3 entries. A NaN beta means the table's own beta. */
DOB_API int dob_hstar(const char* table_json, int n, double beta, double eps, char** out_json);

/* Floors from the list plus an unconditioned baseline; out_csv gets sweep.csv. */
DOB_API int dob_repulsion_sweep(const char* table_json, const char* spec_json, const int* floors, size_t floor_count,
                                int plus_floor, const char* out_dir, char** out_csv);

/* Returns DOB_EVALIDATION when a suite fails; the report is still written. */
DOB_API int dob_validate(int full, int mutate_reconstruct, uint64_t seed, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
