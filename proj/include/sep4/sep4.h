/* C interface to the sep4 separability engine.
 *
 * Objects are opaque handles released with their *_free function. Every
 * call that can fail returns a sep4_status; on failure the message is
 * available from sep4_last_error() on the same thread until the next call.
 * Strings returned through char** are heap-allocated and must be released
 * with sep4_string_free(). */
#ifndef SEP4_H
#define SEP4_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SEP4_BUILDING)
#    define SEP4_API __declspec(dllexport)
#  else
#    define SEP4_API __declspec(dllimport)
#  endif
#else
#  define SEP4_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sep4_status {
  SEP4_OK = 0,
  SEP4_E_DIMENSION_MISMATCH = 1,
  SEP4_E_NOT_HERMITIAN = 2,
  SEP4_E_NOT_POSITIVE = 3,
  SEP4_E_EMPTY_SUBSET = 4,
  SEP4_E_EIG_FAILURE = 5,
  SEP4_E_ALL_PARTIES_TRIVIAL = 6,
  SEP4_E_ZERO_VECTOR = 7,
  SEP4_E_NOT_BIPARTITE = 8,
  SEP4_E_RANK_DEFICIENT_BASIS = 9,
  SEP4_E_DUPLICATE_INDEX = 10,
  SEP4_E_UNSUPPORTED_SYSTEM = 11,
  SEP4_E_NOT_BIJECTIVE = 12,
  SEP4_E_SHAPE_MISMATCH = 13,
  SEP4_E_WRONG_DIMENSION = 14,
  SEP4_E_DEGENERATE_CONFIGURATION = 15,
  SEP4_E_NOT_APPLICABLE = 16,
  SEP4_E_NOT_SEPARABLE_VERDICT = 17,
  SEP4_E_DEPENDENT_VECTORS = 18,
  SEP4_E_DEGENERATE_COMPLEMENT = 19,
  SEP4_E_PARSE_ERROR = 20,
  SEP4_E_INVALID_ARGUMENT = 21,
  SEP4_E_INTERNAL = 100
} sep4_status;

typedef enum sep4_verdict {
  SEP4_SEPARABLE = 0,
  SEP4_ENTANGLED = 1,
  SEP4_OUT_OF_SCOPE = 2
} sep4_verdict;

typedef struct sep4_tolerances {
  double tol_herm;
  double tol_psd;
  double tol_rank;
  double tol_orth;
  double tol_recon;
  double tol_product;
  double tol_chow;
} sep4_tolerances;

typedef struct sep4_state sep4_state;
typedef struct sep4_report sep4_report;

SEP4_API const char* sep4_version(void);
SEP4_API const char* sep4_status_name(sep4_status status);
SEP4_API const char* sep4_last_error(void);
SEP4_API void sep4_string_free(char* s);

SEP4_API void sep4_tolerances_default(sep4_tolerances* out);

/* States. `tol` may be NULL for the defaults. */
SEP4_API sep4_status sep4_state_from_json(const char* json, const sep4_tolerances* tol, sep4_state** out);
/* `re_im` holds D*D interleaved (re, im) pairs, row-major, D = prod(dims). */
SEP4_API sep4_status sep4_state_from_array(const int* dims, size_t parties, const double* re_im,
                                           const sep4_tolerances* tol, sep4_state** out);
SEP4_API sep4_status sep4_state_to_json(const sep4_state* state, char** out);
/* Writes up to `capacity` dims; `*parties` receives the true count. */
SEP4_API sep4_status sep4_state_dims(const sep4_state* state, int* dims, size_t capacity, size_t* parties);
SEP4_API sep4_status sep4_state_rank(const sep4_state* state, int* rank);
/* PPT report of the state as JSON. */
SEP4_API sep4_status sep4_state_ppt(const sep4_state* state, char** out);
SEP4_API void sep4_state_free(sep4_state* state);

/* Named states: "divincenzo", "example_ab" ({"a": z, "b": z}),
 * "random_separable" ({"dims": [...], "terms": n, "seed": s}),
 * "random_ppt_rank4_33" ({"seed": s}). Complex z is [re, im] or a number.
 * `params_json` may be NULL. */
SEP4_API sep4_status sep4_gallery(const char* name, const char* params_json, sep4_state** out);
SEP4_API sep4_status sep4_gallery_names(char** out);

/* Classification. `decompose` != 0 attaches a decomposition to separable verdicts. */
SEP4_API sep4_status sep4_classify(const sep4_state* state, uint64_t seed, int decompose, sep4_report** out);
SEP4_API sep4_verdict sep4_report_verdict(const sep4_report* report);
SEP4_API const char* sep4_report_rule(const sep4_report* report);
SEP4_API int sep4_report_rank(const sep4_report* report);
SEP4_API sep4_status sep4_report_to_json(const sep4_report* report, char** out);
SEP4_API sep4_status sep4_report_from_json(const char* json, sep4_report** out);
SEP4_API void sep4_report_free(sep4_report* report);

/* Chow forms. System labels: "2x2", "3x2", "4x2", "Mx2:M", "2x3", "3x3", "2x2x2". */
SEP4_API sep4_status sep4_chow_print(const char* system, int as_json, char** out);
/* `basis_json` is {"dims": [...], "rows": [[z, ...], ...]}. Outputs are
 * (re, im) of F on the rms-normalized and on the raw Pluecker vector. */
SEP4_API sep4_status sep4_chow_eval(const char* system, const char* basis_json, double normalized[2],
                                    double raw[2]);
/* {"2x2": "<fnv1a64 hex>", ...} for the embedded tables. */
SEP4_API sep4_status sep4_table_checksums(char** out);

#ifdef __cplusplus
}
#endif

#endif
