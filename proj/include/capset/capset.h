/* C interface to the capset library.
 *
 * Every fallible call returns a cs_status. On failure the message is available
 * from cs_last_error() (per thread, valid until the next call on that thread).
 * Strings returned through char** are owned by the caller and released with
 * cs_string_free(). Field elements and points are passed as their base-3
 * integer encodings.
 */
#ifndef CAPSET_CAPSET_H
#define CAPSET_CAPSET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(CAPSET_BUILDING_LIBRARY)
#define CS_API __declspec(dllexport)
#else
#define CS_API __declspec(dllimport)
#endif
#else
#define CS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_E_INVALID_ARGUMENT = 1,
  CS_E_DIMENSION_MISMATCH = 2,
  CS_E_PARSE = 3,
  CS_E_IO = 4,
  CS_E_BUDGET_EXCEEDED = 5,
  CS_E_DOMAIN = 6,
  CS_E_NOT_A_CAPSET = 7,
  CS_E_INTERNAL = 8
} cs_status;

typedef struct cs_field cs_field_t;
typedef struct cs_capset cs_capset_t;
typedef struct cs_family cs_family_t;

typedef struct cs_options {
  uint64_t memory_budget_bits; /* 0 selects the default (2^31) */
  unsigned threads;            /* 0 selects hardware concurrency */
  int uncertified;             /* construct: skip verification beyond the budget */
} cs_options_t;

CS_API const char* cs_version(void);
CS_API const char* cs_last_error(void);
CS_API const char* cs_status_name(cs_status status);
CS_API void cs_string_free(char* s);
/* {"format":1,"error":{...}} for the last failure on this thread. */
CS_API char* cs_last_error_json(void);

/* Fields GF(3^m). */
CS_API cs_status cs_field_new(unsigned m, cs_field_t** out);
CS_API void cs_field_free(cs_field_t* field);
CS_API unsigned cs_field_degree(const cs_field_t* field);
CS_API uint64_t cs_field_order(const cs_field_t* field);
CS_API cs_status cs_field_add(const cs_field_t* field, uint32_t a, uint32_t b, uint32_t* out);
CS_API cs_status cs_field_mul(const cs_field_t* field, uint32_t a, uint32_t b, uint32_t* out);
CS_API cs_status cs_field_inv(const cs_field_t* field, uint32_t a, uint32_t* out);
CS_API cs_status cs_field_chi(const cs_field_t* field, uint32_t a, int* out);
/* *found is 0 for non-squares; *out is then untouched. */
CS_API cs_status cs_field_sqrt(const cs_field_t* field, uint32_t a, int* found, uint32_t* out);
CS_API cs_status cs_field_frobenius(const cs_field_t* field, uint32_t a, long long j, uint32_t* out);
/* {"m":..,"q":..,"modulus":"..","generator":..} */
CS_API cs_status cs_field_header(const cs_field_t* field, char** json);

/* Capsets as sorted point sets in F_3^n. */
CS_API cs_status cs_capset_new(unsigned n, const uint64_t* encodings, size_t count, cs_capset_t** out);
CS_API cs_status cs_capset_read(const char* path, cs_capset_t** out);
CS_API cs_status cs_capset_parse(const char* text, cs_capset_t** out);
CS_API cs_status cs_capset_write(const cs_capset_t* set, const char* path);
CS_API cs_status cs_capset_format(const cs_capset_t* set, char** text);
CS_API void cs_capset_free(cs_capset_t* set);
CS_API unsigned cs_capset_dim(const cs_capset_t* set);
CS_API size_t cs_capset_size(const cs_capset_t* set);
CS_API cs_status cs_capset_point(const cs_capset_t* set, size_t index, uint64_t* encoding);

/* *verdict is 1 on pass, 0 on fail; report is the JSON report (may be NULL). */
CS_API cs_status cs_verify(const cs_capset_t* set, int complete, const cs_options_t* options, int* verdict,
                           char** report);
/* Points not covered by the set, returned as a point set of the same dimension. */
CS_API cs_status cs_uncovered(const cs_capset_t* set, const cs_options_t* options, cs_capset_t** out);
CS_API cs_status cs_lower_bound(uint64_t size, unsigned n, int* ok);

/* kind: "two-parabolas" or "quadric" (param = m), "complete" (param = n).
 * *verified follows the construction's claim (capset, and completeness where
 * claimed); metadata is the JSON block. */
CS_API cs_status cs_construct(const char* kind, unsigned param, const cs_options_t* options, cs_capset_t** out,
                              int* verified, char** metadata);

/* Parabola coefficient families over GF(3^m). */
CS_API cs_status cs_family_new(unsigned m, const uint32_t* coeffs, size_t count, cs_family_t** out);
CS_API cs_status cs_family_from_json(const char* json, cs_family_t** out);
CS_API cs_status cs_family_to_json(const cs_family_t* family, char** json);
CS_API void cs_family_free(cs_family_t* family);
CS_API size_t cs_family_size(const cs_family_t* family);
CS_API cs_status cs_family_points(const cs_family_t* family, cs_capset_t** out);
/* mode: "brute" or "fast". */
CS_API cs_status cs_family_check(const cs_family_t* family, const char* mode, const cs_options_t* options,
                                 int* verdict, char** report);

/* Condition classes for even m. With rank = 0 the report carries the class
 * count and its bound. With rank = 1 it also carries the GF(2) rank over
 * `samples` random full-orbit elements (0 = all of them); csv receives the
 * matrix when non-NULL. */
CS_API cs_status cs_conditions(unsigned m, int rank, uint64_t samples, uint64_t seed, char** report, char** csv);

/* Verdict for the odd-m statement that no three parabolas form a capset. */
CS_API cs_status cs_impossibility(unsigned m, int exhaustive, uint64_t samples, uint64_t seed, char** report);

typedef void (*cs_progress_fn)(const char* json_line, void* user);

typedef struct cs_search_options {
  unsigned m;
  const char* mode;      /* "exhaustive", "random" or "orbit" */
  uint64_t seed;
  uint64_t budget;       /* random: restarts (0 = default); orbit: tuples (0 = unlimited) */
  unsigned k;            /* orbit: number of orbits; exhaustive: stop at this K; 0 = default */
  unsigned threads;
  const char* resume_path;      /* checkpoint to resume from, or NULL */
  const char* checkpoint_path;  /* checkpoint to write, or NULL */
  const char* floor_json;       /* random: starting family, or NULL */
  cs_progress_fn progress;
  void* progress_user;
} cs_search_options_t;

CS_API cs_status cs_search(const cs_search_options_t* options, cs_family_t** best, char** result);

/* which: 1 or 2; tier: "fast" or "long". */
CS_API cs_status cs_tables(int which, const char* tier, unsigned threads, int* all_ok, char** report);

#ifdef __cplusplus
}
#endif

#endif
