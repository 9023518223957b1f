#ifndef TTA_C_H
#define TTA_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(TTA_C_BUILDING)
#define TTA_API __attribute__((visibility("default")))
#else
#define TTA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tta_status {
  TTA_OK = 0,
  TTA_ERR_PARSE = 1,
  TTA_ERR_INVALID = 2,
  TTA_ERR_UNSUPPORTED = 3,
  TTA_ERR_LIMIT = 4,
  TTA_ERR_IO = 5,
  TTA_ERR_INTERNAL = 6,
  TTA_ERR_ARGUMENT = 7 /* null pointer or out-of-range index */
} tta_status;

/* Message of the last failed call on this thread; never NULL. */
TTA_API const char* tta_last_error(void);
TTA_API const char* tta_status_name(tta_status s);

/* Strings returned through char** are owned by the caller. */
TTA_API void tta_string_free(char* s);

/* ---- automata ---------------------------------------------------------------------- */

typedef struct tta_automaton tta_automaton;

TTA_API tta_status tta_automaton_parse(const char* text, tta_automaton** out);
TTA_API tta_status tta_automaton_load(const char* path, tta_automaton** out);
TTA_API tta_status tta_automaton_parse_tchecker(const char* text, tta_automaton** out);
TTA_API void tta_automaton_free(tta_automaton* a);

TTA_API tta_status tta_automaton_size(const tta_automaton* a, size_t* out);
TTA_API tta_status tta_automaton_is_parametric(const tta_automaton* a, int* out);
TTA_API tta_status tta_automaton_text(const tta_automaton* a, char** out);
TTA_API tta_status tta_automaton_export_tchecker(const tta_automaton* a, char** out);
/* Substitutes the parameter, scales to integers and adds the strict-time clock: the
   automaton each representative check runs on. `value` is "n" or "n/d". */
TTA_API tta_status tta_automaton_prepare(const tta_automaton* a, const char* value, tta_automaton** out);

/* ---- emptiness ----------------------------------------------------------------------- */

typedef struct tta_check_result tta_check_result;

/* Parametric automata go through the representative loop (all values unless `fast`);
   parameter-free ones get a single Buechi check. */
TTA_API tta_status tta_check(const tta_automaton* a, int fast, tta_check_result** out);
TTA_API void tta_check_result_free(tta_check_result* r);
TTA_API int tta_check_nonempty(const tta_check_result* r);
TTA_API int tta_check_exhaustive(const tta_check_result* r);
TTA_API size_t tta_check_value_count(const tta_check_result* r);
/* Borrowed string valid until the result is freed. */
TTA_API tta_status tta_check_value(const tta_check_result* r, size_t i, const char** value, int* nonempty);
/* NULL when there is no witness. */
TTA_API const char* tta_check_witness(const tta_check_result* r);
TTA_API const char* tta_check_witness_value(const tta_check_result* r);

/* ---- tiled automata ------------------------------------------------------------------ */

typedef struct tta_tiled tta_tiled;

typedef struct tta_gen_config {
  uint64_t seed;
  size_t max_depth;
  double accepting_leaf_probability;
  double stop_probability;
  int64_t ambient_c;        /* negative: largest constant of the library */
  const char* library_path; /* NULL: builtin library */
} tta_gen_config;

TTA_API void tta_gen_config_init(tta_gen_config* cfg);
TTA_API tta_status tta_tiled_generate(const tta_gen_config* cfg, tta_tiled** out);
TTA_API tta_status tta_tiled_generate_sized(uint64_t seed, size_t size, const char* library_path, tta_tiled** out);
TTA_API tta_status tta_tiled_load(const char* path, tta_tiled** out);
TTA_API void tta_tiled_free(tta_tiled* t);

TTA_API tta_status tta_tiled_size(const tta_tiled* t, size_t* out);
TTA_API tta_status tta_tiled_text(const tta_tiled* t, char** out);
TTA_API tta_status tta_tiled_flatten(const tta_tiled* t, tta_automaton** out);
/* Predicted parameter intervals and the matching bit word. */
TTA_API tta_status tta_tiled_oracle(const tta_tiled* t, char** intervals, char** word);
/* Minimum-cost lower bound of a priced tiled automaton, "inf" when no goal is reachable. */
TTA_API tta_status tta_tiled_priced_oracle(const tta_tiled* t, char** value);
TTA_API tta_status tta_tiled_priced_brute(const tta_tiled* t, char** value);

/* ---- harness ------------------------------------------------------------------------- */

typedef struct tta_campaign_config {
  tta_gen_config gen;
  size_t runs;
  size_t workers;
  int measurements; /* 0 writes "-" in the time and memory columns */
  /* internal, internal-full, always-empty, always-nonempty, corrupt-witness, off-by-one,
     external */
  const char* adapter;
  /* external adapter only */
  const char* command; /* {input} is replaced by the input file */
  int per_value;       /* export each representative in tChecker syntax */
  int fast;
  double timeout_seconds;
  const char* nonempty_pattern; /* NULL: default */
  const char* empty_pattern;
  const char* witness_pattern;
} tta_campaign_config;

typedef struct tta_campaign tta_campaign;

TTA_API void tta_campaign_config_init(tta_campaign_config* cfg);
TTA_API tta_status tta_campaign_run(const tta_campaign_config* cfg, tta_campaign** out);
TTA_API void tta_campaign_free(tta_campaign* c);
TTA_API const char* tta_campaign_csv(const tta_campaign* c);
TTA_API const char* tta_campaign_summary(const tta_campaign* c);
TTA_API size_t tta_campaign_tests(const tta_campaign* c);
TTA_API size_t tta_campaign_failures(const tta_campaign* c);
TTA_API size_t tta_campaign_timeouts(const tta_campaign* c);

/* Total checker time per size over `instances` generated trees of that size; with `repeat` > 1
   the ladder is rerun and the smallest total per size is kept. Writes CSV lines
   "size,instances,calls,total_seconds,peak_kbytes" with a header. */
TTA_API tta_status tta_measure(const size_t* sizes, size_t count, size_t instances, size_t repeat, uint64_t seed,
                               int fast, char** csv);

#ifdef __cplusplus
}
#endif

#endif
