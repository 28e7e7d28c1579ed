/* C interface to the patchability analysis library.
 *
 * Every function that can fail returns a patchq_status; on failure
 * patchq_last_error() describes the problem for the calling thread.
 * Strings returned through `char**` are owned by the caller and released
 * with patchq_string_free().
 */
#ifndef PATCHQ_H
#define PATCHQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PATCHQ_BUILDING)
#    define PATCHQ_API __declspec(dllexport)
#  else
#    define PATCHQ_API __declspec(dllimport)
#  endif
#else
#  define PATCHQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct patchq_design patchq_design;
typedef struct patchq_options patchq_options;
typedef struct patchq_cwes patchq_cwes;

typedef enum patchq_status {
    PATCHQ_OK = 0,
    PATCHQ_ERR_ARGUMENT = 1,    /* null pointer, bad enum value */
    PATCHQ_ERR_LEX = 2,
    PATCHQ_ERR_PARSE = 3,
    PATCHQ_ERR_UNSUPPORTED = 4,
    PATCHQ_ERR_ELAB = 5,
    PATCHQ_ERR_EVAL = 6,
    PATCHQ_ERR_CONFIG = 7,
    PATCHQ_ERR_LIMIT = 8,
    PATCHQ_ERR_INTERNAL = 9
} patchq_status;

typedef enum patchq_format {
    PATCHQ_FORMAT_TEXT = 0,
    PATCHQ_FORMAT_CSV = 1,
    PATCHQ_FORMAT_JSON = 2
} patchq_format;

typedef enum patchq_strategy {
    PATCHQ_STRATEGY_GREEDY = 0,
    PATCHQ_STRATEGY_EXHAUSTIVE = 1
} patchq_strategy;

PATCHQ_API const char* patchq_version(void);

/* Message of the last failed call on this thread, or "" after a success. */
PATCHQ_API const char* patchq_last_error(void);

PATCHQ_API void patchq_string_free(char* s);

/* Parses and elaborates `source`. `path_label` prefixes error positions
 * (may be NULL). `top` selects the module; NULL picks the only module. */
PATCHQ_API patchq_status patchq_design_from_source(const char* source, const char* path_label, const char* top,
                                                   patchq_design** out);
PATCHQ_API void patchq_design_free(patchq_design* design);

/* Number of scored signals. */
PATCHQ_API size_t patchq_design_signal_count(const patchq_design* design);

/* Warnings found during elaboration, one "path:line:col: warning: ..." per
 * line; empty when there are none. */
PATCHQ_API patchq_status patchq_design_diagnostics(const patchq_design* design, char** out);

PATCHQ_API patchq_status patchq_design_dump_graph(const patchq_design* design, char** out_json);

PATCHQ_API patchq_status patchq_options_from_json(const patchq_design* design, const char* json,
                                                  const char* path_label, patchq_options** out);
PATCHQ_API void patchq_options_free(patchq_options* options);
PATCHQ_API size_t patchq_options_count(const patchq_options* options);

PATCHQ_API patchq_status patchq_cwes_from_json(const patchq_design* design, const char* json,
                                               const char* path_label, patchq_cwes** out);
PATCHQ_API void patchq_cwes_free(patchq_cwes* cwes);

/* Reports. `cwes` may be NULL except for patchq_cwe_check. */
PATCHQ_API patchq_status patchq_score(const patchq_design* design, const patchq_options* options,
                                      const patchq_cwes* cwes, patchq_format format, char** out);
PATCHQ_API patchq_status patchq_compare(const patchq_design* design, const patchq_options* options,
                                        const patchq_cwes* cwes, patchq_format format, char** out);
PATCHQ_API patchq_status patchq_cwe_check(const patchq_design* design, const patchq_options* options,
                                          const patchq_cwes* cwes, patchq_format format, char** out);

/* Ranked patch sets within `budget` bits. `candidates` may be NULL (with
 * `candidate_count` 0) to consider every scored signal; `limit` caps the
 * exhaustive ranking (0 keeps all). */
PATCHQ_API patchq_status patchq_suggest(const patchq_design* design, const char* const* candidates,
                                        size_t candidate_count, int64_t budget, patchq_strategy strategy,
                                        size_t limit, const patchq_cwes* cwes, patchq_format format, char** out);

/* Exact controllability of one signal under option `option_index`, as a
 * decimal string (15 places when it does not terminate). */
PATCHQ_API patchq_status patchq_signal_pc(const patchq_design* design, const patchq_options* options,
                                          size_t option_index, const char* signal, char** out);

#ifdef __cplusplus
}
#endif

#endif
