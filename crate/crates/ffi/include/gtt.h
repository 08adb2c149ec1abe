#ifndef GTT_H
#define GTT_H

#include <stdbool.h>
#include <stdint.h>

typedef enum GttStatus {
  GTT_STATUS_OK = 0,
  GTT_STATUS_NULL_ARGUMENT = 1,
  GTT_STATUS_INVALID_UTF8 = 2,
  GTT_STATUS_CONFIG = 3,
  GTT_STATUS_PARSE = 4,
  GTT_STATUS_TYPE = 5,
  GTT_STATUS_USAGE = 6,
  GTT_STATUS_NOT_FOUND = 7,
  /**
   * A program is stuck, ran out of fuel, or source and target disagree.
   */
  GTT_STATUS_EVAL = 8,
  GTT_STATUS_PANIC = 9,
} GttStatus;

/**
 * Settings applied on top of a program's pragmas; mirrors the CLI flags.
 */
typedef struct GttConfig GttConfig;

/**
 * A parsed source file.
 */
typedef struct GttProgram GttProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the library version as a static string.
 */
const char *gtt_version(void);

/**
 * The message of the last failed call on this thread, or an empty string.
 * Valid until the next call into the library on the same thread.
 */
const char *gtt_last_error_message(void);

/**
 * Frees a string returned through an `out` parameter. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void gtt_string_free(char *s);

/**
 * Creates a configuration for a built-in modality (`erasure`, `affine`,
 * `linear`, `linear-or-affine`, `trivial`, `lmh`, `lattice:a<b<c`). A null
 * name defers to the program's pragma, then to `erasure`.
 *
 * # Safety
 * `modality` is null or a NUL-terminated string; `out` is writable.
 */
enum GttStatus gtt_config_new(const char *modality, struct GttConfig **out);

/**
 * # Safety
 * `cfg` is null or a handle from [`gtt_config_new`] not yet freed.
 */
void gtt_config_free(struct GttConfig *cfg);

/**
 * Sets a boolean option: `strict`, `moded`, `nr-bad`, `no-erased-matches`,
 * `no-emptyrec-zero`, `pisigma-equal`.
 *
 * # Safety
 * `cfg` is a live handle; `key` is a NUL-terminated string.
 */
enum GttStatus gtt_config_set_flag(struct GttConfig *cfg, const char *key, bool value);

/**
 * Sets the evaluation fuel (reduction steps). Zero restores the default.
 *
 * # Safety
 * `cfg` is a live handle.
 */
enum GttStatus gtt_config_set_fuel(struct GttConfig *cfg, uint64_t fuel);

/**
 * Parses source text. Name resolution and grade literals are checked
 * later, against a configuration.
 *
 * # Safety
 * `source` is a NUL-terminated string; `out` is writable.
 */
enum GttStatus gtt_program_parse(const char *source, struct GttProgram **out);

/**
 * # Safety
 * `prog` is null or a handle from [`gtt_program_parse`] not yet freed.
 */
void gtt_program_free(struct GttProgram *prog);

/**
 * Type- and usage-checks every definition; stops at the first rejection.
 *
 * # Safety
 * `cfg` and `prog` are live handles.
 */
enum GttStatus gtt_check(const struct GttConfig *cfg, const struct GttProgram *prog);

/**
 * Writes the principal usage of a definition's λ-bound variables, e.g.
 * `[k↦1, n↦1]`.
 *
 * # Safety
 * `cfg`, `prog` are live handles; `name` is a NUL-terminated string;
 * `out` is writable.
 */
enum GttStatus gtt_usage(const struct GttConfig *cfg,
                         const struct GttProgram *prog,
                         const char *name,
                         char **out);

/**
 * Writes the extracted target program, as text or as JSON.
 *
 * # Safety
 * As for [`gtt_usage`].
 */
enum GttStatus gtt_extract(const struct GttConfig *cfg,
                           const struct GttProgram *prog,
                           const char *name,
                           bool json,
                           char **out);

/**
 * Evaluates a ℕ-valued definition in the source language.
 *
 * # Safety
 * As for [`gtt_usage`], with `out` pointing to a `uint64_t`.
 */
enum GttStatus gtt_eval(const struct GttConfig *cfg,
                        const struct GttProgram *prog,
                        const char *name,
                        uint64_t *out);

/**
 * Evaluates a definition in the source and both target strategies and
 * writes the verdict line. Returns [`GttStatus::Eval`], with the line still
 * written, when the three do not agree.
 *
 * # Safety
 * As for [`gtt_usage`].
 */
enum GttStatus gtt_run(const struct GttConfig *cfg,
                       const struct GttProgram *prog,
                       const char *name,
                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GTT_H */
