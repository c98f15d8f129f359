/* C interface to the starheight library. */

#ifndef STARHEIGHT_H
#define STARHEIGHT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every API call.
typedef enum ShStatus {
  // The call succeeded.
  SH_OK = 0,
  // A pointer argument was NULL or text was not valid UTF-8.
  SH_ERR_INVALID_ARGUMENT = 1,
  // Input text did not parse (expression, word, element or spec).
  SH_ERR_PARSE = 2,
  // The requested construction is not covered (word shape, modulus).
  SH_ERR_UNSUPPORTED = 3,
  // An expansion limit was hit (enumeration cap, tuple budget,
  // composition cap).
  SH_ERR_LIMIT = 4,
} ShStatus;

// Opaque alphabet handle.
typedef struct ShAlphabet ShAlphabet;

// Opaque expression handle.
typedef struct ShExpr ShExpr;

// Opaque handle bundling a Rees zero-matrix semigroup with its
// morphism, as read from spec text.
typedef struct ShRees ShRees;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message for the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *sh_last_error_message(void);

// Build an alphabet from its letters, e.g. `"abc"`.
//
// # Safety
// `letters` must be a NUL-terminated string and `out` a valid pointer.
enum ShStatus sh_alphabet_new(const char *letters, struct ShAlphabet **out);

// # Safety
// `alphabet` must come from [`sh_alphabet_new`] and not be used again.
void sh_alphabet_free(struct ShAlphabet *alphabet);

// Parse an expression in the text grammar (`0`, `1`, letters, `|`,
// juxtaposition, `*`, `!`, `&`, `-`, parentheses).
//
// # Safety
// All pointers must be valid; `text` NUL-terminated.
enum ShStatus sh_expr_parse(const struct ShAlphabet *alphabet,
                            const char *text,
                            struct ShExpr **out);

// # Safety
// `expr` must come from this library and not be used again.
void sh_expr_free(struct ShExpr *expr);

// Star-height of the expression tree.
//
// # Safety
// `expr` must be a valid handle.
uint32_t sh_expr_star_height(const struct ShExpr *expr);

// Render the expression in the text grammar.
//
// # Safety
// Pointers must be valid; free the result with [`sh_string_free`].
enum ShStatus sh_expr_render(const struct ShExpr *expr, char **out);

// Does `word` (possibly empty) belong to the expression's language?
//
// # Safety
// Pointers must be valid; `word` NUL-terminated.
enum ShStatus sh_expr_member(const struct ShExpr *expr, const char *word, bool *out);

// All words of the language up to `max_len`, newline-separated in
// length-then-lexicographic order (the empty word prints as an empty
// line).
//
// # Safety
// Pointers must be valid; free the result with [`sh_string_free`].
enum ShStatus sh_expr_enumerate(const struct ShExpr *expr,
                                const struct ShAlphabet *alphabet,
                                uint32_t max_len,
                                char **out);

// Compare two languages on every word up to `max_len`. On
// inequivalence, `*counterexample` receives the least word that tells
// them apart (otherwise NULL).
//
// # Safety
// Pointers must be valid; free `*counterexample` with
// [`sh_string_free`].
enum ShStatus sh_expr_equiv(const struct ShExpr *left,
                            const struct ShExpr *right,
                            const struct ShAlphabet *alphabet,
                            uint32_t max_len,
                            bool *equivalent,
                            char **counterexample);

// The star-free language of words containing `word` exactly `k` times.
//
// # Safety
// Pointers must be valid; `word` NUL-terminated.
enum ShStatus sh_count_expr(const struct ShAlphabet *alphabet,
                            const char *word,
                            uint32_t k,
                            struct ShExpr **out);

// The height-at-most-one language of words containing `word` exactly
// `k` modulo `modulus` times.
//
// # Safety
// Pointers must be valid; `word` NUL-terminated.
enum ShStatus sh_modcount_expr(const struct ShAlphabet *alphabet,
                               const char *word,
                               uint32_t k,
                               uint32_t modulus,
                               struct ShExpr **out);

// Load a semigroup and morphism from spec text (the same line format
// the CLI reads from files).
//
// # Safety
// Pointers must be valid; `spec_text` NUL-terminated.
enum ShStatus sh_rees_parse(const char *spec_text, struct ShRees **out);

// # Safety
// `rees` must come from [`sh_rees_parse`] and not be used again.
void sh_rees_free(struct ShRees *rees);

// Evaluate the morphism on a non-empty word; the image prints as
// `zero` or `(i, [residues], lambda)`.
//
// # Safety
// Pointers must be valid; free the result with [`sh_string_free`].
enum ShStatus sh_rees_eval(const struct ShRees *rees, const char *word, char **out);

// The preimage expression of one element, written `zero` or
// `<i>,<residues...>,<lambda>`; star-free for the zero, height at
// most one otherwise.
//
// # Safety
// Pointers must be valid; `element` NUL-terminated.
enum ShStatus sh_rees_preimage(const struct ShRees *rees, const char *element, struct ShExpr **out);

// The preimage of a set of elements, semicolon-separated, restricted
// to non-empty words; height at most one.
//
// # Safety
// Pointers must be valid; `elements` NUL-terminated.
enum ShStatus sh_rees_recognized(const struct ShRees *rees,
                                 const char *elements,
                                 struct ShExpr **out);

// Release a string returned by this library.
//
// # Safety
// `text` must come from this library and not be used again.
void sh_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STARHEIGHT_H */
