#ifndef FINBUNDLE_H
#define FINBUNDLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of a call. The numbering of 0 to 3 follows the CLI exit codes.
typedef enum FbStatus {
  FB_STATUS_OK = 0,
  // The question was answered with no: not a bundle, not isomorphic.
  FB_STATUS_NEGATIVE = 1,
  // The input is not a well-formed document.
  FB_STATUS_PARSE = 2,
  // The node budget ran out.
  FB_STATUS_BUDGET = 3,
  // The input is well formed but not a valid object, or an argument is out of range.
  FB_STATUS_INVALID = 4,
  FB_STATUS_NULL_POINTER = 5,
  // An internal panic was caught.
  FB_STATUS_PANIC = 6,
} FbStatus;

typedef struct FbBundle FbBundle;

typedef struct FbClassTable FbClassTable;

typedef struct FbFunctor FbFunctor;

typedef struct FbSpace FbSpace;

// Message for the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *fb_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void fb_string_free(char *s);

// Parses a space document.
//
// # Safety
// `json` must be a nul-terminated string and `out` a writable pointer.
enum FbStatus fb_space_from_json(const char *json, struct FbSpace **out);

// # Safety
// `space` must be null or a handle from this library, not yet freed.
void fb_space_free(struct FbSpace *space);

// Number of points, or 0 for a null handle.
//
// # Safety
// `space` must be null or a live handle.
size_t fb_space_len(const struct FbSpace *space);

// Writes whether `x <= y` in the specialization order.
//
// # Safety
// `space` must be a live handle and `out` writable.
enum FbStatus fb_space_leq(const struct FbSpace *space, size_t x, size_t y, bool *out);

// Serializes a space; free the result with [`fb_string_free`].
//
// # Safety
// `space` must be a live handle and `out` writable.
enum FbStatus fb_space_to_json(const struct FbSpace *space, char **out);

// Parses a functor document and checks the functor laws.
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum FbStatus fb_functor_from_json(const char *json, struct FbFunctor **out);

// # Safety
// `functor` must be null or a live handle.
void fb_functor_free(struct FbFunctor *functor);

// The Grothendieck construction as a JSON document, optionally with its
// open sets (at most 12 points).
//
// # Safety
// `functor` must be a live handle and `out` writable.
enum FbStatus fb_groth_json(const struct FbFunctor *functor, bool dump_opens, char **out);

// Parses a bundle document; charts, if present, are validated.
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum FbStatus fb_bundle_from_json(const char *json, struct FbBundle **out);

// # Safety
// `bundle` must be null or a live handle.
void fb_bundle_free(struct FbBundle *bundle);

// Searches for trivializations. On success the handle carries them and
// the call returns `Ok`; `Negative` means the map is not a bundle with the
// given fiber.
//
// # Safety
// `bundle` must be a live handle not used concurrently.
enum FbStatus fb_bundle_verify(struct FbBundle *bundle, uint64_t node_budget);

// Looks for an over-base homeomorphism between two verified bundles and,
// if `witness` is not null, writes an iso document.
//
// # Safety
// `first`, `second` must be live handles; `witness` null or writable.
enum FbStatus fb_bundle_iso(const struct FbBundle *first,
                            const struct FbBundle *second,
                            uint64_t node_budget,
                            char **witness);

// Classifies bundles over `base` with fiber `fiber`. On `Budget` a partial
// table is still written to `out` and marked inconclusive.
//
// # Safety
// `base`, `fiber` must be live handles and `out` writable.
enum FbStatus fb_classify(const struct FbSpace *base,
                          const struct FbSpace *fiber,
                          uint64_t node_budget,
                          struct FbClassTable **out);

// Number of classes, or 0 for a null handle.
//
// # Safety
// `table` must be null or a live handle.
size_t fb_class_table_len(const struct FbClassTable *table);

// Number of enumerated functors in class `index`.
//
// # Safety
// `table` must be a live handle and `out` writable.
enum FbStatus fb_class_table_class_size(const struct FbClassTable *table,
                                        size_t index,
                                        uint64_t *out);

// # Safety
// `table` must be a live handle and `out` writable.
enum FbStatus fb_class_table_to_json(const struct FbClassTable *table, char **out);

// # Safety
// `table` must be null or a live handle.
void fb_class_table_free(struct FbClassTable *table);

#endif  /* FINBUNDLE_H */
