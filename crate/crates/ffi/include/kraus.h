#ifndef KRAUS_H
#define KRAUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum KrausStatus {
  KRAUS_STATUS_OK = 0,
  // A required pointer argument was null.
  KRAUS_STATUS_NULL_POINTER = 1,
  // Malformed JSON, invalid UTF-8, or non-finite numbers.
  KRAUS_STATUS_PARSE = 2,
  // Operands have incompatible dimensions.
  KRAUS_STATUS_DIMENSION = 3,
  // Input is not a valid density matrix.
  KRAUS_STATUS_INVALID_STATE = 4,
  // Input is not a valid CPTP map (or isometry/unitary where one is required).
  KRAUS_STATUS_INVALID_CHANNEL = 5,
  // The requested construction does not apply to these inputs.
  KRAUS_STATUS_INAPPLICABLE = 6,
  // Eigensolver or completion failure.
  KRAUS_STATUS_NUMERICAL = 7,
  // An argument is out of range.
  KRAUS_STATUS_INVALID_ARGUMENT = 8,
  // A Rust panic was caught at the boundary.
  KRAUS_STATUS_INTERNAL = 9,
} KrausStatus;

// Kraus map handle.
typedef struct KrausChannel KrausChannel;

// Stinespring dilation handle.
typedef struct KrausDilation KrausDilation;

// Density matrix handle.
typedef struct KrausState KrausState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread (empty if none).
// Valid until the next failing call on the same thread.
const char *kraus_last_error(void);

// Library version as a static NUL-terminated string.
const char *kraus_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void kraus_string_free(char *s);

// Parses a state document (density matrix or `"kind": "pure"` vector).
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum KrausStatus kraus_state_from_json(const char *json, struct KrausState **out);

// # Safety
// `state` must be a live handle; `out` must be writable.
enum KrausStatus kraus_state_to_json(const struct KrausState *state, char **out);

// Seeded random density matrix of the given dimension and rank.
//
// # Safety
// `out` must be writable.
enum KrausStatus kraus_state_random(size_t dim,
                                    size_t rank,
                                    uint64_t seed,
                                    struct KrausState **out);

// Dimension of a state (0 for a null handle).
//
// # Safety
// `state` must be null or a live handle.
size_t kraus_state_dim(const struct KrausState *state);

// Copies the row-major entries as interleaved (re, im) pairs into `buf`,
// which must hold `2 * dim * dim` doubles; `len` is its length in doubles.
//
// # Safety
// `state` must be a live handle and `buf` must point to `len` writable doubles.
enum KrausStatus kraus_state_entries(const struct KrausState *state, double *buf, size_t len);

// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum KrausStatus kraus_trace_distance(const struct KrausState *a,
                                      const struct KrausState *b,
                                      double *out);

// # Safety
// `state` must be null or a handle from this library, not yet freed.
void kraus_state_free(struct KrausState *state);

// Parses and validates (trace preservation) a channel document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum KrausStatus kraus_channel_from_json(const char *json, struct KrausChannel **out);

// # Safety
// `channel` must be a live handle; `out` must be writable.
enum KrausStatus kraus_channel_to_json(const struct KrausChannel *channel, char **out);

// Dimension of a channel (0 for a null handle).
//
// # Safety
// `channel` must be null or a live handle.
size_t kraus_channel_dim(const struct KrausChannel *channel);

// Number of Kraus operators held (0 for a null handle).
//
// # Safety
// `channel` must be null or a live handle.
size_t kraus_channel_len(const struct KrausChannel *channel);

// `out = Φ(state)`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum KrausStatus kraus_channel_apply(const struct KrausChannel *channel,
                                     const struct KrausState *state,
                                     struct KrausState **out);

// `out = second ∘ first` (first acts first).
//
// # Safety
// Handles must be live; `out` must be writable.
enum KrausStatus kraus_channel_compose(const struct KrausChannel *second,
                                       const struct KrausChannel *first,
                                       struct KrausChannel **out);

// Minimal operator count (rank of the Choi matrix).
//
// # Safety
// `channel` must be a live handle; `out` must be writable.
enum KrausStatus kraus_channel_rank(const struct KrausChannel *channel, size_t *out);

// Minimal Kraus representation of the same map.
//
// # Safety
// `channel` must be a live handle; `out` must be writable.
enum KrausStatus kraus_channel_minimal(const struct KrausChannel *channel,
                                       struct KrausChannel **out);

// Whether two channels have Choi matrices within `tol` (max-norm).
//
// # Safety
// Handles must be live; `out` must be writable.
enum KrausStatus kraus_channel_equal(const struct KrausChannel *a,
                                     const struct KrausChannel *b,
                                     double tol,
                                     bool *out);

// # Safety
// `channel` must be null or a handle from this library, not yet freed.
void kraus_channel_free(struct KrausChannel *channel);

// Channel sending every state to `target`.
//
// # Safety
// `target` must be a live handle; `out` must be writable.
enum KrausStatus kraus_synthesize_all_to_any(const struct KrausState *target,
                                             struct KrausChannel **out);

// Channel sending the pure state `input` to `target`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum KrausStatus kraus_synthesize_pure_to_any(const struct KrausState *input,
                                              const struct KrausState *target,
                                              struct KrausChannel **out);

// Channel sending `input` to `target`, choosing the construction
// automatically (unitary when spectra match, then pure-to-any, then
// all-to-any). `residual` (optional) receives the max-norm transfer error.
//
// # Safety
// Handles must be live; `out` must be writable; `residual` may be null.
enum KrausStatus kraus_synthesize(const struct KrausState *input,
                                  const struct KrausState *target,
                                  struct KrausChannel **out,
                                  double *residual);

// Stinespring dilation of a channel.
//
// # Safety
// `channel` must be a live handle; `out` must be writable.
enum KrausStatus kraus_channel_dilate(const struct KrausChannel *channel,
                                      struct KrausDilation **out);

// Ancilla dimension (0 for a null handle).
//
// # Safety
// `dilation` must be null or a live handle.
size_t kraus_dilation_ancilla_dim(const struct KrausDilation *dilation);

// # Safety
// `dilation` must be a live handle; `out` must be writable.
enum KrausStatus kraus_dilation_to_json(const struct KrausDilation *dilation, char **out);

// Reduced system state after the dilation unitary acts on `state ⊗ |0⟩⟨0|`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum KrausStatus kraus_dilation_replay(const struct KrausDilation *dilation,
                                       const struct KrausState *state,
                                       struct KrausState **out);

// # Safety
// `dilation` must be null or a handle from this library, not yet freed.
void kraus_dilation_free(struct KrausDilation *dilation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KRAUS_H */
