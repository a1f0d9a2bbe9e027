#ifndef LGSPEC_H
#define LGSPEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum {
  LG_STATUS_OK = 0,
  LG_STATUS_NULL_POINTER = 1,
  LG_STATUS_INVALID_UTF8 = 2,
  LG_STATUS_INVALID_INPUT = 3,
  LG_STATUS_COMPUTATION_FAILED = 4,
  // The computation ran but at least one check did not pass.
  LG_STATUS_CHECK_FAILED = 5,
  LG_STATUS_PANIC = 6,
} LgStatus;

// Quantum multiplication by the anticanonical class for a named family.
typedef struct LgQuantumAlgebra LgQuantumAlgebra;

// A parsed weight system, optionally tagged with its named family.
typedef struct LgWeightSystem LgWeightSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *lg_last_error(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void lg_string_free(char *s);

// Parses `d;w1,...,wN` or a family name such as `E7` or `Fermat:5,3`.
//
// # Safety
// `input` must be a NUL-terminated string and `out` a writable pointer.
LgStatus lg_weight_system_parse(const char *input, LgWeightSystem **out);

// # Safety
// `ws` must come from [`lg_weight_system_parse`] or be NULL.
void lg_weight_system_free(LgWeightSystem *ws);

// Degree `d` of the system, 0 for NULL.
//
// # Safety
// `ws` must be a live handle or NULL.
uint32_t lg_weight_system_degree(const LgWeightSystem *ws);

// Number of weights, 0 for NULL.
//
// # Safety
// `ws` must be a live handle or NULL.
size_t lg_weight_system_num_weights(const LgWeightSystem *ws);

// Copies up to `len` weights into `buf` and returns the total count.
//
// # Safety
// `buf` must hold `len` elements unless `len` is 0.
size_t lg_weight_system_weights(const LgWeightSystem *ws, uint32_t *buf, size_t len);

// Index `d - sum(w)`; positive for general type.
//
// # Safety
// `ws` must be a live handle and `out` writable.
LgStatus lg_weight_system_nu(const LgWeightSystem *ws, int64_t *out);

// Whether the input named a family with a quantum algebra fixture.
//
// # Safety
// `ws` must be a live handle or NULL.
bool lg_weight_system_is_family(const LgWeightSystem *ws);

// The positive real number `T`, rounded to a double.
//
// # Safety
// `ws` must be a live handle and `out` writable.
LgStatus lg_principal_t(const LgWeightSystem *ws, uint32_t precision, double *out);

// Builds the quantum algebra of a named family.
//
// # Safety
// `ws` must be a live handle and `out` writable.
LgStatus lg_quantum_algebra_build(const LgWeightSystem *ws, LgQuantumAlgebra **out);

// # Safety
// `qa` must come from [`lg_quantum_algebra_build`] or be NULL.
void lg_quantum_algebra_free(LgQuantumAlgebra *qa);

// Total dimension of the state space, counting broad sectors.
//
// # Safety
// `qa` must be a live handle or NULL.
uint64_t lg_quantum_algebra_dimension(const LgQuantumAlgebra *qa);

// Checks the spectrum conjecture and writes the principal eigenvalue.
//
// Returns [`LgStatus::CheckFailed`] when any part of the conjecture fails;
// `principal` is still written in that case.
//
// # Safety
// `qa` must be a live handle and `principal` writable.
LgStatus lg_spectrum_check(const LgQuantumAlgebra *qa,
                           uint32_t precision,
                           double tol,
                           double *principal);

// Runs every applicable check and returns the JSON report in `json_out`.
//
// The report is produced whether or not the checks pass; the status says
// which. Release it with [`lg_string_free`].
//
// # Safety
// `input` must be a NUL-terminated string and `json_out` writable.
LgStatus lg_verify_json(const char *input, uint32_t precision, double tol, char **json_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LGSPEC_H */
