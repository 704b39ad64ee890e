#ifndef FOLIA_H
#define FOLIA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Bits reported by [`folia_check`].
#define FOLIA_CHECK_INTEGRABLE 1

#define FOLIA_CHECK_RADIAL 2

#define FOLIA_CHECK_SATURATED 4

// Result codes.
typedef enum FoliaStatus {
  FOLIA_STATUS_OK = 0,
  FOLIA_STATUS_NULL_ARGUMENT = 1,
  FOLIA_STATUS_INVALID_UTF8 = 2,
  FOLIA_STATUS_PARSE = 3,
  FOLIA_STATUS_MATH = 4,
  FOLIA_STATUS_VERIFY_FAILED = 5,
  FOLIA_STATUS_PANIC = 6,
} FoliaStatus;

// A certificate document together with its verification transcript.
typedef struct FoliaCertificate FoliaCertificate;

// A saturated foliation on projective space.
typedef struct FoliaFoliation FoliaFoliation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *folia_last_error(void);

// Parses a form document (`vars:` and `form:` lines) and saturates it.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum FoliaStatus folia_foliation_parse(const char *text, struct FoliaFoliation **out);

// # Safety
// `f` must come from [`folia_foliation_parse`] and not be used afterwards.
void folia_foliation_free(struct FoliaFoliation *f);

// # Safety
// `f` must be a live handle and `out` a writable pointer.
enum FoliaStatus folia_foliation_degree(const struct FoliaFoliation *f, int64_t *out);

// Dimension `n` of the ambient projective space.
//
// # Safety
// `f` must be a live handle and `out` a writable pointer.
enum FoliaStatus folia_foliation_dimension(const struct FoliaFoliation *f, size_t *out);

// Canonical rendering of the defining form; release with [`folia_string_free`].
//
// # Safety
// `f` must be a live handle.
char *folia_foliation_render(const struct FoliaFoliation *f);

// Checks a form document without saturating it first. On success `flags`
// holds the `FOLIA_CHECK_*` bits that hold.
//
// # Safety
// `text` must be a NUL-terminated string and `flags` a writable pointer.
enum FoliaStatus folia_check(const char *text, uint32_t *flags);

// Classifies a degree-four foliation. `point` is a comma-separated list of
// affine coordinates in chart `chart`, or null to search.
//
// # Safety
// `f` must be a live handle, `point` null or a NUL-terminated string and
// `out` a writable pointer.
enum FoliaStatus folia_classify(const struct FoliaFoliation *f,
                                size_t chart,
                                const char *point,
                                struct FoliaCertificate **out);

// Reads a certificate document.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum FoliaStatus folia_certificate_parse(const char *text, struct FoliaCertificate **out);

// # Safety
// `c` must come from this library and not be used afterwards.
void folia_certificate_free(struct FoliaCertificate *c);

// Variant tag such as `"affine"`; a static string, never freed.
//
// # Safety
// `c` must be a live handle.
const char *folia_certificate_tag(const struct FoliaCertificate *c);

// Serialized document; release with [`folia_string_free`].
//
// # Safety
// `c` must be a live handle.
char *folia_certificate_to_json(const struct FoliaCertificate *c);

// Re-verifies a certificate against `f`. Returns `VerifyFailed` with the
// failing identities in [`folia_last_error`] when a check fails.
//
// # Safety
// Both handles must be live.
enum FoliaStatus folia_certificate_verify(const struct FoliaCertificate *c,
                                          const struct FoliaFoliation *f);

// # Safety
// `s` must be null or a string returned by this library.
void folia_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOLIA_H */
