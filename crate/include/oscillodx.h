/* C interface to oscillodx: simulation and diagnosis of noisy oscillation mechanisms. */

#ifndef OSCILLODX_H
#define OSCILLODX_H

/* Generated by cbindgen from the oscillodx-ffi crate; edit the Rust source, not this file. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of an FFI call. Zero is success; nonzero values classify the
// failure, with detail available from `ox_last_error_message`.
typedef enum OxStatus {
  OX_STATUS_OK = 0,
  // A required pointer argument was NULL.
  OX_STATUS_NULL_POINTER = 1,
  // A parameter lies outside its documented domain.
  OX_STATUS_INVALID_PARAMETER = 2,
  // Too few samples for the requested statistic.
  OX_STATUS_INSUFFICIENT_DATA = 3,
  // Sample variance is (numerically) zero; moment ratios are undefined.
  OX_STATUS_DEGENERATE_VARIANCE = 4,
  // A NaN or infinity appeared where a finite value is required.
  OX_STATUS_NON_FINITE = 5,
  // The step size cannot resolve the fastest decay in the model.
  OX_STATUS_UNSTABLE_INTEGRATION = 6,
  // Malformed content: CSV shape, timebase, channel name, window, JSON.
  OX_STATUS_FORMAT = 7,
  // Operating-system I/O failure.
  OX_STATUS_IO = 8,
  // A string argument was not valid UTF-8.
  OX_STATUS_UTF8 = 9,
  // An internal invariant failed (a bug worth reporting).
  OX_STATUS_INTERNAL = 10,
} OxStatus;

// Taper applied to each Welch segment.
typedef enum OxTaper {
  // Periodic Hann window (the library default).
  OX_TAPER_HANN = 0,
  // No taper.
  OX_TAPER_RECTANGULAR = 1,
} OxTaper;

// One uniformly sampled channel (opaque).
typedef struct OxSeries OxSeries;

// A one-sided Welch spectrum (opaque).
typedef struct OxSpectrum OxSpectrum;

// Integration and recording plan for the simulators (passed by value).
typedef struct OxSimPlan {
  // Integrator step, seconds.
  double dt;
  // Recorded span, seconds (after burn-in).
  double duration;
  // Span integrated and discarded before recording, seconds.
  double burn_in;
  // Record every `stride`-th step.
  size_t stride;
  // Base RNG seed.
  uint64_t seed;
  // Replicate index; (seed, stream) fully determines the noise path.
  uint64_t stream;
} OxSimPlan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ox_version(void);

// Description of the most recent failure on this thread, or an empty
// string if the last call succeeded. The pointer stays valid until the
// next failing call on the same thread.
const char *ox_last_error_message(void);

// Builds a series from caller-owned samples (copied), with `label` naming
// the channel, first sample at time `t0`, and spacing `dt` seconds.
//
// # Safety
// `label` must be a NUL-terminated string, `data` must point to `len`
// readable doubles, and `out` must be a valid destination pointer.
enum OxStatus ox_series_from_data(const char *label,
                                  double t0,
                                  double dt,
                                  const double *data,
                                  size_t len,
                                  struct OxSeries **out);

// Releases a series handle. NULL is a no-op.
//
// # Safety
// `series` must be a handle from this library, not yet freed.
void ox_series_free(struct OxSeries *series);

// Sample count of the series.
//
// # Safety
// `series` must be a live handle and `out` a valid destination.
enum OxStatus ox_series_len(const struct OxSeries *series, size_t *out);

// Time of the first sample, seconds.
//
// # Safety
// `series` must be a live handle and `out` a valid destination.
enum OxStatus ox_series_t0(const struct OxSeries *series, double *out);

// Sample spacing, seconds.
//
// # Safety
// `series` must be a live handle and `out` a valid destination.
enum OxStatus ox_series_dt(const struct OxSeries *series, double *out);

// Borrows the sample buffer. The pointer is valid until the series is
// freed and must not be written through.
//
// # Safety
// `series` must be a live handle; `out_data` and `out_len` must be valid
// destinations.
enum OxStatus ox_series_samples(const struct OxSeries *series,
                                const double **out_data,
                                size_t *out_len);

// Simulates the noise-sustained ringing of a damped linear mode and
// returns its first channel.
//
// # Safety
// `out` must be a valid destination pointer.
enum OxStatus ox_simulate_weakly_damped(double damping,
                                        double natural_freq,
                                        double noise_intensity,
                                        struct OxSimPlan plan,
                                        struct OxSeries **out);

// Simulates a stochastic limit cycle (orbit radius √growth_rate) and
// returns its first channel.
//
// # Safety
// `out` must be a valid destination pointer.
enum OxStatus ox_simulate_limit_cycle(double growth_rate,
                                      double frequency,
                                      double noise_intensity,
                                      struct OxSimPlan plan,
                                      struct OxSeries **out);

// Simulates a damped mode under a periodic drive and returns its first
// channel.
//
// # Safety
// `out` must be a valid destination pointer.
enum OxStatus ox_simulate_forced(double damping,
                                 double natural_freq,
                                 double forcing_amp,
                                 double forcing_freq,
                                 double noise_intensity,
                                 struct OxSimPlan plan,
                                 struct OxSeries **out);

// Simulates a single Ornstein–Uhlenbeck relaxation channel.
//
// # Safety
// `out` must be a valid destination pointer.
enum OxStatus ox_simulate_ornstein_uhlenbeck(double decay_rate,
                                             double noise_intensity,
                                             struct OxSimPlan plan,
                                             struct OxSeries **out);

// Excess kurtosis (fourth standardized moment minus 3) of the series.
// Needs at least 100 samples.
//
// # Safety
// `series` must be a live handle and `out` a valid destination.
enum OxStatus ox_excess_kurtosis(const struct OxSeries *series, double *out);

// Welch power spectral density of the series: segments of `segment_len`
// samples advancing by `segment_len·(1 − overlap)`, tapered and averaged.
//
// # Safety
// `series` must be a live handle and `out` a valid destination pointer.
enum OxStatus ox_welch_psd(const struct OxSeries *series,
                           size_t segment_len,
                           double overlap,
                           enum OxTaper taper,
                           struct OxSpectrum **out);

// Releases a spectrum handle. NULL is a no-op.
//
// # Safety
// `spectrum` must be a handle from this library, not yet freed.
void ox_spectrum_free(struct OxSpectrum *spectrum);

// Number of frequency bins (`segment_len/2 + 1`).
//
// # Safety
// `spectrum` must be a live handle and `out` a valid destination.
enum OxStatus ox_spectrum_len(const struct OxSpectrum *spectrum, size_t *out);

// Borrows the bin-frequency array (Hz). Valid until the spectrum is freed.
//
// # Safety
// `spectrum` must be a live handle; `out_data` and `out_len` valid
// destinations.
enum OxStatus ox_spectrum_freqs(const struct OxSpectrum *spectrum,
                                const double **out_data,
                                size_t *out_len);

// Borrows the one-sided density array (power per Hz). Valid until the
// spectrum is freed.
//
// # Safety
// `spectrum` must be a live handle; `out_data` and `out_len` valid
// destinations.
enum OxStatus ox_spectrum_psd(const struct OxSpectrum *spectrum,
                              const double **out_data,
                              size_t *out_len);

// Equivalent noise bandwidth of the taper, Hz — the width a pure tone
// smears to.
//
// # Safety
// `spectrum` must be a live handle and `out` a valid destination.
enum OxStatus ox_spectrum_resolution_bw(const struct OxSpectrum *spectrum, double *out);

// Number of averaged segments.
//
// # Safety
// `spectrum` must be a live handle and `out` a valid destination.
enum OxStatus ox_spectrum_segments(const struct OxSpectrum *spectrum, size_t *out);

// Classifies the series by oscillation mechanism with the default
// thresholds and writes the full report as a JSON document (schema
// `diagnosis-report/v1`). Needs at least 1000 samples. Release the string
// with `ox_string_free`.
//
// # Safety
// `series` must be a live handle and `out_json` a valid destination.
enum OxStatus ox_classify_json(const struct OxSeries *series, char **out_json);

// Releases a string returned by this library. NULL is a no-op.
//
// # Safety
// `s` must have been returned by this library and not yet freed.
void ox_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCILLODX_H */
