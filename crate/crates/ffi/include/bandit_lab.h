#ifndef BANDIT_LAB_H
#define BANDIT_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum BlStatus {
  BL_STATUS_OK = 0,
  BL_STATUS_NULL_POINTER = 1,
  BL_STATUS_INVALID_ARGUMENT = 2,
  BL_STATUS_INFEASIBLE = 3,
  BL_STATUS_BUFFER_TOO_SMALL = 4,
  BL_STATUS_PANIC = 5,
} BlStatus;

/**
 * Arm-selection rule.
 */
typedef enum BlPolicy {
  BL_POLICY_UCB = 0,
  BL_POLICY_UCB_DT_MU = 1,
  BL_POLICY_UCB_DT_MU_MARGIN = 2,
  BL_POLICY_UCB_THEN_COMMIT = 3,
} BlPolicy;

/**
 * Lambert W branch.
 */
typedef enum BlBranch {
  BL_BRANCH_PRINCIPAL = 0,
  BL_BRANCH_LOWER = 1,
} BlBranch;

/**
 * Opaque bandit environment.
 */
typedef struct BlEnvironment BlEnvironment;

/**
 * Opaque result of a Monte-Carlo batch.
 */
typedef struct BlSummary BlSummary;

/**
 * Parameters of a batch; start from [`bl_sim_config_default`].
 */
typedef struct BlSimConfig {
  enum BlPolicy policy;
  double gamma;
  double margin;
  uint64_t horizon;
  uint64_t n_sims;
  uint64_t base_seed;
  /**
   * Number of geometrically spaced snapshot rounds.
   */
  size_t log_points;
  /**
   * Worker threads; 0 uses the global pool. Never changes results.
   */
  size_t workers;
} BlSimConfig;

/**
 * Exploration full / bargain point analysis of a two-armed scenario.
 */
typedef struct BlBargain {
  double mu1;
  double mu2;
  uint64_t horizon;
  double delta;
  double exponent_divisor;
  double n_full;
  double n_bargain;
  double n2_star;
  double n2_star_closed_form;
  double g_full;
  double g_lower_at_bargain;
  double g_lower_at_n2_star;
  double g_lower_at_full;
  double residual_at_bargain;
  double gamma_recommended;
} BlBargain;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * Valid until the next call into this library from the same thread.
 */
const char *bl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bl_version(void);

/**
 * Builds a preset environment (`B5`, `B20`, `B0.02-0.01`, `B0.9-0.88`, `N5`, `N20`).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BlStatus bl_environment_from_preset(const char *name, struct BlEnvironment **out);

/**
 * Builds an environment of Bernoulli arms with the given means in `[0, 1]`.
 *
 * # Safety
 * `means` must point to `len` readable doubles and `out` must be valid.
 */
enum BlStatus bl_environment_bernoulli(const double *means, size_t len, struct BlEnvironment **out);

/**
 * Builds an environment of unit-variance Gaussian arms.
 *
 * # Safety
 * `means` must point to `len` readable doubles and `out` must be valid.
 */
enum BlStatus bl_environment_gaussian(const double *means, size_t len, struct BlEnvironment **out);

/**
 * Number of arms, or 0 for a null handle.
 *
 * # Safety
 * `env` must be null or a live handle.
 */
size_t bl_environment_num_arms(const struct BlEnvironment *env);

/**
 * Copies the suboptimality gaps into `out[0..len]`; `len` must be at least
 * the number of arms.
 *
 * # Safety
 * `env` must be a live handle and `out` must point to `len` writable doubles.
 */
enum BlStatus bl_environment_gaps(const struct BlEnvironment *env, double *out, size_t len);

/**
 * Releases an environment. Null is ignored.
 *
 * # Safety
 * `env` must be null or a handle not yet freed.
 */
void bl_environment_free(struct BlEnvironment *env);

/**
 * Defaults: UCB-DT(mu), gamma 0.02, margin 0.05, T = 20000, 2000 runs,
 * seed 0, 50 snapshots, global pool.
 */
struct BlSimConfig bl_sim_config_default(void);

/**
 * Runs a seeded Monte-Carlo batch. Equal inputs give bit-identical summaries.
 *
 * # Safety
 * `env` and `config` must be live, `out` must be valid.
 */
enum BlStatus bl_run_batch(const struct BlEnvironment *env,
                           const struct BlSimConfig *config,
                           struct BlSummary **out);

/**
 * Mean final pseudo-regret, or NaN for a null handle.
 *
 * # Safety
 * `summary` must be null or a live handle.
 */
double bl_summary_mean_regret(const struct BlSummary *summary);

/**
 * Standard error of the mean final pseudo-regret, or NaN for a null handle.
 *
 * # Safety
 * `summary` must be null or a live handle.
 */
double bl_summary_std_error(const struct BlSummary *summary);

/**
 * Number of snapshot rounds, or 0 for a null handle.
 *
 * # Safety
 * `summary` must be null or a live handle.
 */
size_t bl_summary_num_snapshots(const struct BlSummary *summary);

/**
 * Copies snapshot rounds and mean cumulative regret into two arrays of
 * `len` slots each.
 *
 * # Safety
 * `summary` must be live; `rounds` and `mean_regret` must point to `len`
 * writable elements.
 */
enum BlStatus bl_summary_snapshots(const struct BlSummary *summary,
                                   uint64_t *rounds,
                                   double *mean_regret,
                                   size_t len);

/**
 * Releases a summary. Null is ignored.
 *
 * # Safety
 * `summary` must be null or a handle not yet freed.
 */
void bl_summary_free(struct BlSummary *summary);

/**
 * Analyzes a two-armed scenario with `mu1 > mu2`. Returns
 * `BL_STATUS_INFEASIBLE` when the full exploration budget reaches the
 * horizon; `out` then carries the means, horizon, gap and `n_full`, and the
 * remaining fields are NaN.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BlStatus bl_bargain_analyze(double mu1,
                                 double mu2,
                                 uint64_t horizon,
                                 double exponent_divisor,
                                 struct BlBargain *out);

/**
 * Lambert W on the chosen branch.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BlStatus bl_lambert_w(enum BlBranch branch, double x, double *out);

/**
 * Mean-gap distance of an arm pulled `n_pulls` times whose empirical mean
 * differs from another arm's by `mean_gap`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BlStatus bl_distance_mu(double gamma, double mean_gap, uint64_t n_pulls, double *out);

/**
 * Nonzero when `status` is `BL_STATUS_OK`.
 */
int bl_status_is_ok(enum BlStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BANDIT_LAB_H */
