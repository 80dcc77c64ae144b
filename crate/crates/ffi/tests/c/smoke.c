#include <math.h>
#include <stdio.h>
#include "bandit_lab.h"

int main(void) {
  BlBargain b;
  if (bl_bargain_analyze(0.9, 0.8, 20000, 8.0, &b) != BL_STATUS_OK) return 1;
  printf("n_full %.6f\n", b.n_full);
  printf("n_bargain %.6f\n", b.n_bargain);

  BlEnvironment *env = NULL;
  if (bl_environment_from_preset("B(0.9, 0.88)", &env) != BL_STATUS_OK) return 2;
  printf("arms %zu\n", bl_environment_num_arms(env));

  BlSimConfig cfg = bl_sim_config_default();
  cfg.horizon = 2000;
  cfg.n_sims = 8;
  cfg.base_seed = 5;
  BlSummary *summary = NULL;
  if (bl_run_batch(env, &cfg, &summary) != BL_STATUS_OK) return 3;
  printf("regret_positive %d\n", bl_summary_mean_regret(summary) > 0.0);
  bl_summary_free(summary);
  bl_environment_free(env);

  BlStatus s = bl_environment_from_preset("B7", &env);
  printf("bad_preset %d %s\n", (int)s, bl_last_error_message()[0] ? "message" : "empty");
  return 0;
}
