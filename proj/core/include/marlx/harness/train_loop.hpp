#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "marlx/harness/config.hpp"
#include "marlx/learner/qmix.hpp"

namespace marlx::harness {

struct RunRecord {
  std::uint64_t env_steps = 0;
  double eval_mean = 0.0;
  double eval_std = 0.0;
  double intrinsic_mean = 0.0;  // mean r_int since the previous eval point
  double wall_seconds = 0.0;
};

/// Per-run evaluation curve. The wall_seconds column is informational; the
/// deterministic columns (env_steps, eval_mean, eval_std) are what the curve
/// CSV carries and what reproducibility guarantees cover.
struct RunLog {
  std::vector<RunRecord> records;

  void to_csv(std::ostream& out) const;
  void write_curve_csv(std::ostream& out) const;
  static RunLog from_csv(std::istream& in);
  static RunLog from_csv_file(const std::string& path);
};

struct EvalResult {
  double mean = 0.0;
  double stddev = 0.0;  // population std; 0 for a single episode
};

/// Greedy (epsilon = 0) rollouts; returns the sample mean/std of the
/// undiscounted extrinsic episode returns.
EvalResult evaluate(envs::Env& env, const learner::QmixLearner& learner, std::size_t episodes,
                    numkit::SeededRng& rng);

/// Runs the full training loop for one seed: action selection, intrinsic
/// reward, replay, periodic train/eval/target-sync. Fully deterministic per
/// (config, seed) apart from the wall-clock column. If config.out_dir is set,
/// the run log, curve CSV, checkpoint and optional intrinsic-signal CSV are
/// written there incrementally.
RunLog run_training(const ExperimentConfig& config, std::uint64_t seed,
                    const std::function<void(const RunRecord&)>& on_eval = {});

/// One CSV row per step: step index, global state, joint action, reward, done.
void dump_trajectory_csv(std::ostream& out, envs::Env& env, const learner::QmixLearner& learner,
                         numkit::SeededRng& rng);

}  // namespace marlx::harness
