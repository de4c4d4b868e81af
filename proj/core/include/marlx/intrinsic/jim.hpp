#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "marlx/intrinsic/ellipse.hpp"
#include "marlx/intrinsic/inverse_dynamics.hpp"
#include "marlx/intrinsic/rnd.hpp"

namespace marlx::intrinsic {

enum class IntrinsicMode { none, jim, lim, jim_llec, jim_eec };

struct IntrinsicConfig {
  IntrinsicMode mode = IntrinsicMode::none;
  double beta = 1.0;            // weight of the intrinsic reward
  double alpha = 0.5;           // life-long novelty scaling factor
  double learning_rate = 1e-4;  // predictor / inverse-dynamics learning rate
  double lambda = 0.1;          // ellipse ridge
  double ablation_scale = 1.0;  // magnitude match for single-criterion modes
  std::size_t enc_dim = 64;
  std::size_t hidden_dim = 128;
  std::size_t train_batch = 64;  // most recent transitions used per update
  std::size_t train_every = 1;   // gradient step cadence in env steps; 0 disables training
};

/// Per-step diagnostics of the last reward computation.
struct IntrinsicSignals {
  double rnd_next = 0.0;
  double llec = 0.0;
  double bonus = 0.0;
  double eec = 0.0;
  double r_int = 0.0;
};

/// r_ext + beta * r_int.
inline double combine_reward(double r_ext, double r_int, double beta) {
  return r_ext + beta * r_int;
}

/// Double-timescale intrinsic module over one observation stream: life-long
/// novelty gain times the episodic elliptical criterion, or a single
/// criterion in the ablated modes. One instance serves the whole team in JIM
/// (joint observation) or a single agent in LIM (local observation).
class JimModule {
public:
  JimModule(const IntrinsicConfig& cfg, std::size_t obs_dim, std::size_t n_agents,
            std::size_t n_actions, numkit::SeededRng rng);

  /// Intrinsic reward for the transition; evaluates the episodic bonus before
  /// folding the new embedding into the ellipse.
  double reward(const std::vector<double>& obs_t, const std::vector<double>& obs_next);

  /// Queue the transition for predictor / inverse-dynamics training; runs one
  /// gradient step every `train_every` calls on the latest `train_batch`.
  void observe_transition(const std::vector<double>& obs_t, const std::vector<int>& actions,
                          const std::vector<double>& obs_next);

  void episode_reset();

  const IntrinsicSignals& last() const { return last_; }
  const IntrinsicConfig& config() const { return cfg_; }

  bool has_rnd() const { return rnd_.has_value(); }
  bool has_ellipse() const { return ellipse_.has_value(); }
  RndModule& rnd() { return *rnd_; }
  EllipseState& ellipse() { return *ellipse_; }
  InverseDynamicsModel& idm() { return *idm_; }

private:
  IntrinsicConfig cfg_;
  std::optional<RndModule> rnd_;
  std::optional<EllipseState> ellipse_;
  std::optional<InverseDynamicsModel> idm_;
  std::deque<IdmTransition> recent_;
  std::size_t step_count_ = 0;
  IntrinsicSignals last_;
};

/// Local intrinsic motivation: one JimModule per agent over its local
/// observation, combined into the single shared reward by the mean.
class LimModule {
public:
  LimModule(const IntrinsicConfig& cfg, std::size_t n_agents, std::size_t obs_dim,
            std::size_t n_actions, numkit::SeededRng rng);

  std::vector<double> rewards(const std::vector<std::vector<double>>& obs_t,
                              const std::vector<std::vector<double>>& obs_next);
  static double combine(const std::vector<double>& per_agent);

  void observe_transition(const std::vector<std::vector<double>>& obs_t,
                          const std::vector<int>& actions,
                          const std::vector<std::vector<double>>& obs_next);
  void episode_reset();

  JimModule& agent_module(std::size_t i) { return modules_[i]; }
  std::size_t n_agents() const { return modules_.size(); }

private:
  std::vector<JimModule> modules_;
};

/// Mode-dispatching front end used by the training loop. For joint modes the
/// per-agent observations are concatenated in agent order.
class IntrinsicStack {
public:
  IntrinsicStack(const IntrinsicConfig& cfg, std::size_t n_agents, std::size_t obs_dim,
                 std::size_t n_actions, numkit::SeededRng rng);

  /// Intrinsic reward for one environment transition, including bookkeeping
  /// and cadenced training. Returns 0 in mode none.
  double step_reward(const std::vector<std::vector<double>>& obs_t, const std::vector<int>& actions,
                     const std::vector<std::vector<double>>& obs_next);

  void episode_reset();

  IntrinsicMode mode() const { return cfg_.mode; }
  const IntrinsicConfig& config() const { return cfg_; }
  const IntrinsicSignals& last() const { return last_; }

private:
  IntrinsicConfig cfg_;
  std::optional<JimModule> joint_;
  std::optional<LimModule> local_;
  IntrinsicSignals last_;
};

std::vector<double> concat_observations(const std::vector<std::vector<double>>& per_agent);

}  // namespace marlx::intrinsic
