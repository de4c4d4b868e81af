#pragma once

#include <cstdint>
#include <vector>

#include "marlx/learner/mixer.hpp"
#include "marlx/learner/replay.hpp"
#include "marlx/numkit/mlp.hpp"
#include "marlx/numkit/optimizer.hpp"

namespace marlx::learner {

struct TrainConfig {
  double gamma = 0.99;
  double learning_rate = 5e-4;
  numkit::OptKind optimizer = numkit::OptKind::rmsprop;
  std::size_t batch_episodes = 32;
  std::size_t updates_per_episode = 1;  // TD train steps per completed episode
  std::size_t target_sync_every = 200;  // train steps
  double eps_start = 0.3;
  double eps_final = 0.05;
  std::size_t eps_anneal_steps = 50000;  // env steps
  std::size_t train_start_episodes = 0;  // 0 = batch_episodes
  std::vector<std::size_t> agent_hidden = {64, 64};
  std::size_t mixer_embed = 32;
  double grad_clip = 10.0;  // global L2 norm; 0 disables
  double per_alpha = 0.6;
  double per_beta0 = 0.4;
  double per_eps = 1e-6;
  std::size_t replay_capacity = 5000;  // episodes
};

/// QMIX-style value-factorization learner: one parameter-shared agent network
/// over (observation, agent id, last action), a monotonic mixing network over
/// the global state, and target copies of both for TD bootstrapping.
class QmixLearner {
public:
  QmixLearner(std::size_t n_agents, std::size_t obs_dim, std::size_t n_actions,
              std::size_t state_dim, const TrainConfig& cfg, numkit::SeededRng rng);

  std::size_t n_agents() const { return n_agents_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t n_actions() const { return n_actions_; }
  std::size_t state_dim() const { return state_dim_; }
  const TrainConfig& config() const { return cfg_; }

  /// Independent epsilon-greedy per agent: explore with probability epsilon,
  /// otherwise the greedy action; ties go to the lowest action index.
  /// last_actions entries of -1 encode "episode start" (zero one-hot).
  std::vector<int> select_actions(const std::vector<std::vector<double>>& joint_obs,
                                  const std::vector<int>& last_actions, double epsilon,
                                  numkit::SeededRng& rng) const;

  double epsilon_at(std::uint64_t env_steps) const;

  struct TrainResult {
    double loss = 0.0;
    std::vector<double> episode_td_means;  // mean |TD error| per sampled episode
  };

  /// One optimizer step on the IS-weighted squared TD error of every
  /// transition in the sampled episodes.
  TrainResult train_step(const SampledBatch& batch);

  void sync_targets();
  std::uint64_t train_steps() const { return train_steps_; }

  numkit::Mlp& agent_net() { return agent_; }
  const numkit::Mlp& agent_net() const { return agent_; }
  const numkit::Mlp& target_agent_net() const { return agent_target_; }
  MixerNet& mixer() { return mixer_; }
  const MixerNet& mixer() const { return mixer_; }
  const MixerNet& target_mixer() const { return mixer_target_; }

  std::size_t agent_input_dim() const { return obs_dim_ + n_agents_ + n_actions_; }
  /// obs ++ one-hot(agent) ++ one-hot(last action); last_action -1 = zeros.
  std::vector<double> agent_input(const std::vector<double>& obs, std::size_t agent,
                                  int last_action) const;

private:
  void fill_agent_input(double* dst, const double* obs, std::size_t agent, int last_action) const;

  std::size_t n_agents_;
  std::size_t obs_dim_;
  std::size_t n_actions_;
  std::size_t state_dim_;
  TrainConfig cfg_;
  numkit::Mlp agent_;
  numkit::Mlp agent_target_;
  MixerNet mixer_;
  MixerNet mixer_target_;
  numkit::OptimizerState opt_agent_;
  numkit::OptimizerState opt_hw1_, opt_hb1_, opt_hw2_, opt_hb2_;
  std::uint64_t train_steps_ = 0;
};

}  // namespace marlx::learner
