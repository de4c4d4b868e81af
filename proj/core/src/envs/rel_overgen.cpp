#include "marlx/envs/rel_overgen.hpp"

#include <string>

#include "marlx/errors.hpp"

namespace marlx::envs {

void RelOvergenConfig::finalize() {
  if (d < 2) throw ConfigError("rel_overgen: D must be >= 2");
  if (n_agents < 1) throw ConfigError("rel_overgen: need at least one agent");
  if (spike_pos.empty()) spike_pos.assign(n_agents, 0);
  if (plateau_pos.empty()) plateau_pos.assign(n_agents, static_cast<int>(d) - 1);
  if (spike_pos.size() != n_agents || plateau_pos.size() != n_agents)
    throw ConfigError("rel_overgen: spike/plateau position arity mismatch");
  for (std::size_t i = 0; i < n_agents; ++i) {
    if (spike_pos[i] < 0 || spike_pos[i] >= static_cast<int>(d) || plateau_pos[i] < 0 ||
        plateau_pos[i] >= static_cast<int>(d))
      throw ConfigError("rel_overgen: spike/plateau position out of range");
  }
  if (spike_pos == plateau_pos) throw ConfigError("rel_overgen: spike and plateau coincide");
}

double rel_overgen_reward(const std::vector<int>& positions, const RelOvergenConfig& config) {
  if (positions.size() != config.n_agents) throw DomainError("rel_overgen_reward: position arity mismatch");
  double spike_sq = 0.0;
  double plateau_sq = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 0 || positions[i] >= static_cast<int>(config.d))
      throw DomainError("rel_overgen_reward: position out of range");
    double ds = positions[i] - config.spike_pos[i];
    double dp = positions[i] - config.plateau_pos[i];
    spike_sq += ds * ds;
    plateau_sq += dp * dp;
  }
  double dd = static_cast<double>(config.d);
  double spike = config.r_plus - config.delta / dd * spike_sq;
  double plateau = config.r_minus - 1.0 / (8.0 * dd) * plateau_sq;
  return spike > plateau ? spike : plateau;
}

RelOvergenEnv::RelOvergenEnv(RelOvergenConfig config) : cfg_(std::move(config)) {
  cfg_.finalize();
  positions_.assign(cfg_.n_agents, 0);
}

DecPomdpStep RelOvergenEnv::emit(double reward) const {
  DecPomdpStep out;
  out.joint_observation.assign(cfg_.n_agents, std::vector<double>(cfg_.d, 0.0));
  out.global_state.assign(cfg_.n_agents * cfg_.d, 0.0);
  for (std::size_t i = 0; i < cfg_.n_agents; ++i) {
    out.joint_observation[i][static_cast<std::size_t>(positions_[i])] = 1.0;
    out.global_state[i * cfg_.d + static_cast<std::size_t>(positions_[i])] = 1.0;
  }
  out.reward = reward;
  out.step_index = t_;
  out.done = done_;
  return out;
}

DecPomdpStep RelOvergenEnv::reset(numkit::SeededRng& rng) {
  switch (cfg_.init) {
    case RelOvergenInit::uniform:
      for (std::size_t i = 0; i < cfg_.n_agents; ++i)
        positions_[i] = static_cast<int>(rng.uniform_int(cfg_.d));
      break;
    case RelOvergenInit::half:
      // uniform over the plateau-side half of each axis
      for (std::size_t i = 0; i < cfg_.n_agents; ++i)
        positions_[i] = static_cast<int>(cfg_.d / 2 + rng.uniform_int(cfg_.d - cfg_.d / 2));
      break;
    case RelOvergenInit::plateau:
      positions_ = cfg_.plateau_pos;
      break;
    case RelOvergenInit::center:
      positions_.assign(cfg_.n_agents, static_cast<int>(cfg_.d / 2));
      break;
  }
  t_ = 0;
  done_ = false;
  return emit(0.0);
}

DecPomdpStep RelOvergenEnv::step(const std::vector<int>& joint_action) {
  if (done_) throw DomainError("rel_overgen: step on finished episode");
  if (joint_action.size() != cfg_.n_agents) throw DomainError("rel_overgen: action arity mismatch");
  for (std::size_t i = 0; i < cfg_.n_agents; ++i) {
    int a = joint_action[i];
    if (a < 0 || a > 2) throw DomainError("rel_overgen: action index " + std::to_string(a) + " out of range");
    int p = positions_[i] + (a - 1);  // left/stay/right
    if (p < 0) p = 0;
    if (p >= static_cast<int>(cfg_.d)) p = static_cast<int>(cfg_.d) - 1;
    positions_[i] = p;
  }
  ++t_;
  done_ = t_ >= cfg_.episode_length;
  return emit(rel_overgen_reward(positions_, cfg_));
}

}  // namespace marlx::envs
