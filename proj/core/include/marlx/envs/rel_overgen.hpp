#pragma once

#include <vector>

#include "marlx/envs/dec_pomdp.hpp"

namespace marlx::envs {

enum class RelOvergenInit { uniform, half, plateau, center };

/// Tunable coordination game on a discrete line: a narrow optimal reward
/// spike in one corner of the joint-position space and a wide suboptimal
/// plateau in the other.
struct RelOvergenConfig {
  std::size_t n_agents = 2;
  std::size_t d = 40;          // positions per axis
  double delta = 30.0;         // spike width coefficient; larger = narrower
  double r_plus = 12.0;        // spike peak value
  double r_minus = 0.0;        // plateau peak value
  std::vector<int> spike_pos;    // defaults to (0, ..., 0)
  std::vector<int> plateau_pos;  // defaults to (d-1, ..., d-1)
  std::size_t episode_length = 100;
  RelOvergenInit init = RelOvergenInit::uniform;

  void finalize();  // fills defaults, validates
};

/// max(R+ - delta/D * sum (p_i - spike_i)^2, R- - 1/(8D) * sum (p_i - plateau_i)^2)
double rel_overgen_reward(const std::vector<int>& positions, const RelOvergenConfig& config);

class RelOvergenEnv final : public Env {
public:
  enum Action { left = 0, stay = 1, right = 2 };

  explicit RelOvergenEnv(RelOvergenConfig config);

  std::size_t n_agents() const override { return cfg_.n_agents; }
  std::size_t n_actions() const override { return 3; }
  std::size_t obs_dim() const override { return cfg_.d; }
  std::size_t state_dim() const override { return cfg_.n_agents * cfg_.d; }

  DecPomdpStep reset(numkit::SeededRng& rng) override;
  DecPomdpStep step(const std::vector<int>& joint_action) override;

  const std::vector<int>& positions() const { return positions_; }
  const RelOvergenConfig& config() const { return cfg_; }

private:
  DecPomdpStep emit(double reward) const;

  RelOvergenConfig cfg_;
  std::vector<int> positions_;
  std::size_t t_ = 0;
  bool done_ = true;
};

}  // namespace marlx::envs
