#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "marlx/numkit/rng.hpp"

namespace marlx::envs {

/// One environment emission: per-agent observations, the global state used
/// for centralized training, the shared reward and the terminal flag.
struct DecPomdpStep {
  std::vector<std::vector<double>> joint_observation;
  std::vector<double> global_state;
  double reward = 0.0;
  bool done = false;
  std::size_t step_index = 0;
};

class Env {
public:
  virtual ~Env() = default;

  virtual std::size_t n_agents() const = 0;
  virtual std::size_t n_actions() const = 0;
  virtual std::size_t obs_dim() const = 0;
  virtual std::size_t state_dim() const = 0;

  virtual DecPomdpStep reset(numkit::SeededRng& rng) = 0;
  /// Throws DomainError on malformed actions or stepping a finished episode.
  virtual DecPomdpStep step(const std::vector<int>& joint_action) = 0;
};

}  // namespace marlx::envs
