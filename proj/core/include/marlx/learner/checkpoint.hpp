#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "marlx/learner/qmix.hpp"

namespace marlx::learner {

/// Versioned plain-text parameter dump. Values are written as hexfloats so a
/// save/load/save cycle is bit-exact. The env_meta lines are echoed verbatim
/// so an evaluator can rebuild the environment from the checkpoint alone.
void write_checkpoint(std::ostream& out, const QmixLearner& learner,
                      const std::vector<std::string>& env_meta);

struct CheckpointData {
  std::vector<std::string> env_meta;
  std::size_t n_agents = 0;
  std::size_t obs_dim = 0;
  std::size_t n_actions = 0;
  std::size_t state_dim = 0;
  std::vector<std::size_t> agent_hidden;
  std::size_t mixer_embed = 0;
  std::map<std::string, numkit::Matrix> tensors;
};

CheckpointData read_checkpoint(std::istream& in);

/// Rebuilds a learner with the checkpoint's architecture and parameters;
/// target networks are synced to the loaded parameters.
QmixLearner learner_from_checkpoint(const CheckpointData& data, TrainConfig cfg);

}  // namespace marlx::learner
