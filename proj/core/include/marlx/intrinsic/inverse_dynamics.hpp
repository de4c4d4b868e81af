#pragma once

#include <vector>

#include "marlx/numkit/mlp.hpp"
#include "marlx/numkit/optimizer.hpp"
#include "marlx/numkit/rng.hpp"

namespace marlx::intrinsic {

struct IdmTransition {
  std::vector<double> obs_t;
  std::vector<double> obs_next;
  std::vector<int> actions;  // one entry per predicted agent
};

/// Inverse dynamics model behind the elliptical bonus: an embedder psi and an
/// action head that predicts, from (psi(o_t), psi(o_t+1)), the action taken in
/// between. Joint actions are predicted with factored per-agent softmax heads
/// (one block of logits per agent), so the output grows linearly rather than
/// exponentially with the number of agents.
class InverseDynamicsModel {
public:
  InverseDynamicsModel(std::size_t obs_dim, std::size_t hidden_dim, std::size_t enc_dim,
                       std::size_t n_agents, std::size_t n_actions, double learning_rate,
                       numkit::SeededRng rng);

  std::size_t obs_dim() const { return psi_.input_dim(); }
  std::size_t enc_dim() const { return psi_.output_dim(); }
  std::size_t n_agents() const { return n_agents_; }
  std::size_t n_actions() const { return n_actions_; }

  std::vector<double> embed(const std::vector<double>& obs) const { return psi_.forward(obs); }

  /// One cross-entropy gradient step through the action head and psi. The
  /// loss is the sum of per-agent cross-entropies, averaged over the batch.
  double train(const std::vector<IdmTransition>& batch);

  const numkit::Mlp& psi() const { return psi_; }
  const numkit::Mlp& head() const { return head_; }

private:
  numkit::Mlp psi_;
  numkit::Mlp head_;
  numkit::OptimizerState opt_psi_;
  numkit::OptimizerState opt_head_;
  std::size_t n_agents_;
  std::size_t n_actions_;
  double lr_;
};

}  // namespace marlx::intrinsic
