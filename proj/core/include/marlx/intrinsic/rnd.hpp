#pragma once

#include <vector>

#include "marlx/numkit/mlp.hpp"
#include "marlx/numkit/optimizer.hpp"
#include "marlx/numkit/rng.hpp"

namespace marlx::intrinsic {

/// Random network distillation: a frozen randomly-initialized target embedder
/// and a trained predictor. Novelty of an observation is the Euclidean
/// distance between the two embeddings.
class RndModule {
public:
  RndModule(std::size_t input_dim, std::size_t hidden_dim, std::size_t enc_dim,
            double learning_rate, numkit::SeededRng rng);

  std::size_t input_dim() const { return target_.input_dim(); }
  std::size_t enc_dim() const { return target_.output_dim(); }

  double novelty(const std::vector<double>& obs) const;

  /// One gradient step on the mean per-sample squared embedding distance.
  /// The target is never touched. Returns the pre-step loss.
  double train(const std::vector<std::vector<double>>& batch);

  const numkit::Mlp& target() const { return target_; }
  const numkit::Mlp& predictor() const { return predictor_; }
  numkit::Mlp& predictor_mut() { return predictor_; }

private:
  numkit::Mlp target_;
  numkit::Mlp predictor_;
  numkit::OptimizerState opt_;
  double lr_;
};

/// Life-long exploration criterion: max(novelty(next) - alpha * novelty(cur), 0).
double llec(const RndModule& module, const std::vector<double>& obs_t,
            const std::vector<double>& obs_next, double alpha);

}  // namespace marlx::intrinsic
