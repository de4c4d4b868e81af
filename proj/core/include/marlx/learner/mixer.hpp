#pragma once

#include <vector>

#include "marlx/numkit/mlp.hpp"
#include "marlx/numkit/optimizer.hpp"
#include "marlx/numkit/rng.hpp"

namespace marlx::learner {

/// Mixing parameters produced by the hypernetworks for one state, after the
/// absolute-value map that enforces monotonicity.
struct MixWeights {
  numkit::Matrix w1;       // embed x n_agents, entries >= 0
  std::vector<double> b1;  // embed
  std::vector<double> w2;  // embed, entries >= 0
  double b2 = 0.0;
};

/// Monotonic mixing network: per-agent chosen Q-values are mixed into Q_tot
/// through one ELU hidden layer whose weights are emitted by state-conditioned
/// hypernetworks; absolute values keep every dQ_tot/dq_i non-negative.
class MixerNet {
public:
  MixerNet(std::size_t n_agents, std::size_t state_dim, std::size_t embed_dim,
           numkit::SeededRng rng);

  std::size_t n_agents() const { return n_agents_; }
  std::size_t state_dim() const { return state_dim_; }
  std::size_t embed_dim() const { return embed_dim_; }

  struct Cache {
    numkit::BatchCache hw1, hb1, hw2, hb2;
    numkit::Matrix w1raw, b1, w2raw, b2;  // hypernet outputs per sample
    numkit::Matrix q;                     // B x n_agents
    numkit::Matrix pre;                   // B x embed (before ELU)
    numkit::Matrix h;                     // B x embed
  };

  struct Grads {
    numkit::ParamTensors hw1, hb1, hw2, hb2;
    static Grads zeros_like(const MixerNet& m);
  };

  std::vector<double> forward_batch(const numkit::Matrix& q, const numkit::Matrix& states,
                                    Cache* cache = nullptr) const;

  /// dqtot holds one scalar per sample; hypernet gradients are accumulated
  /// into `grads`. Returns dQ_tot/dq for every sample.
  numkit::Matrix backward_batch(const Cache& cache, const std::vector<double>& dqtot,
                                Grads* grads) const;

  double forward_one(const std::vector<double>& q, const std::vector<double>& state) const;

  /// Hypernet outputs for one state, with the absolute-value map applied.
  MixWeights weights_for(const std::vector<double>& state) const;

  /// Mixing composition alone, for externally supplied weights.
  static double mix_single(const MixWeights& mw, const std::vector<double>& q);

  numkit::Mlp& hyper_w1() { return hw1_; }
  numkit::Mlp& hyper_b1() { return hb1_; }
  numkit::Mlp& hyper_w2() { return hw2_; }
  numkit::Mlp& hyper_b2() { return hb2_; }
  const numkit::Mlp& hyper_w1() const { return hw1_; }
  const numkit::Mlp& hyper_b1() const { return hb1_; }
  const numkit::Mlp& hyper_w2() const { return hw2_; }
  const numkit::Mlp& hyper_b2() const { return hb2_; }

private:
  std::size_t n_agents_;
  std::size_t state_dim_;
  std::size_t embed_dim_;
  numkit::Mlp hw1_;  // state -> embed * n_agents (linear)
  numkit::Mlp hb1_;  // state -> embed (linear)
  numkit::Mlp hw2_;  // state -> embed (linear)
  numkit::Mlp hb2_;  // state -> embed -> 1
};

void copy_mixer_params(const MixerNet& src, MixerNet& dst);

}  // namespace marlx::learner
