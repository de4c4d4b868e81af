#include "marlx/intrinsic/inverse_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::intrinsic {

using numkit::BatchCache;
using numkit::Matrix;
using numkit::Mlp;
using numkit::ParamTensors;

InverseDynamicsModel::InverseDynamicsModel(std::size_t obs_dim, std::size_t hidden_dim,
                                           std::size_t enc_dim, std::size_t n_agents,
                                           std::size_t n_actions, double learning_rate,
                                           numkit::SeededRng rng)
    : psi_([&] {
        auto r = rng.split("psi");
        return Mlp::random({obs_dim, hidden_dim, hidden_dim, enc_dim}, r);
      }()),
      head_([&] {
        auto r = rng.split("head");
        return Mlp::random({2 * enc_dim, hidden_dim, n_agents * n_actions}, r);
      }()),
      opt_psi_(numkit::OptimizerState::for_net(psi_, numkit::OptKind::adam)),
      opt_head_(numkit::OptimizerState::for_net(head_, numkit::OptKind::adam)),
      n_agents_(n_agents),
      n_actions_(n_actions),
      lr_(learning_rate) {}

double InverseDynamicsModel::train(const std::vector<IdmTransition>& batch) {
  if (batch.empty()) throw ShapeError("InverseDynamicsModel::train: empty batch");
  const std::size_t n = batch.size();
  const std::size_t enc = enc_dim();

  Matrix x_t(n, obs_dim());
  Matrix x_next(n, obs_dim());
  for (std::size_t i = 0; i < n; ++i) {
    const IdmTransition& tr = batch[i];
    if (tr.obs_t.size() != obs_dim() || tr.obs_next.size() != obs_dim())
      throw ShapeError("InverseDynamicsModel::train: observation dimension mismatch");
    if (tr.actions.size() != n_agents_)
      throw ShapeError("InverseDynamicsModel::train: action arity mismatch");
    std::copy(tr.obs_t.begin(), tr.obs_t.end(), x_t.row(i));
    std::copy(tr.obs_next.begin(), tr.obs_next.end(), x_next.row(i));
  }

  BatchCache cache_t, cache_next, cache_head;
  Matrix e_t = psi_.forward_batch(x_t, &cache_t);
  Matrix e_next = psi_.forward_batch(x_next, &cache_next);

  Matrix h(n, 2 * enc);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(e_t.row(i), e_t.row(i) + enc, h.row(i));
    std::copy(e_next.row(i), e_next.row(i) + enc, h.row(i) + enc);
  }
  Matrix logits = head_.forward_batch(h, &cache_head);

  // Per-agent softmax cross-entropy on each block of logits.
  double loss = 0.0;
  Matrix dlogits(n, logits.cols);
  for (std::size_t i = 0; i < n; ++i) {
    const double* lrow = logits.row(i);
    double* drow = dlogits.row(i);
    for (std::size_t a = 0; a < n_agents_; ++a) {
      const double* block = lrow + a * n_actions_;
      double* dblock = drow + a * n_actions_;
      int act = batch[i].actions[a];
      if (act < 0 || act >= static_cast<int>(n_actions_))
        throw DomainError("InverseDynamicsModel::train: action index out of range");
      double mx = *std::max_element(block, block + n_actions_);
      double z = 0.0;
      for (std::size_t k = 0; k < n_actions_; ++k) z += std::exp(block[k] - mx);
      double logz = std::log(z) + mx;
      loss += logz - block[act];
      for (std::size_t k = 0; k < n_actions_; ++k) {
        double p = std::exp(block[k] - logz);
        dblock[k] = (p - (static_cast<int>(k) == act ? 1.0 : 0.0)) / static_cast<double>(n);
      }
    }
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) throw NumericError("InverseDynamicsModel::train: non-finite loss");

  ParamTensors head_grads = ParamTensors::zeros_like(head_);
  Matrix dh;
  head_.backward_batch(cache_head, dlogits, &head_grads, &dh);

  Matrix de_t(n, enc);
  Matrix de_next(n, enc);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(dh.row(i), dh.row(i) + enc, de_t.row(i));
    std::copy(dh.row(i) + enc, dh.row(i) + 2 * enc, de_next.row(i));
  }
  ParamTensors psi_grads = ParamTensors::zeros_like(psi_);
  psi_.backward_batch(cache_t, de_t, &psi_grads);
  psi_.backward_batch(cache_next, de_next, &psi_grads);

  numkit::optimizer_step(opt_head_, head_, head_grads, lr_);
  numkit::optimizer_step(opt_psi_, psi_, psi_grads, lr_);
  return loss;
}

}  // namespace marlx::intrinsic
