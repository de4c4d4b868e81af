#pragma once

#include <cstdint>

#include "marlx/numkit/mlp.hpp"

namespace marlx::numkit {

enum class OptKind { adam, rmsprop };

/// Moment accumulators for one network. Shapes mirror the net's parameters.
struct OptimizerState {
  OptKind kind = OptKind::adam;
  std::uint64_t step = 0;
  ParamTensors m;  // first moment (adam only)
  ParamTensors v;  // second moment
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double rho = 0.99;
  double rms_eps = 1e-5;

  static OptimizerState for_net(const Mlp& net, OptKind kind = OptKind::adam);
};

/// One moment-normalized update of the net's parameters in the direction
/// opposite to `grads`. Throws NumericError on non-finite gradients.
void optimizer_step(OptimizerState& state, Mlp& net, const ParamTensors& grads, double learning_rate);

/// Global L2 gradient norm across all tensors.
double grad_norm(const ParamTensors& grads);

/// Scales gradients in place so their global norm is at most `max_norm`.
void clip_grad_norm(ParamTensors& grads, double max_norm);

}  // namespace marlx::numkit
