#include "marlx/numkit/optimizer.hpp"

#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::numkit {

OptimizerState OptimizerState::for_net(const Mlp& net, OptKind kind) {
  OptimizerState s;
  s.kind = kind;
  s.m = ParamTensors::zeros_like(net);
  s.v = ParamTensors::zeros_like(net);
  return s;
}

namespace {

void check_finite(const ParamTensors& grads) {
  for (const auto& m : grads.w)
    if (!all_finite(m)) throw NumericError("optimizer_step: non-finite gradient");
  for (const auto& v : grads.b)
    if (!all_finite(v)) throw NumericError("optimizer_step: non-finite gradient");
}

void adam_update(double* p, double* m, double* v, const double* g, std::size_t n, double lr,
                 double b1, double b2, double eps, double bc1, double bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    double mhat = m[i] / bc1;
    double vhat = v[i] / bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

void rmsprop_update(double* p, double* v, const double* g, std::size_t n, double lr, double rho,
                    double eps) {
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = rho * v[i] + (1.0 - rho) * g[i] * g[i];
    p[i] -= lr * g[i] / (std::sqrt(v[i]) + eps);
  }
}

}  // namespace

void optimizer_step(OptimizerState& state, Mlp& net, const ParamTensors& grads, double learning_rate) {
  if (grads.w.size() != net.n_layers() || !state.m.same_shape(grads))
    throw ShapeError("optimizer_step: gradient/state shape mismatch");
  check_finite(grads);

  ++state.step;
  double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    Matrix& w = net.weight_mut(l);
    std::vector<double>& b = net.bias_mut(l);
    if (!grads.w[l].same_shape(w) || grads.b[l].size() != b.size())
      throw ShapeError("optimizer_step: gradient shape mismatch at layer " + std::to_string(l));
    if (state.kind == OptKind::adam) {
      adam_update(w.data.data(), state.m.w[l].data.data(), state.v.w[l].data.data(),
                  grads.w[l].data.data(), w.data.size(), learning_rate, state.beta1, state.beta2,
                  state.adam_eps, bc1, bc2);
      adam_update(b.data(), state.m.b[l].data(), state.v.b[l].data(), grads.b[l].data(), b.size(),
                  learning_rate, state.beta1, state.beta2, state.adam_eps, bc1, bc2);
    } else {
      rmsprop_update(w.data.data(), state.v.w[l].data.data(), grads.w[l].data.data(), w.data.size(),
                     learning_rate, state.rho, state.rms_eps);
      rmsprop_update(b.data(), state.v.b[l].data(), grads.b[l].data(), b.size(), learning_rate,
                     state.rho, state.rms_eps);
    }
  }
}

double grad_norm(const ParamTensors& grads) {
  double s = 0.0;
  for (const auto& m : grads.w)
    for (double v : m.data) s += v * v;
  for (const auto& vec : grads.b)
    for (double v : vec) s += v * v;
  return std::sqrt(s);
}

void clip_grad_norm(ParamTensors& grads, double max_norm) {
  double n = grad_norm(grads);
  if (n <= max_norm || n == 0.0) return;
  double scale = max_norm / n;
  for (auto& m : grads.w)
    for (double& v : m.data) v *= scale;
  for (auto& vec : grads.b)
    for (double& v : vec) v *= scale;
}

}  // namespace marlx::numkit
