#include "marlx/intrinsic/rnd.hpp"

#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::intrinsic {

using numkit::BatchCache;
using numkit::Matrix;
using numkit::Mlp;
using numkit::ParamTensors;

RndModule::RndModule(std::size_t input_dim, std::size_t hidden_dim, std::size_t enc_dim,
                     double learning_rate, numkit::SeededRng rng)
    : target_(Mlp::random({input_dim, hidden_dim, hidden_dim, enc_dim}, rng)),
      predictor_([&] {
        auto r = rng.split("predictor");
        return Mlp::random({input_dim, hidden_dim, hidden_dim, enc_dim}, r);
      }()),
      opt_(numkit::OptimizerState::for_net(predictor_, numkit::OptKind::adam)),
      lr_(learning_rate) {}

double RndModule::novelty(const std::vector<double>& obs) const {
  std::vector<double> t = target_.forward(obs);
  std::vector<double> p = predictor_.forward(obs);
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double d = t[i] - p[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double RndModule::train(const std::vector<std::vector<double>>& batch) {
  if (batch.empty()) throw ShapeError("RndModule::train: empty batch");
  const std::size_t n = batch.size();
  Matrix x(n, input_dim());
  for (std::size_t i = 0; i < n; ++i) {
    if (batch[i].size() != input_dim()) throw ShapeError("RndModule::train: observation dimension mismatch");
    std::copy(batch[i].begin(), batch[i].end(), x.row(i));
  }

  Matrix t = target_.forward_batch(x);
  BatchCache cache;
  Matrix p = predictor_.forward_batch(x, &cache);

  double loss = 0.0;
  Matrix dp(n, enc_dim());
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    double d = p.data[i] - t.data[i];
    loss += d * d;
    dp.data[i] = 2.0 * d / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) throw NumericError("RndModule::train: non-finite loss");

  ParamTensors grads = ParamTensors::zeros_like(predictor_);
  predictor_.backward_batch(cache, dp, &grads);
  numkit::optimizer_step(opt_, predictor_, grads, lr_);
  return loss;
}

double llec(const RndModule& module, const std::vector<double>& obs_t,
            const std::vector<double>& obs_next, double alpha) {
  double gain = module.novelty(obs_next) - alpha * module.novelty(obs_t);
  return gain > 0.0 ? gain : 0.0;
}

}  // namespace marlx::intrinsic
