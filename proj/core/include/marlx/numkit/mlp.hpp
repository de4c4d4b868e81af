#pragma once

#include <cstdint>
#include <vector>

#include "marlx/numkit/matrix.hpp"
#include "marlx/numkit/rng.hpp"

namespace marlx::numkit {

class Mlp;

/// One tensor per layer, mirroring an Mlp's weights and biases. Used both for
/// gradients and for optimizer moment accumulators.
struct ParamTensors {
  std::vector<Matrix> w;
  std::vector<std::vector<double>> b;

  static ParamTensors zeros_like(const Mlp& net);
  void zero();
  bool same_shape(const ParamTensors& o) const;
};

/// Activations recorded by a single-sample forward pass. `pre[l]` holds the
/// pre-activation of layer l, `post[l]` the activated output.
struct ForwardCache {
  std::vector<double> input;
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
  std::uint64_t revision = 0;
};

/// Same as ForwardCache but for a batch laid out as rows of a Matrix.
struct BatchCache {
  Matrix input;
  std::vector<Matrix> pre;
  std::vector<Matrix> post;
  std::uint64_t revision = 0;
};

/// Dense feedforward net: rectified-linear hidden layers, identity output.
/// Weights are (out x in) row-major; forward computes y = W x + b per layer.
class Mlp {
public:
  Mlp() = default;
  /// All-zero parameters with the given layer sizes (at least input, output).
  explicit Mlp(std::vector<std::size_t> layer_sizes);
  /// Fan-in scaled uniform weights, zero biases.
  static Mlp random(std::vector<std::size_t> layer_sizes, SeededRng& rng);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t n_layers() const { return weights_.size(); }
  std::size_t input_dim() const { return sizes_.front(); }
  std::size_t output_dim() const { return sizes_.back(); }
  std::size_t param_count() const;
  std::uint64_t revision() const { return revision_; }
  bool same_architecture(const Mlp& o) const { return sizes_ == o.sizes_; }

  const Matrix& weight(std::size_t l) const { return weights_[l]; }
  const std::vector<double>& bias(std::size_t l) const { return biases_[l]; }
  /// Mutable access invalidates outstanding forward caches.
  Matrix& weight_mut(std::size_t l) {
    ++revision_;
    return weights_[l];
  }
  std::vector<double>& bias_mut(std::size_t l) {
    ++revision_;
    return biases_[l];
  }
  void bump_revision() { ++revision_; }

  std::vector<double> forward(const std::vector<double>& input, ForwardCache* cache = nullptr) const;
  Matrix forward_batch(const Matrix& input, BatchCache* cache = nullptr) const;

  /// Gradients are accumulated into `grads` (zeroed by the caller), so two
  /// backward passes through the same net can share one gradient buffer.
  void backward(const ForwardCache& cache, const std::vector<double>& grad_output,
                ParamTensors* grads, std::vector<double>* input_grad = nullptr) const;
  void backward_batch(const BatchCache& cache, const Matrix& grad_output,
                      ParamTensors* grads, Matrix* input_grad = nullptr) const;

private:
  friend struct ParamTensors;
  friend void copy_params(const Mlp&, Mlp&);
  friend class OptimizerAccess;

  std::vector<std::size_t> sizes_;
  std::vector<Matrix> weights_;
  std::vector<std::vector<double>> biases_;
  std::uint64_t revision_ = 0;
};

/// dst parameters become bit-equal copies of src. Architectures must match.
void copy_params(const Mlp& src, Mlp& dst);

}  // namespace marlx::numkit
