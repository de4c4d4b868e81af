#include "marlx/numkit/mlp.hpp"

#include <cmath>
#include <utility>

#include "marlx/errors.hpp"

namespace marlx::numkit {

ParamTensors ParamTensors::zeros_like(const Mlp& net) {
  ParamTensors p;
  p.w.reserve(net.n_layers());
  p.b.reserve(net.n_layers());
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    p.w.emplace_back(net.weight(l).rows, net.weight(l).cols);
    p.b.emplace_back(net.bias(l).size(), 0.0);
  }
  return p;
}

void ParamTensors::zero() {
  for (auto& m : w) m.fill(0.0);
  for (auto& v : b) v.assign(v.size(), 0.0);
}

bool ParamTensors::same_shape(const ParamTensors& o) const {
  if (w.size() != o.w.size() || b.size() != o.b.size()) return false;
  for (std::size_t l = 0; l < w.size(); ++l)
    if (!w[l].same_shape(o.w[l]) || b[l].size() != o.b[l].size()) return false;
  return true;
}

Mlp::Mlp(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw ShapeError("Mlp: need at least input and output sizes");
  for (std::size_t s : sizes_)
    if (s == 0) throw ShapeError("Mlp: zero-width layer");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_.emplace_back(sizes_[l + 1], sizes_[l]);
    biases_.emplace_back(sizes_[l + 1], 0.0);
  }
}

Mlp Mlp::random(std::vector<std::size_t> layer_sizes, SeededRng& rng) {
  Mlp net(std::move(layer_sizes));
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    Matrix& w = net.weights_[l];
    double bound = 1.0 / std::sqrt(static_cast<double>(w.cols));
    for (double& v : w.data) v = rng.uniform(-bound, bound);
  }
  ++net.revision_;
  return net;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < n_layers(); ++l) n += weights_[l].data.size() + biases_[l].size();
  return n;
}

std::vector<double> Mlp::forward(const std::vector<double>& input, ForwardCache* cache) const {
  if (input.size() != input_dim()) throw ShapeError("Mlp::forward: input dimension mismatch");
  if (cache) {
    cache->input = input;
    cache->pre.assign(n_layers(), {});
    cache->post.assign(n_layers(), {});
    cache->revision = revision_;
  }
  std::vector<double> x = input;
  for (std::size_t l = 0; l < n_layers(); ++l) {
    std::vector<double> z = matvec(weights_[l], x);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += biases_[l][i];
    if (cache) cache->pre[l] = z;
    if (l + 1 < n_layers())
      for (double& v : z) v = v > 0.0 ? v : 0.0;
    if (cache) cache->post[l] = z;
    x = std::move(z);
  }
  return x;
}

Matrix Mlp::forward_batch(const Matrix& input, BatchCache* cache) const {
  if (input.cols != input_dim()) throw ShapeError("Mlp::forward_batch: input dimension mismatch");
  if (cache) {
    cache->input = input;
    cache->pre.assign(n_layers(), {});
    cache->post.assign(n_layers(), {});
    cache->revision = revision_;
  }
  Matrix x = input;
  for (std::size_t l = 0; l < n_layers(); ++l) {
    Matrix z = matmul_nt(x, weights_[l]);
    for (std::size_t i = 0; i < z.rows; ++i) {
      double* row = z.row(i);
      for (std::size_t j = 0; j < z.cols; ++j) row[j] += biases_[l][j];
    }
    if (cache) cache->pre[l] = z;
    if (l + 1 < n_layers())
      for (double& v : z.data) v = v > 0.0 ? v : 0.0;
    if (cache) cache->post[l] = z;
    x = std::move(z);
  }
  return x;
}

void Mlp::backward(const ForwardCache& cache, const std::vector<double>& grad_output,
                   ParamTensors* grads, std::vector<double>* input_grad) const {
  if (cache.revision != revision_) throw CacheError("Mlp::backward: stale forward cache");
  if (grad_output.size() != output_dim()) throw ShapeError("Mlp::backward: grad_output dimension mismatch");
  if (grads && (grads->w.size() != n_layers() || grads->b.size() != n_layers()))
    throw ShapeError("Mlp::backward: gradient buffer shape mismatch");

  std::vector<double> dz = grad_output;
  for (std::size_t li = n_layers(); li-- > 0;) {
    if (li + 1 < n_layers()) {
      const std::vector<double>& pre = cache.pre[li];
      for (std::size_t i = 0; i < dz.size(); ++i)
        if (pre[i] <= 0.0) dz[i] = 0.0;
    }
    const std::vector<double>& x = li == 0 ? cache.input : cache.post[li - 1];
    if (grads) {
      Matrix& dw = grads->w[li];
      for (std::size_t i = 0; i < dw.rows; ++i) {
        double s = dz[i];
        if (s == 0.0) continue;
        double* row = dw.row(i);
        for (std::size_t j = 0; j < dw.cols; ++j) row[j] += s * x[j];
      }
      std::vector<double>& db = grads->b[li];
      for (std::size_t i = 0; i < db.size(); ++i) db[i] += dz[i];
    }
    if (li > 0 || input_grad) {
      const Matrix& w = weights_[li];
      std::vector<double> dx(w.cols, 0.0);
      for (std::size_t i = 0; i < w.rows; ++i) {
        double s = dz[i];
        if (s == 0.0) continue;
        const double* row = w.row(i);
        for (std::size_t j = 0; j < w.cols; ++j) dx[j] += s * row[j];
      }
      if (li == 0) {
        if (input_grad) {
          if (input_grad->size() != input_dim()) input_grad->assign(input_dim(), 0.0);
          for (std::size_t j = 0; j < dx.size(); ++j) (*input_grad)[j] += dx[j];
        }
      } else {
        dz = std::move(dx);
      }
    }
  }
}

void Mlp::backward_batch(const BatchCache& cache, const Matrix& grad_output,
                         ParamTensors* grads, Matrix* input_grad) const {
  if (cache.revision != revision_) throw CacheError("Mlp::backward_batch: stale forward cache");
  if (grad_output.cols != output_dim() || grad_output.rows != cache.input.rows)
    throw ShapeError("Mlp::backward_batch: grad_output shape mismatch");

  Matrix dz = grad_output;
  for (std::size_t li = n_layers(); li-- > 0;) {
    if (li + 1 < n_layers()) {
      const Matrix& pre = cache.pre[li];
      for (std::size_t i = 0; i < dz.data.size(); ++i)
        if (pre.data[i] <= 0.0) dz.data[i] = 0.0;
    }
    const Matrix& x = li == 0 ? cache.input : cache.post[li - 1];
    if (grads) {
      matmul_tn_acc(dz, x, grads->w[li]);
      std::vector<double>& db = grads->b[li];
      for (std::size_t i = 0; i < dz.rows; ++i) {
        const double* row = dz.row(i);
        for (std::size_t j = 0; j < dz.cols; ++j) db[j] += row[j];
      }
    }
    if (li > 0) {
      dz = matmul(dz, weights_[li]);
    } else if (input_grad) {
      *input_grad = matmul(dz, weights_[0]);
    }
  }
}

void copy_params(const Mlp& src, Mlp& dst) {
  if (!src.same_architecture(dst)) throw ShapeError("copy_params: architecture mismatch");
  dst.weights_ = src.weights_;
  dst.biases_ = src.biases_;
  ++dst.revision_;
}

}  // namespace marlx::numkit
