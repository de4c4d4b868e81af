#include "marlx/learner/mixer.hpp"

#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::learner {

using numkit::Matrix;
using numkit::Mlp;

namespace {

inline double elu(double x) { return x > 0.0 ? x : std::exp(x) - 1.0; }
inline double elu_grad(double x) { return x > 0.0 ? 1.0 : std::exp(x); }
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

MixerNet::MixerNet(std::size_t n_agents, std::size_t state_dim, std::size_t embed_dim,
                   numkit::SeededRng rng)
    : n_agents_(n_agents),
      state_dim_(state_dim),
      embed_dim_(embed_dim),
      hw1_([&] {
        auto r = rng.split("hw1");
        return Mlp::random({state_dim, embed_dim * n_agents}, r);
      }()),
      hb1_([&] {
        auto r = rng.split("hb1");
        return Mlp::random({state_dim, embed_dim}, r);
      }()),
      hw2_([&] {
        auto r = rng.split("hw2");
        return Mlp::random({state_dim, embed_dim}, r);
      }()),
      hb2_([&] {
        auto r = rng.split("hb2");
        return Mlp::random({state_dim, embed_dim, 1}, r);
      }()) {}

MixerNet::Grads MixerNet::Grads::zeros_like(const MixerNet& m) {
  Grads g;
  g.hw1 = numkit::ParamTensors::zeros_like(m.hw1_);
  g.hb1 = numkit::ParamTensors::zeros_like(m.hb1_);
  g.hw2 = numkit::ParamTensors::zeros_like(m.hw2_);
  g.hb2 = numkit::ParamTensors::zeros_like(m.hb2_);
  return g;
}

std::vector<double> MixerNet::forward_batch(const Matrix& q, const Matrix& states,
                                            Cache* cache) const {
  if (q.cols != n_agents_ || states.cols != state_dim_ || q.rows != states.rows)
    throw ShapeError("MixerNet::forward_batch: shape mismatch");
  const std::size_t n = q.rows;
  const std::size_t e = embed_dim_;

  Cache local;
  Cache& c = cache ? *cache : local;
  c.q = q;
  c.w1raw = hw1_.forward_batch(states, cache ? &c.hw1 : nullptr);
  c.b1 = hb1_.forward_batch(states, cache ? &c.hb1 : nullptr);
  c.w2raw = hw2_.forward_batch(states, cache ? &c.hw2 : nullptr);
  c.b2 = hb2_.forward_batch(states, cache ? &c.hb2 : nullptr);

  c.pre = Matrix(n, e);
  c.h = Matrix(n, e);
  std::vector<double> qtot(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    const double* w1 = c.w1raw.row(s);
    const double* b1 = c.b1.row(s);
    const double* w2 = c.w2raw.row(s);
    const double* qs = c.q.row(s);
    double* pre = c.pre.row(s);
    double* h = c.h.row(s);
    double out = c.b2(s, 0);
    for (std::size_t j = 0; j < e; ++j) {
      double z = b1[j];
      for (std::size_t i = 0; i < n_agents_; ++i) z += std::fabs(w1[j * n_agents_ + i]) * qs[i];
      pre[j] = z;
      h[j] = elu(z);
      out += std::fabs(w2[j]) * h[j];
    }
    qtot[s] = out;
  }
  return qtot;
}

Matrix MixerNet::backward_batch(const Cache& cache, const std::vector<double>& dqtot,
                                Grads* grads) const {
  const std::size_t n = cache.q.rows;
  const std::size_t e = embed_dim_;
  if (dqtot.size() != n) throw ShapeError("MixerNet::backward_batch: gradient arity mismatch");

  Matrix dq(n, n_agents_);
  Matrix dw1raw(n, e * n_agents_);
  Matrix db1(n, e);
  Matrix dw2raw(n, e);
  Matrix db2(n, 1);

  for (std::size_t s = 0; s < n; ++s) {
    double g = dqtot[s];
    const double* w1 = cache.w1raw.row(s);
    const double* w2 = cache.w2raw.row(s);
    const double* pre = cache.pre.row(s);
    const double* h = cache.h.row(s);
    const double* qs = cache.q.row(s);
    double* dqs = dq.row(s);
    double* dw1 = dw1raw.row(s);
    double* db1s = db1.row(s);
    double* dw2 = dw2raw.row(s);
    db2(s, 0) = g;
    for (std::size_t j = 0; j < e; ++j) {
      double dh = g * std::fabs(w2[j]);
      dw2[j] = g * h[j] * sign(w2[j]);
      double dpre = dh * elu_grad(pre[j]);
      db1s[j] = dpre;
      for (std::size_t i = 0; i < n_agents_; ++i) {
        double raw = w1[j * n_agents_ + i];
        dqs[i] += dpre * std::fabs(raw);
        dw1[j * n_agents_ + i] = dpre * qs[i] * sign(raw);
      }
    }
  }

  if (grads) {
    hw1_.backward_batch(cache.hw1, dw1raw, &grads->hw1);
    hb1_.backward_batch(cache.hb1, db1, &grads->hb1);
    hw2_.backward_batch(cache.hw2, dw2raw, &grads->hw2);
    hb2_.backward_batch(cache.hb2, db2, &grads->hb2);
  }
  return dq;
}

double MixerNet::forward_one(const std::vector<double>& q, const std::vector<double>& state) const {
  Matrix qm(1, q.size());
  Matrix sm(1, state.size());
  std::copy(q.begin(), q.end(), qm.row(0));
  std::copy(state.begin(), state.end(), sm.row(0));
  return forward_batch(qm, sm)[0];
}

MixWeights MixerNet::weights_for(const std::vector<double>& state) const {
  MixWeights mw;
  std::vector<double> w1 = hw1_.forward(state);
  mw.w1 = Matrix(embed_dim_, n_agents_);
  for (std::size_t k = 0; k < w1.size(); ++k) mw.w1.data[k] = std::fabs(w1[k]);
  mw.b1 = hb1_.forward(state);
  mw.w2 = hw2_.forward(state);
  for (double& v : mw.w2) v = std::fabs(v);
  mw.b2 = hb2_.forward(state)[0];
  return mw;
}

double MixerNet::mix_single(const MixWeights& mw, const std::vector<double>& q) {
  if (mw.w1.cols != q.size() || mw.w1.rows != mw.b1.size() || mw.w2.size() != mw.b1.size())
    throw ShapeError("MixerNet::mix_single: shape mismatch");
  double out = mw.b2;
  for (std::size_t j = 0; j < mw.w1.rows; ++j) {
    double z = mw.b1[j];
    for (std::size_t i = 0; i < q.size(); ++i) z += mw.w1(j, i) * q[i];
    out += mw.w2[j] * elu(z);
  }
  return out;
}

void copy_mixer_params(const MixerNet& src, MixerNet& dst) {
  numkit::copy_params(src.hyper_w1(), dst.hyper_w1());
  numkit::copy_params(src.hyper_b1(), dst.hyper_b1());
  numkit::copy_params(src.hyper_w2(), dst.hyper_w2());
  numkit::copy_params(src.hyper_b2(), dst.hyper_b2());
}

}  // namespace marlx::learner
