#pragma once

// Test-side oracles, written independently of the library's forward/backward
// and incremental-update code paths. They only touch public parameter
// accessors and recompute everything with plain loops.

#include <cmath>
#include <vector>

#include "marlx/numkit/matrix.hpp"
#include "marlx/numkit/mlp.hpp"

namespace oracles {

/// Naive per-neuron evaluation of a relu-hidden / identity-output MLP.
inline std::vector<double> naive_mlp_eval(const marlx::numkit::Mlp& net,
                                          const std::vector<double>& input) {
  std::vector<double> x = input;
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    const marlx::numkit::Matrix& w = net.weight(l);
    const std::vector<double>& b = net.bias(l);
    std::vector<double> y(w.rows, 0.0);
    for (std::size_t i = 0; i < w.rows; ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < w.cols; ++j) s += w(i, j) * x[j];
      if (l + 1 < net.n_layers() && s < 0.0) s = 0.0;
      y[i] = s;
    }
    x = y;
  }
  return x;
}

/// Gauss-Jordan inversion with partial pivoting.
inline marlx::numkit::Matrix gauss_jordan_inverse(marlx::numkit::Matrix a) {
  const std::size_t n = a.rows;
  marlx::numkit::Matrix inv = marlx::numkit::Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (pivot != col)
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    double d = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // coordinates where the perturbation crossed a relu kink
};

/// Central finite differences of L(theta) = c . net(x) against the analytic
/// gradients, over every parameter. Central differences are invalid across a
/// relu kink, so coordinates whose perturbation flips any hidden
/// pre-activation sign are excluded. The error is relative to
/// max(1, |analytic|, |numeric|).
inline GradCheckResult finite_diff_gradcheck(marlx::numkit::Mlp& net, const std::vector<double>& x,
                                             const std::vector<double>& c, double h = 1e-5) {
  using marlx::numkit::ForwardCache;
  using marlx::numkit::ParamTensors;

  ForwardCache cache;
  net.forward(x, &cache);
  ParamTensors grads = ParamTensors::zeros_like(net);
  net.backward(cache, c, &grads);

  auto loss_and_signs = [&](std::vector<signed char>* signs) {
    std::vector<double> out = naive_mlp_eval(net, x);
    if (signs) {
      signs->clear();
      std::vector<double> h_act = x;
      for (std::size_t l = 0; l + 1 < net.n_layers(); ++l) {
        const marlx::numkit::Matrix& w = net.weight(l);
        std::vector<double> pre(w.rows, 0.0);
        for (std::size_t i = 0; i < w.rows; ++i) {
          double s = net.bias(l)[i];
          for (std::size_t j = 0; j < w.cols; ++j) s += w(i, j) * h_act[j];
          pre[i] = s;
          signs->push_back(s > 0.0 ? 1 : 0);
        }
        for (double& v : pre)
          if (v < 0.0) v = 0.0;
        h_act = pre;
      }
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) loss += c[i] * out[i];
    return loss;
  };

  GradCheckResult result;
  std::vector<signed char> signs_plus, signs_minus;
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    for (int which = 0; which < 2; ++which) {
      std::size_t count = which == 0 ? net.weight(l).data.size() : net.bias(l).size();
      for (std::size_t k = 0; k < count; ++k) {
        double& p = which == 0 ? net.weight_mut(l).data[k] : net.bias_mut(l)[k];
        double saved = p;
        p = saved + h;
        double lp = loss_and_signs(&signs_plus);
        p = saved - h;
        double lm = loss_and_signs(&signs_minus);
        p = saved;
        net.bump_revision();
        if (signs_plus != signs_minus) {
          ++result.skipped;
          continue;
        }
        double numeric = (lp - lm) / (2.0 * h);
        double analytic = which == 0 ? grads.w[l].data[k] : grads.b[l][k];
        double denom = std::max({1.0, std::fabs(analytic), std::fabs(numeric)});
        double err = std::fabs(analytic - numeric) / denom;
        if (err > result.max_rel_error) result.max_rel_error = err;
        ++result.checked;
      }
    }
  }
  return result;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double population_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace oracles
