#include "selftest.hpp"

#include <cmath>
#include <vector>

#include "marlx/envs/particle_world.hpp"
#include "marlx/envs/rel_overgen.hpp"
#include "marlx/numkit/mlp.hpp"
#include "marlx/numkit/rng.hpp"
#include "marlx/numkit/sherman.hpp"

namespace marlx::tools {

using numkit::ForwardCache;
using numkit::Matrix;
using numkit::Mlp;
using numkit::ParamTensors;
using numkit::SeededRng;

namespace {

// Central-difference check of d(c . net(x))/dtheta over every parameter,
// skipping coordinates whose perturbation flips a relu pre-activation sign.
bool gradient_check(Mlp& net, SeededRng& rng, double tolerance) {
  std::vector<double> x(net.input_dim()), c(net.output_dim());
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  for (double& v : c) v = rng.uniform(-1.0, 1.0);

  ForwardCache cache;
  net.forward(x, &cache);
  ParamTensors grads = ParamTensors::zeros_like(net);
  net.backward(cache, c, &grads);

  auto eval = [&](std::vector<signed char>& signs) {
    signs.clear();
    std::vector<double> h = x;
    for (std::size_t l = 0; l < net.n_layers(); ++l) {
      const Matrix& w = net.weight(l);
      std::vector<double> z(w.rows, 0.0);
      for (std::size_t i = 0; i < w.rows; ++i) {
        double s = net.bias(l)[i];
        for (std::size_t j = 0; j < w.cols; ++j) s += w(i, j) * h[j];
        if (l + 1 < net.n_layers()) {
          signs.push_back(s > 0.0 ? 1 : 0);
          if (s < 0.0) s = 0.0;
        }
        z[i] = s;
      }
      h = z;
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) loss += c[i] * h[i];
    return loss;
  };

  const double h = 1e-5;
  double max_err = 0.0;
  std::vector<signed char> sp, sm;
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    for (int which = 0; which < 2; ++which) {
      std::size_t count = which == 0 ? net.weight(l).data.size() : net.bias(l).size();
      for (std::size_t k = 0; k < count; ++k) {
        double& p = which == 0 ? net.weight_mut(l).data[k] : net.bias_mut(l)[k];
        double saved = p;
        p = saved + h;
        double lp = eval(sp);
        p = saved - h;
        double lm = eval(sm);
        p = saved;
        if (sp != sm) continue;  // relu kink crossed; central difference invalid
        double numeric = (lp - lm) / (2.0 * h);
        double analytic = which == 0 ? grads.w[l].data[k] : grads.b[l][k];
        double err = std::fabs(analytic - numeric) /
                     std::max({1.0, std::fabs(analytic), std::fabs(numeric)});
        if (err > max_err) max_err = err;
      }
    }
  }
  net.bump_revision();
  return max_err < tolerance;
}

Matrix invert(Matrix a) {
  const std::size_t n = a.rows;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    for (std::size_t cc = 0; cc < n; ++cc) {
      std::swap(a(pivot, cc), a(col, cc));
      std::swap(inv(pivot, cc), inv(col, cc));
    }
    double d = a(col, col);
    for (std::size_t cc = 0; cc < n; ++cc) {
      a(col, cc) /= d;
      inv(col, cc) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      for (std::size_t cc = 0; cc < n; ++cc) {
        a(r, cc) -= f * a(col, cc);
        inv(r, cc) -= f * inv(col, cc);
      }
    }
  }
  return inv;
}

bool sherman_check(SeededRng& rng) {
  std::size_t dim = 4 + rng.uniform_int(13);
  double lambda = 0.1 + rng.uniform01();
  Matrix c = Matrix::identity(dim, lambda);
  Matrix c_inv = Matrix::identity(dim, 1.0 / lambda);
  std::vector<double> scratch;
  std::size_t updates = 20 + rng.uniform_int(180);
  for (std::size_t k = 0; k < updates; ++k) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) c(i, j) += v[i] * v[j];
    numkit::sherman_morrison_update_inplace(c_inv, v.data(), dim, scratch);
  }
  return numkit::frobenius_rel_error(c_inv, invert(c)) < 1e-8;
}

int reward_table_checks(std::ostream& out) {
  int passed = 0, total = 0;
  auto check = [&](bool ok) {
    ++total;
    if (ok) ++passed;
  };

  envs::RelOvergenConfig ro;
  ro.d = 40;
  ro.delta = 30.0;
  ro.finalize();
  check(envs::rel_overgen_reward(ro.spike_pos, ro) == 12.0);
  check(envs::rel_overgen_reward(ro.plateau_pos, ro) == 0.0);
  check(std::fabs(envs::rel_overgen_reward({1, 0}, ro) - 11.25) < 1e-12);

  envs::ParticleParams pp;
  envs::ParticleWorldState s;
  s.agent_pos = {{-0.5, 0.0}, {0.5, 0.0}};
  s.agent_vel = {{}, {}};
  s.landmark_corner = 4;
  s.box_pos = {0.0, 0.0};
  check(envs::box_push_reward(s, pp).first == -0.1);
  s.box_pos = {0.75, -0.72};
  check(envs::box_push_reward(s, pp) == std::pair<double, bool>{100.0, true});

  envs::ParticleWorldState t;
  t.landmarks = envs::placement_landmarks();
  t.agent_pos = {{-0.65, 0.55}, {0.65, 0.55}};
  t.agent_vel = {{}, {}};
  check(envs::coordinated_placement_reward(t, pp) == 10.0);
  t.agent_pos = {{-0.65, 0.0}, {0.65, 0.0}};
  check(envs::coordinated_placement_reward(t, pp) == 2.0);
  t.agent_pos = {{-0.65, -0.55}, {0.9, 0.9}};
  check(envs::coordinated_placement_reward(t, pp) == 0.5);

  check(envs::ObservationSpec{envs::ParticleTask::box_push, 0.6, 2}.dimension() == 16);
  check(envs::ObservationSpec{envs::ParticleTask::placement, 0.6, 2}.dimension() == 43);

  out << "reward tables: " << passed << "/" << total << " passed\n";
  return total - passed;
}

}  // namespace

int run_selftest(std::ostream& out) {
  int failures = 0;

  SeededRng rng(20240817);
  int grad_pass = 0;
  const int grad_total = 10;
  for (int i = 0; i < grad_total; ++i) {
    std::vector<std::size_t> sizes{2 + rng.uniform_int(12)};
    std::size_t depth = 1 + rng.uniform_int(3);
    for (std::size_t l = 0; l < depth; ++l) sizes.push_back(1 + rng.uniform_int(48));
    sizes.push_back(1 + rng.uniform_int(6));
    auto init = rng.split("grad", i);
    Mlp net = Mlp::random(sizes, init);
    if (gradient_check(net, rng, 1e-4)) ++grad_pass;
  }
  out << "gradient checks: " << grad_pass << "/" << grad_total << " passed\n";
  failures += grad_total - grad_pass;

  int sm_pass = 0;
  const int sm_total = 10;
  for (int i = 0; i < sm_total; ++i)
    if (sherman_check(rng)) ++sm_pass;
  out << "sherman-morrison checks: " << sm_pass << "/" << sm_total << " passed\n";
  failures += sm_total - sm_pass;

  failures += reward_table_checks(out);

  out << (failures == 0 ? "selftest OK\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace marlx::tools
