#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "marlx/errors.hpp"
#include "marlx/intrinsic/ellipse.hpp"
#include "marlx/intrinsic/inverse_dynamics.hpp"
#include "marlx/intrinsic/jim.hpp"
#include "marlx/intrinsic/rnd.hpp"
#include "oracles.hpp"

using namespace marlx;
using namespace marlx::intrinsic;
using numkit::Matrix;
using numkit::SeededRng;

namespace {

std::vector<double> random_obs(SeededRng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

IntrinsicConfig small_config(IntrinsicMode mode) {
  IntrinsicConfig cfg;
  cfg.mode = mode;
  cfg.enc_dim = 16;
  cfg.hidden_dim = 32;
  cfg.train_batch = 32;
  cfg.learning_rate = 1e-3;
  return cfg;
}

}  // namespace

TEST_CASE("rnd novelty: predictor copied from target gives zero novelty") {
  SeededRng rng(1);
  RndModule rnd(8, 32, 16, 1e-4, rng);
  numkit::copy_params(rnd.target(), rnd.predictor_mut());
  SeededRng orng(2);
  for (int i = 0; i < 10; ++i) CHECK(rnd.novelty(random_obs(orng, 8)) == 0.0);
}

TEST_CASE("rnd novelty: non-negative and equal to the two-pass distance") {
  SeededRng rng(3);
  RndModule rnd(8, 32, 16, 1e-4, rng);
  SeededRng orng(4);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> obs = random_obs(orng, 8);
    double nov = rnd.novelty(obs);
    CHECK(nov >= 0.0);
    std::vector<double> t = oracles::naive_mlp_eval(rnd.target(), obs);
    std::vector<double> p = oracles::naive_mlp_eval(rnd.predictor(), obs);
    double s = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) s += (t[k] - p[k]) * (t[k] - p[k]);
    CHECK(nov == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
  }
}

TEST_CASE("rnd novelty: dimension mismatch is rejected") {
  SeededRng rng(5);
  RndModule rnd(8, 16, 8, 1e-4, rng);
  CHECK_THROWS_AS((void)rnd.novelty({1.0, 2.0}), ShapeError);
}

TEST_CASE("rnd train: loss equals the mean of per-sample squared distances") {
  SeededRng rng(6);
  RndModule rnd(6, 16, 8, 1e-4, rng);
  SeededRng orng(7);
  std::vector<std::vector<double>> batch;
  for (int i = 0; i < 5; ++i) batch.push_back(random_obs(orng, 6));
  double expected = 0.0;
  for (const auto& obs : batch) {
    std::vector<double> t = oracles::naive_mlp_eval(rnd.target(), obs);
    std::vector<double> p = oracles::naive_mlp_eval(rnd.predictor(), obs);
    for (std::size_t k = 0; k < t.size(); ++k) expected += (t[k] - p[k]) * (t[k] - p[k]);
  }
  expected /= batch.size();
  CHECK(rnd.train(batch) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("rnd train: novelty of a repeatedly trained observation strictly decreases") {
  SeededRng rng(8);
  RndModule rnd(6, 32, 16, 1e-4, rng);
  std::vector<double> obs{0.3, -0.2, 0.8, 0.1, -0.5, 0.9};
  double prev = rnd.novelty(obs);
  for (int i = 0; i < 100; ++i) {
    rnd.train({obs});
    double cur = rnd.novelty(obs);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("rnd train: zero learning rate leaves parameters unchanged, target never moves") {
  SeededRng rng(9);
  RndModule rnd(6, 16, 8, 0.0, rng);
  numkit::Mlp pred_before = rnd.predictor();
  numkit::Mlp target_before = rnd.target();
  SeededRng orng(10);
  std::vector<std::vector<double>> batch{random_obs(orng, 6), random_obs(orng, 6)};
  rnd.train(batch);
  for (std::size_t l = 0; l < pred_before.n_layers(); ++l) {
    CHECK(rnd.predictor().weight(l).data == pred_before.weight(l).data);
    CHECK(rnd.target().weight(l).data == target_before.weight(l).data);
  }
}

TEST_CASE("llec: clamp and direct evaluation") {
  SeededRng rng(11);
  RndModule rnd(6, 16, 8, 1e-4, rng);
  SeededRng orng(12);
  std::vector<double> a = random_obs(orng, 6);
  std::vector<double> b = random_obs(orng, 6);
  if (rnd.novelty(a) < rnd.novelty(b)) std::swap(a, b);  // now nov(a) >= nov(b)

  // gain = nov(b) - 1.0 * nov(a) <= 0: clamp active
  CHECK(llec(rnd, a, b, 1.0) == 0.0);
  // identical observations with alpha = 1 cancel exactly
  CHECK(llec(rnd, a, a, 1.0) == 0.0);
  // direct evaluation of the clamped difference
  double expect = std::max(rnd.novelty(a) - 0.5 * rnd.novelty(b), 0.0);
  CHECK(llec(rnd, b, a, 0.5) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("llec clamp property: zero whenever rnd(next) <= alpha * rnd(cur)") {
  SeededRng rng(13);
  RndModule rnd(6, 16, 8, 1e-4, rng);
  SeededRng orng(14);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> cur = random_obs(orng, 6);
    std::vector<double> next = random_obs(orng, 6);
    double alpha = orng.uniform(0.05, 1.0);
    double value = llec(rnd, cur, next, alpha);
    CHECK(value >= 0.0);
    if (rnd.novelty(next) <= alpha * rnd.novelty(cur)) CHECK(value == 0.0);
  }
}

TEST_CASE("elliptic bonus: ridge identity at episode start") {
  EllipseState ellipse(4, 0.5);
  std::vector<double> v{0.2, -0.4, 0.6, 0.1};
  double sq = 0.04 + 0.16 + 0.36 + 0.01;
  CHECK(ellipse.bonus(v) == doctest::Approx(sq / 0.5).epsilon(1e-14));
  CHECK(ellipse.bonus({0.0, 0.0, 0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS((void)ellipse.bonus({1.0}), ShapeError);
}

TEST_CASE("elliptic bonus: repeated unit embedding decays as 1/(1+k)") {
  EllipseState ellipse(8, 1.0);
  std::vector<double> e(8, 0.0);
  e[3] = 1.0;
  for (int k = 0; k <= 32; ++k) {
    CHECK(ellipse.bonus(e) == doctest::Approx(1.0 / (1.0 + k)).epsilon(1e-10));
    ellipse.update(e);
  }
  // cross-check the final inverse against direct inversion of lambda*I + k*ee^T
  Matrix c = Matrix::identity(8);
  c(3, 3) += 33.0;
  CHECK(numkit::frobenius_rel_error(ellipse.c_inv(), oracles::gauss_jordan_inverse(c)) < 1e-10);
}

TEST_CASE("ellipse update: bonus strictly decreases, zero embedding is a no-op") {
  SeededRng rng(15);
  EllipseState ellipse(6, 0.1);
  std::vector<double> v = random_obs(rng, 6);
  double before = ellipse.bonus(v);
  ellipse.update(v);
  CHECK(ellipse.bonus(v) < before);

  Matrix snapshot = ellipse.c_inv();
  ellipse.update(std::vector<double>(6, 0.0));
  CHECK(ellipse.c_inv().data == snapshot.data);
}

TEST_CASE("ellipse update: incremental inverse tracks direct inversion") {
  SeededRng rng(16);
  const std::size_t dim = 16;
  const double lambda = 0.1;
  EllipseState ellipse(dim, lambda);
  Matrix c = Matrix::identity(dim, lambda);
  for (int k = 0; k < 300; ++k) {
    std::vector<double> v = random_obs(rng, dim);
    ellipse.update(v);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) c(i, j) += v[i] * v[j];
  }
  CHECK(numkit::frobenius_rel_error(ellipse.c_inv(), oracles::gauss_jordan_inverse(c)) < 1e-8);
}

TEST_CASE("eec: square root of twice the bonus") {
  EllipseState ellipse(4, 1.0);
  std::vector<double> v{std::sqrt(2.0), 0.0, 0.0, 0.0};  // bonus 2
  CHECK(eec(ellipse, v) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eec(ellipse, {0.0, 0.0, 0.0, 0.0}) == 0.0);
  std::vector<double> w{std::sqrt(0.125), 0.0, 0.0, 0.0};  // bonus 0.125
  CHECK(eec(ellipse, w) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("eec: episodic decay and exact episode reset") {
  SeededRng rng(17);
  EllipseState ellipse(8, 0.1);
  std::vector<double> v = random_obs(rng, 8);
  double first = eec(ellipse, v);
  double prev = first;
  for (int k = 0; k < 20; ++k) {
    ellipse.update(v);
    double cur = eec(ellipse, v);
    CHECK(cur < prev);
    prev = cur;
  }
  ellipse.reset();
  CHECK(eec(ellipse, v) == first);  // bit-exact after reset
}

TEST_CASE("inverse dynamics: initial loss is about log of the joint action count") {
  SeededRng rng(18);
  InverseDynamicsModel idm(6, 32, 16, 2, 3, 1e-3, rng);
  SeededRng orng(19);
  std::vector<IdmTransition> batch;
  for (int i = 0; i < 16; ++i)
    batch.push_back({random_obs(orng, 6), random_obs(orng, 6),
                     {int(orng.uniform_int(3)), int(orng.uniform_int(3))}});
  double loss = idm.train(batch);
  CHECK(loss == doctest::Approx(std::log(9.0)).epsilon(0.15));
}

TEST_CASE("inverse dynamics: loss strictly decreases when trained on one transition") {
  SeededRng rng(20);
  InverseDynamicsModel idm(6, 32, 16, 2, 3, 1e-3, rng);
  SeededRng orng(21);
  std::vector<IdmTransition> batch{{random_obs(orng, 6), random_obs(orng, 6), {2, 0}}};
  double prev = idm.train(batch);
  for (int i = 0; i < 100; ++i) {
    double cur = idm.train(batch);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("inverse dynamics: zero learning rate leaves parameters unchanged") {
  SeededRng rng(22);
  InverseDynamicsModel idm(6, 16, 8, 2, 3, 0.0, rng);
  numkit::Mlp psi_before = idm.psi();
  numkit::Mlp head_before = idm.head();
  SeededRng orng(23);
  std::vector<IdmTransition> batch{{random_obs(orng, 6), random_obs(orng, 6), {1, 1}}};
  idm.train(batch);
  for (std::size_t l = 0; l < psi_before.n_layers(); ++l)
    CHECK(idm.psi().weight(l).data == psi_before.weight(l).data);
  for (std::size_t l = 0; l < head_before.n_layers(); ++l)
    CHECK(idm.head().weight(l).data == head_before.weight(l).data);
}

TEST_CASE("inverse dynamics: bad actions are rejected") {
  SeededRng rng(24);
  InverseDynamicsModel idm(4, 8, 4, 2, 3, 1e-3, rng);
  std::vector<IdmTransition> batch{{{0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1}, {3, 0}}};
  CHECK_THROWS_AS((void)idm.train(batch), DomainError);
}

TEST_CASE("jim reward: product of the two criteria, annihilated by a zero llec") {
  SeededRng rng(25);
  IntrinsicConfig cfg = small_config(IntrinsicMode::jim);
  cfg.alpha = 1.0;
  JimModule jim(cfg, 12, 2, 3, rng);
  SeededRng orng(26);
  std::vector<double> a = random_obs(orng, 12);
  std::vector<double> b = random_obs(orng, 12);
  if (jim.rnd().novelty(a) < jim.rnd().novelty(b)) std::swap(a, b);

  // independent recomputation on a copy (reward() mutates the ellipse)
  JimModule probe = jim;
  double llec_val = llec(probe.rnd(), b, a, cfg.alpha);
  std::vector<double> emb = probe.idm().embed(a);
  double eec_val = std::sqrt(2.0 * probe.ellipse().bonus(emb));
  CHECK(jim.reward(b, a) == doctest::Approx(llec_val * eec_val).epsilon(1e-12));
  CHECK(jim.last().llec == doctest::Approx(llec_val).epsilon(1e-12));
  CHECK(jim.last().eec == doctest::Approx(eec_val).epsilon(1e-12));

  // nov(b) - nov(a) <= 0 under alpha = 1: llec 0, product 0 despite eec > 0
  JimModule jim2 = probe;
  double r = jim2.reward(a, b);
  CHECK(jim2.last().llec == 0.0);
  CHECK(jim2.last().eec > 0.0);
  CHECK(r == 0.0);
}

TEST_CASE("jim reward: mode none is always zero") {
  SeededRng rng(27);
  IntrinsicConfig cfg = small_config(IntrinsicMode::none);
  IntrinsicStack stack(cfg, 2, 6, 3, rng);
  SeededRng orng(28);
  for (int i = 0; i < 5; ++i) {
    std::vector<std::vector<double>> o{random_obs(orng, 6), random_obs(orng, 6)};
    std::vector<std::vector<double>> n{random_obs(orng, 6), random_obs(orng, 6)};
    CHECK(stack.step_reward(o, {0, 1}, n) == 0.0);
  }
}

TEST_CASE("jim signals: non-negative for arbitrary inputs") {
  SeededRng rng(29);
  JimModule jim(small_config(IntrinsicMode::jim), 10, 2, 3, rng);
  SeededRng orng(30);
  for (int i = 0; i < 50; ++i) {
    double r = jim.reward(random_obs(orng, 10), random_obs(orng, 10));
    CHECK(r >= 0.0);
    CHECK(jim.last().rnd_next >= 0.0);
    CHECK(jim.last().llec >= 0.0);
    CHECK(jim.last().bonus >= 0.0);
    CHECK(jim.last().eec >= 0.0);
  }
}

TEST_CASE("lim: single agent degenerates to jim on the local observation") {
  SeededRng rng(31);
  IntrinsicConfig cfg = small_config(IntrinsicMode::lim);
  LimModule lim(cfg, 1, 8, 3, rng);
  JimModule jim(cfg, 8, 1, 3, rng.split("agent", 0));
  SeededRng orng(32);
  std::vector<double> a = random_obs(orng, 8);
  std::vector<double> b = random_obs(orng, 8);
  std::vector<double> rewards = lim.rewards({a}, {b});
  REQUIRE(rewards.size() == 1);
  CHECK(rewards[0] == jim.reward(a, b));
  CHECK(LimModule::combine(rewards) == rewards[0]);
}

TEST_CASE("lim: identical modules and observations give equal per-agent rewards") {
  SeededRng rng(33);
  LimModule lim(small_config(IntrinsicMode::lim), 2, 8, 3, rng);
  lim.agent_module(1) = lim.agent_module(0);
  SeededRng orng(34);
  std::vector<double> a = random_obs(orng, 8);
  std::vector<double> b = random_obs(orng, 8);
  std::vector<double> rewards = lim.rewards({a, a}, {b, b});
  CHECK(rewards[0] == rewards[1]);
}

TEST_CASE("lim: mean combination rule") {
  CHECK(LimModule::combine({0.2, 0.6}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(LimModule::combine({}) == 0.0);
}

TEST_CASE("combine_reward") {
  CHECK(combine_reward(-3.7, 123.0, 0.0) == -3.7);
  CHECK(combine_reward(-0.1, 0.4, 2.0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(combine_reward(5.5, 0.0, 3.0) == 5.5);
}

TEST_CASE("ablation: jim-llec scales the life-long criterion only") {
  SeededRng rng(35);
  IntrinsicConfig cfg = small_config(IntrinsicMode::jim_llec);
  cfg.ablation_scale = 3.0;
  cfg.alpha = 1.0;
  JimModule mod(cfg, 8, 2, 3, rng);
  SeededRng orng(36);
  std::vector<double> a = random_obs(orng, 8);
  std::vector<double> b = random_obs(orng, 8);
  if (mod.rnd().novelty(a) < mod.rnd().novelty(b)) std::swap(a, b);

  CHECK(mod.reward(a, b) == 0.0);  // clamped gain
  JimModule probe = mod;
  double expect = 3.0 * llec(probe.rnd(), b, a, cfg.alpha);
  CHECK(mod.reward(b, a) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_FALSE(mod.has_ellipse());
}

TEST_CASE("ablation: jim-eec scales the episodic criterion at the first step") {
  SeededRng rng(37);
  IntrinsicConfig cfg = small_config(IntrinsicMode::jim_eec);
  cfg.ablation_scale = 0.1;
  cfg.lambda = 0.1;
  JimModule mod(cfg, 8, 2, 3, rng);
  SeededRng orng(38);
  std::vector<double> a = random_obs(orng, 8);
  std::vector<double> b = random_obs(orng, 8);

  JimModule probe = mod;
  std::vector<double> emb = probe.idm().embed(b);
  double norm_sq = 0.0;
  for (double x : emb) norm_sq += x * x;
  double expect = 0.1 * std::sqrt(2.0 * norm_sq / cfg.lambda);
  CHECK(mod.reward(a, b) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_FALSE(mod.has_rnd());
}

TEST_CASE("joint sensitivity: jim reads agent order, lim with identical modules does not") {
  SeededRng rng(39);
  IntrinsicConfig jim_cfg = small_config(IntrinsicMode::jim);
  JimModule jim(jim_cfg, 8, 2, 3, rng);
  SeededRng orng(40);
  std::vector<double> oa = random_obs(orng, 4);
  std::vector<double> ob = random_obs(orng, 4);
  std::vector<double> na = random_obs(orng, 4);
  std::vector<double> nb = random_obs(orng, 4);
  auto cat = [](const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> j = x;
    j.insert(j.end(), y.begin(), y.end());
    return j;
  };
  JimModule jim_ab = jim, jim_ba = jim;
  double r_ab = jim_ab.reward(cat(oa, ob), cat(na, nb));
  double r_ba = jim_ba.reward(cat(ob, oa), cat(nb, na));
  CHECK(r_ab != r_ba);

  LimModule lim(small_config(IntrinsicMode::lim), 2, 4, 3, rng.split("lim"));
  lim.agent_module(1) = lim.agent_module(0);
  LimModule lim_ab = lim, lim_ba = lim;
  double m_ab = LimModule::combine(lim_ab.rewards({oa, ob}, {na, nb}));
  double m_ba = LimModule::combine(lim_ba.rewards({ob, oa}, {nb, na}));
  CHECK(m_ab == m_ba);
}

TEST_CASE("life-long decay: trained predictor drives mean novelty down") {
  SeededRng rng(41);
  IntrinsicConfig cfg;
  RndModule rnd(8, 32, 16, 1e-3, rng);
  SeededRng orng(42);
  std::vector<std::vector<double>> states;
  for (int i = 0; i < 64; ++i) states.push_back(random_obs(orng, 8));

  double initial = 0.0;
  for (const auto& s : states) initial += rnd.novelty(s);
  initial /= states.size();
  for (int step = 0; step < 3000; ++step) rnd.train(states);
  double trained = 0.0;
  for (const auto& s : states) trained += rnd.novelty(s);
  trained /= states.size();
  CHECK(trained < 0.1 * initial);
}

TEST_CASE("intrinsic stack: joint mode concatenates and resets per episode") {
  SeededRng rng(43);
  IntrinsicConfig cfg = small_config(IntrinsicMode::jim_eec);
  cfg.ablation_scale = 1.0;
  cfg.train_every = 0;  // freeze the embedder so only the ellipse moves
  IntrinsicStack stack(cfg, 2, 4, 3, rng);
  SeededRng orng(44);
  std::vector<std::vector<double>> o{random_obs(orng, 4), random_obs(orng, 4)};
  std::vector<std::vector<double>> n{random_obs(orng, 4), random_obs(orng, 4)};
  double first = stack.step_reward(o, {0, 1}, n);
  CHECK(first > 0.0);
  double second = stack.step_reward(o, {0, 1}, n);
  CHECK(second < first);  // same joint embedding decays within the episode
  stack.episode_reset();
  double after_reset = stack.step_reward(o, {0, 1}, n);
  CHECK(after_reset == first);
}
