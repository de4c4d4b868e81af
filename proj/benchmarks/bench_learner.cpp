#include <benchmark/benchmark.h>

#include "marlx/envs/rel_overgen.hpp"
#include "marlx/intrinsic/jim.hpp"
#include "marlx/learner/qmix.hpp"
#include "marlx/learner/replay.hpp"

using namespace marlx;
using numkit::SeededRng;

namespace {

learner::EpisodeBatch rollout_episode(envs::Env& env, SeededRng& rng) {
  learner::EpisodeBatch ep;
  envs::DecPomdpStep cur = env.reset(rng);
  ep.obs.push_back(cur.joint_observation);
  ep.states.push_back(cur.global_state);
  while (!cur.done) {
    std::vector<int> a{int(rng.uniform_int(env.n_actions())), int(rng.uniform_int(env.n_actions()))};
    cur = env.step(a);
    ep.actions.push_back(a);
    ep.rewards.push_back(cur.reward);
    ep.obs.push_back(cur.joint_observation);
    ep.states.push_back(cur.global_state);
  }
  return ep;
}

}  // namespace

static void BM_rel_overgen_step(benchmark::State& state) {
  envs::RelOvergenConfig cfg;
  cfg.d = 20;
  cfg.delta = 60.0;
  cfg.episode_length = 1u << 30;  // never done inside the loop
  envs::RelOvergenEnv env(cfg);
  SeededRng rng(1);
  env.reset(rng);
  std::vector<int> actions{1, 1};
  for (auto _ : state) {
    actions[0] = int(rng.uniform_int(3));
    actions[1] = int(rng.uniform_int(3));
    benchmark::DoNotOptimize(env.step(actions).reward);
  }
}
BENCHMARK(BM_rel_overgen_step);

static void BM_replay_sample(benchmark::State& state) {
  envs::RelOvergenConfig cfg;
  cfg.d = 20;
  cfg.episode_length = 25;
  envs::RelOvergenEnv env(cfg);
  SeededRng rng(2);
  learner::ReplayBuffer buf(256, 0.6, 1e-6);
  for (int i = 0; i < 256; ++i) buf.add(rollout_episode(env, rng));
  std::vector<std::size_t> idx(8);
  std::vector<double> prio(8);
  for (auto _ : state) {
    learner::SampledBatch batch = buf.sample(8, 0.6, rng);
    for (std::size_t k = 0; k < 8; ++k) {
      idx[k] = batch.indices[k];
      prio[k] = 0.5 + 0.1 * double(k);
    }
    buf.update_priorities(idx, prio);
    benchmark::DoNotOptimize(batch.is_weights.data());
  }
}
BENCHMARK(BM_replay_sample);

static void BM_qmix_train_step(benchmark::State& state) {
  envs::RelOvergenConfig cfg;
  cfg.d = 20;
  cfg.delta = 60.0;
  cfg.episode_length = 125;
  envs::RelOvergenEnv env(cfg);
  SeededRng rng(3);

  learner::TrainConfig tc;
  tc.agent_hidden = {64};
  tc.mixer_embed = 16;
  SeededRng lrng(4);
  learner::QmixLearner learner(2, 20, 3, 40, tc, lrng);

  std::vector<learner::EpisodeBatch> episodes;
  for (int i = 0; i < 8; ++i) episodes.push_back(rollout_episode(env, rng));
  learner::SampledBatch batch;
  for (auto& ep : episodes) {
    batch.episodes.push_back(&ep);
    batch.indices.push_back(batch.indices.size());
    batch.is_weights.push_back(1.0);
  }
  for (auto _ : state) {
    auto res = learner.train_step(batch);
    benchmark::DoNotOptimize(res.loss);
  }
  state.counters["transitions"] = 8 * 125;
}
BENCHMARK(BM_qmix_train_step);

static void BM_jim_step_reward(benchmark::State& state) {
  intrinsic::IntrinsicConfig cfg;
  cfg.mode = intrinsic::IntrinsicMode::jim;
  cfg.enc_dim = 32;
  cfg.hidden_dim = 64;
  cfg.train_batch = 32;
  cfg.train_every = 6;
  SeededRng rng(5);
  intrinsic::IntrinsicStack stack(cfg, 2, 20, 3, rng);
  SeededRng orng(6);
  std::vector<std::vector<double>> o(2, std::vector<double>(20, 0.0)), n = o;
  int t = 0;
  for (auto _ : state) {
    o[0][t % 20] = 1.0;
    n[0][(t + 1) % 20] = 1.0;
    benchmark::DoNotOptimize(stack.step_reward(o, {1, 2}, n));
    o[0][t % 20] = 0.0;
    n[0][(t + 1) % 20] = 0.0;
    if (++t % 125 == 0) stack.episode_reset();
  }
}
BENCHMARK(BM_jim_step_reward);
