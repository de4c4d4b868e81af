#include "marlx/learner/qmix.hpp"

#include <algorithm>
#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::learner {

using numkit::BatchCache;
using numkit::Matrix;
using numkit::Mlp;
using numkit::ParamTensors;

QmixLearner::QmixLearner(std::size_t n_agents, std::size_t obs_dim, std::size_t n_actions,
                         std::size_t state_dim, const TrainConfig& cfg, numkit::SeededRng rng)
    : n_agents_(n_agents),
      obs_dim_(obs_dim),
      n_actions_(n_actions),
      state_dim_(state_dim),
      cfg_(cfg),
      agent_([&] {
        std::vector<std::size_t> sizes{obs_dim + n_agents + n_actions};
        sizes.insert(sizes.end(), cfg.agent_hidden.begin(), cfg.agent_hidden.end());
        sizes.push_back(n_actions);
        auto r = rng.split("agent");
        return Mlp::random(sizes, r);
      }()),
      agent_target_(agent_),
      mixer_(n_agents, state_dim, cfg.mixer_embed, rng.split("mixer")),
      mixer_target_(mixer_),
      opt_agent_(numkit::OptimizerState::for_net(agent_, cfg.optimizer)),
      opt_hw1_(numkit::OptimizerState::for_net(mixer_.hyper_w1(), cfg.optimizer)),
      opt_hb1_(numkit::OptimizerState::for_net(mixer_.hyper_b1(), cfg.optimizer)),
      opt_hw2_(numkit::OptimizerState::for_net(mixer_.hyper_w2(), cfg.optimizer)),
      opt_hb2_(numkit::OptimizerState::for_net(mixer_.hyper_b2(), cfg.optimizer)) {}

void QmixLearner::fill_agent_input(double* dst, const double* obs, std::size_t agent,
                                   int last_action) const {
  std::copy(obs, obs + obs_dim_, dst);
  std::fill(dst + obs_dim_, dst + obs_dim_ + n_agents_ + n_actions_, 0.0);
  dst[obs_dim_ + agent] = 1.0;
  if (last_action >= 0) dst[obs_dim_ + n_agents_ + static_cast<std::size_t>(last_action)] = 1.0;
}

std::vector<double> QmixLearner::agent_input(const std::vector<double>& obs, std::size_t agent,
                                             int last_action) const {
  if (obs.size() != obs_dim_) throw ShapeError("QmixLearner::agent_input: observation dimension mismatch");
  std::vector<double> x(agent_input_dim(), 0.0);
  fill_agent_input(x.data(), obs.data(), agent, last_action);
  return x;
}

std::vector<int> QmixLearner::select_actions(const std::vector<std::vector<double>>& joint_obs,
                                             const std::vector<int>& last_actions, double epsilon,
                                             numkit::SeededRng& rng) const {
  if (joint_obs.size() != n_agents_ || last_actions.size() != n_agents_)
    throw ShapeError("QmixLearner::select_actions: arity mismatch");
  std::vector<int> actions(n_agents_, 0);
  for (std::size_t a = 0; a < n_agents_; ++a) {
    double u = rng.uniform01();
    if (u < epsilon) {
      actions[a] = static_cast<int>(rng.uniform_int(n_actions_));
      continue;
    }
    std::vector<double> q = agent_.forward(agent_input(joint_obs[a], a, last_actions[a]));
    std::size_t best = 0;
    for (std::size_t k = 1; k < q.size(); ++k)
      if (q[k] > q[best]) best = k;
    actions[a] = static_cast<int>(best);
  }
  return actions;
}

double QmixLearner::epsilon_at(std::uint64_t env_steps) const {
  if (cfg_.eps_anneal_steps == 0) return cfg_.eps_final;
  double frac = static_cast<double>(env_steps) / static_cast<double>(cfg_.eps_anneal_steps);
  if (frac > 1.0) frac = 1.0;
  return cfg_.eps_start + (cfg_.eps_final - cfg_.eps_start) * frac;
}

QmixLearner::TrainResult QmixLearner::train_step(const SampledBatch& batch) {
  if (batch.episodes.empty()) throw ShapeError("QmixLearner::train_step: empty batch");
  std::size_t total = 0;
  for (const EpisodeBatch* ep : batch.episodes) total += ep->length();

  const std::size_t in_dim = agent_input_dim();
  std::vector<Matrix> x(n_agents_, Matrix(total, in_dim));
  std::vector<Matrix> x_next(n_agents_, Matrix(total, in_dim));
  Matrix states(total, state_dim_);
  Matrix states_next(total, state_dim_);
  std::vector<double> rewards(total);
  std::vector<double> not_done(total);
  std::vector<double> weights(total);
  std::vector<int> chosen(total * n_agents_);
  std::vector<std::size_t> episode_of(total);

  std::size_t row = 0;
  for (std::size_t e = 0; e < batch.episodes.size(); ++e) {
    const EpisodeBatch& ep = *batch.episodes[e];
    for (std::size_t t = 0; t < ep.length(); ++t, ++row) {
      for (std::size_t a = 0; a < n_agents_; ++a) {
        int last = t == 0 ? -1 : ep.actions[t - 1][a];
        fill_agent_input(x[a].row(row), ep.obs[t][a].data(), a, last);
        fill_agent_input(x_next[a].row(row), ep.obs[t + 1][a].data(), a, ep.actions[t][a]);
        chosen[row * n_agents_ + a] = ep.actions[t][a];
      }
      std::copy(ep.states[t].begin(), ep.states[t].end(), states.row(row));
      std::copy(ep.states[t + 1].begin(), ep.states[t + 1].end(), states_next.row(row));
      rewards[row] = ep.rewards[t];
      not_done[row] = t + 1 == ep.length() ? 0.0 : 1.0;
      weights[row] = batch.is_weights[e];
      episode_of[row] = e;
    }
  }

  // Online Q for chosen actions; target Q for per-agent greedy next actions.
  std::vector<BatchCache> caches(n_agents_);
  Matrix q_chosen(total, n_agents_);
  Matrix q_next(total, n_agents_);
  for (std::size_t a = 0; a < n_agents_; ++a) {
    Matrix q = agent_.forward_batch(x[a], &caches[a]);
    for (std::size_t r = 0; r < total; ++r)
      q_chosen(r, a) = q(r, static_cast<std::size_t>(chosen[r * n_agents_ + a]));
    Matrix qn = agent_target_.forward_batch(x_next[a]);
    for (std::size_t r = 0; r < total; ++r) {
      const double* rowp = qn.row(r);
      std::size_t best = 0;
      for (std::size_t k = 1; k < n_actions_; ++k)
        if (rowp[k] > rowp[best]) best = k;
      q_next(r, a) = rowp[best];
    }
  }

  MixerNet::Cache mix_cache;
  std::vector<double> q_tot = mixer_.forward_batch(q_chosen, states, &mix_cache);
  std::vector<double> q_tot_next = mixer_target_.forward_batch(q_next, states_next);

  double loss = 0.0;
  std::vector<double> dqtot(total);
  std::vector<double> td_abs_sum(batch.episodes.size(), 0.0);
  for (std::size_t r = 0; r < total; ++r) {
    double y = rewards[r] + cfg_.gamma * not_done[r] * q_tot_next[r];
    double delta = q_tot[r] - y;
    loss += weights[r] * delta * delta;
    dqtot[r] = 2.0 * weights[r] * delta / static_cast<double>(total);
    td_abs_sum[episode_of[r]] += std::fabs(delta);
  }
  loss /= static_cast<double>(total);
  if (!std::isfinite(loss)) throw NumericError("QmixLearner::train_step: non-finite loss");

  MixerNet::Grads mixer_grads = MixerNet::Grads::zeros_like(mixer_);
  Matrix dq = mixer_.backward_batch(mix_cache, dqtot, &mixer_grads);

  ParamTensors agent_grads = ParamTensors::zeros_like(agent_);
  Matrix dq_full(total, n_actions_);
  for (std::size_t a = 0; a < n_agents_; ++a) {
    dq_full.fill(0.0);
    for (std::size_t r = 0; r < total; ++r)
      dq_full(r, static_cast<std::size_t>(chosen[r * n_agents_ + a])) = dq(r, a);
    agent_.backward_batch(caches[a], dq_full, &agent_grads);
  }

  if (cfg_.grad_clip > 0.0) {
    double sq = 0.0;
    for (const ParamTensors* g :
         {&agent_grads, &mixer_grads.hw1, &mixer_grads.hb1, &mixer_grads.hw2, &mixer_grads.hb2}) {
      double n = numkit::grad_norm(*g);
      sq += n * n;
    }
    double norm = std::sqrt(sq);
    if (norm > cfg_.grad_clip) {
      double scale = cfg_.grad_clip / norm;
      for (ParamTensors* g :
           {&agent_grads, &mixer_grads.hw1, &mixer_grads.hb1, &mixer_grads.hw2, &mixer_grads.hb2}) {
        for (auto& m : g->w)
          for (double& v : m.data) v *= scale;
        for (auto& vec : g->b)
          for (double& v : vec) v *= scale;
      }
    }
  }

  numkit::optimizer_step(opt_agent_, agent_, agent_grads, cfg_.learning_rate);
  numkit::optimizer_step(opt_hw1_, mixer_.hyper_w1(), mixer_grads.hw1, cfg_.learning_rate);
  numkit::optimizer_step(opt_hb1_, mixer_.hyper_b1(), mixer_grads.hb1, cfg_.learning_rate);
  numkit::optimizer_step(opt_hw2_, mixer_.hyper_w2(), mixer_grads.hw2, cfg_.learning_rate);
  numkit::optimizer_step(opt_hb2_, mixer_.hyper_b2(), mixer_grads.hb2, cfg_.learning_rate);
  ++train_steps_;

  TrainResult out;
  out.loss = loss;
  out.episode_td_means.resize(batch.episodes.size());
  for (std::size_t e = 0; e < batch.episodes.size(); ++e)
    out.episode_td_means[e] = td_abs_sum[e] / static_cast<double>(batch.episodes[e]->length());
  return out;
}

void QmixLearner::sync_targets() {
  numkit::copy_params(agent_, agent_target_);
  copy_mixer_params(mixer_, mixer_target_);
}

}  // namespace marlx::learner
