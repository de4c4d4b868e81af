#include "marlx/intrinsic/jim.hpp"

#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::intrinsic {

namespace {

bool mode_uses_rnd(IntrinsicMode m) {
  return m == IntrinsicMode::jim || m == IntrinsicMode::lim || m == IntrinsicMode::jim_llec;
}

bool mode_uses_ellipse(IntrinsicMode m) {
  return m == IntrinsicMode::jim || m == IntrinsicMode::lim || m == IntrinsicMode::jim_eec;
}

}  // namespace

std::vector<double> concat_observations(const std::vector<std::vector<double>>& per_agent) {
  std::vector<double> joint;
  std::size_t total = 0;
  for (const auto& o : per_agent) total += o.size();
  joint.reserve(total);
  for (const auto& o : per_agent) joint.insert(joint.end(), o.begin(), o.end());
  return joint;
}

JimModule::JimModule(const IntrinsicConfig& cfg, std::size_t obs_dim, std::size_t n_agents,
                     std::size_t n_actions, numkit::SeededRng rng)
    : cfg_(cfg) {
  if (mode_uses_rnd(cfg_.mode))
    rnd_.emplace(obs_dim, cfg_.hidden_dim, cfg_.enc_dim, cfg_.learning_rate, rng.split("rnd"));
  if (mode_uses_ellipse(cfg_.mode)) {
    ellipse_.emplace(cfg_.enc_dim, cfg_.lambda);
    idm_.emplace(obs_dim, cfg_.hidden_dim, cfg_.enc_dim, n_agents, n_actions, cfg_.learning_rate,
                 rng.split("idm"));
  }
}

double JimModule::reward(const std::vector<double>& obs_t, const std::vector<double>& obs_next) {
  last_ = IntrinsicSignals{};
  if (cfg_.mode == IntrinsicMode::none) return 0.0;

  if (rnd_) {
    double nov_t = rnd_->novelty(obs_t);
    last_.rnd_next = rnd_->novelty(obs_next);
    double gain = last_.rnd_next - cfg_.alpha * nov_t;
    last_.llec = gain > 0.0 ? gain : 0.0;
  }
  if (ellipse_) {
    std::vector<double> embedding = idm_->embed(obs_next);
    last_.bonus = ellipse_->bonus(embedding);
    last_.eec = std::sqrt(2.0 * last_.bonus);
    ellipse_->update(embedding);
  }

  switch (cfg_.mode) {
    case IntrinsicMode::jim:
    case IntrinsicMode::lim:
      last_.r_int = last_.llec * last_.eec;
      break;
    case IntrinsicMode::jim_llec:
      last_.r_int = cfg_.ablation_scale * last_.llec;
      break;
    case IntrinsicMode::jim_eec:
      last_.r_int = cfg_.ablation_scale * last_.eec;
      break;
    default:
      last_.r_int = 0.0;
  }
  return last_.r_int;
}

void JimModule::observe_transition(const std::vector<double>& obs_t, const std::vector<int>& actions,
                                   const std::vector<double>& obs_next) {
  if (cfg_.mode == IntrinsicMode::none) return;
  recent_.push_back({obs_t, obs_next, actions});
  while (recent_.size() > cfg_.train_batch) recent_.pop_front();
  ++step_count_;
  if (cfg_.train_every == 0 || step_count_ % cfg_.train_every != 0) return;

  if (rnd_) {
    std::vector<std::vector<double>> states;
    states.reserve(recent_.size());
    for (const auto& tr : recent_) states.push_back(tr.obs_next);
    rnd_->train(states);
  }
  if (idm_) {
    std::vector<IdmTransition> batch(recent_.begin(), recent_.end());
    idm_->train(batch);
  }
}

void JimModule::episode_reset() {
  if (ellipse_) ellipse_->reset();
}

LimModule::LimModule(const IntrinsicConfig& cfg, std::size_t n_agents, std::size_t obs_dim,
                     std::size_t n_actions, numkit::SeededRng rng) {
  modules_.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i)
    modules_.emplace_back(cfg, obs_dim, 1, n_actions, rng.split("agent", i));
}

std::vector<double> LimModule::rewards(const std::vector<std::vector<double>>& obs_t,
                                       const std::vector<std::vector<double>>& obs_next) {
  if (obs_t.size() != modules_.size() || obs_next.size() != modules_.size())
    throw ShapeError("LimModule::rewards: one observation per agent expected");
  std::vector<double> out(modules_.size(), 0.0);
  for (std::size_t i = 0; i < modules_.size(); ++i) out[i] = modules_[i].reward(obs_t[i], obs_next[i]);
  return out;
}

double LimModule::combine(const std::vector<double>& per_agent) {
  if (per_agent.empty()) return 0.0;
  double s = 0.0;
  for (double r : per_agent) s += r;
  return s / static_cast<double>(per_agent.size());
}

void LimModule::observe_transition(const std::vector<std::vector<double>>& obs_t,
                                   const std::vector<int>& actions,
                                   const std::vector<std::vector<double>>& obs_next) {
  for (std::size_t i = 0; i < modules_.size(); ++i)
    modules_[i].observe_transition(obs_t[i], {actions[i]}, obs_next[i]);
}

void LimModule::episode_reset() {
  for (auto& m : modules_) m.episode_reset();
}

IntrinsicStack::IntrinsicStack(const IntrinsicConfig& cfg, std::size_t n_agents,
                               std::size_t obs_dim, std::size_t n_actions, numkit::SeededRng rng)
    : cfg_(cfg) {
  if (cfg_.mode == IntrinsicMode::none) return;
  if (cfg_.mode == IntrinsicMode::lim) {
    local_.emplace(cfg_, n_agents, obs_dim, n_actions, rng.split("lim"));
  } else {
    joint_.emplace(cfg_, n_agents * obs_dim, n_agents, n_actions, rng.split("jim"));
  }
}

double IntrinsicStack::step_reward(const std::vector<std::vector<double>>& obs_t,
                                   const std::vector<int>& actions,
                                   const std::vector<std::vector<double>>& obs_next) {
  last_ = IntrinsicSignals{};
  if (cfg_.mode == IntrinsicMode::none) return 0.0;

  if (local_) {
    std::vector<double> per_agent = local_->rewards(obs_t, obs_next);
    local_->observe_transition(obs_t, actions, obs_next);
    double n = static_cast<double>(local_->n_agents());
    for (std::size_t i = 0; i < local_->n_agents(); ++i) {
      const IntrinsicSignals& s = local_->agent_module(i).last();
      last_.rnd_next += s.rnd_next / n;
      last_.llec += s.llec / n;
      last_.bonus += s.bonus / n;
      last_.eec += s.eec / n;
    }
    last_.r_int = LimModule::combine(per_agent);
    return last_.r_int;
  }

  std::vector<double> joint_t = concat_observations(obs_t);
  std::vector<double> joint_next = concat_observations(obs_next);
  double r = joint_->reward(joint_t, joint_next);
  joint_->observe_transition(joint_t, actions, joint_next);
  last_ = joint_->last();
  return r;
}

void IntrinsicStack::episode_reset() {
  if (joint_) joint_->episode_reset();
  if (local_) local_->episode_reset();
}

}  // namespace marlx::intrinsic
