#include "marlx/harness/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "marlx/errors.hpp"

namespace marlx::harness {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
  KeyValueConfig kv;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected `key = value`");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv.values_[key] = value;
  }
  return kv;
}

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  read_.insert(key);
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  read_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  char* end = nullptr;
  double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0')
    throw ConfigError("config key " + key + ": not a number: " + it->second);
  return v;
}

std::uint64_t KeyValueConfig::get_count(const std::string& key, std::uint64_t fallback) const {
  read_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0')
    throw ConfigError("config key " + key + ": not a count: " + it->second);
  return static_cast<std::uint64_t>(v);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  read_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("config key " + key + ": not a bool: " + it->second);
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key,
                                              const std::vector<int>& fallback) const {
  read_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  for (const std::string& item : split_commas(it->second)) out.push_back(std::stoi(item));
  return out;
}

std::vector<std::uint64_t> KeyValueConfig::get_count_list(
    const std::string& key, const std::vector<std::uint64_t>& fallback) const {
  read_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::uint64_t> out;
  for (const std::string& item : split_commas(it->second))
    out.push_back(static_cast<std::uint64_t>(std::stoull(item)));
  return out;
}

std::vector<std::string> KeyValueConfig::unread_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (read_.count(key) == 0) out.push_back(key);
  return out;
}

AlgoMode algo_mode_from_string(const std::string& name) {
  if (name == "qmix") return AlgoMode::qmix;
  if (name == "qmix+jim") return AlgoMode::qmix_jim;
  if (name == "qmix+lim") return AlgoMode::qmix_lim;
  if (name == "jim-llec") return AlgoMode::jim_llec;
  if (name == "jim-eec") return AlgoMode::jim_eec;
  throw ConfigError("unknown algo.mode: " + name);
}

std::string to_string(AlgoMode mode) {
  switch (mode) {
    case AlgoMode::qmix: return "qmix";
    case AlgoMode::qmix_jim: return "qmix+jim";
    case AlgoMode::qmix_lim: return "qmix+lim";
    case AlgoMode::jim_llec: return "jim-llec";
    case AlgoMode::jim_eec: return "jim-eec";
  }
  return "qmix";
}

intrinsic::IntrinsicMode intrinsic_mode_for(AlgoMode mode) {
  switch (mode) {
    case AlgoMode::qmix: return intrinsic::IntrinsicMode::none;
    case AlgoMode::qmix_jim: return intrinsic::IntrinsicMode::jim;
    case AlgoMode::qmix_lim: return intrinsic::IntrinsicMode::lim;
    case AlgoMode::jim_llec: return intrinsic::IntrinsicMode::jim_llec;
    case AlgoMode::jim_eec: return intrinsic::IntrinsicMode::jim_eec;
  }
  return intrinsic::IntrinsicMode::none;
}

ExperimentConfig ExperimentConfig::from_kv(const KeyValueConfig& kv) {
  ExperimentConfig cfg;

  cfg.env_id = kv.get_string("env.id", cfg.env_id);
  if (cfg.env_id != "rel_overgen" && cfg.env_id != "box_push" && cfg.env_id != "placement")
    throw ConfigError("unknown env.id: " + cfg.env_id);

  auto& ro = cfg.rel_overgen;
  ro.n_agents = kv.get_count("env.n_agents", ro.n_agents);
  ro.d = kv.get_count("env.d", ro.d);
  ro.delta = kv.get_double("env.delta", ro.delta);
  ro.r_plus = kv.get_double("env.r_plus", ro.r_plus);
  ro.r_minus = kv.get_double("env.r_minus", ro.r_minus);
  ro.spike_pos = kv.get_int_list("env.spike_pos", ro.spike_pos);
  ro.plateau_pos = kv.get_int_list("env.plateau_pos", ro.plateau_pos);
  ro.episode_length = kv.get_count("env.episode_length", ro.episode_length);
  {
    std::string init = kv.get_string("env.init", "uniform");
    if (init == "uniform")
      ro.init = envs::RelOvergenInit::uniform;
    else if (init == "half")
      ro.init = envs::RelOvergenInit::half;
    else if (init == "plateau")
      ro.init = envs::RelOvergenInit::plateau;
    else if (init == "center")
      ro.init = envs::RelOvergenInit::center;
    else
      throw ConfigError("env.init must be uniform, half, plateau or center");
  }

  auto& pp = cfg.particle;
  pp.episode_length = ro.episode_length;
  pp.obs_range = kv.get_double("env.obs_range", pp.obs_range);
  pp.step_penalty = kv.get_double("env.step_penalty", pp.step_penalty);
  pp.collision_penalty = kv.get_double("env.collision_penalty", pp.collision_penalty);
  pp.goal_reward = kv.get_double("env.goal_reward", pp.goal_reward);

  cfg.algo = algo_mode_from_string(kv.get_string("algo.mode", to_string(cfg.algo)));

  auto& ic = cfg.intrinsic;
  ic.mode = intrinsic_mode_for(cfg.algo);
  ic.beta = kv.get_double("intrinsic.beta", ic.beta);
  ic.alpha = kv.get_double("intrinsic.alpha", ic.alpha);
  ic.learning_rate = kv.get_double("intrinsic.lr", ic.learning_rate);
  ic.lambda = kv.get_double("intrinsic.lambda", ic.lambda);
  ic.ablation_scale = kv.get_double("intrinsic.ablation_scale", ic.ablation_scale);
  ic.enc_dim = kv.get_count("intrinsic.enc_dim", ic.enc_dim);
  ic.hidden_dim = kv.get_count("intrinsic.hidden_dim", ic.hidden_dim);
  ic.train_batch = kv.get_count("intrinsic.train_batch", ic.train_batch);
  ic.train_every = kv.get_count("intrinsic.train_every", ic.train_every);
  if (ic.beta < 0.0) throw ConfigError("intrinsic.beta must be >= 0");
  if (ic.alpha <= 0.0 || ic.alpha > 1.0) throw ConfigError("intrinsic.alpha must be in (0, 1]");

  auto& tc = cfg.train;
  tc.gamma = kv.get_double("train.gamma", tc.gamma);
  if (tc.gamma < 0.0 || tc.gamma >= 1.0) throw ConfigError("train.gamma must be in [0, 1)");
  tc.learning_rate = kv.get_double("train.lr", tc.learning_rate);
  std::string opt = kv.get_string("train.optimizer", "rmsprop");
  if (opt == "rmsprop")
    tc.optimizer = numkit::OptKind::rmsprop;
  else if (opt == "adam")
    tc.optimizer = numkit::OptKind::adam;
  else
    throw ConfigError("train.optimizer must be rmsprop or adam");
  tc.batch_episodes = kv.get_count("train.batch_episodes", tc.batch_episodes);
  tc.updates_per_episode = kv.get_count("train.updates_per_episode", tc.updates_per_episode);
  tc.target_sync_every = kv.get_count("train.target_sync_every", tc.target_sync_every);
  tc.eps_start = kv.get_double("train.eps_start", tc.eps_start);
  tc.eps_final = kv.get_double("train.eps_final", tc.eps_final);
  tc.eps_anneal_steps = kv.get_count("train.eps_anneal_steps", tc.eps_anneal_steps);
  tc.train_start_episodes = kv.get_count("train.train_start_episodes", tc.train_start_episodes);
  {
    std::vector<std::uint64_t> hidden(tc.agent_hidden.begin(), tc.agent_hidden.end());
    hidden = kv.get_count_list("train.agent_hidden", hidden);
    tc.agent_hidden.assign(hidden.begin(), hidden.end());
  }
  tc.mixer_embed = kv.get_count("train.mixer_embed", tc.mixer_embed);
  tc.grad_clip = kv.get_double("train.grad_clip", tc.grad_clip);
  tc.per_alpha = kv.get_double("train.per_alpha", tc.per_alpha);
  tc.per_beta0 = kv.get_double("train.per_beta0", tc.per_beta0);
  tc.per_eps = kv.get_double("train.per_eps", tc.per_eps);
  tc.replay_capacity = kv.get_count("train.replay_capacity", tc.replay_capacity);

  cfg.total_steps = kv.get_count("run.total_steps", cfg.total_steps);
  cfg.eval_interval = kv.get_count("run.eval_interval", cfg.eval_interval);
  cfg.eval_episodes = kv.get_count("run.eval_episodes", cfg.eval_episodes);
  cfg.seeds = kv.get_count_list("run.seeds", cfg.seeds);
  cfg.out_dir = kv.get_string("run.out_dir", cfg.out_dir);
  cfg.log_intrinsic = kv.get_bool("log.intrinsic", cfg.log_intrinsic);
  if (cfg.eval_interval == 0) throw ConfigError("run.eval_interval must be positive");
  if (cfg.eval_episodes == 0) throw ConfigError("run.eval_episodes must be positive");
  {
    std::set<std::uint64_t> distinct(cfg.seeds.begin(), cfg.seeds.end());
    if (distinct.size() != cfg.seeds.size()) throw ConfigError("run.seeds must be distinct");
  }

  std::vector<std::string> unread = kv.unread_keys();
  if (!unread.empty()) {
    std::string msg = "unknown config keys:";
    for (const std::string& k : unread) msg += " " + k;
    throw ConfigError(msg);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_kv(KeyValueConfig::from_file(path));
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  return from_kv(KeyValueConfig::from_string(text));
}

std::unique_ptr<envs::Env> ExperimentConfig::make_env() const {
  if (env_id == "rel_overgen") return std::make_unique<envs::RelOvergenEnv>(rel_overgen);
  if (env_id == "box_push")
    return std::make_unique<envs::ParticleEnv>(envs::ParticleTask::box_push, particle);
  return std::make_unique<envs::ParticleEnv>(envs::ParticleTask::placement, particle);
}

std::vector<std::string> ExperimentConfig::env_meta_lines() const {
  std::vector<std::string> lines;
  auto add = [&lines](const std::string& k, const std::string& v) { lines.push_back(k + " = " + v); };
  add("env.id", env_id);
  if (env_id == "rel_overgen") {
    add("env.n_agents", std::to_string(rel_overgen.n_agents));
    add("env.d", std::to_string(rel_overgen.d));
    add("env.delta", std::to_string(rel_overgen.delta));
    add("env.r_plus", std::to_string(rel_overgen.r_plus));
    add("env.r_minus", std::to_string(rel_overgen.r_minus));
    std::string spike, plateau;
    for (std::size_t i = 0; i < rel_overgen.spike_pos.size(); ++i) {
      spike += (i ? "," : "") + std::to_string(rel_overgen.spike_pos[i]);
      plateau += (i ? "," : "") + std::to_string(rel_overgen.plateau_pos[i]);
    }
    add("env.spike_pos", spike);
    add("env.plateau_pos", plateau);
    add("env.episode_length", std::to_string(rel_overgen.episode_length));
    add("env.init", rel_overgen.init == envs::RelOvergenInit::uniform   ? "uniform"
                    : rel_overgen.init == envs::RelOvergenInit::half    ? "half"
                    : rel_overgen.init == envs::RelOvergenInit::plateau ? "plateau"
                                                                        : "center");
  } else {
    add("env.episode_length", std::to_string(particle.episode_length));
    add("env.obs_range", std::to_string(particle.obs_range));
    add("env.step_penalty", std::to_string(particle.step_penalty));
    add("env.collision_penalty", std::to_string(particle.collision_penalty));
    add("env.goal_reward", std::to_string(particle.goal_reward));
  }
  return lines;
}

std::unique_ptr<envs::Env> env_from_meta_lines(const std::vector<std::string>& lines) {
  std::string text;
  for (const std::string& l : lines) text += l + "\n";
  KeyValueConfig kv = KeyValueConfig::from_string(text);
  ExperimentConfig cfg;
  cfg.env_id = kv.get_string("env.id", "rel_overgen");
  auto& ro = cfg.rel_overgen;
  ro.n_agents = kv.get_count("env.n_agents", ro.n_agents);
  ro.d = kv.get_count("env.d", ro.d);
  ro.delta = kv.get_double("env.delta", ro.delta);
  ro.r_plus = kv.get_double("env.r_plus", ro.r_plus);
  ro.r_minus = kv.get_double("env.r_minus", ro.r_minus);
  ro.spike_pos = kv.get_int_list("env.spike_pos", ro.spike_pos);
  ro.plateau_pos = kv.get_int_list("env.plateau_pos", ro.plateau_pos);
  ro.episode_length = kv.get_count("env.episode_length", ro.episode_length);
  {
    std::string init = kv.get_string("env.init", "uniform");
    ro.init = init == "plateau"  ? envs::RelOvergenInit::plateau
              : init == "center"   ? envs::RelOvergenInit::center
              : init == "half"     ? envs::RelOvergenInit::half
                                   : envs::RelOvergenInit::uniform;
  }
  auto& pp = cfg.particle;
  pp.episode_length = ro.episode_length;
  pp.obs_range = kv.get_double("env.obs_range", pp.obs_range);
  pp.step_penalty = kv.get_double("env.step_penalty", pp.step_penalty);
  pp.collision_penalty = kv.get_double("env.collision_penalty", pp.collision_penalty);
  pp.goal_reward = kv.get_double("env.goal_reward", pp.goal_reward);
  return cfg.make_env();
}

}  // namespace marlx::harness
