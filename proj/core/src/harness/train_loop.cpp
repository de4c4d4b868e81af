#include "marlx/harness/train_loop.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "marlx/errors.hpp"
#include "marlx/intrinsic/jim.hpp"
#include "marlx/learner/checkpoint.hpp"

namespace marlx::harness {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunLog::to_csv(std::ostream& out) const {
  out << "# marlx-runlog v1\n";
  out << "env_steps,eval_mean,eval_std,intrinsic_mean,wall_seconds\n";
  for (const RunRecord& r : records)
    out << r.env_steps << ',' << fmt17(r.eval_mean) << ',' << fmt17(r.eval_std) << ','
        << fmt17(r.intrinsic_mean) << ',' << fmt17(r.wall_seconds) << '\n';
}

void RunLog::write_curve_csv(std::ostream& out) const {
  out << "# marlx-curve v1\n";
  out << "env_steps,eval_mean,eval_std\n";
  for (const RunRecord& r : records)
    out << r.env_steps << ',' << fmt17(r.eval_mean) << ',' << fmt17(r.eval_std) << '\n';
}

RunLog RunLog::from_csv(std::istream& in) {
  RunLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find("env_steps") == 0) continue;  // header
    RunRecord r;
    char* p = nullptr;
    r.env_steps = std::strtoull(line.c_str(), &p, 10);
    double* fields[4] = {&r.eval_mean, &r.eval_std, &r.intrinsic_mean, &r.wall_seconds};
    for (int k = 0; k < 4 && *p == ','; ++k) *fields[k] = std::strtod(p + 1, &p);
    log.records.push_back(r);
  }
  return log;
}

RunLog RunLog::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run log: " + path);
  return from_csv(in);
}

EvalResult evaluate(envs::Env& env, const learner::QmixLearner& learner, std::size_t episodes,
                    numkit::SeededRng& rng) {
  if (episodes == 0) throw ConfigError("evaluate: episodes must be >= 1");
  std::vector<double> returns;
  returns.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) {
    envs::DecPomdpStep cur = env.reset(rng);
    std::vector<int> last_actions(env.n_agents(), -1);
    double ret = 0.0;
    while (!cur.done) {
      std::vector<int> actions = learner.select_actions(cur.joint_observation, last_actions, 0.0, rng);
      cur = env.step(actions);
      ret += cur.reward;
      last_actions = actions;
    }
    returns.push_back(ret);
  }
  EvalResult out;
  for (double r : returns) out.mean += r;
  out.mean /= static_cast<double>(returns.size());
  if (returns.size() > 1) {
    double ss = 0.0;
    for (double r : returns) ss += (r - out.mean) * (r - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(returns.size()));
  }
  return out;
}

RunLog run_training(const ExperimentConfig& config, std::uint64_t seed,
                    const std::function<void(const RunRecord&)>& on_eval) {
  numkit::SeededRng root(seed);
  numkit::SeededRng rng_env = root.split("env");
  numkit::SeededRng rng_eps = root.split("eps");
  numkit::SeededRng rng_replay = root.split("replay");

  std::unique_ptr<envs::Env> env = config.make_env();
  std::unique_ptr<envs::Env> eval_env = config.make_env();

  learner::QmixLearner learner(env->n_agents(), env->obs_dim(), env->n_actions(), env->state_dim(),
                               config.train, root.split("learner"));
  intrinsic::IntrinsicStack intrinsic(config.intrinsic, env->n_agents(), env->obs_dim(),
                                      env->n_actions(), root.split("intrinsic"));
  learner::ReplayBuffer replay(config.train.replay_capacity, config.train.per_alpha,
                               config.train.per_eps);

  std::size_t train_start = config.train.train_start_episodes
                                ? config.train.train_start_episodes
                                : config.train.batch_episodes;

  std::uint64_t episode_length_hint =
      config.env_id == "rel_overgen" ? config.rel_overgen.episode_length : config.particle.episode_length;
  if (episode_length_hint == 0) episode_length_hint = 1;
  double expected_train_steps =
      std::max(1.0, static_cast<double>(config.total_steps) / static_cast<double>(episode_length_hint)) *
      static_cast<double>(std::max<std::size_t>(1, config.train.updates_per_episode));

  std::ofstream runlog_file, curve_file, intr_file;
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    std::string tag = "_seed" + std::to_string(seed) + ".csv";
    runlog_file.open(config.out_dir + "/runlog" + tag);
    curve_file.open(config.out_dir + "/curve" + tag);
    runlog_file << "# marlx-runlog v1\nenv_steps,eval_mean,eval_std,intrinsic_mean,wall_seconds\n";
    curve_file << "# marlx-curve v1\nenv_steps,eval_mean,eval_std\n";
    if (config.log_intrinsic) {
      intr_file.open(config.out_dir + "/intrinsic_seed" + std::to_string(seed) + ".csv");
      intr_file << "# marlx-intrinsic v1\nstep,rnd,llec,b,eec,r_int,r_ext,r_total\n";
    }
  }

  RunLog log;
  auto clock_start = std::chrono::steady_clock::now();
  double last_wall = 0.0;
  double intr_sum = 0.0;
  std::uint64_t intr_count = 0;
  std::uint64_t t = 0;
  std::size_t eval_index = 0;

  auto record_eval = [&] {
    numkit::SeededRng eval_rng = root.split("eval", eval_index++);
    EvalResult eval = evaluate(*eval_env, learner, config.eval_episodes, eval_rng);
    RunRecord rec;
    rec.env_steps = t;
    rec.eval_mean = eval.mean;
    rec.eval_std = eval.stddev;
    rec.intrinsic_mean = intr_count ? intr_sum / static_cast<double>(intr_count) : 0.0;
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    rec.wall_seconds = wall > last_wall ? wall : last_wall + 1e-9;
    last_wall = rec.wall_seconds;
    intr_sum = 0.0;
    intr_count = 0;
    log.records.push_back(rec);
    if (runlog_file.is_open()) {
      runlog_file << rec.env_steps << ',' << fmt17(rec.eval_mean) << ',' << fmt17(rec.eval_std) << ','
                  << fmt17(rec.intrinsic_mean) << ',' << fmt17(rec.wall_seconds) << '\n';
      runlog_file.flush();
      curve_file << rec.env_steps << ',' << fmt17(rec.eval_mean) << ',' << fmt17(rec.eval_std) << '\n';
      curve_file.flush();
    }
    if (on_eval) on_eval(rec);
  };

  record_eval();

  while (t < config.total_steps) {
    envs::DecPomdpStep cur = env->reset(rng_env);
    intrinsic.episode_reset();
    learner::EpisodeBatch episode;
    episode.obs.push_back(cur.joint_observation);
    episode.states.push_back(cur.global_state);
    std::vector<int> last_actions(env->n_agents(), -1);

    while (!cur.done) {
      double eps = learner.epsilon_at(t);
      std::vector<int> actions = learner.select_actions(cur.joint_observation, last_actions, eps, rng_eps);
      envs::DecPomdpStep next = env->step(actions);
      double r_int = intrinsic.step_reward(cur.joint_observation, actions, next.joint_observation);
      double r_total = intrinsic::combine_reward(next.reward, r_int, config.intrinsic.beta);

      episode.actions.push_back(actions);
      episode.rewards.push_back(r_total);
      episode.obs.push_back(next.joint_observation);
      episode.states.push_back(next.global_state);

      intr_sum += r_int;
      ++intr_count;
      ++t;
      if (intr_file.is_open()) {
        const intrinsic::IntrinsicSignals& s = intrinsic.last();
        intr_file << t << ',' << fmt17(s.rnd_next) << ',' << fmt17(s.llec) << ',' << fmt17(s.bonus)
                  << ',' << fmt17(s.eec) << ',' << fmt17(s.r_int) << ',' << fmt17(next.reward) << ','
                  << fmt17(r_total) << '\n';
      }
      if (t % config.eval_interval == 0) record_eval();

      last_actions = actions;
      cur = std::move(next);
    }

    replay.add(std::move(episode));
    if (replay.size() >= train_start && replay.size() >= config.train.batch_episodes) {
      for (std::size_t u = 0; u < std::max<std::size_t>(1, config.train.updates_per_episode); ++u) {
        double frac = static_cast<double>(learner.train_steps()) / expected_train_steps;
        if (frac > 1.0) frac = 1.0;
        double beta_is = config.train.per_beta0 + (1.0 - config.train.per_beta0) * frac;
        learner::SampledBatch batch = replay.sample(config.train.batch_episodes, beta_is, rng_replay);
        learner::QmixLearner::TrainResult res = learner.train_step(batch);
        replay.update_priorities(batch.indices, res.episode_td_means);
        if (config.train.target_sync_every > 0 &&
            learner.train_steps() % config.train.target_sync_every == 0)
          learner.sync_targets();
      }
    }
  }

  if (!config.out_dir.empty()) {
    std::ofstream ck(config.out_dir + "/checkpoint_seed" + std::to_string(seed) + ".txt");
    learner::write_checkpoint(ck, learner, config.env_meta_lines());
  }
  return log;
}

void dump_trajectory_csv(std::ostream& out, envs::Env& env, const learner::QmixLearner& learner,
                         numkit::SeededRng& rng) {
  out << "# marlx-trajectory v1\nstep,state,actions,reward,done\n";
  envs::DecPomdpStep cur = env.reset(rng);
  std::vector<int> last_actions(env.n_agents(), -1);
  auto write_row = [&out](const envs::DecPomdpStep& s, const std::vector<int>* actions) {
    out << s.step_index << ',';
    for (std::size_t i = 0; i < s.global_state.size(); ++i)
      out << (i ? " " : "") << fmt17(s.global_state[i]);
    out << ',';
    if (actions)
      for (std::size_t i = 0; i < actions->size(); ++i) out << (i ? " " : "") << (*actions)[i];
    out << ',' << fmt17(s.reward) << ',' << (s.done ? 1 : 0) << '\n';
  };
  write_row(cur, nullptr);
  while (!cur.done) {
    std::vector<int> actions = learner.select_actions(cur.joint_observation, last_actions, 0.0, rng);
    cur = env.step(actions);
    write_row(cur, &actions);
    last_actions = actions;
  }
}

}  // namespace marlx::harness
