#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "marlx/errors.hpp"
#include "marlx/harness/config.hpp"
#include "marlx/harness/plot.hpp"
#include "marlx/harness/train_loop.hpp"
#include "marlx/learner/checkpoint.hpp"
#include "selftest.hpp"

namespace fs = std::filesystem;
using namespace marlx;

namespace {

std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
  if (const char* env = std::getenv("MARLX_OUT"); env && *env) return env;
  if (!flag_value.empty()) return flag_value;
  return config_value;
}

int cmd_train(const std::string& config_path, std::uint64_t seed, const std::string& out_flag) {
  harness::ExperimentConfig cfg = harness::ExperimentConfig::from_file(config_path);
  cfg.out_dir = resolve_out_dir(out_flag, cfg.out_dir);
  std::cout << "training " << harness::to_string(cfg.algo) << " on " << cfg.env_id << ", seed "
            << seed << ", " << cfg.total_steps << " steps\n";
  harness::RunLog log = harness::run_training(cfg, seed, [](const harness::RunRecord& r) {
    std::cout << "  step " << r.env_steps << "  eval " << r.eval_mean << " +- " << r.eval_std
              << "  r_int " << r.intrinsic_mean << "\n";
  });
  if (!cfg.out_dir.empty())
    std::cout << "wrote " << cfg.out_dir << "/runlog_seed" << seed << ".csv\n";
  if (!log.records.empty())
    std::cout << "final eval return " << log.records.back().eval_mean << "\n";
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, std::size_t episodes, std::uint64_t seed,
             const std::string& traj_out) {
  std::ifstream in(checkpoint_path);
  if (!in) throw ConfigError("cannot open checkpoint: " + checkpoint_path);
  learner::CheckpointData data = learner::read_checkpoint(in);
  learner::TrainConfig base;
  learner::QmixLearner learner = learner::learner_from_checkpoint(data, base);
  std::unique_ptr<envs::Env> env = harness::env_from_meta_lines(data.env_meta);

  numkit::SeededRng rng(seed);
  auto eval_rng = rng.split("eval");
  harness::EvalResult res = harness::evaluate(*env, learner, episodes, eval_rng);
  std::cout << "eval over " << episodes << " episodes: mean " << res.mean << "  std " << res.stddev
            << "\n";

  if (!traj_out.empty()) {
    std::ofstream tf(traj_out);
    if (!tf) throw ConfigError("cannot open trajectory output: " + traj_out);
    auto traj_rng = rng.split("trajectory");
    harness::dump_trajectory_csv(tf, *env, learner, traj_rng);
    std::cout << "wrote trajectory to " << traj_out << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, std::vector<std::uint64_t> seeds,
              std::size_t parallel, const std::string& out_flag) {
  harness::ExperimentConfig cfg = harness::ExperimentConfig::from_file(config_path);
  cfg.out_dir = resolve_out_dir(out_flag, cfg.out_dir);
  if (seeds.empty()) seeds = cfg.seeds;
  if (cfg.out_dir.empty()) throw ConfigError("sweep needs an output directory (--out or run.out_dir)");
  if (parallel == 0) parallel = 1;

  std::mutex io;
  std::size_t next = 0;
  std::mutex queue;
  auto worker = [&] {
    for (;;) {
      std::size_t idx;
      {
        std::lock_guard<std::mutex> lk(queue);
        if (next >= seeds.size()) return;
        idx = next++;
      }
      harness::RunLog log = harness::run_training(cfg, seeds[idx]);
      std::lock_guard<std::mutex> lk(io);
      std::cout << "seed " << seeds[idx] << " done, final eval "
                << (log.records.empty() ? 0.0 : log.records.back().eval_mean) << "\n";
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < std::min(parallel, seeds.size()); ++k) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  std::cout << seeds.size() << " runs written to " << cfg.out_dir << "\n";
  return 0;
}

harness::AggregateCurve load_run_dir(const fs::path& dir) {
  std::vector<harness::RunLog> runs;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("runlog_seed", 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) runs.push_back(harness::RunLog::from_csv_file(f.string()));
  if (runs.empty()) throw ConfigError("no runlog_seed*.csv files in " + dir.string());
  return harness::aggregate_runs(runs, dir.filename().string());
}

int cmd_plot(const std::vector<std::string>& run_dirs, const std::string& out_file,
             const std::string& title, bool placement_refs, std::size_t ref_episode_len) {
  std::vector<harness::AggregateCurve> curves;
  for (const std::string& dir : run_dirs) {
    harness::AggregateCurve curve = load_run_dir(dir);
    fs::path agg = fs::path(dir) / "aggregate.csv";
    std::ofstream agg_out(agg);
    harness::write_aggregate_csv(agg_out, curve);
    curves.push_back(std::move(curve));
  }
  harness::PlotOptions opt;
  opt.title = title;
  if (placement_refs) {
    double len = static_cast<double>(ref_episode_len);
    opt.reference_lines.push_back({10.0 * len, "both on red", "#d62728"});
    opt.reference_lines.push_back({2.0 * len, "both on blue", "#1f77b4"});
    opt.reference_lines.push_back({1.0 * len, "both on yellow", "#bcbd22"});
    opt.reference_lines.push_back({0.5 * len, "one on blue/yellow", "#7f7f7f"});
  }
  std::ofstream out(out_file);
  if (!out) throw ConfigError("cannot open plot output: " + out_file);
  harness::write_svg_chart(out, curves, opt);
  std::cout << "wrote " << out_file << " (" << curves.size() << " curves)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marlx: multi-agent exploration lab"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "train one run from a config file");
  std::string train_config, train_out;
  std::uint64_t train_seed = 1;
  train->add_option("--config", train_config, "experiment config file")->required();
  train->add_option("--seed", train_seed, "run seed");
  train->add_option("--out", train_out, "output directory (overrides run.out_dir)");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint greedily");
  std::string eval_checkpoint, eval_traj;
  std::size_t eval_episodes = 10;
  std::uint64_t eval_seed = 1;
  eval->add_option("--checkpoint", eval_checkpoint, "checkpoint file")->required();
  eval->add_option("--episodes", eval_episodes, "number of greedy episodes");
  eval->add_option("--seed", eval_seed, "evaluation seed");
  eval->add_option("--traj-out", eval_traj, "write one greedy episode as CSV");

  auto* sweep = app.add_subcommand("sweep", "run several seeds of one config");
  std::string sweep_config, sweep_out;
  std::vector<std::uint64_t> sweep_seeds;
  std::size_t sweep_parallel = 1;
  sweep->add_option("--config", sweep_config, "experiment config file")->required();
  sweep->add_option("--seeds", sweep_seeds, "comma-separated seeds")->delimiter(',');
  sweep->add_option("--parallel", sweep_parallel, "worker count");
  sweep->add_option("--out", sweep_out, "output directory (overrides run.out_dir)");

  auto* plot = app.add_subcommand("plot", "aggregate run directories into CSV + SVG");
  std::vector<std::string> plot_dirs;
  std::string plot_out = "chart.svg", plot_title = "training curves";
  bool plot_placement_refs = false;
  std::size_t plot_ref_len = 100;
  plot->add_option("--runs", plot_dirs, "run directories (one curve each)")->required();
  plot->add_option("--out", plot_out, "output SVG file");
  plot->add_option("--title", plot_title, "chart title");
  plot->add_flag("--placement-refs", plot_placement_refs,
                 "dashed strategy-ceiling reference lines for the placement task");
  plot->add_option("--ref-episode-len", plot_ref_len, "episode length behind the reference lines");

  auto* selftest = app.add_subcommand("selftest", "run the built-in oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 2;
  }

  try {
    if (train->parsed()) return cmd_train(train_config, train_seed, train_out);
    if (eval->parsed()) return cmd_eval(eval_checkpoint, eval_episodes, eval_seed, eval_traj);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_seeds, sweep_parallel, sweep_out);
    if (plot->parsed())
      return cmd_plot(plot_dirs, plot_out, plot_title, plot_placement_refs, plot_ref_len);
    if (selftest->parsed()) return marlx::tools::run_selftest(std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
