#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "marlx/envs/particle_world.hpp"
#include "marlx/envs/rel_overgen.hpp"
#include "marlx/intrinsic/jim.hpp"
#include "marlx/learner/qmix.hpp"

namespace marlx::harness {

/// Plain-text configuration: one `key = value` per line, `#` comments,
/// dotted keys for nesting. Reads are tracked so a typo in a key name is
/// reported instead of silently ignored.
class KeyValueConfig {
public:
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_count(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<std::uint64_t> get_count_list(const std::string& key,
                                            const std::vector<std::uint64_t>& fallback) const;

  /// Keys present in the file but never read by any getter.
  std::vector<std::string> unread_keys() const;

  const std::map<std::string, std::string>& values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> read_;
};

enum class AlgoMode { qmix, qmix_jim, qmix_lim, jim_llec, jim_eec };

AlgoMode algo_mode_from_string(const std::string& name);
std::string to_string(AlgoMode mode);
intrinsic::IntrinsicMode intrinsic_mode_for(AlgoMode mode);

/// Everything one training run needs: environment, algorithm, learner and
/// intrinsic hyperparameters, run budget and output locations.
struct ExperimentConfig {
  std::string env_id = "rel_overgen";
  envs::RelOvergenConfig rel_overgen;
  envs::ParticleParams particle;
  AlgoMode algo = AlgoMode::qmix;
  intrinsic::IntrinsicConfig intrinsic;
  learner::TrainConfig train;
  std::uint64_t total_steps = 2'000'000;
  std::uint64_t eval_interval = 10'000;
  std::size_t eval_episodes = 10;
  std::vector<std::uint64_t> seeds = {1};
  std::string out_dir;
  bool log_intrinsic = false;

  /// Throws ConfigError on unknown keys or invalid values.
  static ExperimentConfig from_kv(const KeyValueConfig& kv);
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  std::unique_ptr<envs::Env> make_env() const;
  /// `key = value` lines describing the environment, for checkpoint headers.
  std::vector<std::string> env_meta_lines() const;
};

/// Rebuilds an environment from checkpoint env_meta lines.
std::unique_ptr<envs::Env> env_from_meta_lines(const std::vector<std::string>& lines);

}  // namespace marlx::harness
