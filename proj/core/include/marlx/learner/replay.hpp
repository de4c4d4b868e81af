#pragma once

#include <cstddef>
#include <vector>

#include "marlx/numkit/rng.hpp"

namespace marlx::learner {

/// Binary sum tree over leaf masses, padded to a power of two so leaf order
/// matches index order; sampling walks the tree by prefix sum. Parents are
/// recomputed from both children on every set, so the stored total never
/// drifts from the leaf sum.
class SumTree {
public:
  explicit SumTree(std::size_t capacity);

  std::size_t capacity() const { return cap_; }
  double total() const { return cap_ ? tree_[1] : 0.0; }

  void set(std::size_t index, double mass);
  double get(std::size_t index) const;

  /// Index of the leaf whose cumulative interval contains `mass` in [0, total).
  std::size_t find(double mass) const;

private:
  std::size_t cap_;
  std::size_t leaves_;
  std::vector<double> tree_;
};

/// One stored trajectory. Observations and states have length() + 1 entries
/// so index t+1 is the successor of transition t; the final transition is
/// treated as terminal.
struct EpisodeBatch {
  std::vector<std::vector<std::vector<double>>> obs;  // per step, per agent
  std::vector<std::vector<double>> states;            // per step
  std::vector<std::vector<int>> actions;              // per transition
  std::vector<double> rewards;                        // per transition

  std::size_t length() const { return actions.size(); }
};

struct SampledBatch {
  std::vector<const EpisodeBatch*> episodes;
  std::vector<std::size_t> indices;
  std::vector<double> is_weights;  // (N * P(i))^-beta, normalized by the batch max
};

/// Proportional prioritized replay over whole episodes. Sampling probability
/// of item i is p_i^alpha / sum p^alpha; new episodes enter at the current
/// maximum priority.
class ReplayBuffer {
public:
  ReplayBuffer(std::size_t capacity, double per_alpha, double priority_floor);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  void add(EpisodeBatch episode);

  SampledBatch sample(std::size_t batch_size, double beta_is, numkit::SeededRng& rng) const;

  /// New raw priorities are |TD error| means plus the configured floor.
  void update_priorities(const std::vector<std::size_t>& indices,
                         const std::vector<double>& td_error_means);

  double priority(std::size_t index) const { return priorities_[index]; }
  double tree_total() const { return tree_.total(); }
  double sampling_probability(std::size_t index) const;
  const EpisodeBatch& episode(std::size_t index) const { return store_[index]; }

private:
  std::size_t capacity_;
  double alpha_;
  double floor_;
  std::vector<EpisodeBatch> store_;
  std::vector<double> priorities_;
  SumTree tree_;
  std::size_t write_ = 0;
  std::size_t size_ = 0;
  double max_priority_ = 1.0;
};

}  // namespace marlx::learner
