#include "marlx/learner/replay.hpp"

#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::learner {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

SumTree::SumTree(std::size_t capacity)
    : cap_(capacity), leaves_(capacity ? next_pow2(capacity) : 0), tree_(2 * leaves_, 0.0) {}

void SumTree::set(std::size_t index, double mass) {
  if (index >= cap_) throw ShapeError("SumTree::set: index out of range");
  std::size_t node = index + leaves_;
  tree_[node] = mass;
  while (node > 1) {
    node >>= 1;
    tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
  }
}

double SumTree::get(std::size_t index) const {
  if (index >= cap_) throw ShapeError("SumTree::get: index out of range");
  return tree_[index + leaves_];
}

std::size_t SumTree::find(double mass) const {
  std::size_t node = 1;
  while (node < leaves_) {
    std::size_t left = 2 * node;
    if (mass < tree_[left] || tree_[left + 1] == 0.0) {
      node = left;
    } else {
      mass -= tree_[left];
      node = left + 1;
    }
  }
  std::size_t index = node - leaves_;
  return index < cap_ ? index : cap_ - 1;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, double per_alpha, double priority_floor)
    : capacity_(capacity), alpha_(per_alpha), floor_(priority_floor), tree_(capacity) {
  if (capacity == 0) throw ConfigError("ReplayBuffer: zero capacity");
  store_.resize(capacity);
  priorities_.assign(capacity, 0.0);
}

void ReplayBuffer::add(EpisodeBatch episode) {
  if (episode.length() == 0) throw ShapeError("ReplayBuffer::add: empty episode");
  if (episode.obs.size() != episode.length() + 1 || episode.states.size() != episode.length() + 1 ||
      episode.rewards.size() != episode.length())
    throw ShapeError("ReplayBuffer::add: inconsistent episode arrays");
  store_[write_] = std::move(episode);
  priorities_[write_] = max_priority_;
  tree_.set(write_, std::pow(max_priority_, alpha_));
  write_ = (write_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

SampledBatch ReplayBuffer::sample(std::size_t batch_size, double beta_is,
                                  numkit::SeededRng& rng) const {
  if (size_ == 0) throw DomainError("ReplayBuffer::sample: buffer empty");
  if (size_ < batch_size) throw DomainError("ReplayBuffer::sample: fewer episodes than batch size");
  double total = tree_.total();
  if (total <= 0.0) throw NumericError("ReplayBuffer::sample: empty priority mass");

  SampledBatch out;
  out.episodes.reserve(batch_size);
  out.indices.reserve(batch_size);
  out.is_weights.reserve(batch_size);
  double max_w = 0.0;
  for (std::size_t k = 0; k < batch_size; ++k) {
    std::size_t idx = tree_.find(rng.uniform01() * total);
    if (idx >= size_) idx = size_ - 1;  // guard the rounding edge at mass == total
    double prob = tree_.get(idx) / total;
    double w = std::pow(static_cast<double>(size_) * prob, -beta_is);
    out.episodes.push_back(&store_[idx]);
    out.indices.push_back(idx);
    out.is_weights.push_back(w);
    if (w > max_w) max_w = w;
  }
  if (max_w > 0.0)
    for (double& w : out.is_weights) w /= max_w;
  return out;
}

void ReplayBuffer::update_priorities(const std::vector<std::size_t>& indices,
                                     const std::vector<double>& td_error_means) {
  if (indices.size() != td_error_means.size())
    throw ShapeError("ReplayBuffer::update_priorities: index/value arity mismatch");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    std::size_t idx = indices[k];
    if (idx >= size_) throw ShapeError("ReplayBuffer::update_priorities: index out of range");
    double p = std::fabs(td_error_means[k]) + floor_;
    priorities_[idx] = p;
    tree_.set(idx, std::pow(p, alpha_));
    if (p > max_priority_) max_priority_ = p;
  }
}

double ReplayBuffer::sampling_probability(std::size_t index) const {
  double total = tree_.total();
  return total > 0.0 ? tree_.get(index) / total : 0.0;
}

}  // namespace marlx::learner
