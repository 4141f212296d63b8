// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "jutap/environment.hpp"
#include "jutap/rng.hpp"

namespace jutap {

struct Transition {
  MdpState state;
  int action = 0;
  double reward = 0.0;
  MdpState next_state;
  ActionMask next_mask = 0;
  bool terminal = false;
};

/// Fixed-capacity ring; the oldest transition is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    data_.reserve(std::min<std::size_t>(capacity, 1 << 16));
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return data_.empty(); }

  void push(const Transition& t) {
    if (data_.size() < capacity_) {
      data_.push_back(t);
    } else {
      data_[head_] = t;
    }
    head_ = (head_ + 1) % capacity_;
  }

  /// Contents from oldest to newest.
  std::vector<Transition> ordered() const {
    std::vector<Transition> out;
    out.reserve(data_.size());
    const std::size_t first = data_.size() < capacity_ ? 0 : head_;
    for (std::size_t k = 0; k < data_.size(); ++k) out.push_back(data_[(first + k) % data_.size()]);
    return out;
  }

  /// Uniform sample of min(count, size) distinct entries (Floyd's algorithm).
  std::vector<Transition> sample(std::size_t count, Rng& rng) const {
    const std::size_t n = data_.size();
    count = std::min(count, n);
    std::vector<std::size_t> picked;
    picked.reserve(count);
    for (std::size_t j = n - count; j < n; ++j) {
      const std::size_t t = rng.below(j + 1);
      const bool seen = std::find(picked.begin(), picked.end(), t) != picked.end();
      picked.push_back(seen ? j : t);
    }
    std::vector<Transition> out;
    out.reserve(count);
    for (std::size_t k : picked) out.push_back(data_[k]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> data_;
};

}  // namespace jutap
