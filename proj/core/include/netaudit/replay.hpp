#pragma once

#include <vector>

#include "netaudit/env.hpp"
#include "netaudit/rng.hpp"

namespace netaudit {

// Ring buffer of transitions; overwrites the oldest entry once full.
class ReplayMemory {
public:
    ReplayMemory(int capacity, int obs_dim);

    void push(Transition t);

    std::size_t size() const { return storage_.size(); }
    int capacity() const { return capacity_; }
    int obs_dim() const { return obs_dim_; }
    const Transition& at(std::size_t i) const { return storage_[i]; }

    // Uniform draws (with replacement) over the filled region.
    std::vector<Transition> sample(int batch_size, Rng& rng) const;

private:
    int capacity_ = 0;
    int obs_dim_ = 0;
    std::size_t cursor_ = 0;
    std::vector<Transition> storage_;
};

}  // namespace netaudit
