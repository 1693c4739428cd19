#include "netaudit/replay.hpp"

#include "netaudit/errors.hpp"

namespace netaudit {

ReplayMemory::ReplayMemory(int capacity, int obs_dim) : capacity_(capacity), obs_dim_(obs_dim) {
    if (capacity_ < 1) throw DomainError("replay capacity must be positive");
    if (obs_dim_ < 1) throw DomainError("obs_dim must be positive");
    storage_.reserve(static_cast<std::size_t>(capacity_));
}

void ReplayMemory::push(Transition t) {
    if (static_cast<int>(t.observation.size()) != obs_dim_ ||
        static_cast<int>(t.next_observation.size()) != obs_dim_) {
        throw ShapeMismatch("transition observation shape does not match memory config");
    }
    if (storage_.size() < static_cast<std::size_t>(capacity_)) {
        storage_.push_back(std::move(t));
    } else {
        storage_[cursor_] = std::move(t);
    }
    cursor_ = (cursor_ + 1) % static_cast<std::size_t>(capacity_);
}

std::vector<Transition> ReplayMemory::sample(int batch_size, Rng& rng) const {
    if (storage_.empty()) throw InsufficientMemory("replay memory is empty");
    if (batch_size < 1) throw DomainError("batch_size must be positive");
    std::uniform_int_distribution<std::size_t> pick(0, storage_.size() - 1);
    std::vector<Transition> batch;
    batch.reserve(static_cast<std::size_t>(batch_size));
    for (int i = 0; i < batch_size; ++i) batch.push_back(storage_[pick(rng)]);
    return batch;
}

}  // namespace netaudit
