#pragma once

#include <cstdint>
#include <random>

namespace netaudit {

// splitmix64: used to derive independent sub-stream seeds from one master
// seed so that e.g. training and evaluation episodes never share a stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Named sub-streams of a master seed.
enum class SeedStream : std::uint64_t {
    TrainEnv = 1,
    Agent = 2,
    EvalEnv = 3,
    BaselineEnv = 4,
    Fuzz = 5,
};

inline std::uint64_t derive_seed(std::uint64_t master, SeedStream stream) {
    return splitmix64(master ^ (0x51ed2701a3c5e91bULL * static_cast<std::uint64_t>(stream)));
}

using Rng = std::mt19937_64;

}  // namespace netaudit
