#pragma once

#include <cstdint>
#include <random>

namespace cfqsim {

// Master seed for a Monte Carlo run. Every trial derives its own generator
// from (master_seed, trial_index), so results are independent of how trials
// are distributed over workers.
struct Seed {
    std::uint64_t master_seed = 0;
};

namespace detail {

// splitmix64 finalizer; decorrelates nearby (seed, index) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Deterministic uniform stream for one trial.
class TrialStream {
  public:
    TrialStream(Seed seed, std::uint64_t trial_index)
        : gen_(detail::splitmix64(detail::splitmix64(seed.master_seed) ^
                                  detail::splitmix64(trial_index + 1))) {}

    // Uniform double in [0, 1) with 53 random bits; bit-stable across
    // platforms, unlike std::uniform_real_distribution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 gen_;
};

}  // namespace cfqsim
