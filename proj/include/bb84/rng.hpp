#pragma once

#include <array>
#include <cstdint>

namespace bb84 {

// Counter-based PRNG: Philox4x32-10 (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3").  The 64-bit key is the master seed; the
// stream index occupies the upper half of the 128-bit counter, so streams
// derived from the same seed never overlap.  Every trial of an experiment
// gets its own stream (master_seed, trial_index), which makes runs
// replayable and trivially parallel.
class PhiloxRng {
public:
    PhiloxRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform in [0,1) with 53 random bits.
    double uniform();
    // Uniform integer in [0, bound); bound must be > 0.
    std::uint64_t uniform_int(std::uint64_t bound);
    bool bernoulli(double p);
    int random_bit();

    static constexpr const char* kAlgorithmName = "Philox4x32-10";

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int avail_ = 0;

    void refill();
};

} // namespace bb84
