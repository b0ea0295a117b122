#include "bb84/rng.hpp"

#include <stdexcept>

namespace bb84 {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b,
                    std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

PhiloxRng::PhiloxRng(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

void PhiloxRng::refill() {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_index_),
        static_cast<std::uint32_t>(block_index_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32)};
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    block_ = ctr;
    ++block_index_;
    avail_ = 4;
}

std::uint32_t PhiloxRng::next_u32() {
    if (avail_ == 0) refill();
    return block_[--avail_];
}

std::uint64_t PhiloxRng::next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
}

double PhiloxRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t PhiloxRng::uniform_int(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_int: bound must be > 0");
    // rejection sampling to stay exactly uniform
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % bound;
}

bool PhiloxRng::bernoulli(double p) {
    return uniform() < p;
}

int PhiloxRng::random_bit() {
    return static_cast<int>(next_u32() & 1u);
}

} // namespace bb84
