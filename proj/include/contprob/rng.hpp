#pragma once

#include <cstdint>

namespace contprob {

// Identifies one reproducible random stream. Distinct (master_seed, stream_id)
// pairs yield statistically independent streams.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

namespace detail {

// splitmix64 finalizer (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based random stream: the i-th output is a pure function of
// (master_seed, stream_id, i). No global state; streams can be recreated
// and skipped at will.
class CounterStream {
  public:
    explicit CounterStream(SeedSpec seed)
        : key_(detail::mix64(seed.master_seed ^
                             detail::mix64(seed.stream_id + 0x5851f42d4c957f2dULL))) {}

    std::uint64_t next_u64() { return detail::mix64(key_ + counter_++ * 0x9e3779b97f4a7c15ULL); }

    // Uniform draw in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    // 0 with probability p_first, else 1.
    std::uint8_t draw_code(double p_first) { return bernoulli(p_first) ? 0 : 1; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace contprob
