#pragma once

#include <array>
#include <cstdint>

namespace srw {

// splitmix64; used to expand seeds into engine state and to derive
// independent substream seeds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s) : state(s) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// Derives a fresh 64-bit seed from a master seed and up to two tags.
// Used to give every estimator and every path its own stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag_a,
                                 std::uint64_t tag_b = 0) {
    SplitMix64 sm(master);
    std::uint64_t h = sm.next();
    SplitMix64 sm2(h ^ (tag_a + 0x9E3779B97F4A7C15ull) * 0xBF58476D1CE4E5B9ull);
    std::uint64_t h2 = sm2.next();
    SplitMix64 sm3(h2 ^ (tag_b + 0x632BE59BD9B4E019ull) * 0x94D049BB133111EBull);
    return sm3.next();
}

// xoshiro256++ with splitmix64 seeding. Streams are identified by
// (master seed, stream index); two streams with different indices are
// statistically independent for simulation purposes. Construction is cheap,
// so each Monte Carlo path gets its own stream and results do not depend on
// how paths are distributed over worker threads.
class RngStream {
public:
    RngStream() { seed(0, 0); }
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
        seed(master_seed, stream_index);
    }

    static RngStream for_path(std::uint64_t master_seed, std::uint64_t path_index) {
        return RngStream(master_seed, path_index);
    }

    void seed(std::uint64_t master_seed, std::uint64_t stream_index) {
        SplitMix64 sm(master_seed);
        std::uint64_t base = sm.next();
        SplitMix64 expand(base + (stream_index + 1) * 0x9E3779B97F4A7C15ull);
        for (auto& word : s_) word = expand.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, k), k >= 1, via 128-bit multiply-shift.
    std::uint64_t bounded(std::uint64_t k) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * k) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace srw
