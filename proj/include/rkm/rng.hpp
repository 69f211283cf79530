#pragma once

#include <cstdint>
#include <span>

namespace rkm {

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Hashes (master, a, b) into one 64-bit stream seed. Used to hand every
/// (batch, restart) pair its own independent stream so results do not depend
/// on which worker thread executes the restart.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ (a + 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (b + 0x9e3779b97f4a7c15ULL));
    return h;
}

/// xoshiro256++ stream. Self-contained so draws are bit-stable across
/// platforms and standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        // splitmix64 state expansion, as recommended by the xoshiro authors.
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            word = mix64(s - 0x9e3779b97f4a7c15ULL);
        }
    }

    static RngStream derived(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
        return RngStream(derive_seed(master, a, b));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

/// Inverse-CDF draw from a nondecreasing cumulative mass array: returns the
/// first index whose cumulative mass exceeds u * total. Entries with zero
/// mass are never selected. The caller guarantees total mass > 0.
std::size_t sample_from_cumulative(std::span<const double> cumulative, RngStream& rng);

}  // namespace rkm
