#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qvae::rng {

/// One 128-bit Philox output block.
struct Block {
    std::array<uint32_t, 4> w;
    uint64_t lo64() const { return (uint64_t(w[1]) << 32) | w[0]; }
    uint64_t hi64() const { return (uint64_t(w[3]) << 32) | w[2]; }
};

/// Philox4x32-10 keyed bijection (Salmon et al., SC'11).
Block philox4x32(const std::array<uint32_t, 4>& counter, const std::array<uint32_t, 2>& key);

/// Well-separated sub-stream identifiers. Every consumer of randomness in the
/// library owns a purpose tag, so no two call sites can collide on a stream.
enum class Purpose : uint64_t {
    product_state = 1,
    haar_state = 2,
    weight_init = 3,
    batch_draw = 4,
    latent_noise = 5,
    reconstruction = 6,
    noise_floor = 7,
    sample_dump = 8,
    generic = 15,
};

constexpr uint64_t stream_id(Purpose purpose, uint64_t sub = 0) {
    return (static_cast<uint64_t>(purpose) << 56) | (sub & 0x00FF'FFFF'FFFF'FFFFull);
}

/// Counter-based random stream: the pair (seed, stream) names the stream and the
/// block counter indexes into it, so any block can be regenerated out of order.
/// Sequential helpers (u64/uniform/gaussian) advance an internal cursor.
class Stream {
  public:
    Stream(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

    /// Random access: 128-bit block at a given counter index.
    Block block_at(uint64_t index) const;

    uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform01_open() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform integer in [0, n), n >= 1. Multiply-shift map; bias is O(2^-64).
    uint64_t below(uint64_t n) {
        return uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double gaussian();

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

  private:
    uint64_t seed_;
    uint64_t stream_;
    uint64_t counter_ = 0;
    Block buffer_{};
    int buffered_u64_ = 0;  // unread u64 halves left in buffer_
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

}  // namespace qvae::rng
