#include "qvae/rng.hpp"

namespace qvae::rng {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<uint32_t, 4>& c, const std::array<uint32_t, 2>& k) {
    const uint64_t p0 = uint64_t(kMul0) * c[0];
    const uint64_t p1 = uint64_t(kMul1) * c[2];
    c = {uint32_t(p1 >> 32) ^ c[1] ^ k[0], uint32_t(p1), uint32_t(p0 >> 32) ^ c[3] ^ k[1],
         uint32_t(p0)};
}

}  // namespace

Block philox4x32(const std::array<uint32_t, 4>& counter, const std::array<uint32_t, 2>& key) {
    std::array<uint32_t, 4> c = counter;
    std::array<uint32_t, 2> k = key;
    round_once(c, k);
    for (int r = 1; r < 10; ++r) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
        round_once(c, k);
    }
    return Block{c};
}

Block Stream::block_at(uint64_t index) const {
    const std::array<uint32_t, 4> counter = {uint32_t(index), uint32_t(index >> 32),
                                             uint32_t(stream_), uint32_t(stream_ >> 32)};
    const std::array<uint32_t, 2> key = {uint32_t(seed_), uint32_t(seed_ >> 32)};
    return philox4x32(counter, key);
}

uint64_t Stream::next_u64() {
    if (buffered_u64_ == 0) {
        buffer_ = block_at(counter_++);
        buffered_u64_ = 2;
    }
    return (buffered_u64_-- == 2) ? buffer_.lo64() : buffer_.hi64();
}

double Stream::gaussian() {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_gaussian_ = radius * std::sin(angle);
    has_cached_gaussian_ = true;
    return radius * std::cos(angle);
}

}  // namespace qvae::rng
