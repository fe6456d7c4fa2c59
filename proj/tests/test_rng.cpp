#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qvae/rng.hpp"

using namespace qvae::rng;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution's
// kat_vectors file.
TEST_CASE("philox known answers") {
    Block zero = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(zero.w[0] == 0x6627e8d5u);
    CHECK(zero.w[1] == 0xe169c58du);
    CHECK(zero.w[2] == 0xbc57ac4cu);
    CHECK(zero.w[3] == 0x9b00dbd8u);

    Block ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu});
    CHECK(ones.w[0] == 0x408f276du);
    CHECK(ones.w[1] == 0x41c83b0eu);
    CHECK(ones.w[2] == 0xa20bc7c6u);
    CHECK(ones.w[3] == 0x6d5451fdu);

    Block pi = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
    CHECK(pi.w[0] == 0xd16cfe09u);
    CHECK(pi.w[1] == 0x94fdccebu);
    CHECK(pi.w[2] == 0x5001e420u);
    CHECK(pi.w[3] == 0x24126ea1u);
}

TEST_CASE("blocks are random access and match sequential reads") {
    Stream a(42, stream_id(Purpose::generic, 7));
    std::vector<uint64_t> first;
    for (int i = 0; i < 8; ++i) first.push_back(a.next_u64());

    // Two u64 halves per block, in lo/hi order.
    Stream b(42, stream_id(Purpose::generic, 7));
    for (int i = 0; i < 4; ++i) {
        Block block = b.block_at(uint64_t(i));
        CHECK(first[std::size_t(2 * i)] == block.lo64());
        CHECK(first[std::size_t(2 * i + 1)] == block.hi64());
    }
}

TEST_CASE("distinct purposes and seeds give distinct output") {
    Stream a(1, stream_id(Purpose::weight_init));
    Stream b(1, stream_id(Purpose::latent_noise));
    Stream c(2, stream_id(Purpose::weight_init));
    bool differ_ab = false, differ_ac = false;
    for (int i = 0; i < 4; ++i) {
        const uint64_t va = a.next_u64();
        differ_ab |= va != b.next_u64();
        differ_ac |= va != c.next_u64();
    }
    CHECK(differ_ab);
    CHECK(differ_ac);
}

TEST_CASE("uniform01 stays in [0,1) and uniform01_open in (0,1]") {
    Stream s(3, stream_id(Purpose::generic));
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = s.uniform01_open();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("below covers its range without excursions") {
    Stream s(4, stream_id(Purpose::generic));
    std::set<uint64_t> seen;
    for (int i = 0; i < 20000; ++i) {
        const uint64_t v = s.below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(s.below(1) == 0);
}

TEST_CASE("gaussian moments") {
    Stream s(5, stream_id(Purpose::generic));
    const int count = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < count; ++i) {
        const double g = s.gaussian();
        sum += g;
        sum_sq += g * g;
    }
    const double mean = sum / count;
    const double var = sum_sq / count - mean * mean;
    // 5 sigma of the estimator's own noise
    CHECK(std::abs(mean) < 5.0 / std::sqrt(double(count)));
    CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / double(count)));
}

TEST_CASE("streams replay identically") {
    Stream a(99, stream_id(Purpose::batch_draw, 12));
    Stream b(99, stream_id(Purpose::batch_draw, 12));
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}
