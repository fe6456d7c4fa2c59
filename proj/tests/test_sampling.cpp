#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "oracles.hpp"
#include "qvae/sampling.hpp"
#include "qvae/state.hpp"

using namespace qvae;

TEST_CASE("batches replay bit-identically and differ across indices") {
    ProbabilityTable table = probabilities(haar_random_state(4, 5));
    Sampler sampler(table, 77);
    SampleBatch a = sampler.draw_batch(3, 256);
    SampleBatch b = sampler.draw_batch(3, 256);
    CHECK(a.indices == b.indices);
    SampleBatch c = sampler.draw_batch(4, 256);
    CHECK(a.indices != c.indices);

    // the sequential interface walks the same batch sequence
    Sampler fresh(table, 77);
    SampleBatch s0 = fresh.draw(128);
    SampleBatch s1 = fresh.draw(128);
    CHECK(s0.indices == sampler.draw_batch(0, 128).indices);
    CHECK(s1.indices == sampler.draw_batch(1, 128).indices);
}

TEST_CASE("zero-probability outcomes are never drawn") {
    ProbabilityTable table{2, {0.5, 0.0, 0.25, 0.25}};
    Sampler sampler(table, 9);
    SampleBatch batch = sampler.draw_batch(0, 100000);
    for (uint64_t index : batch.indices) CHECK(index != 1);
}

TEST_CASE("a point mass always yields the same outcome") {
    ProbabilityTable table{3, {0, 0, 0, 0, 0, 1.0, 0, 0}};
    Sampler sampler(table, 1);
    SampleBatch batch = sampler.draw_batch(0, 1000);
    for (uint64_t index : batch.indices) CHECK(index == 5);
}

TEST_CASE("a fair coin lands within three sigma") {
    ProbabilityTable table{1, {0.5, 0.5}};
    Sampler sampler(table, 123);
    const uint64_t draws = 100000;
    SampleBatch batch = sampler.draw_batch(0, draws);
    uint64_t ones = 0;
    for (uint64_t index : batch.indices) ones += index;
    const double sigma = std::sqrt(double(draws) * 0.25);
    CHECK(std::abs(double(ones) - double(draws) / 2.0) < 3.0 * sigma);
}

TEST_CASE("empirical tables converge in total variation") {
    ProbabilityTable table = probabilities(haar_random_state(8, 31));
    Sampler sampler(table, 8);
    SampleBatch batch = sampler.draw_batch(0, 1000000);
    ProbabilityTable empirical = empirical_table(batch);
    validate(empirical);
    CHECK(oracle::total_variation(table.probs, empirical.probs) < 0.01);
}

TEST_CASE("draw frequencies pass a chi-squared test") {
    ProbabilityTable table = probabilities(haar_random_state(6, 17));
    Sampler sampler(table, 29);
    SampleBatch batch = sampler.draw_batch(0, 200000);
    std::vector<uint64_t> counts(table.size(), 0);
    for (uint64_t index : batch.indices) counts[index] += 1;
    const double z = oracle::chi_squared_z(counts, table.probs, batch.indices.size());
    CHECK(std::abs(z) < 4.0);
}

TEST_CASE("empirical_table counts then normalizes") {
    std::vector<uint64_t> indices{0, 0, 1, 3, 3, 3, 3, 2};
    ProbabilityTable table = empirical_table(indices, 2);
    CHECK(table.probs[0] == doctest::Approx(0.25));
    CHECK(table.probs[1] == doctest::Approx(0.125));
    CHECK(table.probs[2] == doctest::Approx(0.125));
    CHECK(table.probs[3] == doctest::Approx(0.5));
}

TEST_CASE("sample dumps are one bitstring per line") {
    ProbabilityTable table = probabilities(product_random_state(3, 2));
    Sampler sampler(table, 3);
    SampleBatch batch = sampler.draw_batch(0, 10);
    const std::string path = "test_dump_samples.txt";
    dump_samples(batch, path);
    std::ifstream in(path);
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        REQUIRE(count < batch.indices.size());
        CHECK(line == batch.bitstring(count));
        ++count;
    }
    CHECK(count == batch.indices.size());
    std::remove(path.c_str());
}
