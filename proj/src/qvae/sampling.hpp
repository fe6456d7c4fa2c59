#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qvae/rng.hpp"
#include "qvae/state.hpp"

namespace qvae {

/// A batch of measurement outcomes; each entry is a basis index whose bits are
/// the n-qubit string under the big-endian convention.
struct SampleBatch {
    uint32_t n_qubits = 0;
    std::vector<uint64_t> indices;

    std::size_t size() const { return indices.size(); }
    int bit(std::size_t sample, uint32_t qubit) const;
    std::string bitstring(std::size_t sample) const;
};

/// Walker alias sampler over the 2^n outcomes of an exact table: O(1) per draw
/// after O(2^n) construction. Immutable after construction; draws consume an
/// explicit counter-based stream, so disjoint batch indices can be drawn
/// concurrently and always reproduce bit-identically.
class Sampler {
  public:
    Sampler(const ProbabilityTable& table, uint64_t seed);

    uint32_t n_qubits() const { return n_qubits_; }
    uint64_t seed() const { return seed_; }

    /// Batch `batch_index` of the sampler's stream; deterministic in
    /// (seed, batch_index, count) alone.
    SampleBatch draw_batch(uint64_t batch_index, uint64_t count) const;

    /// Next sequential batch (advances an internal batch cursor).
    SampleBatch draw(uint64_t count);

    uint64_t draw_one(rng::Stream& stream) const;

  private:
    uint32_t n_qubits_;
    uint64_t seed_;
    uint64_t next_batch_ = 0;
    std::vector<double> stay_probability_;
    std::vector<uint64_t> alias_;
};

Sampler build_sampler(const ProbabilityTable& table, uint64_t seed);

/// Normalized frequency counts over 2^n outcomes. Order-independent: counts
/// are integers, merged before the single normalization.
ProbabilityTable empirical_table(const std::vector<uint64_t>& outcome_indices, uint32_t n_qubits);
ProbabilityTable empirical_table(const SampleBatch& batch);

/// One ASCII 0/1 bitstring per line.
void dump_samples(const SampleBatch& batch, const std::string& path);

}  // namespace qvae
