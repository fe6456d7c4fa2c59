#include "qvae/sampling.hpp"

#include <algorithm>
#include <fstream>

#include "qvae/bits.hpp"
#include "qvae/error.hpp"

namespace qvae {

int SampleBatch::bit(std::size_t sample, uint32_t qubit) const {
    return qubit_bit(indices[sample], n_qubits, qubit);
}

std::string SampleBatch::bitstring(std::size_t sample) const {
    return bitstring_of(indices[sample], n_qubits);
}

Sampler::Sampler(const ProbabilityTable& table, uint64_t seed)
    : n_qubits_(table.n_qubits), seed_(seed) {
    validate(table);
    const std::size_t size = table.size();
    stay_probability_.assign(size, 0.0);
    alias_.assign(size, 0);

    // Vose's construction over probabilities scaled to mean 1.
    std::vector<double> scaled(size);
    for (std::size_t i = 0; i < size; ++i) scaled[i] = table.probs[i] * double(size);
    std::vector<uint64_t> small, large;
    std::size_t heaviest = 0;
    for (std::size_t i = 0; i < size; ++i) {
        if (table.probs[i] > table.probs[heaviest]) heaviest = i;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        const uint64_t s = small.back();
        const uint64_t l = large.back();
        small.pop_back();
        large.pop_back();
        stay_probability_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (uint64_t l : large) stay_probability_[l] = 1.0;
    // Rounding can strand near-unit cells in `small`; a zero cell must still
    // never be emitted, so its slot defers to the heaviest outcome.
    for (uint64_t s : small) {
        if (scaled[s] > 0.5) {
            stay_probability_[s] = 1.0;
        } else {
            stay_probability_[s] = 0.0;
            alias_[s] = heaviest;
        }
    }
}

uint64_t Sampler::draw_one(rng::Stream& stream) const {
    const uint64_t slot = stream.below(stay_probability_.size());
    const double u = stream.uniform01();
    return u < stay_probability_[slot] ? slot : alias_[slot];
}

SampleBatch Sampler::draw_batch(uint64_t batch_index, uint64_t count) const {
    if (count < 1) raise(ErrorCode::invalid_argument, "sample count must be >= 1");
    rng::Stream stream(seed_, rng::stream_id(rng::Purpose::batch_draw, batch_index));
    SampleBatch batch{n_qubits_, {}};
    batch.indices.reserve(count);
    for (uint64_t i = 0; i < count; ++i) batch.indices.push_back(draw_one(stream));
    return batch;
}

SampleBatch Sampler::draw(uint64_t count) { return draw_batch(next_batch_++, count); }

Sampler build_sampler(const ProbabilityTable& table, uint64_t seed) {
    return Sampler(table, seed);
}

ProbabilityTable empirical_table(const std::vector<uint64_t>& outcome_indices, uint32_t n_qubits) {
    if (n_qubits < 1) raise(ErrorCode::invalid_argument, "empirical table needs n_qubits >= 1");
    if (outcome_indices.empty())
        raise(ErrorCode::invalid_argument, "empirical table needs at least one sample");
    const std::size_t size = std::size_t(1) << n_qubits;
    std::vector<uint64_t> counts(size, 0);
    for (uint64_t idx : outcome_indices) {
        if (idx >= size) raise(ErrorCode::invalid_argument, "outcome index out of basis range");
        ++counts[idx];
    }
    ProbabilityTable table{n_qubits, std::vector<double>(size)};
    const double inv = 1.0 / double(outcome_indices.size());
    for (std::size_t i = 0; i < size; ++i) table.probs[i] = double(counts[i]) * inv;
    return table;
}

ProbabilityTable empirical_table(const SampleBatch& batch) {
    return empirical_table(batch.indices, batch.n_qubits);
}

void dump_samples(const SampleBatch& batch, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::io_error, "cannot open sample dump file: " + path);
    for (std::size_t i = 0; i < batch.size(); ++i) out << batch.bitstring(i) << '\n';
    if (!out) raise(ErrorCode::io_error, "failed writing sample dump: " + path);
}

}  // namespace qvae
