#pragma once

#include <cstdint>

#include "qvae/state.hpp"
#include "qvae/training.hpp"

namespace qvae {

/// Bhattacharyya overlap sum(sqrt(p_i q_i)); 1 iff the tables match.
double fidelity(const ProbabilityTable& p, const ProbabilityTable& q);

inline uint64_t default_reconstruction_samples(uint32_t n) { return 100ull << n; }

/// Samples the generative side of the model: z ~ N(0, I), then each output
/// bit independently from its Bernoulli probability. Returns the empirical
/// distribution over `sample_count` draws.
ProbabilityTable reconstruct_distribution(const TrainedModel& model, uint64_t sample_count,
                                          uint64_t seed);

/// Fidelity between `table` and an empirical table built from the same number
/// of direct draws; the reference level finite sampling alone imposes.
double sampling_noise_floor(const ProbabilityTable& table, uint64_t sample_count, uint64_t seed);

/// Base-2 von Neumann entropy of the reduced state across the cut between
/// qubits `cut` and `cut`+1 (1 <= cut <= n-1), computed from the singular
/// values of the 2^cut x 2^(n-cut) amplitude matrix.
double entanglement_entropy(const AmplitudeState& state, uint32_t cut);

double max_entanglement_entropy(const AmplitudeState& state);

/// 2^Smax: the bond dimension a matrix-product representation would need at
/// the worst cut.
double estimated_bond_dimension(const AmplitudeState& state);

}  // namespace qvae
