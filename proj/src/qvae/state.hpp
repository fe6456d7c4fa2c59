#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qvae {

using complexd = std::complex<double>;

/// Pure n-qubit state as a dense amplitude vector of length 2^n, unit norm.
/// Basis indices follow the library-wide big-endian convention (see bits.hpp).
struct AmplitudeState {
    uint32_t n_qubits = 0;
    std::vector<complexd> amplitudes;

    std::size_t dimension() const { return amplitudes.size(); }
};

/// Exact measurement distribution over the 2^n computational basis strings.
struct ProbabilityTable {
    uint32_t n_qubits = 0;
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
};

/// Throw invalid-argument if the type invariants do not hold.
void validate(const AmplitudeState& state);
void validate(const ProbabilityTable& table);

/// Tensor product of n independent Haar-uniform single-qubit states.
AmplitudeState product_random_state(uint32_t n_qubits, uint64_t seed);

/// Haar-uniform pure state: 2^n i.i.d. standard complex Gaussians, normalized.
AmplitudeState haar_random_state(uint32_t n_qubits, uint64_t seed);

/// p_i = |amplitude_i|^2.
ProbabilityTable probabilities(const AmplitudeState& state);

double squared_norm(const std::vector<complexd>& v);

}  // namespace qvae
