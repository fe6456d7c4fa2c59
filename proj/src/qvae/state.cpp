#include "qvae/state.hpp"

#include <cmath>

#include "qvae/bits.hpp"
#include "qvae/error.hpp"
#include "qvae/rng.hpp"

namespace qvae {

double squared_norm(const std::vector<complexd>& v) {
    CompensatedSum acc;
    for (const auto& a : v) acc.add(std::norm(a));
    return acc.value();
}

void validate(const AmplitudeState& state) {
    if (state.n_qubits < 1) raise(ErrorCode::invalid_argument, "state must have n_qubits >= 1");
    if (state.amplitudes.size() != (std::size_t(1) << state.n_qubits))
        raise(ErrorCode::invalid_argument, "amplitude vector length must be 2^n_qubits");
    for (const auto& a : state.amplitudes)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            raise(ErrorCode::invalid_argument, "amplitudes must be finite");
    if (std::abs(squared_norm(state.amplitudes) - 1.0) > 1e-10)
        raise(ErrorCode::invalid_argument, "state norm deviates from 1 by more than 1e-10");
}

void validate(const ProbabilityTable& table) {
    if (table.n_qubits < 1) raise(ErrorCode::invalid_argument, "table must have n_qubits >= 1");
    if (table.probs.size() != (std::size_t(1) << table.n_qubits))
        raise(ErrorCode::invalid_argument, "probability vector length must be 2^n_qubits");
    CompensatedSum acc;
    for (double p : table.probs) {
        if (!(p >= 0.0)) raise(ErrorCode::invalid_argument, "probabilities must be >= 0");
        acc.add(p);
    }
    if (std::abs(acc.value() - 1.0) > 1e-9)
        raise(ErrorCode::invalid_argument, "probabilities deviate from unit total by more than 1e-9");
}

AmplitudeState product_random_state(uint32_t n_qubits, uint64_t seed) {
    if (n_qubits < 1) raise(ErrorCode::invalid_argument, "product state needs n_qubits >= 1");
    rng::Stream stream(seed, rng::stream_id(rng::Purpose::product_state));

    AmplitudeState state{n_qubits, std::vector<complexd>{1.0}};
    std::vector<complexd> next;
    for (uint32_t q = 0; q < n_qubits; ++q) {
        // Haar-uniform single-qubit state: two complex Gaussians, normalized.
        complexd a0(stream.gaussian(), stream.gaussian());
        complexd a1(stream.gaussian(), stream.gaussian());
        const double inv = 1.0 / std::sqrt(std::norm(a0) + std::norm(a1));
        a0 *= inv;
        a1 *= inv;
        next.assign(state.amplitudes.size() * 2, complexd{});
        for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
            next[2 * i] = state.amplitudes[i] * a0;
            next[2 * i + 1] = state.amplitudes[i] * a1;
        }
        state.amplitudes.swap(next);
    }
    return state;
}

AmplitudeState haar_random_state(uint32_t n_qubits, uint64_t seed) {
    if (n_qubits < 1) raise(ErrorCode::invalid_argument, "haar state needs n_qubits >= 1");
    rng::Stream stream(seed, rng::stream_id(rng::Purpose::haar_state));

    AmplitudeState state{n_qubits, std::vector<complexd>(std::size_t(1) << n_qubits)};
    for (auto& a : state.amplitudes) a = complexd(stream.gaussian(), stream.gaussian());
    const double inv = 1.0 / std::sqrt(squared_norm(state.amplitudes));
    for (auto& a : state.amplitudes) a *= inv;
    return state;
}

ProbabilityTable probabilities(const AmplitudeState& state) {
    validate(state);
    ProbabilityTable table{state.n_qubits, std::vector<double>(state.amplitudes.size())};
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i)
        table.probs[i] = std::norm(state.amplitudes[i]);
    return table;
}

}  // namespace qvae
