#pragma once

#include <cstdint>
#include <vector>

#include "qvae/state.hpp"

namespace qvae {

/// Long-range XY chain: H = sum_{i<j} V(i,j)(XX + YY), V(i,j) = 1/|i-j|^alpha
/// on an open chain of sites 1..n. Evolution starts from the uniform
/// superposition 2^{-n/2} sum_i |i>.
struct HamiltonianSpec {
    uint32_t n_qubits = 0;
    double interaction_exponent = 0.75;
    double time = 20.0;
};

/// Beyond this the Krylov basis alone would exceed a desktop memory budget.
inline constexpr uint32_t kMaxEvolveQubits = 20;

/// Matrix-free application of the long-range XY Hamiltonian. Every pair term
/// 2V(i,j)(|01><10| + |10><01|) swaps one bit pair, so H preserves Hamming
/// weight exactly.
class LongRangeXYHamiltonian {
  public:
    LongRangeXYHamiltonian(uint32_t n_qubits, double interaction_exponent = 0.75,
                           unsigned threads = 1);

    std::size_t dimension() const { return std::size_t(1) << n_qubits_; }
    uint32_t n_qubits() const { return n_qubits_; }

    /// out = H * in. Fixed per-element summation order; thread-count invariant.
    void apply(const complexd* in, complexd* out) const;

    /// <v|H|v> (real for Hermitian H and unit-norm v).
    double expectation(const std::vector<complexd>& v) const;

    /// Upper bound on the spectral radius (sum of |coefficients| per row).
    double norm_bound() const { return norm_bound_; }

  private:
    struct PairTerm {
        uint64_t mask;  // the two site bits this term exchanges
        double coeff;   // 2 V(i,j)
    };

    uint32_t n_qubits_;
    unsigned threads_;
    std::vector<PairTerm> terms_;
    double norm_bound_ = 0.0;
};

/// exp(-i H t) v via an adaptive Lanczos (Krylov subspace) propagator with full
/// reorthogonalization. Unitary on the subspace, so the norm is preserved to
/// machine precision; substeps shrink until the subspace solution has
/// converged for the step.
std::vector<complexd> krylov_propagate(const LongRangeXYHamiltonian& hamiltonian,
                                       std::vector<complexd> v, double t,
                                       int max_krylov_dim = 48);

/// e^{-iHt} applied to the uniform superposition (a quench from the +x
/// product state).
AmplitudeState evolve_long_range(const HamiltonianSpec& spec, unsigned threads = 1,
                                 uint32_t max_qubits = kMaxEvolveQubits);

}  // namespace qvae
