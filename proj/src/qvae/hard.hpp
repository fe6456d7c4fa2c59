#pragma once

#include <cstdint>
#include <vector>

#include "qvae/state.hpp"

namespace qvae {

/// Parameters of the permanent-based hard distribution D_{Q,L}: Q is the
/// permanent of an n x n matrix of L-th roots of unity, so outcomes are
/// phase vectors y in [0,L-1]^N with N = n^2, i.e. N*log2(L) qubits.
struct HardSpec {
    uint32_t perm_size = 3;   // n
    uint32_t root_order = 4;  // L, a power of two

    uint32_t coord_count() const { return perm_size * perm_size; }
    uint32_t qubit_count() const;
    uint64_t outcome_count() const { return uint64_t(1) << qubit_count(); }
};

/// Throws invalid-argument unless n >= 1 and L is a power of two >= 2.
void validate(const HardSpec& spec);

/// Factorial-number-system decoding of A in [0, n!-1] into a permutation of
/// {0,...,n-1}; the most significant digit multiplies (n-1)! and digit d picks
/// the d-th smallest remaining element.
std::vector<uint32_t> lehmer_decode(uint64_t index, uint32_t n);

/// Row-major flattening of the n x n permutation matrix M[j][sigma(j)] = 1.
std::vector<uint8_t> encode_permutation(const std::vector<uint32_t>& sigma);

/// Permanent by Ryser's inclusion-exclusion with Gray-code row-sum updates,
/// O(2^n * n). `matrix` is row-major n x n.
complexd permanent(const complexd* matrix, uint32_t n);
complexd permanent(const std::vector<complexd>& matrix, uint32_t n);

/// Q(Z_y) = sum over permutations of the monomials selected by the permutation
/// encoding; equals the permanent of W[j][k] = w^(y[j*n+k]), w = e^(2*pi*i/L).
complexd evaluate_q(const HardSpec& spec, const std::vector<uint32_t>& phases);

inline constexpr uint64_t kMaxHardTableEntries = uint64_t(1) << 24;

/// Exact table Pr[y] = |Q(Z_y)|^2 / (L^N n!) over all L^N phase vectors.
/// Outcome index packs the coordinates y_1..y_N in order, each as log2(L)
/// big-endian bits.
ProbabilityTable hard_distribution(const HardSpec& spec, unsigned threads = 1,
                                   uint64_t max_entries = kMaxHardTableEntries);

/// Coordinate vector for a packed outcome index (inverse of the bit packing).
std::vector<uint32_t> unpack_phases(const HardSpec& spec, uint64_t outcome_index);

}  // namespace qvae
