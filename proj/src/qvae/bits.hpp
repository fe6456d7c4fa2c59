#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace qvae {

// Basis-index convention used across the whole library: index bits are read
// big-endian, i.e. qubit 1 is the most significant bit of the index.

/// Bit of basis index `index` belonging to qubit `qubit` (1-based).
inline int qubit_bit(uint64_t index, uint32_t n_qubits, uint32_t qubit) {
    return int((index >> (n_qubits - qubit)) & 1u);
}

inline std::string bitstring_of(uint64_t index, uint32_t n_qubits) {
    std::string s(n_qubits, '0');
    for (uint32_t q = 1; q <= n_qubits; ++q)
        if (qubit_bit(index, n_qubits, q)) s[q - 1] = '1';
    return s;
}

/// Kahan-Neumaier compensated accumulator; reduces error of long sums to O(1) ulp.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace qvae
