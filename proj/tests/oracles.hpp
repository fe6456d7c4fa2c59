#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

// Independent reference implementations the unit and acceptance suites check
// the library against. Deliberately written the slow, obvious way.
namespace oracle {

using complexd = std::complex<double>;

/// All permutations of {0..n-1} in lexicographic order.
std::vector<std::vector<uint32_t>> all_permutations(uint32_t n);

/// Permanent as a direct sum over all n! permutations (row-major matrix).
complexd permanent_brute(const std::vector<complexd>& matrix, uint32_t n);

/// Dense matrix exponential for the long-range XY chain: builds the full
/// 2^n x 2^n Hamiltonian with pair coefficient 2/(j-i)^alpha, diagonalizes it,
/// and applies e^{-iHt} to v.
std::vector<complexd> dense_evolve(uint32_t n, double alpha, double t,
                                   const std::vector<complexd>& v);

/// Base-2 entanglement entropy across `cut` from the reduced density matrix
/// rho_A[a,a'] = sum_b psi[a,b] conj(psi[a',b]), eigendecomposed directly.
double entropy_from_density_matrix(const std::vector<complexd>& amplitudes, uint32_t n,
                                   uint32_t cut);

/// (f(x+h) - f(x-h)) / 2h.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// Decoder parameter count found by explicitly listing layer shapes.
uint64_t explicit_param_count(uint32_t n, uint32_t depth, uint64_t width);

/// Largest width whose explicit count fits the budget; 0 if none.
uint64_t exhaustive_best_width(uint32_t n, uint32_t depth, uint64_t budget);

/// One-sample Kolmogorov-Smirnov statistic of `values` against Exp(1).
double ks_statistic_exp1(std::vector<double> values);

/// alpha = 0.01 critical value for the KS statistic at sample size n.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(double(n)); }

/// Standardized z-score of a chi-squared GOF statistic (Wilson-Hilferty).
double chi_squared_z(const std::vector<uint64_t>& counts, const std::vector<double>& expected,
                     uint64_t total);

/// Total variation distance between two distributions on the same support.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace oracle
