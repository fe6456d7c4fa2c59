#include "qvae/hard.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qvae/bits.hpp"
#include "qvae/error.hpp"
#include "qvae/parallel.hpp"

namespace qvae {

namespace {

// 20! is the largest factorial below 2^63.
constexpr uint32_t kMaxLehmerSize = 20;

uint64_t factorial(uint32_t n) {
    uint64_t f = 1;
    for (uint32_t k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

uint32_t HardSpec::qubit_count() const {
    uint32_t bits = 0;
    while ((uint32_t(1) << (bits + 1)) <= root_order) ++bits;
    return coord_count() * bits;
}

void validate(const HardSpec& spec) {
    if (spec.perm_size < 1) raise(ErrorCode::invalid_argument, "permutation size must be >= 1");
    if (spec.perm_size > kMaxLehmerSize)
        raise(ErrorCode::invalid_argument, "permutation size exceeds 64-bit factorial range");
    if (spec.root_order < 2 || !std::has_single_bit(spec.root_order))
        raise(ErrorCode::invalid_argument, "root-of-unity order must be a power of two >= 2");
}

std::vector<uint32_t> lehmer_decode(uint64_t index, uint32_t n) {
    if (n < 1 || n > kMaxLehmerSize)
        raise(ErrorCode::invalid_argument, "permutation size out of range");
    if (index >= factorial(n))
        raise(ErrorCode::invalid_argument, "permutation index must be in [0, n!-1]");

    // Factorial digits, most significant first: digit k multiplies (n-1-k)!.
    std::vector<uint32_t> remaining(n);
    for (uint32_t i = 0; i < n; ++i) remaining[i] = i;
    std::vector<uint32_t> sigma;
    sigma.reserve(n);
    uint64_t base = factorial(n - 1);
    for (uint32_t k = 0; k < n; ++k) {
        const uint64_t digit = index / base;
        index %= base;
        sigma.push_back(remaining[digit]);
        remaining.erase(remaining.begin() + long(digit));
        if (k + 1 < n) base /= (n - 1 - k);
    }
    return sigma;
}

std::vector<uint8_t> encode_permutation(const std::vector<uint32_t>& sigma) {
    const uint32_t n = uint32_t(sigma.size());
    if (n == 0) raise(ErrorCode::invalid_argument, "empty permutation");
    std::vector<uint8_t> seen(n, 0);
    for (uint32_t v : sigma) {
        if (v >= n || seen[v]) raise(ErrorCode::invalid_argument, "not a valid permutation");
        seen[v] = 1;
    }
    std::vector<uint8_t> bits(std::size_t(n) * n, 0);
    for (uint32_t j = 0; j < n; ++j) bits[std::size_t(j) * n + sigma[j]] = 1;
    return bits;
}

complexd permanent(const complexd* matrix, uint32_t n) {
    if (n == 0) return complexd(1.0, 0.0);
    if (n > 62) raise(ErrorCode::invalid_argument, "permanent dimension too large");
    for (std::size_t i = 0; i < std::size_t(n) * n; ++i)
        if (!std::isfinite(matrix[i].real()) || !std::isfinite(matrix[i].imag()))
            raise(ErrorCode::invalid_argument, "permanent entries must be finite");

    // Ryser: perm(A) = sum over non-empty column subsets S of
    // (-1)^(n-|S|) * prod_i sum_{j in S} a_ij, visited in Gray-code order.
    std::vector<complexd> rowsum(n, complexd{});
    complexd total{};
    uint64_t gray_prev = 0;
    for (uint64_t k = 1; k < (uint64_t(1) << n); ++k) {
        const uint64_t gray = k ^ (k >> 1);
        const uint64_t changed = gray ^ gray_prev;
        const uint32_t col = uint32_t(std::countr_zero(changed));
        if (gray & changed)
            for (uint32_t i = 0; i < n; ++i) rowsum[i] += matrix[std::size_t(i) * n + col];
        else
            for (uint32_t i = 0; i < n; ++i) rowsum[i] -= matrix[std::size_t(i) * n + col];
        complexd prod(1.0, 0.0);
        for (uint32_t i = 0; i < n; ++i) prod *= rowsum[i];
        const bool negative = ((n - std::popcount(gray)) & 1u) != 0;
        total += negative ? -prod : prod;
        gray_prev = gray;
    }
    return total;
}

complexd permanent(const std::vector<complexd>& matrix, uint32_t n) {
    if (matrix.size() != std::size_t(n) * n)
        raise(ErrorCode::invalid_argument, "matrix storage does not match dimension");
    return permanent(matrix.data(), n);
}

namespace {

// One exact root-of-unity per power, from cos/sin rather than repeated
// multiplication, so phases carry no accumulated drift.
std::vector<complexd> root_table(uint32_t order) {
    std::vector<complexd> roots(order);
    for (uint32_t p = 0; p < order; ++p) {
        const double angle = 2.0 * M_PI * double(p) / double(order);
        roots[p] = complexd(std::cos(angle), std::sin(angle));
    }
    return roots;
}

complexd q_from_phases(const HardSpec& spec, const std::vector<uint32_t>& phases,
                       const std::vector<complexd>& roots, std::vector<complexd>& scratch) {
    const uint32_t n = spec.perm_size;
    for (uint32_t i = 0; i < spec.coord_count(); ++i) scratch[i] = roots[phases[i]];
    return permanent(scratch.data(), n);
}

}  // namespace

complexd evaluate_q(const HardSpec& spec, const std::vector<uint32_t>& phases) {
    validate(spec);
    if (phases.size() != spec.coord_count())
        raise(ErrorCode::invalid_argument, "phase vector length must be n^2");
    for (uint32_t p : phases)
        if (p >= spec.root_order)
            raise(ErrorCode::invalid_argument, "phase entry out of [0, L-1]");
    const auto roots = root_table(spec.root_order);
    std::vector<complexd> scratch(spec.coord_count());
    return q_from_phases(spec, phases, roots, scratch);
}

std::vector<uint32_t> unpack_phases(const HardSpec& spec, uint64_t outcome_index) {
    validate(spec);
    const uint32_t n_coords = spec.coord_count();
    std::vector<uint32_t> phases(n_coords);
    // Coordinates packed in order y_1..y_N, log2(L) big-endian bits each,
    // which is exactly base-L big-endian digit order.
    for (uint32_t j = n_coords; j-- > 0;) {
        phases[j] = uint32_t(outcome_index % spec.root_order);
        outcome_index /= spec.root_order;
    }
    return phases;
}

ProbabilityTable hard_distribution(const HardSpec& spec, unsigned threads, uint64_t max_entries) {
    validate(spec);
    const uint32_t qubits = spec.qubit_count();
    if (qubits >= 63 || spec.outcome_count() > max_entries)
        raise(ErrorCode::resource_limit,
              "hard distribution table with " + std::to_string(qubits) +
                  " qubits exceeds the table budget");

    const uint64_t outcomes = spec.outcome_count();
    const double norm = 1.0 / (double(outcomes) * double(factorial(spec.perm_size)));
    const auto roots = root_table(spec.root_order);

    const uint32_t n_coords = spec.coord_count();
    ProbabilityTable table{qubits, std::vector<double>(outcomes)};
    parallel_for(outcomes, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<complexd> scratch(n_coords);
        std::vector<uint32_t> phases(n_coords);
        for (std::size_t idx = begin; idx < end; ++idx) {
            uint64_t rest = idx;
            for (uint32_t j = n_coords; j-- > 0;) {
                phases[j] = uint32_t(rest % spec.root_order);
                rest /= spec.root_order;
            }
            const complexd q = q_from_phases(spec, phases, roots, scratch);
            table.probs[idx] = std::norm(q) * norm;
        }
    });

    // The total equals 1 by the root-of-unity orthogonality identity
    // sum_y |Q(Z_y)|^2 = L^N n!; a larger deviation indicates a defect.
    CompensatedSum acc;
    for (double p : table.probs) acc.add(p);
    if (std::abs(acc.value() - 1.0) > 1e-9)
        raise(ErrorCode::numeric_failure, "hard distribution failed normalization check");
    return table;
}

}  // namespace qvae
