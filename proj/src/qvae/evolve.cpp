#include "qvae/evolve.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "qvae/bits.hpp"
#include "qvae/error.hpp"
#include "qvae/parallel.hpp"

namespace qvae {

LongRangeXYHamiltonian::LongRangeXYHamiltonian(uint32_t n_qubits, double interaction_exponent,
                                               unsigned threads)
    : n_qubits_(n_qubits), threads_(threads == 0 ? default_thread_count() : threads) {
    if (n_qubits < 2) raise(ErrorCode::invalid_argument, "XY chain needs at least 2 sites");
    if (!std::isfinite(interaction_exponent))
        raise(ErrorCode::invalid_argument, "interaction exponent must be finite");
    for (uint32_t i = 1; i <= n_qubits; ++i) {
        for (uint32_t j = i + 1; j <= n_qubits; ++j) {
            // site k occupies index bit (n-k); open chain distance |i-j|
            const uint64_t mask =
                (uint64_t(1) << (n_qubits - i)) | (uint64_t(1) << (n_qubits - j));
            const double coupling = 2.0 / std::pow(double(j - i), interaction_exponent);
            terms_.push_back({mask, coupling});
            norm_bound_ += coupling;
        }
    }
}

void LongRangeXYHamiltonian::apply(const complexd* in, complexd* out) const {
    parallel_for(dimension(), threads_, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            complexd acc{};
            for (const auto& term : terms_) {
                const uint64_t bits = s & term.mask;
                if (bits != 0 && bits != term.mask)  // exactly one of the pair set
                    acc += term.coeff * in[s ^ term.mask];
            }
            out[s] = acc;
        }
    });
}

double LongRangeXYHamiltonian::expectation(const std::vector<complexd>& v) const {
    if (v.size() != dimension())
        raise(ErrorCode::invalid_argument, "vector length does not match Hamiltonian dimension");
    std::vector<complexd> hv(v.size());
    apply(v.data(), hv.data());
    CompensatedSum acc;
    for (std::size_t i = 0; i < v.size(); ++i) acc.add((std::conj(v[i]) * hv[i]).real());
    return acc.value();
}

namespace {

// Coefficients of exp(-i T dt) e1 in the Lanczos basis, from the spectral
// decomposition of the (small, real symmetric, tridiagonal) T.
Eigen::VectorXcd subspace_exponential(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig,
                                      double dt) {
    const auto& vals = eig.eigenvalues();
    const auto& vecs = eig.eigenvectors();
    const int m = int(vals.size());
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(m);
    for (int k = 0; k < m; ++k) {
        const complexd phase = std::polar(1.0, -vals[k] * dt);
        const double weight = vecs(0, k);
        for (int j = 0; j < m; ++j) y[j] += vecs(j, k) * phase * weight;
    }
    return y;
}

}  // namespace

std::vector<complexd> krylov_propagate(const LongRangeXYHamiltonian& hamiltonian,
                                       std::vector<complexd> v, double t, int max_krylov_dim) {
    const std::size_t dim = hamiltonian.dimension();
    if (v.size() != dim)
        raise(ErrorCode::invalid_argument, "vector length does not match Hamiltonian dimension");
    if (!std::isfinite(t)) raise(ErrorCode::invalid_argument, "evolution time must be finite");
    if (t == 0.0) return v;

    const int m_max = int(std::min<std::size_t>(std::size_t(max_krylov_dim), dim));
    const double tail_tol = 1e-13;

    double remaining = std::abs(t);
    const double direction = t < 0 ? -1.0 : 1.0;
    double dt = std::min(remaining, 0.5 * m_max / std::max(hamiltonian.norm_bound(), 1e-12));

    std::vector<complexd> basis;   // m_eff vectors of length dim, contiguous
    std::vector<complexd> work(dim);

    while (remaining > 0.0) {
        const double beta0 = std::sqrt(squared_norm(v));
        if (!(beta0 > 0.0)) raise(ErrorCode::numeric_failure, "propagated state collapsed to zero");

        // Lanczos with full reorthogonalization (two Gram-Schmidt passes).
        basis.assign(std::size_t(m_max + 1) * dim, complexd{});
        std::vector<double> diag, offdiag;
        for (std::size_t i = 0; i < dim; ++i) basis[i] = v[i] / beta0;
        int m_eff = 0;
        bool breakdown = false;
        for (int k = 0; k < m_max; ++k) {
            const complexd* vk = &basis[std::size_t(k) * dim];
            hamiltonian.apply(vk, work.data());
            CompensatedSum alpha_acc;
            for (std::size_t i = 0; i < dim; ++i)
                alpha_acc.add((std::conj(vk[i]) * work[i]).real());
            const double alpha = alpha_acc.value();
            diag.push_back(alpha);
            m_eff = k + 1;

            for (int pass = 0; pass < 2; ++pass) {
                for (int j = 0; j <= k; ++j) {
                    const complexd* vj = &basis[std::size_t(j) * dim];
                    complexd proj{};
                    for (std::size_t i = 0; i < dim; ++i) proj += std::conj(vj[i]) * work[i];
                    for (std::size_t i = 0; i < dim; ++i) work[i] -= proj * vj[i];
                }
            }
            const double beta = std::sqrt(squared_norm(work));
            if (beta < 1e-13 * (hamiltonian.norm_bound() + 1.0) || k + 1 == m_max) {
                breakdown = beta < 1e-13 * (hamiltonian.norm_bound() + 1.0);
                if (!breakdown) offdiag.push_back(beta);
                break;
            }
            offdiag.push_back(beta);
            complexd* vnext = &basis[std::size_t(k + 1) * dim];
            for (std::size_t i = 0; i < dim; ++i) vnext[i] = work[i] / beta;
        }

        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m_eff, m_eff);
        for (int i = 0; i < m_eff; ++i) tri(i, i) = diag[i];
        for (int i = 0; i + 1 < m_eff; ++i) tri(i, i + 1) = tri(i + 1, i) = offdiag[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);

        // Shrink the substep until the subspace solution carries no weight at
        // the basis edge (or the subspace is exact after a happy breakdown).
        dt = std::min(dt, remaining);
        Eigen::VectorXcd y;
        for (;;) {
            y = subspace_exponential(eig, direction * dt);
            if (breakdown || m_eff < 3) break;
            const double tail = std::abs(y[m_eff - 1]) + std::abs(y[m_eff - 2]);
            if (tail < tail_tol) break;
            dt *= 0.5;
            if (dt < std::abs(t) * 1e-12)
                raise(ErrorCode::numeric_failure, "krylov substep underflow; evolution stalled");
        }

        parallel_for(dim, 1, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                complexd acc{};
                for (int j = 0; j < m_eff; ++j) acc += basis[std::size_t(j) * dim + i] * y[j];
                v[i] = acc * beta0;
            }
        });

        remaining -= dt;
        dt *= 2.0;  // try a larger step next time
    }
    return v;
}

AmplitudeState evolve_long_range(const HamiltonianSpec& spec, unsigned threads,
                                 uint32_t max_qubits) {
    if (spec.n_qubits < 2) raise(ErrorCode::invalid_argument, "evolution needs n_qubits >= 2");
    if (!std::isfinite(spec.time)) raise(ErrorCode::invalid_argument, "evolution time must be finite");
    if (spec.time < 0.0) raise(ErrorCode::invalid_argument, "evolution time must be >= 0");
    if (spec.n_qubits > max_qubits)
        raise(ErrorCode::resource_limit,
              "n_qubits exceeds the evolution memory budget (max " + std::to_string(max_qubits) +
                  " qubits)");

    LongRangeXYHamiltonian hamiltonian(spec.n_qubits, spec.interaction_exponent, threads);
    const std::size_t dim = hamiltonian.dimension();
    std::vector<complexd> v(dim, complexd(1.0 / std::sqrt(double(dim)), 0.0));
    v = krylov_propagate(hamiltonian, std::move(v), spec.time);
    return AmplitudeState{spec.n_qubits, std::move(v)};
}

}  // namespace qvae
