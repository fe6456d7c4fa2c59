#include "qvae/evaluation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

#include "qvae/bits.hpp"
#include "qvae/error.hpp"
#include "qvae/rng.hpp"
#include "qvae/sampling.hpp"

namespace qvae {

double fidelity(const ProbabilityTable& p, const ProbabilityTable& q) {
    validate(p);
    validate(q);
    if (p.n_qubits != q.n_qubits) {
        raise(ErrorCode::invalid_argument, "fidelity needs tables over the same qubit count");
    }
    CompensatedSum sum;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        sum.add(std::sqrt(p.probs[i] * q.probs[i]));
    }
    const double value = sum.value();
    return value > 1.0 ? std::min(value, 1.0) : value;
}

ProbabilityTable reconstruct_distribution(const TrainedModel& model, uint64_t sample_count,
                                          uint64_t seed) {
    validate(model.arch);
    if (sample_count < 1) raise(ErrorCode::invalid_argument, "need at least one sample");
    const uint32_t n = model.arch.n;

    std::vector<uint64_t> counts(std::size_t(1) << n, 0);
    rng::Stream stream(seed, rng::stream_id(rng::Purpose::reconstruction));
    Eigen::VectorXd z(model.arch.latent_dim);
    for (uint64_t s = 0; s < sample_count; ++s) {
        for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = stream.gaussian();
        Eigen::VectorXd probs = decoder_forward(model.params, z);
        uint64_t index = 0;
        for (uint32_t b = 1; b <= n; ++b) {
            if (stream.uniform01() < probs[b - 1]) index |= uint64_t(1) << (n - b);
        }
        counts[index] += 1;
    }

    ProbabilityTable table;
    table.n_qubits = n;
    table.probs.resize(counts.size());
    const double inv = 1.0 / double(sample_count);
    for (std::size_t i = 0; i < counts.size(); ++i) table.probs[i] = double(counts[i]) * inv;
    return table;
}

double sampling_noise_floor(const ProbabilityTable& table, uint64_t sample_count, uint64_t seed) {
    validate(table);
    if (sample_count < 1) raise(ErrorCode::invalid_argument, "need at least one sample");
    Sampler sampler(table, seed);
    rng::Stream stream(seed, rng::stream_id(rng::Purpose::noise_floor));
    std::vector<uint64_t> indices(sample_count);
    for (uint64_t s = 0; s < sample_count; ++s) indices[s] = sampler.draw_one(stream);
    return fidelity(table, empirical_table(indices, table.n_qubits));
}

double entanglement_entropy(const AmplitudeState& state, uint32_t cut) {
    validate(state);
    if (cut < 1 || cut >= state.n_qubits) {
        raise(ErrorCode::invalid_argument, "cut must split the chain into two non-empty halves");
    }
    const Eigen::Index rows = Eigen::Index(1) << cut;
    const Eigen::Index cols = Eigen::Index(1) << (state.n_qubits - cut);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index a = 0; a < rows; ++a) {
        for (Eigen::Index b = 0; b < cols; ++b) {
            m(a, b) = state.amplitudes[std::size_t((a << (state.n_qubits - cut)) | b)];
        }
    }
    Eigen::VectorXd sv;
    if (rows > 16 && cols > 16) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
        sv = svd.singularValues();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        sv = svd.singularValues();
    }
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double w = sv[i] * sv[i];
        if (w > 1e-15) entropy -= w * std::log2(w);
    }
    return entropy;
}

double max_entanglement_entropy(const AmplitudeState& state) {
    validate(state);
    if (state.n_qubits < 2) return 0.0;
    double best = 0.0;
    for (uint32_t cut = 1; cut < state.n_qubits; ++cut) {
        best = std::max(best, entanglement_entropy(state, cut));
    }
    return best;
}

double estimated_bond_dimension(const AmplitudeState& state) {
    return std::exp2(max_entanglement_entropy(state));
}

}  // namespace qvae
