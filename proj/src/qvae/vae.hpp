#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "qvae/sampling.hpp"

namespace qvae {

inline constexpr double kLReluSlope = 0.2;
inline constexpr double kOutputClamp = 1e-7;   // sigmoid outputs kept in [eps, 1-eps]
inline constexpr double kLogvarClamp = 10.0;   // logvar kept in [-10, 10]

/// Layer shape bookkeeping. The decoder runs latent -> hidden... -> n with a
/// sigmoid output layer; the encoder mirrors the hidden stack and ends in two
/// parallel affine heads (mu, logvar). The latent layer always has n nodes.
struct NetworkArchitecture {
    uint32_t n = 0;
    uint32_t latent_dim = 0;
    std::vector<uint32_t> hidden;

    uint32_t depth() const { return uint32_t(hidden.size()); }
};

void validate(const NetworkArchitecture& arch);

/// Trainable decoder entries; m in the compression factor C = m / 2^n.
uint64_t decoder_weight_count(const NetworkArchitecture& arch);
uint64_t decoder_parameter_count(const NetworkArchitecture& arch);

struct ArchitectureChoice {
    NetworkArchitecture arch;
    uint64_t target_parameters = 0;  // m* = round(C * 2^n)
    std::vector<std::string> warnings;
};

/// Picks the largest uniform hidden width whose decoder parameter count stays
/// within m* = round(C * 2^n). Warns (does not fail) when the width falls
/// below n, since a penultimate layer narrower than n restricts which strings
/// the output layer can express. Throws infeasible-compression when even
/// width 1 exceeds the budget.
ArchitectureChoice architecture_for(uint32_t n, uint32_t depth, double target_compression);

struct LinearLayer {
    Eigen::MatrixXd weight;
    Eigen::VectorXd bias;
};

struct Parameters {
    std::vector<LinearLayer> encoder;
    LinearLayer mu_head;
    LinearLayer logvar_head;
    std::vector<LinearLayer> decoder;
    LinearLayer output;
};

Parameters zeros_like(const Parameters& reference);
Parameters make_parameters(const NetworkArchitecture& arch);  // zero-initialized

/// He-scaled Gaussian weights for the LReLU stacks; the logvar head starts
/// near zero so the posterior opens close to the prior.
Parameters initialize_parameters(const NetworkArchitecture& arch, uint64_t seed);

/// Flattened views over every tensor, in declaration order (encoder stack,
/// mu head, logvar head, decoder stack, output). Element order within a
/// tensor is Eigen's column-major storage order.
std::vector<std::pair<double*, std::size_t>> tensor_views(Parameters& params);
std::vector<std::pair<const double*, std::size_t>> tensor_views(const Parameters& params);

struct EncoderOutput {
    Eigen::VectorXd mu;
    Eigen::VectorXd logvar;
};

EncoderOutput encoder_forward(const Parameters& params, const Eigen::VectorXd& x);

inline Eigen::VectorXd reparameterize(const Eigen::VectorXd& mu, const Eigen::VectorXd& logvar,
                                      const Eigen::VectorXd& eps) {
    return mu.array() + (logvar.array() / 2.0).exp() * eps.array();
}

/// Per-bit Bernoulli probabilities, strictly inside (0, 1).
Eigen::VectorXd decoder_forward(const Parameters& params, const Eigen::VectorXd& z);

/// KL(N(mu, diag e^logvar) || N(0, I)) = 1/2 sum(mu^2 + e^lv - 1 - lv).
double kl_divergence(const Eigen::VectorXd& mu, const Eigen::VectorXd& logvar);

double bernoulli_nll(const Eigen::VectorXd& x, const Eigen::VectorXd& probs);

struct LossBreakdown {
    double total = 0.0;
    double reconstruction = 0.0;
    double kl = 0.0;
};

/// Single-sample Monte-Carlo estimate of the variational objective:
/// Bernoulli reconstruction NLL plus beta times the KL term.
LossBreakdown loss(const Parameters& params, const Eigen::VectorXd& x, const Eigen::VectorXd& eps,
                   double beta);

struct BatchGradient {
    Parameters grads;      // mean over the batch
    double mean_loss = 0.0;
};

/// Reverse-mode gradient of the mean loss over a batch. `eps` holds one latent
/// noise column per sample. Samples are processed in batch order with a fixed
/// accumulation order, so results do not depend on any parallel schedule.
BatchGradient gradient(const Parameters& params, const NetworkArchitecture& arch,
                       const SampleBatch& batch, const Eigen::MatrixXd& eps, double beta);

}  // namespace qvae
