#include "qvae/vae.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "qvae/error.hpp"
#include "qvae/rng.hpp"

namespace qvae {
namespace {

std::string format_msg(const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    return std::string(buf);
}

double lrelu(double a) { return a >= 0.0 ? a : kLReluSlope * a; }
double lrelu_grad(double a) { return a >= 0.0 ? 1.0 : kLReluSlope; }

void check_finite(const Eigen::VectorXd& v, const char* stage, std::size_t layer) {
    if (!v.allFinite()) {
        raise(ErrorCode::numeric_failure,
              format_msg("non-finite activation in %s layer %zu", stage, layer));
    }
}

}  // namespace

void validate(const NetworkArchitecture& arch) {
    if (arch.n < 1) raise(ErrorCode::invalid_argument, "network needs n >= 1");
    if (arch.latent_dim != arch.n) {
        raise(ErrorCode::invalid_argument, "latent dimension must equal n");
    }
    if (arch.hidden.empty()) raise(ErrorCode::invalid_argument, "decoder needs depth >= 1");
    for (uint32_t w : arch.hidden) {
        if (w < 1) raise(ErrorCode::invalid_argument, "hidden widths must be >= 1");
    }
}

uint64_t decoder_weight_count(const NetworkArchitecture& arch) {
    uint64_t total = uint64_t(arch.latent_dim) * arch.hidden.front();
    for (std::size_t i = 1; i < arch.hidden.size(); ++i) {
        total += uint64_t(arch.hidden[i - 1]) * arch.hidden[i];
    }
    total += uint64_t(arch.hidden.back()) * arch.n;
    return total;
}

uint64_t decoder_parameter_count(const NetworkArchitecture& arch) {
    uint64_t total = decoder_weight_count(arch);
    for (uint32_t w : arch.hidden) total += w;
    return total + arch.n;
}

ArchitectureChoice architecture_for(uint32_t n, uint32_t depth, double target_compression) {
    if (n < 1 || n > 32) raise(ErrorCode::invalid_argument, "architecture_for needs 1 <= n <= 32");
    if (depth < 1) raise(ErrorCode::invalid_argument, "architecture_for needs depth >= 1");
    if (!std::isfinite(target_compression) || target_compression <= 0.0) {
        raise(ErrorCode::invalid_argument, "compression factor must be positive and finite");
    }

    const uint64_t target = uint64_t(std::llround(target_compression * std::ldexp(1.0, int(n))));
    auto count_for = [&](uint64_t w) {
        // decoder entries at uniform width w:
        //   n*w + (depth-1)*w^2 + w*n weights, depth*w + n biases
        return 2 * uint64_t(n) * w + uint64_t(depth - 1) * w * w + uint64_t(depth) * w +
               uint64_t(n);
    };

    if (count_for(1) > target) {
        raise(ErrorCode::infeasible_compression,
              format_msg("no decoder fits: width-1 depth-%u network needs %llu parameters, "
                         "budget m* = %llu (n=%u, C=%g)",
                         depth, (unsigned long long)count_for(1), (unsigned long long)target, n,
                         target_compression));
    }
    uint64_t width = 1;
    while (count_for(width + 1) <= target) ++width;

    ArchitectureChoice choice;
    choice.target_parameters = target;
    choice.arch.n = n;
    choice.arch.latent_dim = n;
    choice.arch.hidden.assign(depth, uint32_t(width));
    if (width < n) {
        choice.warnings.push_back(
            format_msg("hidden width %llu is below n=%u; the narrow layer limits which "
                       "output patterns the decoder can represent",
                       (unsigned long long)width, n));
    }
    return choice;
}

namespace {

LinearLayer zero_layer(Eigen::Index rows, Eigen::Index cols) {
    return {Eigen::MatrixXd::Zero(rows, cols), Eigen::VectorXd::Zero(rows)};
}

}  // namespace

Parameters make_parameters(const NetworkArchitecture& arch) {
    validate(arch);
    Parameters p;
    Eigen::Index prev = arch.n;
    for (uint32_t w : arch.hidden) {
        p.encoder.push_back(zero_layer(w, prev));
        prev = w;
    }
    p.mu_head = zero_layer(arch.latent_dim, prev);
    p.logvar_head = zero_layer(arch.latent_dim, prev);
    prev = arch.latent_dim;
    for (uint32_t w : arch.hidden) {
        p.decoder.push_back(zero_layer(w, prev));
        prev = w;
    }
    p.output = zero_layer(arch.n, prev);
    return p;
}

Parameters zeros_like(const Parameters& reference) {
    Parameters p;
    auto zero_of = [](const LinearLayer& l) {
        return zero_layer(l.weight.rows(), l.weight.cols());
    };
    for (const auto& l : reference.encoder) p.encoder.push_back(zero_of(l));
    p.mu_head = zero_of(reference.mu_head);
    p.logvar_head = zero_of(reference.logvar_head);
    for (const auto& l : reference.decoder) p.decoder.push_back(zero_of(l));
    p.output = zero_of(reference.output);
    return p;
}

Parameters initialize_parameters(const NetworkArchitecture& arch, uint64_t seed) {
    Parameters p = make_parameters(arch);
    rng::Stream stream(seed, rng::stream_id(rng::Purpose::weight_init));
    auto fill = [&](Eigen::MatrixXd& w, double std_dev) {
        double* data = w.data();
        for (Eigen::Index i = 0; i < w.size(); ++i) data[i] = std_dev * stream.gaussian();
    };
    auto he = [](const Eigen::MatrixXd& w) { return std::sqrt(2.0 / double(w.cols())); };
    for (auto& l : p.encoder) fill(l.weight, he(l.weight));
    fill(p.mu_head.weight, he(p.mu_head.weight));
    fill(p.logvar_head.weight, 0.01);
    for (auto& l : p.decoder) fill(l.weight, he(l.weight));
    fill(p.output.weight, he(p.output.weight));
    return p;
}

namespace {

template <typename P, typename D>
std::vector<std::pair<D*, std::size_t>> views_impl(P& params) {
    std::vector<std::pair<D*, std::size_t>> out;
    auto add = [&](auto& layer) {
        out.emplace_back(layer.weight.data(), std::size_t(layer.weight.size()));
        out.emplace_back(layer.bias.data(), std::size_t(layer.bias.size()));
    };
    for (auto& l : params.encoder) add(l);
    add(params.mu_head);
    add(params.logvar_head);
    for (auto& l : params.decoder) add(l);
    add(params.output);
    return out;
}

}  // namespace

std::vector<std::pair<double*, std::size_t>> tensor_views(Parameters& params) {
    return views_impl<Parameters, double>(params);
}

std::vector<std::pair<const double*, std::size_t>> tensor_views(const Parameters& params) {
    return views_impl<const Parameters, const double>(params);
}

EncoderOutput encoder_forward(const Parameters& params, const Eigen::VectorXd& x) {
    Eigen::VectorXd h = x;
    for (std::size_t i = 0; i < params.encoder.size(); ++i) {
        h = (params.encoder[i].weight * h + params.encoder[i].bias).unaryExpr(&lrelu);
        check_finite(h, "encoder", i);
    }
    EncoderOutput out;
    out.mu = params.mu_head.weight * h + params.mu_head.bias;
    out.logvar = (params.logvar_head.weight * h + params.logvar_head.bias)
                     .cwiseMax(-kLogvarClamp)
                     .cwiseMin(kLogvarClamp);
    check_finite(out.mu, "encoder", params.encoder.size());
    check_finite(out.logvar, "encoder", params.encoder.size());
    return out;
}

Eigen::VectorXd decoder_forward(const Parameters& params, const Eigen::VectorXd& z) {
    Eigen::VectorXd h = z;
    for (std::size_t i = 0; i < params.decoder.size(); ++i) {
        h = (params.decoder[i].weight * h + params.decoder[i].bias).unaryExpr(&lrelu);
        check_finite(h, "decoder", i);
    }
    Eigen::VectorXd logits = params.output.weight * h + params.output.bias;
    check_finite(logits, "decoder", params.decoder.size());
    return logits
        .unaryExpr([](double a) { return 1.0 / (1.0 + std::exp(-a)); })
        .cwiseMax(kOutputClamp)
        .cwiseMin(1.0 - kOutputClamp);
}

double kl_divergence(const Eigen::VectorXd& mu, const Eigen::VectorXd& logvar) {
    return 0.5 * (mu.array().square() + logvar.array().exp() - 1.0 - logvar.array()).sum();
}

double bernoulli_nll(const Eigen::VectorXd& x, const Eigen::VectorXd& probs) {
    return -(x.array() * probs.array().log() +
             (1.0 - x.array()) * (1.0 - probs.array()).log())
                .sum();
}

LossBreakdown loss(const Parameters& params, const Eigen::VectorXd& x, const Eigen::VectorXd& eps,
                   double beta) {
    EncoderOutput enc = encoder_forward(params, x);
    Eigen::VectorXd z = reparameterize(enc.mu, enc.logvar, eps);
    Eigen::VectorXd probs = decoder_forward(params, z);
    LossBreakdown out;
    out.reconstruction = bernoulli_nll(x, probs);
    out.kl = kl_divergence(enc.mu, enc.logvar);
    out.total = out.reconstruction + beta * out.kl;
    return out;
}

namespace {

/// Per-sample activation cache sized once per batch.
struct Workspace {
    Eigen::VectorXd x;
    std::vector<Eigen::VectorXd> enc_pre;   // encoder pre-activations
    std::vector<Eigen::VectorXd> enc_act;   // enc_act[0] = x, then hidden outputs
    Eigen::VectorXd mu, logvar_raw, logvar, sigma, z;
    std::vector<Eigen::VectorXd> dec_pre;
    std::vector<Eigen::VectorXd> dec_act;   // dec_act[0] = z, then hidden outputs
    Eigen::VectorXd logits, probs;
    Eigen::VectorXd delta_out, delta, dmu, dlogvar;
};

Workspace make_workspace(const NetworkArchitecture& arch) {
    Workspace w;
    w.x.resize(arch.n);
    w.enc_act.push_back(Eigen::VectorXd::Zero(arch.n));
    for (uint32_t width : arch.hidden) {
        w.enc_pre.push_back(Eigen::VectorXd::Zero(width));
        w.enc_act.push_back(Eigen::VectorXd::Zero(width));
    }
    w.mu.resize(arch.latent_dim);
    w.logvar_raw.resize(arch.latent_dim);
    w.logvar.resize(arch.latent_dim);
    w.sigma.resize(arch.latent_dim);
    w.z.resize(arch.latent_dim);
    w.dec_act.push_back(Eigen::VectorXd::Zero(arch.latent_dim));
    for (uint32_t width : arch.hidden) {
        w.dec_pre.push_back(Eigen::VectorXd::Zero(width));
        w.dec_act.push_back(Eigen::VectorXd::Zero(width));
    }
    w.logits.resize(arch.n);
    w.probs.resize(arch.n);
    w.delta_out.resize(arch.n);
    w.dmu.resize(arch.latent_dim);
    w.dlogvar.resize(arch.latent_dim);
    return w;
}

}  // namespace

BatchGradient gradient(const Parameters& params, const NetworkArchitecture& arch,
                       const SampleBatch& batch, const Eigen::MatrixXd& eps, double beta) {
    validate(arch);
    if (batch.n_qubits != arch.n) {
        raise(ErrorCode::invalid_argument, "batch width does not match network input");
    }
    const Eigen::Index count = Eigen::Index(batch.indices.size());
    if (count < 1) raise(ErrorCode::invalid_argument, "gradient needs a non-empty batch");
    if (eps.rows() != Eigen::Index(arch.latent_dim) || eps.cols() != count) {
        raise(ErrorCode::invalid_argument, "latent noise shape does not match batch");
    }

    BatchGradient result;
    result.grads = zeros_like(params);
    Workspace w = make_workspace(arch);
    double loss_sum = 0.0;

    for (Eigen::Index s = 0; s < count; ++s) {
        for (uint32_t b = 1; b <= arch.n; ++b) w.x[b - 1] = double(batch.bit(std::size_t(s), b));

        w.enc_act[0] = w.x;
        for (std::size_t i = 0; i < params.encoder.size(); ++i) {
            w.enc_pre[i].noalias() = params.encoder[i].weight * w.enc_act[i];
            w.enc_pre[i] += params.encoder[i].bias;
            w.enc_act[i + 1] = w.enc_pre[i].unaryExpr(&lrelu);
        }
        const Eigen::VectorXd& henc = w.enc_act.back();
        w.mu.noalias() = params.mu_head.weight * henc;
        w.mu += params.mu_head.bias;
        w.logvar_raw.noalias() = params.logvar_head.weight * henc;
        w.logvar_raw += params.logvar_head.bias;
        w.logvar = w.logvar_raw.cwiseMax(-kLogvarClamp).cwiseMin(kLogvarClamp);
        w.sigma = (w.logvar.array() / 2.0).exp();
        w.z = w.mu.array() + w.sigma.array() * eps.col(s).array();

        w.dec_act[0] = w.z;
        for (std::size_t i = 0; i < params.decoder.size(); ++i) {
            w.dec_pre[i].noalias() = params.decoder[i].weight * w.dec_act[i];
            w.dec_pre[i] += params.decoder[i].bias;
            w.dec_act[i + 1] = w.dec_pre[i].unaryExpr(&lrelu);
        }
        w.logits.noalias() = params.output.weight * w.dec_act.back();
        w.logits += params.output.bias;
        w.probs = w.logits.unaryExpr([](double a) { return 1.0 / (1.0 + std::exp(-a)); });
        Eigen::VectorXd clamped =
            w.probs.cwiseMax(kOutputClamp).cwiseMin(1.0 - kOutputClamp);

        double nll = bernoulli_nll(w.x, clamped);
        double kl = kl_divergence(w.mu, w.logvar);
        double sample_loss = nll + beta * kl;
        if (!std::isfinite(sample_loss)) {
            raise(ErrorCode::numeric_failure, "non-finite loss during gradient pass");
        }
        loss_sum += sample_loss;

        // The clamp only guards the log evaluation; the backward pass uses the
        // exact Bernoulli NLL derivative d/dlogit = p - x.
        w.delta_out = w.probs - w.x;
        result.grads.output.weight.noalias() += w.delta_out * w.dec_act.back().transpose();
        result.grads.output.bias += w.delta_out;
        w.delta.noalias() = params.output.weight.transpose() * w.delta_out;

        for (std::size_t i = params.decoder.size(); i-- > 0;) {
            Eigen::VectorXd local = w.delta.cwiseProduct(w.dec_pre[i].unaryExpr(&lrelu_grad));
            result.grads.decoder[i].weight.noalias() += local * w.dec_act[i].transpose();
            result.grads.decoder[i].bias += local;
            w.delta.noalias() = params.decoder[i].weight.transpose() * local;
        }

        // w.delta now holds dL/dz.
        w.dmu = w.delta + beta * w.mu;
        w.dlogvar = (w.delta.array() * eps.col(s).array() * 0.5 * w.sigma.array() +
                     beta * 0.5 * (w.logvar.array().exp() - 1.0))
                        .matrix();
        for (Eigen::Index j = 0; j < w.dlogvar.size(); ++j) {
            if (w.logvar_raw[j] > kLogvarClamp || w.logvar_raw[j] < -kLogvarClamp) {
                w.dlogvar[j] = 0.0;
            }
        }

        result.grads.mu_head.weight.noalias() += w.dmu * henc.transpose();
        result.grads.mu_head.bias += w.dmu;
        result.grads.logvar_head.weight.noalias() += w.dlogvar * henc.transpose();
        result.grads.logvar_head.bias += w.dlogvar;

        w.delta.noalias() = params.mu_head.weight.transpose() * w.dmu;
        w.delta.noalias() += params.logvar_head.weight.transpose() * w.dlogvar;
        for (std::size_t i = params.encoder.size(); i-- > 0;) {
            Eigen::VectorXd local = w.delta.cwiseProduct(w.enc_pre[i].unaryExpr(&lrelu_grad));
            result.grads.encoder[i].weight.noalias() += local * w.enc_act[i].transpose();
            result.grads.encoder[i].bias += local;
            if (i > 0) w.delta.noalias() = params.encoder[i].weight.transpose() * local;
        }
    }

    const double inv = 1.0 / double(count);
    for (auto& [ptr, size] : tensor_views(result.grads)) {
        for (std::size_t i = 0; i < size; ++i) ptr[i] *= inv;
    }
    result.mean_loss = loss_sum * inv;
    return result;
}

}  // namespace qvae
