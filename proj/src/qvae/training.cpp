#include "qvae/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "qvae/error.hpp"
#include "qvae/rng.hpp"

namespace qvae {

void validate(const TrainingSchedule& schedule) {
    if (schedule.total_batches < 1) raise(ErrorCode::invalid_argument, "need total_batches >= 1");
    if (schedule.batch_size < 1) raise(ErrorCode::invalid_argument, "need batch_size >= 1");
    if (!(schedule.learning_rate > 0.0) || !std::isfinite(schedule.learning_rate)) {
        raise(ErrorCode::invalid_argument, "learning rate must be positive");
    }
    if (!(schedule.warmup_final_weight >= 0.0) || !std::isfinite(schedule.warmup_final_weight)) {
        raise(ErrorCode::invalid_argument, "warm-up final weight must be >= 0");
    }
    if (!(schedule.warmup_fraction >= 0.0) || schedule.warmup_fraction > 1.0) {
        raise(ErrorCode::invalid_argument, "warm-up fraction must lie in [0, 1]");
    }
    if (schedule.log_interval < 1) raise(ErrorCode::invalid_argument, "need log_interval >= 1");
}

double warmup_beta(const TrainingSchedule& schedule, uint64_t step) {
    const double ramp_steps = schedule.warmup_fraction * double(schedule.total_batches);
    if (ramp_steps <= 0.0) return schedule.warmup_final_weight;
    const double ramp = std::min(1.0, double(step) / ramp_steps);
    return schedule.warmup_final_weight * ramp;
}

AdamState make_adam_state(const Parameters& reference) {
    return {zeros_like(reference), zeros_like(reference), 0};
}

void adam_step(Parameters& params, const Parameters& grads, AdamState& state,
               double learning_rate, const AdamSettings& settings) {
    state.step += 1;
    const double bc1 = 1.0 - std::pow(settings.beta1, double(state.step));
    const double bc2 = 1.0 - std::pow(settings.beta2, double(state.step));

    auto p = tensor_views(params);
    auto g = tensor_views(grads);
    auto m = tensor_views(state.m);
    auto v = tensor_views(state.v);
    if (p.size() != g.size() || p.size() != m.size()) {
        raise(ErrorCode::invalid_argument, "adam_step tensors do not match");
    }
    for (std::size_t t = 0; t < p.size(); ++t) {
        if (p[t].second != g[t].second) {
            raise(ErrorCode::invalid_argument, "adam_step tensor shapes do not match");
        }
        double* pp = p[t].first;
        const double* gp = g[t].first;
        double* mp = m[t].first;
        double* vp = v[t].first;
        for (std::size_t i = 0; i < p[t].second; ++i) {
            mp[i] = settings.beta1 * mp[i] + (1.0 - settings.beta1) * gp[i];
            vp[i] = settings.beta2 * vp[i] + (1.0 - settings.beta2) * gp[i] * gp[i];
            const double mhat = mp[i] / bc1;
            const double vhat = vp[i] / bc2;
            pp[i] -= learning_rate * mhat / (std::sqrt(vhat) + settings.epsilon);
        }
    }
}

TrainedModel train(const ProbabilityTable& table, const NetworkArchitecture& arch,
                   const TrainingSchedule& schedule, uint64_t seed, TrainingLog* log) {
    validate(table);
    validate(arch);
    validate(schedule);
    if (table.n_qubits != arch.n) {
        raise(ErrorCode::invalid_argument, "table width does not match network input");
    }

    TrainedModel model;
    model.arch = arch;
    model.params = initialize_parameters(arch, seed);

    Sampler sampler(table, seed);
    AdamState adam = make_adam_state(model.params);
    Eigen::MatrixXd eps(arch.latent_dim, schedule.batch_size);

    const auto start = std::chrono::steady_clock::now();
    double last_loss = 0.0;
    for (uint64_t b = 0; b < schedule.total_batches; ++b) {
        SampleBatch batch = sampler.draw_batch(b, schedule.batch_size);
        rng::Stream noise(seed, rng::stream_id(rng::Purpose::latent_noise, b));
        for (Eigen::Index s = 0; s < eps.cols(); ++s) {
            for (Eigen::Index j = 0; j < eps.rows(); ++j) eps(j, s) = noise.gaussian();
        }
        const double beta = warmup_beta(schedule, b);

        BatchGradient grad;
        try {
            grad = gradient(model.params, arch, batch, eps, beta);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::numeric_failure) {
                char msg[192];
                std::snprintf(msg, sizeof(msg), "training step %llu: %s",
                              (unsigned long long)b, e.what());
                raise(ErrorCode::numeric_failure, msg);
            }
            throw;
        }
        adam_step(model.params, grad.grads, adam, schedule.learning_rate);
        last_loss = grad.mean_loss;

        if (log && (b % schedule.log_interval == 0 || b + 1 == schedule.total_batches)) {
            const double elapsed =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
            log->entries.push_back({b, grad.mean_loss, beta, elapsed});
        }
    }
    model.final_loss = last_loss;
    return model;
}

}  // namespace qvae
