#pragma once

#include <cstdint>
#include <vector>

#include "qvae/state.hpp"
#include "qvae/vae.hpp"

namespace qvae {

struct TrainingSchedule {
    uint64_t total_batches = 5000;
    uint32_t batch_size = 256;
    double learning_rate = 1e-3;
    double warmup_final_weight = 0.85;
    double warmup_fraction = 1.0;  // fraction of training spent ramping beta up
    uint64_t log_interval = 100;
};

void validate(const TrainingSchedule& schedule);

/// Linear warm-up: beta rises from 0 to the final weight over the first
/// warmup_fraction of the batches, then stays flat.
double warmup_beta(const TrainingSchedule& schedule, uint64_t step);

struct AdamSettings {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    Parameters m;
    Parameters v;
    uint64_t step = 0;
};

AdamState make_adam_state(const Parameters& reference);

/// One bias-corrected Adam update, applied in place.
void adam_step(Parameters& params, const Parameters& grads, AdamState& state,
               double learning_rate, const AdamSettings& settings = {});

struct TrainingLogEntry {
    uint64_t step = 0;
    double loss = 0.0;
    double beta = 0.0;
    double elapsed_ms = 0.0;
};

struct TrainingLog {
    std::vector<TrainingLogEntry> entries;
};

struct TrainedModel {
    NetworkArchitecture arch;
    Parameters params;
    double final_loss = 0.0;
};

/// Runs the full schedule against samples drawn from `table`. Every random
/// draw (weights, batches, latent noise) is keyed off `seed`, so repeat calls
/// produce bit-identical models.
TrainedModel train(const ProbabilityTable& table, const NetworkArchitecture& arch,
                   const TrainingSchedule& schedule, uint64_t seed, TrainingLog* log = nullptr);

}  // namespace qvae
