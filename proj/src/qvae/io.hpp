#pragma once

#include <filesystem>
#include <string>

#include "qvae/state.hpp"
#include "qvae/training.hpp"

namespace qvae {

/// Binary table format: magic "QDST", u8 version (1), u8 n_qubits, then 2^n
/// IEEE-754 float64 little-endian probabilities in basis order.
void save_table(const ProbabilityTable& table, const std::filesystem::path& path);
ProbabilityTable load_table(const std::filesystem::path& path);

/// CSV export with header `index,bitstring,probability`.
void save_table_csv(const ProbabilityTable& table, const std::filesystem::path& path);

/// Checkpoint format: magic "QVAE", u8 version (1), u32 n, u32 latent_dim,
/// u32 hidden layer count, u32 widths, then float64 little-endian weight/bias
/// arrays in declaration order (encoder stack, mu head, logvar head, decoder
/// stack, output layer; column-major within each matrix).
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

/// CSV with header `step,loss,beta,elapsed_ms`.
void save_training_log(const TrainingLog& log, const std::filesystem::path& path);

}  // namespace qvae
