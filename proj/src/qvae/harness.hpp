#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qvae/state.hpp"
#include "qvae/training.hpp"

namespace qvae {

enum class StateFamily { product, haar, hard, hamiltonian };

StateFamily family_from_string(const std::string& name);
const char* family_name(StateFamily family);

/// Everything needed to produce one source distribution. `seed` only matters
/// for the random families (product, haar); hard and hamiltonian tables are
/// deterministic and shared across seeds.
struct FamilySpec {
    StateFamily family = StateFamily::product;
    uint32_t n = 8;        // qubits for product / haar / hamiltonian
    uint32_t hard_n = 2;   // permutation size
    uint32_t hard_L = 4;   // phase root order
    double time = 20.0;    // evolution time
    uint64_t seed = 1;
};

uint32_t qubit_count(const FamilySpec& spec);

/// Canonical cache key; equal specs (up to don't-care fields) map to the same
/// string.
std::string canonical_key(const FamilySpec& spec);

/// Dispatches to the family generator. With a non-empty cache_dir the table is
/// stored as <cache_dir>/<family>-<fnv1a(key)>.qdst and later calls load the
/// identical bytes back.
ProbabilityTable generate_state(const FamilySpec& spec, const std::string& cache_dir,
                                uint32_t threads = 1);

struct ExperimentConfig {
    FamilySpec family;                  // family.seed unused; per-run seeds below
    std::vector<uint32_t> depths;       // depth sweep axis
    std::vector<double> compressions;   // compression sweep axis
    uint32_t fixed_depth = 1;           // held fixed during compression sweeps
    double fixed_compression = 0.5;     // held fixed during depth sweeps
    std::vector<uint64_t> seeds = {1};
    TrainingSchedule schedule;
    uint64_t reconstruction_samples = 0;  // 0 = 100 * 2^n
    std::string output_path;
    std::string cache_dir;
    uint32_t threads = 1;
};

void validate_sweep_axis(const std::vector<uint32_t>& values);
void validate_sweep_axis(const std::vector<double>& values);
void validate_common(const ExperimentConfig& config);

/// FNV-1a over the canonical config serialization; stable across runs.
std::string config_hash(const ExperimentConfig& config);

struct ResultRow {
    std::string family;
    uint32_t n = 0;
    uint32_t depth = 0;
    uint32_t width = 0;
    uint64_t m_weights = 0;
    uint64_t m_total = 0;
    double compression = 0.0;  // requested C; achieved count is in m_total
    uint64_t seed = 0;
    double fidelity = 0.0;
    double noise_floor = 0.0;
    double final_loss = 0.0;
    double elapsed_ms = 0.0;
};

struct ExperimentResult {
    std::string config_hash;
    std::vector<ResultRow> rows;
    std::vector<std::string> warnings;
};

/// One row per (depth, seed), sorted by (depth, seed). The parameter budget
/// m* = round(C * 2^n) is shared by every depth; width is re-solved per depth.
ExperimentResult run_depth_sweep(const ExperimentConfig& config);

/// One row per (compression, seed), sorted by (C, seed).
ExperimentResult run_compression_sweep(const ExperimentConfig& config);

/// Header `family,n,depth,width,m_weights,m_total,C,seed,fidelity,noise_floor,
/// final_loss,elapsed_ms`, preceded by `#` metadata comments (config hash,
/// code version, warnings). Failed runs carry NaN metric fields.
void write_results_csv(const ExperimentResult& result, const std::filesystem::path& path);
ExperimentResult read_results_csv(const std::filesystem::path& path);

struct SummaryRow {
    std::string family;
    uint32_t n = 0;
    uint32_t depth = 0;
    double compression = 0.0;
    uint64_t runs = 0;
    double fidelity_mean = 0.0;
    double fidelity_std = 0.0;  // sample standard deviation over seeds
    double noise_floor_mean = 0.0;
    double final_loss_mean = 0.0;
};

/// Groups rows by (family, n, depth, C) in row order; NaN rows are skipped.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

/// Parses a family description: family, n, hard_n, hard_L, time, seed.
FamilySpec family_spec_from_json(const std::string& json_text);

/// Parses the JSON mirror of ExperimentConfig. Recognized keys: family, n,
/// hard_n, hard_L, time, depths, compressions, depth, compression, seeds,
/// batches, batch_size, lr, warmup_final, warmup_fraction, log_interval,
/// reconstruction_samples, out, cache_dir, threads. Unknown keys are
/// rejected so typos fail loudly.
ExperimentConfig config_from_json(const std::string& json_text);

}  // namespace qvae
