#ifndef QVAE_QVAE_H
#define QVAE_QVAE_H

#include <stdint.h>

#if defined(_WIN32)
#if defined(QVAE_BUILD)
#define QVAE_API __declspec(dllexport)
#else
#define QVAE_API __declspec(dllimport)
#endif
#else
#define QVAE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Probability table over n-qubit basis states and a trained generative model.
 * Both are opaque; every function returns a status code and reports details
 * through qv_last_error(). */
typedef struct qv_table qv_table;
typedef struct qv_model qv_model;

typedef enum qv_status {
    QV_OK = 0,
    QV_INVALID_ARGUMENT = 1,
    QV_RESOURCE_LIMIT = 2,
    QV_NUMERIC_FAILURE = 3,
    QV_INFEASIBLE_COMPRESSION = 4,
    QV_IO_ERROR = 5,
    QV_CACHE_INTEGRITY = 6,
    QV_INTERNAL = 7
} qv_status;

QVAE_API const char* qv_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
QVAE_API const char* qv_last_error(void);

/* family_json keys: "family" ("product" | "haar" | "hard" | "hamiltonian"),
 * "n", "hard_n", "hard_L", "time", "seed". With a non-empty cache_dir the
 * table is cached on disk and later calls reload identical bytes. */
QVAE_API qv_status qv_table_generate(const char* family_json, const char* cache_dir, int threads,
                                     qv_table** out);
QVAE_API qv_status qv_table_load(const char* path, qv_table** out);
QVAE_API qv_status qv_table_save(const qv_table* table, const char* path);
QVAE_API qv_status qv_table_save_csv(const qv_table* table, const char* path);
QVAE_API int qv_table_qubits(const qv_table* table);
QVAE_API uint64_t qv_table_size(const qv_table* table);
QVAE_API qv_status qv_table_probs(const qv_table* table, double* out, uint64_t capacity);
QVAE_API void qv_table_free(qv_table* table);

/* options_json keys (all optional): "depth", "compression", "width", "seed",
 * "batches", "batch_size", "lr", "warmup_final", "warmup_fraction",
 * "log_interval", "log_path". "width" overrides the compression-based sizing.
 * When the compression budget is below the smallest decoder, training falls
 * back to width 1. */
QVAE_API qv_status qv_train(const qv_table* table, const char* options_json, qv_model** out);
QVAE_API qv_status qv_model_load(const char* path, qv_model** out);
QVAE_API qv_status qv_model_save(const qv_model* model, const char* path);

/* Writes a JSON description ({"n":..,"latent":..,"hidden":[..],
 * "m_weights":..,"m_total":..}) into buffer; fails with
 * QV_INVALID_ARGUMENT if capacity is too small. */
QVAE_API qv_status qv_model_describe(const qv_model* model, char* buffer, uint64_t capacity);

/* Samples the generative model: z ~ N(0, I) through the decoder, then
 * per-bit Bernoulli draws; returns the empirical table. */
QVAE_API qv_status qv_model_reconstruct(const qv_model* model, uint64_t sample_count,
                                        uint64_t seed, qv_table** out);
QVAE_API void qv_model_free(qv_model* model);

/* Bhattacharyya overlap sum(sqrt(p q)). */
QVAE_API qv_status qv_fidelity(const qv_table* p, const qv_table* q, double* out);

/* Fidelity between the table and an empirical table of sample_count direct
 * draws; the level finite sampling alone imposes. */
QVAE_API qv_status qv_noise_floor(const qv_table* table, uint64_t sample_count, uint64_t seed,
                                  double* out);

/* config_json mirrors the experiment config (see the CLI's --config).
 * Results are written as CSV to csv_path. */
QVAE_API qv_status qv_run_depth_sweep(const char* config_json, const char* csv_path);
QVAE_API qv_status qv_run_compression_sweep(const char* config_json, const char* csv_path);

/* Aggregates a results CSV into per-(family, n, depth, C) mean/std rows. */
QVAE_API qv_status qv_summarize_csv(const char* results_csv, const char* summary_csv);

#ifdef __cplusplus
}
#endif

#endif /* QVAE_QVAE_H */
