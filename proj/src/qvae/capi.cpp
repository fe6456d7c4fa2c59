#include "qvae/qvae.h"

#include <json.hpp>

#include <cstring>
#include <new>
#include <string>

#include "qvae/error.hpp"
#include "qvae/evaluation.hpp"
#include "qvae/harness.hpp"
#include "qvae/io.hpp"
#include "qvae/version.hpp"

struct qv_table {
    qvae::ProbabilityTable value;
};

struct qv_model {
    qvae::TrainedModel value;
};

namespace {

thread_local std::string g_last_error;

qv_status status_of(qvae::ErrorCode code) {
    using qvae::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return QV_INVALID_ARGUMENT;
        case ErrorCode::resource_limit: return QV_RESOURCE_LIMIT;
        case ErrorCode::numeric_failure: return QV_NUMERIC_FAILURE;
        case ErrorCode::infeasible_compression: return QV_INFEASIBLE_COMPRESSION;
        case ErrorCode::io_error: return QV_IO_ERROR;
        case ErrorCode::cache_integrity: return QV_CACHE_INTEGRITY;
        case ErrorCode::internal: return QV_INTERNAL;
    }
    return QV_INTERNAL;
}

template <typename F>
qv_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return QV_OK;
    } catch (const qvae::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return QV_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QV_INTERNAL;
    }
}

qv_status fail_arg(const char* message) {
    g_last_error = message;
    return QV_INVALID_ARGUMENT;
}

struct TrainOptions {
    uint32_t depth = 1;
    double compression = 0.5;
    uint32_t width = 0;  // 0 = size from compression
    uint64_t seed = 1;
    qvae::TrainingSchedule schedule;
    std::string log_path;
};

TrainOptions parse_train_options(const char* options_json) {
    TrainOptions opts;
    if (!options_json || !*options_json) return opts;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(options_json);
    } catch (const nlohmann::json::exception& e) {
        qvae::raise(qvae::ErrorCode::invalid_argument,
                    std::string("bad training options JSON: ") + e.what());
    }
    if (!j.is_object()) {
        qvae::raise(qvae::ErrorCode::invalid_argument, "training options must be a JSON object");
    }
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "depth") opts.depth = value.get<uint32_t>();
            else if (key == "compression") opts.compression = value.get<double>();
            else if (key == "width") opts.width = value.get<uint32_t>();
            else if (key == "seed") opts.seed = value.get<uint64_t>();
            else if (key == "batches") opts.schedule.total_batches = value.get<uint64_t>();
            else if (key == "batch_size") opts.schedule.batch_size = value.get<uint32_t>();
            else if (key == "lr") opts.schedule.learning_rate = value.get<double>();
            else if (key == "warmup_final")
                opts.schedule.warmup_final_weight = value.get<double>();
            else if (key == "warmup_fraction")
                opts.schedule.warmup_fraction = value.get<double>();
            else if (key == "log_interval") opts.schedule.log_interval = value.get<uint64_t>();
            else if (key == "log_path") opts.log_path = value.get<std::string>();
            else
                qvae::raise(qvae::ErrorCode::invalid_argument,
                            "unknown training option: " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        qvae::raise(qvae::ErrorCode::invalid_argument,
                    std::string("bad training option value: ") + e.what());
    }
    return opts;
}

}  // namespace

extern "C" {

const char* qv_version(void) { return qvae::kVersion; }

const char* qv_last_error(void) { return g_last_error.c_str(); }

qv_status qv_table_generate(const char* family_json, const char* cache_dir, int threads,
                            qv_table** out) {
    if (!family_json || !out) return fail_arg("qv_table_generate: null argument");
    *out = nullptr;
    return guarded([&] {
        qvae::FamilySpec spec = qvae::family_spec_from_json(family_json);
        qvae::ProbabilityTable table = qvae::generate_state(
            spec, cache_dir ? std::string(cache_dir) : std::string(),
            threads > 0 ? uint32_t(threads) : 1);
        *out = new qv_table{std::move(table)};
    });
}

qv_status qv_table_load(const char* path, qv_table** out) {
    if (!path || !out) return fail_arg("qv_table_load: null argument");
    *out = nullptr;
    return guarded([&] { *out = new qv_table{qvae::load_table(path)}; });
}

qv_status qv_table_save(const qv_table* table, const char* path) {
    if (!table || !path) return fail_arg("qv_table_save: null argument");
    return guarded([&] { qvae::save_table(table->value, path); });
}

qv_status qv_table_save_csv(const qv_table* table, const char* path) {
    if (!table || !path) return fail_arg("qv_table_save_csv: null argument");
    return guarded([&] { qvae::save_table_csv(table->value, path); });
}

int qv_table_qubits(const qv_table* table) {
    return table ? int(table->value.n_qubits) : 0;
}

uint64_t qv_table_size(const qv_table* table) {
    return table ? uint64_t(table->value.probs.size()) : 0;
}

qv_status qv_table_probs(const qv_table* table, double* out, uint64_t capacity) {
    if (!table || !out) return fail_arg("qv_table_probs: null argument");
    if (capacity < table->value.probs.size()) {
        return fail_arg("qv_table_probs: buffer too small");
    }
    std::memcpy(out, table->value.probs.data(), table->value.probs.size() * sizeof(double));
    g_last_error.clear();
    return QV_OK;
}

void qv_table_free(qv_table* table) { delete table; }

qv_status qv_train(const qv_table* table, const char* options_json, qv_model** out) {
    if (!table || !out) return fail_arg("qv_train: null argument");
    *out = nullptr;
    return guarded([&] {
        TrainOptions opts = parse_train_options(options_json);
        qvae::NetworkArchitecture arch;
        const uint32_t n = table->value.n_qubits;
        if (opts.width > 0) {
            arch.n = n;
            arch.latent_dim = n;
            arch.hidden.assign(opts.depth, opts.width);
        } else {
            try {
                arch = qvae::architecture_for(n, opts.depth, opts.compression).arch;
            } catch (const qvae::Error& e) {
                if (e.code() != qvae::ErrorCode::infeasible_compression) throw;
                arch.n = n;
                arch.latent_dim = n;
                arch.hidden.assign(opts.depth, 1);
            }
        }
        qvae::TrainingLog log;
        qvae::TrainedModel model =
            qvae::train(table->value, arch, opts.schedule, opts.seed,
                        opts.log_path.empty() ? nullptr : &log);
        if (!opts.log_path.empty()) qvae::save_training_log(log, opts.log_path);
        *out = new qv_model{std::move(model)};
    });
}

qv_status qv_model_load(const char* path, qv_model** out) {
    if (!path || !out) return fail_arg("qv_model_load: null argument");
    *out = nullptr;
    return guarded([&] { *out = new qv_model{qvae::load_model(path)}; });
}

qv_status qv_model_save(const qv_model* model, const char* path) {
    if (!model || !path) return fail_arg("qv_model_save: null argument");
    return guarded([&] { qvae::save_model(model->value, path); });
}

qv_status qv_model_describe(const qv_model* model, char* buffer, uint64_t capacity) {
    if (!model || !buffer) return fail_arg("qv_model_describe: null argument");
    return guarded([&] {
        nlohmann::json j;
        j["n"] = model->value.arch.n;
        j["latent"] = model->value.arch.latent_dim;
        j["hidden"] = model->value.arch.hidden;
        j["m_weights"] = qvae::decoder_weight_count(model->value.arch);
        j["m_total"] = qvae::decoder_parameter_count(model->value.arch);
        const std::string text = j.dump();
        if (text.size() + 1 > capacity) {
            qvae::raise(qvae::ErrorCode::invalid_argument, "qv_model_describe: buffer too small");
        }
        std::memcpy(buffer, text.c_str(), text.size() + 1);
    });
}

qv_status qv_model_reconstruct(const qv_model* model, uint64_t sample_count, uint64_t seed,
                               qv_table** out) {
    if (!model || !out) return fail_arg("qv_model_reconstruct: null argument");
    *out = nullptr;
    return guarded([&] {
        const uint64_t samples = sample_count
                                     ? sample_count
                                     : qvae::default_reconstruction_samples(model->value.arch.n);
        *out = new qv_table{qvae::reconstruct_distribution(model->value, samples, seed)};
    });
}

void qv_model_free(qv_model* model) { delete model; }

qv_status qv_fidelity(const qv_table* p, const qv_table* q, double* out) {
    if (!p || !q || !out) return fail_arg("qv_fidelity: null argument");
    return guarded([&] { *out = qvae::fidelity(p->value, q->value); });
}

qv_status qv_noise_floor(const qv_table* table, uint64_t sample_count, uint64_t seed,
                         double* out) {
    if (!table || !out) return fail_arg("qv_noise_floor: null argument");
    return guarded([&] {
        const uint64_t samples =
            sample_count ? sample_count
                         : qvae::default_reconstruction_samples(table->value.n_qubits);
        *out = qvae::sampling_noise_floor(table->value, samples, seed);
    });
}

qv_status qv_run_depth_sweep(const char* config_json, const char* csv_path) {
    if (!config_json || !csv_path) return fail_arg("qv_run_depth_sweep: null argument");
    return guarded([&] {
        qvae::ExperimentConfig config = qvae::config_from_json(config_json);
        qvae::ExperimentResult result = qvae::run_depth_sweep(config);
        qvae::write_results_csv(result, csv_path);
    });
}

qv_status qv_run_compression_sweep(const char* config_json, const char* csv_path) {
    if (!config_json || !csv_path) return fail_arg("qv_run_compression_sweep: null argument");
    return guarded([&] {
        qvae::ExperimentConfig config = qvae::config_from_json(config_json);
        qvae::ExperimentResult result = qvae::run_compression_sweep(config);
        qvae::write_results_csv(result, csv_path);
    });
}

qv_status qv_summarize_csv(const char* results_csv, const char* summary_csv) {
    if (!results_csv || !summary_csv) return fail_arg("qv_summarize_csv: null argument");
    return guarded([&] {
        qvae::ExperimentResult result = qvae::read_results_csv(results_csv);
        qvae::write_summary_csv(qvae::summarize(result.rows), summary_csv);
    });
}

}  // extern "C"
