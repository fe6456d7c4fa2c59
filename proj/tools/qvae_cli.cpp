#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "qvae/qvae.h"

namespace {

using nlohmann::json;

struct CommonFlags {
    std::string family = "product";
    unsigned n = 8;
    unsigned hard_n = 2;
    unsigned hard_L = 4;
    double time = 20.0;
    std::vector<unsigned> depths;
    std::vector<double> compressions;
    std::vector<unsigned long long> seeds;
    unsigned long long batches = 0;
    unsigned batch_size = 0;
    double lr = 0.0;
    double warmup_final = -1.0;
    unsigned long long samples = 0;
    std::string config_path;
    std::string out;
    std::string cache_dir;
    unsigned threads = 1;
};

void add_family_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--family", f.family, "State family: product | haar | hard | hamiltonian");
    cmd->add_option("--n", f.n, "Qubit count (product / haar / hamiltonian)");
    cmd->add_option("--hard-n", f.hard_n, "Hard-state permutation size");
    cmd->add_option("--hard-L", f.hard_L, "Hard-state phase root order (power of two)");
    cmd->add_option("--time", f.time, "Hamiltonian evolution time");
}

void add_run_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--seeds", f.seeds, "Seeds (comma separated)")->delimiter(',');
    cmd->add_option("--batches", f.batches, "Training batches");
    cmd->add_option("--batch-size", f.batch_size, "Samples per batch");
    cmd->add_option("--lr", f.lr, "Adam learning rate");
    cmd->add_option("--warmup-final", f.warmup_final, "Final KL weight of the warm-up");
    cmd->add_option("--samples", f.samples, "Reconstruction sample count (default 100 * 2^n)");
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its values");
    cmd->add_option("--cache-dir", f.cache_dir,
                    "Distribution cache directory (default $QVAE_CACHE_DIR)");
    cmd->add_option("--threads", f.threads, "Worker threads");
}

std::string effective_cache_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QVAE_CACHE_DIR")) return env;
    return "";
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::FILE* file = std::fopen(path.c_str(), "rb");
    if (!file) {
        std::fprintf(stderr, "error: cannot open config %s\n", path.c_str());
        std::exit(1);
    }
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), file)) > 0) text.append(buf, got);
    std::fclose(file);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        std::fprintf(stderr, "error: %s is not a JSON object\n", path.c_str());
        std::exit(1);
    }
    return j;
}

/// Flags the user actually passed override config-file values.
json merged_config(const CLI::App* cmd, const CommonFlags& f) {
    json j = load_config_file(f.config_path);
    auto passed = [&](const char* name) { return cmd->count(name) > 0; };
    if (passed("--family") || !j.contains("family")) j["family"] = f.family;
    if (passed("--n") || !j.contains("n")) j["n"] = f.n;
    if (passed("--hard-n")) j["hard_n"] = f.hard_n;
    if (passed("--hard-L")) j["hard_L"] = f.hard_L;
    if (passed("--time")) j["time"] = f.time;
    if (passed("--seeds")) j["seeds"] = f.seeds;
    if (passed("--batches")) j["batches"] = f.batches;
    if (passed("--batch-size")) j["batch_size"] = f.batch_size;
    if (passed("--lr")) j["lr"] = f.lr;
    if (passed("--warmup-final")) j["warmup_final"] = f.warmup_final;
    if (passed("--samples")) j["reconstruction_samples"] = f.samples;
    if (passed("--threads") || !j.contains("threads")) j["threads"] = f.threads;
    const std::string cache = effective_cache_dir(
        passed("--cache-dir") ? f.cache_dir
                              : (j.contains("cache_dir") ? j["cache_dir"].get<std::string>() : ""));
    if (!cache.empty()) j["cache_dir"] = cache;
    else j.erase("cache_dir");
    return j;
}

json family_json(const json& config, unsigned long long seed) {
    json j;
    j["family"] = config.value("family", "product");
    if (config.contains("n")) j["n"] = config["n"];
    if (config.contains("hard_n")) j["hard_n"] = config["hard_n"];
    if (config.contains("hard_L")) j["hard_L"] = config["hard_L"];
    if (config.contains("time")) j["time"] = config["time"];
    j["seed"] = seed;
    return j;
}

int fail(qv_status status, const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, qv_last_error());
    return int(status);
}

bool ends_with(const std::string& text, const std::string& suffix) {
    return text.size() >= suffix.size() &&
           text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int save_table_auto(const qv_table* table, const std::string& path) {
    const qv_status status = ends_with(path, ".csv") ? qv_table_save_csv(table, path.c_str())
                                                     : qv_table_save(table, path.c_str());
    if (status != QV_OK) return fail(status, "saving table");
    return 0;
}

unsigned long long first_seed(const json& config) {
    if (config.contains("seeds") && config["seeds"].is_array() && !config["seeds"].empty()) {
        return config["seeds"][0].get<unsigned long long>();
    }
    return 1;
}

int cmd_generate(const CLI::App* cmd, const CommonFlags& f) {
    const json config = merged_config(cmd, f);
    const std::string cache = config.value("cache_dir", "");
    qv_table* table = nullptr;
    const qv_status status =
        qv_table_generate(family_json(config, first_seed(config)).dump().c_str(),
                          cache.empty() ? nullptr : cache.c_str(),
                          int(config.value("threads", 1u)), &table);
    if (status != QV_OK) return fail(status, "generating distribution");
    const int rc = save_table_auto(table, f.out);
    if (rc == 0) {
        std::printf("wrote %s (%d qubits, %llu entries)\n", f.out.c_str(),
                    qv_table_qubits(table), (unsigned long long)qv_table_size(table));
    }
    qv_table_free(table);
    return rc;
}

int cmd_train(const CLI::App* cmd, const CommonFlags& f, const std::string& log_path) {
    const json config = merged_config(cmd, f);
    const std::string cache = config.value("cache_dir", "");
    const unsigned long long seed = first_seed(config);

    qv_table* table = nullptr;
    qv_status status = qv_table_generate(family_json(config, seed).dump().c_str(),
                                         cache.empty() ? nullptr : cache.c_str(),
                                         int(config.value("threads", 1u)), &table);
    if (status != QV_OK) return fail(status, "generating distribution");

    json options;
    options["depth"] = f.depths.empty() ? 1u : f.depths.front();
    options["compression"] = f.compressions.empty() ? 0.5 : f.compressions.front();
    options["seed"] = seed;
    if (config.contains("batches")) options["batches"] = config["batches"];
    if (config.contains("batch_size")) options["batch_size"] = config["batch_size"];
    if (config.contains("lr")) options["lr"] = config["lr"];
    if (config.contains("warmup_final")) options["warmup_final"] = config["warmup_final"];
    if (!log_path.empty()) options["log_path"] = log_path;

    qv_model* model = nullptr;
    status = qv_train(table, options.dump().c_str(), &model);
    if (status != QV_OK) {
        qv_table_free(table);
        return fail(status, "training");
    }
    status = qv_model_save(model, f.out.c_str());
    if (status != QV_OK) {
        qv_model_free(model);
        qv_table_free(table);
        return fail(status, "saving model");
    }
    char describe[512];
    if (qv_model_describe(model, describe, sizeof(describe)) == QV_OK) {
        std::printf("wrote %s %s\n", f.out.c_str(), describe);
    }
    qv_model_free(model);
    qv_table_free(table);
    return 0;
}

int cmd_evaluate(const CLI::App* cmd, const CommonFlags& f, const std::string& model_path,
                 const std::string& table_path) {
    const json config = merged_config(cmd, f);
    const std::string cache = config.value("cache_dir", "");
    const unsigned long long seed = first_seed(config);

    qv_model* model = nullptr;
    qv_status status = qv_model_load(model_path.c_str(), &model);
    if (status != QV_OK) return fail(status, "loading model");

    qv_table* reference = nullptr;
    if (!table_path.empty()) {
        status = qv_table_load(table_path.c_str(), &reference);
    } else {
        status = qv_table_generate(family_json(config, seed).dump().c_str(),
                                   cache.empty() ? nullptr : cache.c_str(),
                                   int(config.value("threads", 1u)), &reference);
    }
    if (status != QV_OK) {
        qv_model_free(model);
        return fail(status, "loading reference distribution");
    }

    const unsigned long long samples = config.value("reconstruction_samples", 0ull);
    qv_table* recon = nullptr;
    status = qv_model_reconstruct(model, samples, seed, &recon);
    if (status != QV_OK) {
        qv_table_free(reference);
        qv_model_free(model);
        return fail(status, "reconstructing");
    }

    double fid = 0.0, floor = 0.0;
    status = qv_fidelity(reference, recon, &fid);
    if (status == QV_OK) status = qv_noise_floor(reference, samples, seed, &floor);
    int rc = 0;
    if (status != QV_OK) {
        rc = fail(status, "scoring");
    } else {
        std::printf("fidelity=%.6f noise_floor=%.6f\n", fid, floor);
        if (!f.out.empty()) rc = save_table_auto(recon, f.out);
    }
    qv_table_free(recon);
    qv_table_free(reference);
    qv_model_free(model);
    return rc;
}

int cmd_sweep(const CLI::App* cmd, const CommonFlags& f, bool depth_sweep) {
    json config = merged_config(cmd, f);
    if (depth_sweep) {
        if (cmd->count("--depths") || !config.contains("depths")) config["depths"] = f.depths;
        if (cmd->count("--compressions")) {
            config["compression"] = f.compressions.empty() ? 0.5 : f.compressions.front();
        }
    } else {
        if (cmd->count("--compressions") || !config.contains("compressions")) {
            config["compressions"] = f.compressions;
        }
        if (cmd->count("--depths")) {
            config["depth"] = f.depths.empty() ? 1u : f.depths.front();
        }
    }
    config.erase("out");
    const qv_status status =
        depth_sweep ? qv_run_depth_sweep(config.dump().c_str(), f.out.c_str())
                    : qv_run_compression_sweep(config.dump().c_str(), f.out.c_str());
    if (status != QV_OK) return fail(status, depth_sweep ? "depth sweep" : "compression sweep");
    std::printf("wrote %s\n", f.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-distribution VAE toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", qv_version());

    CommonFlags f;
    std::string log_path, model_path, table_path, results_in;

    CLI::App* generate = app.add_subcommand("generate", "Generate a source distribution");
    add_family_flags(generate, f);
    add_run_flags(generate, f);
    generate->add_option("--out", f.out, "Output .qdst (or .csv) path")->required();

    CLI::App* train = app.add_subcommand("train", "Train a model on one distribution");
    add_family_flags(train, f);
    add_run_flags(train, f);
    train->add_option("--depths", f.depths, "Decoder depth (first value)")->delimiter(',');
    train->add_option("--compressions", f.compressions, "Compression C (first value)")
        ->delimiter(',');
    train->add_option("--out", f.out, "Output model path")->required();
    train->add_option("--log", log_path, "Training log CSV path");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Score a trained model");
    add_family_flags(evaluate, f);
    add_run_flags(evaluate, f);
    evaluate->add_option("--model", model_path, "Model file")->required();
    evaluate->add_option("--table", table_path, "Reference .qdst (instead of --family)");
    evaluate->add_option("--out", f.out, "Optional reconstruction table output");

    CLI::App* sweep_depth = app.add_subcommand("sweep-depth", "Fidelity vs decoder depth");
    add_family_flags(sweep_depth, f);
    add_run_flags(sweep_depth, f);
    sweep_depth->add_option("--depths", f.depths, "Depth list")->delimiter(',');
    sweep_depth->add_option("--compressions", f.compressions, "Fixed C (first value)")
        ->delimiter(',');
    sweep_depth->add_option("--out", f.out, "Results CSV path")->required();

    CLI::App* sweep_comp = app.add_subcommand("sweep-compression", "Fidelity vs compression");
    add_family_flags(sweep_comp, f);
    add_run_flags(sweep_comp, f);
    sweep_comp->add_option("--compressions", f.compressions, "Compression list")->delimiter(',');
    sweep_comp->add_option("--depths", f.depths, "Fixed depth (first value)")->delimiter(',');
    sweep_comp->add_option("--out", f.out, "Results CSV path")->required();

    CLI::App* summarize = app.add_subcommand("summarize", "Aggregate a results CSV");
    summarize->add_option("--in", results_in, "Results CSV")->required();
    summarize->add_option("--out", f.out, "Summary CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) return cmd_generate(generate, f);
    if (train->parsed()) return cmd_train(train, f, log_path);
    if (evaluate->parsed()) return cmd_evaluate(evaluate, f, model_path, table_path);
    if (sweep_depth->parsed()) return cmd_sweep(sweep_depth, f, true);
    if (sweep_comp->parsed()) return cmd_sweep(sweep_comp, f, false);
    if (summarize->parsed()) {
        const qv_status status = qv_summarize_csv(results_in.c_str(), f.out.c_str());
        if (status != QV_OK) return fail(status, "summarize");
        std::printf("wrote %s\n", f.out.c_str());
        return 0;
    }
    return 0;
}
