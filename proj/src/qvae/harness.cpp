#include "qvae/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <thread>

#include "qvae/error.hpp"
#include "qvae/evaluation.hpp"
#include "qvae/evolve.hpp"
#include "qvae/hard.hpp"
#include "qvae/io.hpp"
#include "qvae/version.hpp"

namespace qvae {
namespace {

uint64_t fnv1a64(const std::string& text) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex16(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
    return buf;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

StateFamily family_from_string(const std::string& name) {
    if (name == "product") return StateFamily::product;
    if (name == "haar") return StateFamily::haar;
    if (name == "hard") return StateFamily::hard;
    if (name == "hamiltonian") return StateFamily::hamiltonian;
    raise(ErrorCode::invalid_argument, "unknown state family: " + name);
}

const char* family_name(StateFamily family) {
    switch (family) {
        case StateFamily::product: return "product";
        case StateFamily::haar: return "haar";
        case StateFamily::hard: return "hard";
        case StateFamily::hamiltonian: return "hamiltonian";
    }
    raise(ErrorCode::internal, "bad family enum");
}

uint32_t qubit_count(const FamilySpec& spec) {
    if (spec.family == StateFamily::hard) {
        return HardSpec{spec.hard_n, spec.hard_L}.qubit_count();
    }
    return spec.n;
}

std::string canonical_key(const FamilySpec& spec) {
    switch (spec.family) {
        case StateFamily::product:
        case StateFamily::haar:
            return std::string("family=") + family_name(spec.family) +
                   ";n=" + std::to_string(spec.n) + ";seed=" + std::to_string(spec.seed);
        case StateFamily::hard:
            return "family=hard;n=" + std::to_string(spec.hard_n) +
                   ";L=" + std::to_string(spec.hard_L);
        case StateFamily::hamiltonian:
            return "family=hamiltonian;n=" + std::to_string(spec.n) + ";t=" + fmt_double(spec.time) +
                   ";alpha=" + fmt_double(0.75);
    }
    raise(ErrorCode::internal, "bad family enum");
}

namespace {

ProbabilityTable generate_fresh(const FamilySpec& spec, uint32_t threads) {
    switch (spec.family) {
        case StateFamily::product:
            return probabilities(product_random_state(spec.n, spec.seed));
        case StateFamily::haar:
            return probabilities(haar_random_state(spec.n, spec.seed));
        case StateFamily::hard:
            return hard_distribution(HardSpec{spec.hard_n, spec.hard_L}, threads);
        case StateFamily::hamiltonian: {
            HamiltonianSpec h;
            h.n_qubits = spec.n;
            h.time = spec.time;
            return probabilities(evolve_long_range(h, threads));
        }
    }
    raise(ErrorCode::internal, "bad family enum");
}

}  // namespace

ProbabilityTable generate_state(const FamilySpec& spec, const std::string& cache_dir,
                                uint32_t threads) {
    if (cache_dir.empty()) return generate_fresh(spec, threads);

    const std::string key = canonical_key(spec);
    const std::filesystem::path dir(cache_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(ErrorCode::io_error, "cannot create cache dir " + dir.string());
    const std::filesystem::path file =
        dir / (std::string(family_name(spec.family)) + "-" + hex16(fnv1a64(key)) + ".qdst");

    if (std::filesystem::exists(file)) {
        ProbabilityTable table = load_table(file);
        if (table.n_qubits != qubit_count(spec)) {
            raise(ErrorCode::cache_integrity,
                  "cached table " + file.string() + " does not match requested parameters");
        }
        return table;
    }
    ProbabilityTable table = generate_fresh(spec, threads);
    save_table(table, file);
    return table;
}

void validate_sweep_axis(const std::vector<uint32_t>& values) {
    if (values.empty()) raise(ErrorCode::invalid_argument, "sweep axis must be non-empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= values[i - 1]) {
            raise(ErrorCode::invalid_argument, "sweep axis must be strictly increasing");
        }
    }
}

void validate_sweep_axis(const std::vector<double>& values) {
    if (values.empty()) raise(ErrorCode::invalid_argument, "sweep axis must be non-empty");
    for (double v : values) {
        if (!std::isfinite(v) || v <= 0.0) {
            raise(ErrorCode::invalid_argument, "sweep values must be positive and finite");
        }
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= values[i - 1]) {
            raise(ErrorCode::invalid_argument, "sweep axis must be strictly increasing");
        }
    }
}

void validate_common(const ExperimentConfig& config) {
    if (config.seeds.empty()) raise(ErrorCode::invalid_argument, "need at least one seed");
    std::set<uint64_t> unique(config.seeds.begin(), config.seeds.end());
    if (unique.size() != config.seeds.size()) {
        raise(ErrorCode::invalid_argument, "seeds must be distinct");
    }
    if (config.threads < 1) raise(ErrorCode::invalid_argument, "need threads >= 1");
    validate(config.schedule);
}

std::string config_hash(const ExperimentConfig& config) {
    FamilySpec base = config.family;
    base.seed = 0;  // per-run seeds are listed separately
    std::string text = canonical_key(base);
    auto append = [&](const char* name, const std::string& value) {
        text += ";";
        text += name;
        text += "=";
        text += value;
    };
    std::string depths, compressions, seeds;
    for (uint32_t d : config.depths) depths += std::to_string(d) + " ";
    for (double c : config.compressions) compressions += fmt_double(c) + " ";
    for (uint64_t s : config.seeds) seeds += std::to_string(s) + " ";
    append("depths", depths);
    append("compressions", compressions);
    append("depth", std::to_string(config.fixed_depth));
    append("compression", fmt_double(config.fixed_compression));
    append("seeds", seeds);
    append("batches", std::to_string(config.schedule.total_batches));
    append("batch_size", std::to_string(config.schedule.batch_size));
    append("lr", fmt_double(config.schedule.learning_rate));
    append("warmup_final", fmt_double(config.schedule.warmup_final_weight));
    append("warmup_fraction", fmt_double(config.schedule.warmup_fraction));
    append("samples", std::to_string(config.reconstruction_samples));
    return hex16(fnv1a64(text));
}

namespace {

struct RunTask {
    const ProbabilityTable* table = nullptr;
    uint32_t depth = 0;
    double compression = 0.0;
    uint64_t seed = 0;
};

ResultRow run_single(const ExperimentConfig& config, const RunTask& task,
                     std::vector<std::string>& warnings) {
    ResultRow row;
    row.family = family_name(config.family.family);
    row.n = task.table->n_qubits;
    row.depth = task.depth;
    row.compression = task.compression;
    row.seed = task.seed;
    row.fidelity = std::nan("");
    row.noise_floor = std::nan("");
    row.final_loss = std::nan("");

    char buf[256];
    try {
        ArchitectureChoice choice;
        try {
            choice = architecture_for(row.n, task.depth, task.compression);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::infeasible_compression) throw;
            // Budget below the smallest possible decoder: fall back to width 1
            // so the run still produces a trained row; achieved m is reported.
            choice.arch.n = row.n;
            choice.arch.latent_dim = row.n;
            choice.arch.hidden.assign(task.depth, 1);
            choice.target_parameters = uint64_t(std::llround(
                task.compression * std::ldexp(1.0, int(row.n))));
            std::snprintf(buf, sizeof(buf),
                          "seed %llu depth %u C=%g: budget m*=%llu below minimum; using width 1",
                          (unsigned long long)task.seed, task.depth, task.compression,
                          (unsigned long long)choice.target_parameters);
            warnings.push_back(buf);
        }
        for (const std::string& w : choice.warnings) {
            std::snprintf(buf, sizeof(buf), "seed %llu depth %u C=%g: %s",
                          (unsigned long long)task.seed, task.depth, task.compression, w.c_str());
            warnings.push_back(buf);
        }
        row.width = choice.arch.hidden.front();
        row.m_weights = decoder_weight_count(choice.arch);
        row.m_total = decoder_parameter_count(choice.arch);

        const auto start = std::chrono::steady_clock::now();
        TrainedModel model = train(*task.table, choice.arch, config.schedule, task.seed);
        row.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        row.final_loss = model.final_loss;

        const uint64_t samples = config.reconstruction_samples
                                     ? config.reconstruction_samples
                                     : default_reconstruction_samples(row.n);
        ProbabilityTable recon = reconstruct_distribution(model, samples, task.seed);
        row.fidelity = fidelity(*task.table, recon);
        row.noise_floor = sampling_noise_floor(*task.table, samples, task.seed);
    } catch (const Error& e) {
        std::snprintf(buf, sizeof(buf), "seed %llu depth %u C=%g failed: %s",
                      (unsigned long long)task.seed, task.depth, task.compression, e.what());
        warnings.push_back(buf);
    }
    return row;
}

ExperimentResult run_tasks(const ExperimentConfig& config, const std::vector<RunTask>& tasks) {
    ExperimentResult result;
    result.config_hash = config_hash(config);
    result.rows.resize(tasks.size());
    std::vector<std::vector<std::string>> warnings(tasks.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            result.rows[i] = run_single(config, tasks[i], warnings[i]);
        }
    };
    if (config.threads <= 1 || tasks.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const std::size_t count = std::min<std::size_t>(config.threads, tasks.size());
        pool.reserve(count);
        for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& list : warnings) {
        for (auto& w : list) result.warnings.push_back(std::move(w));
    }
    std::sort(result.rows.begin(), result.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        if (a.compression != b.compression) return a.compression < b.compression;
        return a.seed < b.seed;
    });
    return result;
}

/// Tables are generated up front (serially, warming the cache) so parallel
/// workers never race on cache files.
std::vector<ProbabilityTable> tables_per_seed(const ExperimentConfig& config) {
    std::vector<ProbabilityTable> tables;
    tables.reserve(config.seeds.size());
    for (uint64_t seed : config.seeds) {
        FamilySpec spec = config.family;
        spec.seed = seed;
        tables.push_back(generate_state(spec, config.cache_dir, config.threads));
    }
    return tables;
}

}  // namespace

ExperimentResult run_depth_sweep(const ExperimentConfig& config) {
    validate_common(config);
    validate_sweep_axis(config.depths);
    if (!std::isfinite(config.fixed_compression) || config.fixed_compression <= 0.0) {
        raise(ErrorCode::invalid_argument, "fixed compression must be positive");
    }
    std::vector<ProbabilityTable> tables = tables_per_seed(config);

    std::vector<RunTask> tasks;
    for (uint32_t depth : config.depths) {
        for (std::size_t s = 0; s < config.seeds.size(); ++s) {
            tasks.push_back({&tables[s], depth, config.fixed_compression, config.seeds[s]});
        }
    }
    return run_tasks(config, tasks);
}

ExperimentResult run_compression_sweep(const ExperimentConfig& config) {
    validate_common(config);
    validate_sweep_axis(config.compressions);
    if (config.fixed_depth < 1) raise(ErrorCode::invalid_argument, "fixed depth must be >= 1");
    std::vector<ProbabilityTable> tables = tables_per_seed(config);

    std::vector<RunTask> tasks;
    for (double compression : config.compressions) {
        for (std::size_t s = 0; s < config.seeds.size(); ++s) {
            tasks.push_back({&tables[s], config.fixed_depth, compression, config.seeds[s]});
        }
    }
    return run_tasks(config, tasks);
}

void write_results_csv(const ExperimentResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::io_error, "cannot write " + path.string());
    out << "# config_hash=" << result.config_hash << "\n";
    out << "# version=" << kVersion << "\n";
    for (const std::string& w : result.warnings) out << "# warning=" << w << "\n";
    out << "family,n,depth,width,m_weights,m_total,C,seed,fidelity,noise_floor,final_loss,"
           "elapsed_ms\n";
    char line[512];
    for (const ResultRow& r : result.rows) {
        std::snprintf(line, sizeof(line), "%s,%u,%u,%u,%llu,%llu,%.17g,%llu,%.17g,%.17g,%.17g,%.17g\n",
                      r.family.c_str(), r.n, r.depth, r.width, (unsigned long long)r.m_weights,
                      (unsigned long long)r.m_total, r.compression, (unsigned long long)r.seed,
                      r.fidelity, r.noise_floor, r.final_loss, r.elapsed_ms);
        out << line;
    }
    out.flush();
    if (!out) raise(ErrorCode::io_error, "write failed: " + path.string());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

ExperimentResult read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::io_error, "cannot open " + path.string());
    ExperimentResult result;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# config_hash=", 0) == 0) {
                result.config_hash = line.substr(std::strlen("# config_hash="));
            } else if (line.rfind("# warning=", 0) == 0) {
                result.warnings.push_back(line.substr(std::strlen("# warning=")));
            }
            continue;
        }
        if (!header_seen) {
            if (line !=
                "family,n,depth,width,m_weights,m_total,C,seed,fidelity,noise_floor,final_loss,"
                "elapsed_ms") {
                raise(ErrorCode::io_error, "unexpected results header in " + path.string());
            }
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 12) raise(ErrorCode::io_error, "malformed results row in " + path.string());
        ResultRow r;
        r.family = f[0];
        r.n = uint32_t(std::stoul(f[1]));
        r.depth = uint32_t(std::stoul(f[2]));
        r.width = uint32_t(std::stoul(f[3]));
        r.m_weights = std::stoull(f[4]);
        r.m_total = std::stoull(f[5]);
        r.compression = std::strtod(f[6].c_str(), nullptr);
        r.seed = std::stoull(f[7]);
        r.fidelity = std::strtod(f[8].c_str(), nullptr);
        r.noise_floor = std::strtod(f[9].c_str(), nullptr);
        r.final_loss = std::strtod(f[10].c_str(), nullptr);
        r.elapsed_ms = std::strtod(f[11].c_str(), nullptr);
        result.rows.push_back(std::move(r));
    }
    if (!header_seen) raise(ErrorCode::io_error, "no header in " + path.string());
    return result;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    std::vector<SummaryRow> out;
    auto find = [&](const ResultRow& r) -> SummaryRow& {
        for (SummaryRow& s : out) {
            if (s.family == r.family && s.n == r.n && s.depth == r.depth &&
                s.compression == r.compression) {
                return s;
            }
        }
        out.push_back({r.family, r.n, r.depth, r.compression, 0, 0.0, 0.0, 0.0, 0.0});
        return out.back();
    };
    struct Acc {
        std::vector<double> fid;
        double noise = 0.0;
        double loss = 0.0;
    };
    std::vector<Acc> accs;
    for (const ResultRow& r : rows) {
        if (std::isnan(r.fidelity)) continue;
        SummaryRow& s = find(r);
        const std::size_t idx = std::size_t(&s - out.data());
        if (accs.size() < out.size()) accs.resize(out.size());
        accs[idx].fid.push_back(r.fidelity);
        accs[idx].noise += r.noise_floor;
        accs[idx].loss += r.final_loss;
        s.runs += 1;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double count = double(out[i].runs);
        double mean = 0.0;
        for (double f : accs[i].fid) mean += f;
        mean /= count;
        double var = 0.0;
        for (double f : accs[i].fid) var += (f - mean) * (f - mean);
        out[i].fidelity_mean = mean;
        out[i].fidelity_std = out[i].runs > 1 ? std::sqrt(var / (count - 1.0)) : 0.0;
        out[i].noise_floor_mean = accs[i].noise / count;
        out[i].final_loss_mean = accs[i].loss / count;
    }
    return out;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::io_error, "cannot write " + path.string());
    out << "family,n,depth,C,runs,fidelity_mean,fidelity_std,noise_floor_mean,final_loss_mean\n";
    char line[320];
    for (const SummaryRow& s : rows) {
        std::snprintf(line, sizeof(line), "%s,%u,%u,%.17g,%llu,%.17g,%.17g,%.17g,%.17g\n",
                      s.family.c_str(), s.n, s.depth, s.compression, (unsigned long long)s.runs,
                      s.fidelity_mean, s.fidelity_std, s.noise_floor_mean, s.final_loss_mean);
        out << line;
    }
    out.flush();
    if (!out) raise(ErrorCode::io_error, "write failed: " + path.string());
}

FamilySpec family_spec_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::invalid_argument, std::string("bad family JSON: ") + e.what());
    }
    if (!j.is_object()) raise(ErrorCode::invalid_argument, "family JSON must be an object");

    FamilySpec spec;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "family") spec.family = family_from_string(value.get<std::string>());
            else if (key == "n") spec.n = value.get<uint32_t>();
            else if (key == "hard_n") spec.hard_n = value.get<uint32_t>();
            else if (key == "hard_L") spec.hard_L = value.get<uint32_t>();
            else if (key == "time") spec.time = value.get<double>();
            else if (key == "seed") spec.seed = value.get<uint64_t>();
            else raise(ErrorCode::invalid_argument, "unknown family key: " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::invalid_argument, std::string("bad family value: ") + e.what());
    }
    return spec;
}

ExperimentConfig config_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::invalid_argument, std::string("bad config JSON: ") + e.what());
    }
    if (!j.is_object()) raise(ErrorCode::invalid_argument, "config JSON must be an object");

    ExperimentConfig config;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "family") config.family.family = family_from_string(value.get<std::string>());
            else if (key == "n") config.family.n = value.get<uint32_t>();
            else if (key == "hard_n") config.family.hard_n = value.get<uint32_t>();
            else if (key == "hard_L") config.family.hard_L = value.get<uint32_t>();
            else if (key == "time") config.family.time = value.get<double>();
            else if (key == "depths") config.depths = value.get<std::vector<uint32_t>>();
            else if (key == "compressions") config.compressions = value.get<std::vector<double>>();
            else if (key == "depth") config.fixed_depth = value.get<uint32_t>();
            else if (key == "compression") config.fixed_compression = value.get<double>();
            else if (key == "seeds") config.seeds = value.get<std::vector<uint64_t>>();
            else if (key == "batches") config.schedule.total_batches = value.get<uint64_t>();
            else if (key == "batch_size") config.schedule.batch_size = value.get<uint32_t>();
            else if (key == "lr") config.schedule.learning_rate = value.get<double>();
            else if (key == "warmup_final") config.schedule.warmup_final_weight = value.get<double>();
            else if (key == "warmup_fraction") config.schedule.warmup_fraction = value.get<double>();
            else if (key == "log_interval") config.schedule.log_interval = value.get<uint64_t>();
            else if (key == "reconstruction_samples")
                config.reconstruction_samples = value.get<uint64_t>();
            else if (key == "out") config.output_path = value.get<std::string>();
            else if (key == "cache_dir") config.cache_dir = value.get<std::string>();
            else if (key == "threads") config.threads = value.get<uint32_t>();
            else raise(ErrorCode::invalid_argument, "unknown config key: " + key);
        }
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::invalid_argument, std::string("bad config value: ") + e.what());
    }
    return config;
}

}  // namespace qvae
