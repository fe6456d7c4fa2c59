#include "qvae/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "qvae/bits.hpp"
#include "qvae/error.hpp"

namespace qvae {
namespace {

void write_bytes(std::ofstream& out, const void* data, std::size_t size) {
    out.write(static_cast<const char*>(data), std::streamsize(size));
}

void write_u8(std::ofstream& out, uint8_t v) { write_bytes(out, &v, 1); }

void write_u32(std::ofstream& out, uint32_t v) {
    uint8_t b[4] = {uint8_t(v), uint8_t(v >> 8), uint8_t(v >> 16), uint8_t(v >> 24)};
    write_bytes(out, b, 4);
}

void write_f64(std::ofstream& out, double v) {
    uint64_t u;
    std::memcpy(&u, &v, 8);
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = uint8_t(u >> (8 * i));
    write_bytes(out, b, 8);
}

struct ByteReader {
    std::vector<uint8_t> data;
    std::size_t pos = 0;
    std::string name;

    void need(std::size_t count) const {
        if (pos + count > data.size()) {
            raise(ErrorCode::cache_integrity, "truncated file: " + name);
        }
    }
    uint8_t u8() {
        need(1);
        return data[pos++];
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(data[pos + std::size_t(i)]) << (8 * i);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u |= uint64_t(data[pos + std::size_t(i)]) << (8 * i);
        pos += 8;
        double v;
        std::memcpy(&v, &u, 8);
        return v;
    }
    void expect_end() const {
        if (pos != data.size()) {
            raise(ErrorCode::cache_integrity, "trailing bytes in file: " + name);
        }
    }
};

ByteReader read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::io_error, "cannot open " + path.string());
    ByteReader r;
    r.name = path.string();
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    if (size < 0) raise(ErrorCode::io_error, "cannot read " + path.string());
    in.seekg(0, std::ios::beg);
    r.data.resize(std::size_t(size));
    in.read(reinterpret_cast<char*>(r.data.data()), size);
    if (!in) raise(ErrorCode::io_error, "cannot read " + path.string());
    return r;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) raise(ErrorCode::io_error, "cannot write " + path.string());
    return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) raise(ErrorCode::io_error, "write failed: " + path.string());
}

}  // namespace

void save_table(const ProbabilityTable& table, const std::filesystem::path& path) {
    validate(table);
    std::ofstream out = open_out(path, std::ios::binary);
    write_bytes(out, "QDST", 4);
    write_u8(out, 1);
    write_u8(out, uint8_t(table.n_qubits));
    for (double p : table.probs) write_f64(out, p);
    finish_out(out, path);
}

ProbabilityTable load_table(const std::filesystem::path& path) {
    ByteReader r = read_file(path);
    r.need(4);
    if (std::memcmp(r.data.data(), "QDST", 4) != 0) {
        raise(ErrorCode::cache_integrity, "bad magic in " + r.name);
    }
    r.pos = 4;
    if (r.u8() != 1) raise(ErrorCode::cache_integrity, "unsupported version in " + r.name);
    ProbabilityTable table;
    table.n_qubits = r.u8();
    if (table.n_qubits < 1 || table.n_qubits > 30) {
        raise(ErrorCode::cache_integrity, "bad qubit count in " + r.name);
    }
    table.probs.resize(std::size_t(1) << table.n_qubits);
    for (double& p : table.probs) p = r.f64();
    r.expect_end();
    validate(table);
    return table;
}

void save_table_csv(const ProbabilityTable& table, const std::filesystem::path& path) {
    validate(table);
    std::ofstream out = open_out(path, std::ios::out);
    out << "index,bitstring,probability\n";
    char line[64];
    for (std::size_t i = 0; i < table.probs.size(); ++i) {
        std::snprintf(line, sizeof(line), "%zu,%s,%.17g\n", i,
                      bitstring_of(i, table.n_qubits).c_str(), table.probs[i]);
        out << line;
    }
    finish_out(out, path);
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    validate(model.arch);
    std::ofstream out = open_out(path, std::ios::binary);
    write_bytes(out, "QVAE", 4);
    write_u8(out, 1);
    write_u32(out, model.arch.n);
    write_u32(out, model.arch.latent_dim);
    write_u32(out, uint32_t(model.arch.hidden.size()));
    for (uint32_t w : model.arch.hidden) write_u32(out, w);
    for (const auto& [ptr, size] : tensor_views(model.params)) {
        for (std::size_t i = 0; i < size; ++i) write_f64(out, ptr[i]);
    }
    finish_out(out, path);
}

TrainedModel load_model(const std::filesystem::path& path) {
    ByteReader r = read_file(path);
    r.need(4);
    if (std::memcmp(r.data.data(), "QVAE", 4) != 0) {
        raise(ErrorCode::cache_integrity, "bad magic in " + r.name);
    }
    r.pos = 4;
    if (r.u8() != 1) raise(ErrorCode::cache_integrity, "unsupported version in " + r.name);
    TrainedModel model;
    model.arch.n = r.u32();
    model.arch.latent_dim = r.u32();
    const uint32_t depth = r.u32();
    if (depth > 64) raise(ErrorCode::cache_integrity, "bad layer count in " + r.name);
    model.arch.hidden.resize(depth);
    for (uint32_t& w : model.arch.hidden) w = r.u32();
    validate(model.arch);
    model.params = make_parameters(model.arch);
    for (auto& [ptr, size] : tensor_views(model.params)) {
        for (std::size_t i = 0; i < size; ++i) ptr[i] = r.f64();
    }
    r.expect_end();
    return model;
}

void save_training_log(const TrainingLog& log, const std::filesystem::path& path) {
    std::ofstream out = open_out(path, std::ios::out);
    out << "step,loss,beta,elapsed_ms\n";
    char line[128];
    for (const auto& e : log.entries) {
        std::snprintf(line, sizeof(line), "%llu,%.17g,%.17g,%.17g\n",
                      (unsigned long long)e.step, e.loss, e.beta, e.elapsed_ms);
        out << line;
    }
    finish_out(out, path);
}

}  // namespace qvae
