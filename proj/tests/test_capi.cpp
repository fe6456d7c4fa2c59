#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qvae/qvae.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const char* name) : path(fs::path("scratch") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

qv_table* must_generate(const char* family_json) {
    qv_table* table = nullptr;
    REQUIRE(qv_table_generate(family_json, "", 1, &table) == QV_OK);
    REQUIRE(table != nullptr);
    return table;
}

}  // namespace

TEST_CASE("version string is exposed") {
    REQUIRE(qv_version() != nullptr);
    CHECK(std::strlen(qv_version()) >= 5);
}

TEST_CASE("table generation, inspection and errors") {
    qv_table* table = must_generate(R"({"family": "hard", "hard_n": 2, "hard_L": 2})");
    CHECK(qv_table_qubits(table) == 4);
    CHECK(qv_table_size(table) == 16);

    std::vector<double> probs(16);
    REQUIRE(qv_table_probs(table, probs.data(), probs.size()) == QV_OK);
    double sum = 0.0;
    for (double p : probs) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(qv_table_probs(table, probs.data(), 4) == QV_INVALID_ARGUMENT);
    CHECK(qv_last_error()[0] != '\0');
    qv_table_free(table);

    qv_table* out = nullptr;
    CHECK(qv_table_generate("{bad json", "", 1, &out) == QV_INVALID_ARGUMENT);
    CHECK(out == nullptr);
    CHECK(qv_last_error()[0] != '\0');
    CHECK(qv_table_generate(R"({"family": "nope"})", "", 1, &out) == QV_INVALID_ARGUMENT);
    CHECK(qv_table_generate(nullptr, "", 1, &out) == QV_INVALID_ARGUMENT);
    CHECK(qv_table_generate(R"({"family": "product"})", "", 1, nullptr) == QV_INVALID_ARGUMENT);
}

TEST_CASE("table files round-trip through the C surface") {
    ScratchDir scratch("capi-table");
    qv_table* table = must_generate(R"({"family": "product", "n": 4, "seed": 6})");
    const std::string path = (scratch.path / "t.qdst").string();
    REQUIRE(qv_table_save(table, path.c_str()) == QV_OK);

    qv_table* loaded = nullptr;
    REQUIRE(qv_table_load(path.c_str(), &loaded) == QV_OK);
    CHECK(qv_table_qubits(loaded) == 4);
    std::vector<double> a(16), b(16);
    REQUIRE(qv_table_probs(table, a.data(), 16) == QV_OK);
    REQUIRE(qv_table_probs(loaded, b.data(), 16) == QV_OK);
    for (int i = 0; i < 16; ++i) CHECK(a[i] == b[i]);
    qv_table_free(loaded);

    const std::string csv = (scratch.path / "t.csv").string();
    REQUIRE(qv_table_save_csv(table, csv.c_str()) == QV_OK);
    std::ifstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "index,bitstring,probability");
    qv_table_free(table);

    qv_table* missing = nullptr;
    CHECK(qv_table_load((scratch.path / "missing.qdst").string().c_str(), &missing) == QV_IO_ERROR);

    const fs::path corrupt = scratch.path / "corrupt.qdst";
    {
        std::ofstream out(corrupt, std::ios::binary);
        out << "QDSTxxxx";
    }
    CHECK(qv_table_load(corrupt.string().c_str(), &missing) == QV_CACHE_INTEGRITY);
}

TEST_CASE("training through the C API is deterministic") {
    ScratchDir scratch("capi-train");
    qv_table* table = must_generate(R"({"family": "product", "n": 3, "seed": 2})");
    const char* options = R"({"depth": 1, "compression": 4.0, "seed": 5,
                              "batches": 60, "batch_size": 32})";

    qv_model* model = nullptr;
    REQUIRE(qv_train(table, options, &model) == QV_OK);

    char describe[256];
    REQUIRE(qv_model_describe(model, describe, sizeof(describe)) == QV_OK);
    const std::string text = describe;
    CHECK(text.find("\"n\":3") != std::string::npos);
    CHECK(text.find("\"hidden\":[4]") != std::string::npos);
    CHECK(text.find("\"m_total\":31") != std::string::npos);
    char tiny[4];
    CHECK(qv_model_describe(model, tiny, sizeof(tiny)) == QV_INVALID_ARGUMENT);

    const std::string path = (scratch.path / "m.qvae").string();
    REQUIRE(qv_model_save(model, path.c_str()) == QV_OK);
    qv_model* loaded = nullptr;
    REQUIRE(qv_model_load(path.c_str(), &loaded) == QV_OK);

    qv_table *ra = nullptr, *rb = nullptr;
    REQUIRE(qv_model_reconstruct(model, 2000, 3, &ra) == QV_OK);
    REQUIRE(qv_model_reconstruct(loaded, 2000, 3, &rb) == QV_OK);
    std::vector<double> pa(8), pb(8);
    REQUIRE(qv_table_probs(ra, pa.data(), 8) == QV_OK);
    REQUIRE(qv_table_probs(rb, pb.data(), 8) == QV_OK);
    for (int i = 0; i < 8; ++i) CHECK(pa[i] == pb[i]);

    qv_model* again = nullptr;
    REQUIRE(qv_train(table, options, &again) == QV_OK);
    qv_table* rc = nullptr;
    REQUIRE(qv_model_reconstruct(again, 2000, 3, &rc) == QV_OK);
    std::vector<double> pc(8);
    REQUIRE(qv_table_probs(rc, pc.data(), 8) == QV_OK);
    for (int i = 0; i < 8; ++i) CHECK(pa[i] == pc[i]);

    double fid = 0.0;
    REQUIRE(qv_fidelity(table, ra, &fid) == QV_OK);
    CHECK(fid > 0.2);
    CHECK(fid <= 1.0);

    double floor = 0.0;
    REQUIRE(qv_noise_floor(table, 20000, 4, &floor) == QV_OK);
    CHECK(floor > 0.99);
    CHECK(floor <= 1.0);

    qv_model* bad = nullptr;
    CHECK(qv_train(table, R"({"widht": 3})", &bad) == QV_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
    CHECK(qv_train(nullptr, "{}", &bad) == QV_INVALID_ARGUMENT);
    CHECK(qv_fidelity(table, nullptr, &fid) == QV_INVALID_ARGUMENT);

    qv_table_free(ra);
    qv_table_free(rb);
    qv_table_free(rc);
    qv_table_free(table);
    qv_model_free(model);
    qv_model_free(loaded);
    qv_model_free(again);
}

TEST_CASE("explicit width and training logs") {
    ScratchDir scratch("capi-width");
    qv_table* table = must_generate(R"({"family": "product", "n": 3, "seed": 9})");
    const std::string log_path = (scratch.path / "log.csv").string();
    const std::string options = std::string(R"({"width": 5, "depth": 2, "seed": 1,)") +
                                R"("batches": 30, "batch_size": 16, "log_interval": 10,)" +
                                R"("log_path": ")" + log_path + R"("})";

    qv_model* model = nullptr;
    REQUIRE(qv_train(table, options.c_str(), &model) == QV_OK);
    char describe[256];
    REQUIRE(qv_model_describe(model, describe, sizeof(describe)) == QV_OK);
    CHECK(std::string(describe).find("\"hidden\":[5,5]") != std::string::npos);

    std::ifstream in(log_path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "step,loss,beta,elapsed_ms");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);  // steps 0, 10, 20, 29

    qv_model_free(model);
    qv_table_free(table);
}

TEST_CASE("sweeps and summaries run end to end") {
    ScratchDir scratch("capi-sweep");
    const std::string results = (scratch.path / "results.csv").string();
    const std::string config = std::string(R"({"family": "product", "n": 3,)") +
                               R"("depths": [1], "compression": 4.0, "seeds": [1, 2],)" +
                               R"("batches": 15, "batch_size": 16,)" +
                               R"("reconstruction_samples": 500, "cache_dir": ")" +
                               (scratch.path / "cache").string() + R"("})";
    REQUIRE(qv_run_depth_sweep(config.c_str(), results.c_str()) == QV_OK);

    std::ifstream in(results);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("# config_hash=", 0) == 0);
    bool header_found = false;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.rfind("family,", 0) == 0) {
            header_found = true;
        } else if (!line.empty() && line[0] != '#') {
            ++rows;
        }
    }
    CHECK(header_found);
    CHECK(rows == 2);

    const std::string summary = (scratch.path / "summary.csv").string();
    REQUIRE(qv_summarize_csv(results.c_str(), summary.c_str()) == QV_OK);
    std::ifstream sin(summary);
    REQUIRE(std::getline(sin, line));
    CHECK(line ==
          "family,n,depth,C,runs,fidelity_mean,fidelity_std,noise_floor_mean,final_loss_mean");
    REQUIRE(std::getline(sin, line));
    CHECK(line.rfind("product,3,1,4,2,", 0) == 0);

    CHECK(qv_run_depth_sweep("{bad", results.c_str()) == QV_INVALID_ARGUMENT);
    CHECK(qv_run_depth_sweep(nullptr, results.c_str()) == QV_INVALID_ARGUMENT);
    CHECK(qv_summarize_csv((scratch.path / "nope.csv").string().c_str(), summary.c_str()) ==
          QV_IO_ERROR);
}
