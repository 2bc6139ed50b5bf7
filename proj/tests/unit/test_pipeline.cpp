#include "fraxel/error.hpp"
#include "fraxel/pipeline.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>

namespace fs = std::filesystem;

namespace fraxel {
namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class PipelineDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fraxel_pipeline_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunConfig small_config(const fs::path& manifest) const {
        RunConfig cfg;
        cfg.manifest = manifest;
        cfg.output_dir = dir_ / "out";
        cfg.window_size = 32;
        cfg.windows_per_image = 3;
        cfg.threads = 2;
        return cfg;
    }

    int cli(const std::string& args) const {
        const std::string cmd = std::string("\"") + FRAXEL_CLI + "\" " + args + " > \"" +
                                (dir_ / "cli.log").string() + "\" 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path dir_;
};

SignatureRecord record(std::string id, std::string face, int window, std::string label,
                       std::vector<double> f) {
    return {std::move(id), std::move(face), window, std::move(label), std::move(f)};
}

TEST_F(PipelineDir, FeaturesCsvRoundTrip) {
    FeatureTable t;
    t.records.push_back(record("s1", "superior", 0, "a", {0.1, 1.0 / 3.0, -2.5e-300}));
    t.records.push_back(record("s,2", "inferior", 4, "b \"q\"", {1e10, 0.0, 3.14159}));
    write_features_csv(t, dir_ / "f.csv");
    FeatureTable back = read_features_csv(dir_ / "f.csv");
    ASSERT_EQ(back.records.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back.records[i].sample_id, t.records[i].sample_id);
        EXPECT_EQ(back.records[i].face, t.records[i].face);
        EXPECT_EQ(back.records[i].window, t.records[i].window);
        EXPECT_EQ(back.records[i].label, t.records[i].label);
        EXPECT_EQ(back.records[i].features, t.records[i].features);
    }
    write_features_csv(back, dir_ / "g.csv");
    EXPECT_EQ(slurp(dir_ / "f.csv"), slurp(dir_ / "g.csv"));
    FeatureMatrix m = back.to_matrix();
    EXPECT_EQ(m.ids[1], "s,2/inferior/4");
}

TEST(PairFaces, ConcatenatesSuperiorThenInferior) {
    FeatureTable t;
    t.records.push_back(record("s1", "inferior", 0, "a", {3, 4}));
    t.records.push_back(record("s1", "superior", 0, "a", {1, 2}));
    t.records.push_back(record("s2", "superior", 0, "b", {5, 6}));
    t.records.push_back(record("s2", "inferior", 0, "b", {7, 8}));
    FeatureTable p = pair_faces(t);
    ASSERT_EQ(p.records.size(), 2u);
    EXPECT_EQ(p.records[0].sample_id, "s1");
    EXPECT_EQ(p.records[0].face, "superior+inferior");
    EXPECT_EQ(p.records[0].features, (std::vector<double>{1, 2, 3, 4}));
    EXPECT_EQ(p.records[1].features, (std::vector<double>{5, 6, 7, 8}));
}

TEST(PairFaces, MissingPartner) {
    FeatureTable t;
    t.records.push_back(record("s1", "superior", 0, "a", {1}));
    t.records.push_back(record("s1", "inferior", 0, "a", {2}));
    t.records.push_back(record("s9", "superior", 1, "a", {3}));
    try {
        pair_faces(t);
        FAIL() << "expected PairingError";
    } catch (const PairingError& e) {
        EXPECT_NE(std::string(e.what()).find("s9"), std::string::npos);
    }
}

TEST_F(PipelineDir, ExtractionShapeAndDeterminism) {
    const fs::path manifest = synth_corpus(dir_ / "corpus", {0.3, 0.7}, 2, 96, 5, false);
    RunConfig cfg = small_config(manifest);
    ExtractionResult a = extract_features(cfg);
    EXPECT_TRUE(a.errors.empty());
    ASSERT_EQ(a.table.records.size(), 2u * 2u * 3u);
    EXPECT_EQ(a.table.feature_count(), 85u + 9u);
    cfg.threads = 1;
    ExtractionResult b = extract_features(cfg);
    for (std::size_t i = 0; i < a.table.records.size(); ++i) {
        EXPECT_EQ(a.table.records[i].sample_id, b.table.records[i].sample_id);
        EXPECT_EQ(a.table.records[i].features, b.table.records[i].features);
    }
    cfg.method = Method::fourier;
    EXPECT_EQ(extract_features(cfg).table.feature_count(), 30u);
    cfg.method = Method::gabor;
    EXPECT_EQ(extract_features(cfg).table.feature_count(), 48u);
    EXPECT_EQ(feature_scales(cfg).size(), 48u);
}

TEST_F(PipelineDir, UnreadableEntriesAreSkipped) {
    const fs::path manifest = synth_corpus(dir_ / "corpus", {0.3, 0.7}, 1, 64, 5, false);
    std::ofstream(manifest, std::ios::app) << "missing.pgm,H0.30,ghost,superior\n";
    RunConfig cfg = small_config(manifest);
    cfg.windows_per_image = 1;
    ExtractionResult r = run_extraction(cfg);
    EXPECT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.table.records.size(), 2u);
    EXPECT_TRUE(fs::exists(cfg.output_dir / "features.csv"));
    EXPECT_NE(slurp(cfg.output_dir / "errors.log").find("ghost"), std::string::npos);

    std::ofstream(dir_ / "bad.csv") << "path,label,sample_id,face\nnope.pgm,a,x,superior\n";
    cfg.manifest = dir_ / "bad.csv";
    EXPECT_THROW(extract_features(cfg), Error);
}

TEST(Sweep, OneRowPerComponentCount) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels, ids;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> r(5);
        for (auto& v : r) v = n(rng);
        r[0] += (i % 2) * 4.0;
        rows.push_back(r);
        labels.push_back(i % 2 ? "odd" : "even");
        ids.push_back(std::to_string(i));
    }
    FeatureMatrix m = FeatureMatrix::from_rows(rows, labels, ids);
    CvOptions opt;
    opt.folds = 5;
    auto reports = sweep_descriptors(m, 5, opt);
    ASSERT_EQ(reports.size(), 5u);
    for (int k = 0; k < 5; ++k) EXPECT_EQ(reports[k].nd, k + 1);
    EXPECT_THROW(sweep_descriptors(m, 6, opt), ParameterError);
}

TEST(DeriveSeed, SpreadsStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 100; ++s) seen.insert(derive_seed(1, s));
    EXPECT_EQ(seen.size(), 100u);
    EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST_F(PipelineDir, CliExitCodes) {
    EXPECT_EQ(cli("--help"), 0);
    EXPECT_EQ(cli(""), 2);
    EXPECT_EQ(cli("frobnicate"), 2);
    EXPECT_EQ(cli("extract --manifest \"" + (dir_ / "nope.csv").string() + "\" --out \"" + dir_.string() + "\""), 1);
    EXPECT_EQ(cli("extract --manifest x.csv --out y --window-size 0"), 2);
    EXPECT_EQ(cli("extract --manifest x.csv --out y --method wavelet"), 2);
}

TEST_F(PipelineDir, CliMetricsJson) {
    std::ofstream(dir_ / "cm.csv") << "a,b\n8,2\n1,9\n";
    ASSERT_EQ(cli("metrics \"" + (dir_ / "cm.csv").string() + "\" --label demo --json \"" +
                  (dir_ / "m.json").string() + "\""),
              0);
    auto j = nlohmann::json::parse(slurp(dir_ / "m.json"));
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["method"], "demo");
    EXPECT_NEAR(j[0]["cr"].get<double>(), 85.0, 1e-12);
    EXPECT_EQ(cli("metrics \"" + (dir_ / "missing.csv").string() + "\""), 1);
}

TEST_F(PipelineDir, CliConfigFileAndOverride) {
    const std::string corpus = (dir_ / "corpus").string();
    ASSERT_EQ(cli("synth --out \"" + corpus + "\" --hurst 0.2,0.8 --images-per-class 2 --size 96 --seed 3"), 0);
    ASSERT_EQ(cli("extract --manifest \"" + corpus + "/manifest.csv\" --out \"" + dir_.string() +
                  "/ext\" --window-size 32 --windows-per-image 5"),
              0);
    std::ofstream(dir_ / "eval.cfg") << "# evaluation\ncomponents = 3\nfolds=5\n";
    const std::string common = "eval --features \"" + dir_.string() + "/ext/features.csv\" --config \"" +
                               (dir_ / "eval.cfg").string() + "\" --out \"" + dir_.string();
    ASSERT_EQ(cli(common + "/r1\""), 0);
    auto r1 = nlohmann::json::parse(slurp(dir_ / "r1" / "report.json"));
    EXPECT_EQ(r1["nd"], 3);
    ASSERT_EQ(cli(common + "/r2\" --components 2"), 0);
    auto r2 = nlohmann::json::parse(slurp(dir_ / "r2" / "report.json"));
    EXPECT_EQ(r2["nd"], 2);
    EXPECT_TRUE(fs::exists(dir_ / "r2" / "confusion.csv"));
    std::ofstream(dir_ / "broken.cfg") << "components\n";
    EXPECT_EQ(cli("eval --features x --out y --config \"" + (dir_ / "broken.cfg").string() + "\""), 2);
}

}  // namespace
}  // namespace fraxel
