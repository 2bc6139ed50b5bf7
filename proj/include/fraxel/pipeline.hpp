#pragma once

#include "fraxel/baselines.hpp"
#include "fraxel/classify.hpp"
#include "fraxel/fusion.hpp"
#include "fraxel/image.hpp"
#include "fraxel/minkowski.hpp"
#include "fraxel/voss.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fraxel {

enum class Method { proposed, fourier, gabor };

Method parse_method(const std::string& text);
std::string to_string(Method method);

struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path output_dir = ".";
    Method method = Method::proposed;

    int window_size = 200;
    int windows_per_image = 20;
    std::uint64_t seed = 1;
    int margin = 0;
    bool align = false;
    double angle_step = 1.0;

    double r_max = 10.0;
    std::uint64_t voxel_budget = kDefaultVoxelBudget;
    std::vector<int> deltas = kDefaultDeltas;
    BaselineConfig baseline;

    TransformKind transform = TransformKind::scatter;
    int components = 10;
    double ridge = kDefaultRidge;
    int folds = 10;
    double svm_c = 1.0;
    std::string group_by;  // "" or "sample_id"

    int threads = 0;  // 0: one per logical CPU

    /// Throws ParameterError for values outside each module's preconditions.
    void validate_extraction() const;
    void validate_evaluation() const;
    CvOptions cv_options() const;
};

/// One window's feature vector and where it came from.
struct SignatureRecord {
    std::string sample_id;
    std::string face;  // "superior", "inferior", or "superior+inferior" once paired
    int window = 0;
    std::string label;
    std::vector<double> features;
};

struct FeatureTable {
    std::vector<SignatureRecord> records;

    std::size_t feature_count() const { return records.empty() ? 0 : records.front().features.size(); }
    /// Row ids are "sample_id/face/window".
    FeatureMatrix to_matrix() const;
    std::vector<std::string> sample_ids() const;
};

/// Descriptor vector of one window for the configured method. For the
/// proposed method: Bouligand-Minkowski log-volumes followed by Voss
/// log-information values.
std::vector<double> window_descriptors(const GrayImage& window, const RunConfig& cfg);

/// Name and scale of every feature column the configured method produces.
struct FeatureScale {
    std::string descriptor;
    double scale = 0.0;
};
std::vector<FeatureScale> feature_scales(const RunConfig& cfg);

struct ExtractionResult {
    FeatureTable table;
    std::vector<std::string> errors;  // one line per skipped manifest entry
};

/// Loads every manifest entry, optionally aligns it, samples windows and
/// computes descriptors. Unreadable entries are skipped and reported; if
/// every entry fails an Error is thrown. Row order follows the manifest.
ExtractionResult extract_features(const RunConfig& cfg);

/// extract_features, then writes features.csv, errors.log and
/// feature_scales.csv into cfg.output_dir.
ExtractionResult run_extraction(const RunConfig& cfg);

/// One row per (sample_id, window): superior features then inferior.
FeatureTable pair_faces(const FeatureTable& table);

/// cross_validate for k = 1..k_max components.
std::vector<EvalReport> sweep_descriptors(const FeatureMatrix& m, int k_max, const CvOptions& base);

// File formats.
void write_features_csv(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable read_features_csv(const std::filesystem::path& path);

void write_sweep_csv(const std::vector<EvalReport>& reports, const std::filesystem::path& path);

/// K rows of K integers, optionally preceded by a header of class names.
ConfusionMatrix read_confusion_csv(const std::filesystem::path& path);
void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path);

std::string report_json(const std::string& method, const EvalReport& report, const RunConfig& cfg);

/// Plain-text table with columns Method, ND, CR (%), kappa, AE1, AE2.
std::string format_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

/// Writes `images_per_class` fBm images per Hurst exponent (one or both
/// faces) plus manifest.csv into `dir`; returns the manifest path.
std::filesystem::path synth_corpus(const std::filesystem::path& dir, const std::vector<double>& hursts,
                                   int images_per_class, int size, std::uint64_t seed,
                                   bool both_faces);

/// Deterministic seed derivation (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace fraxel
