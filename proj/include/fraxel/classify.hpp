#pragma once

#include "fraxel/fusion.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace fraxel {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<std::int64_t>> counts;

    static ConfusionMatrix zeros(std::vector<std::string> classes);
    std::int64_t total() const;
    std::size_t size() const { return classes.size(); }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
    double cr = 0.0;     // percent correct
    double kappa = 0.0;  // Cohen's kappa
    double ae1 = 0.0;    // macro-averaged false-negative rate, 1 - diag/row
    double ae2 = 0.0;    // macro-averaged false-positive share, (col - diag)/col
};

/// Throws ParameterError for an empty matrix or a class with no true samples.
Metrics metrics_from_confusion(const ConfusionMatrix& cm);

struct EvalReport {
    int nd = 0;
    Metrics metrics;
    ConfusionMatrix confusion;
};

/// Per-feature centering and scaling fitted on training data. Features
/// with zero variance are centered but left unscaled.
struct Standardizer {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& values);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& values) const;
};

struct SvmOptions {
    double c = 1.0;
    double tolerance = 1e-6;  // relative duality gap
    int max_epochs = 10000;
};

/// Linear soft-margin SVM separating `positive` (+1) from `negative` (-1).
struct BinarySvm {
    int positive = 0;
    int negative = 0;
    Eigen::VectorXd weights;
    double bias = 0.0;
    int epochs = 0;
    double duality_gap = 0.0;

    double decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

/// One-vs-one ensemble over all class pairs, on standardized features.
struct SvmModel {
    std::vector<std::string> classes;
    Standardizer standardizer;
    std::vector<BinarySvm> machines;
    double c = 1.0;

    /// Index into `classes`; majority vote, ties to the lowest index.
    int predict_index(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
    std::vector<std::string> predict(const Eigen::MatrixXd& values) const;
};

/// Dual coordinate ascent with the bias folded in as a constant feature,
/// cyclic over samples in input order.
SvmModel train_svm(const FeatureMatrix& train, const SvmOptions& options = {});
SvmModel train_svm(const FeatureMatrix& train, double c);

struct CvOptions {
    int folds = 10;
    std::uint64_t seed = 1;
    TransformKind transform = TransformKind::scatter;
    int components = 10;
    double ridge = kDefaultRidge;
    SvmOptions svm;
    /// Optional group per row (e.g. sample id); when set, whole groups are
    /// assigned to folds, stratified by class.
    std::vector<std::string> groups;
};

/// Fold index per row: seeded shuffle within each class, then round robin.
std::vector<int> assign_folds(const std::vector<std::string>& labels, int folds, std::uint64_t seed,
                              const std::vector<std::string>& groups = {});

struct FoldDiagnostics {
    int fold = 0;
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    Standardizer standardizer;
};

/// Each fold is held out once; standardization, transform and classifier
/// are fitted on the remaining folds only.
EvalReport cross_validate(const FeatureMatrix& m, const CvOptions& options,
                          std::vector<FoldDiagnostics>* diagnostics = nullptr);

}  // namespace fraxel
