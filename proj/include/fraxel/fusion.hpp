#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fraxel {

/// m samples x n features with one label and one identifier per row.
struct FeatureMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> labels;
    std::vector<std::string> ids;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    /// Throws ParameterError on size mismatch or non-finite entries.
    void validate() const;

    /// Subset of rows, in the given order.
    FeatureMatrix select(const std::vector<Eigen::Index>& rows) const;

    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                   std::vector<std::string> labels, std::vector<std::string> ids);
};

/// Sorted distinct labels.
std::vector<std::string> class_names(const std::vector<std::string>& labels);

/// Row i of `a` followed by row i of `b`. Ids and labels must agree row by row.
FeatureMatrix concat_features(const FeatureMatrix& a, const FeatureMatrix& b);

struct ScatterPair {
    Eigen::MatrixXd s_intra;
    Eigen::MatrixXd s_inter;
    std::vector<std::string> classes;
    Eigen::MatrixXd class_means;  // one row per class, same order as `classes`
    std::vector<Eigen::Index> class_sizes;
    Eigen::RowVectorXd global_mean;
};

/// Within-class and between-class scatter. Needs >= 2 classes and >= 2
/// samples in every class.
ScatterPair scatter_matrices(const FeatureMatrix& m);

/// Sum of (x - mean)(x - mean)^T over all rows.
Eigen::MatrixXd total_scatter(const Eigen::MatrixXd& values);

enum class TransformKind { scatter, pca, none };

TransformKind parse_transform(const std::string& text);
std::string to_string(TransformKind kind);

inline constexpr double kDefaultRidge = 1e-6;

/// Linear feature map fitted on one matrix and applicable to others.
struct Projection {
    TransformKind kind = TransformKind::none;
    Eigen::RowVectorXd center;  // subtracted before projecting (empty: none)
    Eigen::MatrixXd basis;      // n x k
    Eigen::VectorXd eigenvalues;  // all n, descending

    Eigen::MatrixXd apply(const Eigen::MatrixXd& values) const;
    FeatureMatrix apply(const FeatureMatrix& m) const;
};

/// Top-k eigenvectors of (S_intra + lambda I)^-1 S_inter, computed in the
/// symmetric whitened form. lambda = ridge * trace(S_intra) / n (or `ridge`
/// itself when the trace is zero). Each column's largest-magnitude entry is
/// made positive.
Projection fit_discriminant(const FeatureMatrix& m, int k, double ridge = kDefaultRidge);

/// Top-k principal axes of the centered data.
Projection fit_pca(const FeatureMatrix& m, int k);

Projection fit_transform(TransformKind kind, const FeatureMatrix& m, int k,
                         double ridge = kDefaultRidge);

/// fit_discriminant followed by projection of the same matrix.
FeatureMatrix discriminant_transform(const FeatureMatrix& m, int k, double ridge = kDefaultRidge);

/// Between-class over within-class scatter of a single feature column.
double fisher_ratio(const FeatureMatrix& m, Eigen::Index column);

}  // namespace fraxel
