#include "fraxel/fusion.hpp"

#include "fraxel/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fraxel {
namespace {

// Eigenpairs of a symmetric matrix, largest eigenvalue first. Equal
// eigenvalues keep the solver's column order.
void sorted_eigen(const Eigen::MatrixXd& sym, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw DegenerateInputError("eigen-decomposition failed");
    const Eigen::Index n = sym.rows();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return ev(a) > ev(b); });
    values.resize(n);
    vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        values(i) = ev(order[i]);
        vectors.col(i) = solver.eigenvectors().col(order[i]);
    }
}

void fix_signs(Eigen::MatrixXd& basis) {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        Eigen::Index arg = 0;
        for (Eigen::Index r = 1; r < basis.rows(); ++r)
            if (std::abs(basis(r, c)) > std::abs(basis(arg, c))) arg = r;
        if (basis(arg, c) < 0) basis.col(c) *= -1.0;
    }
}

void check_k(int k, Eigen::Index n) {
    if (k < 1) throw ParameterError("component count must be >= 1");
    if (k > n)
        throw ParameterError("component count " + std::to_string(k) + " exceeds feature count " +
                             std::to_string(n));
}

}  // namespace

void FeatureMatrix::validate() const {
    if (labels.size() != static_cast<std::size_t>(values.rows()) ||
        ids.size() != static_cast<std::size_t>(values.rows()))
        throw ParameterError("feature matrix: labels/ids do not match row count");
    if (!values.allFinite()) throw ParameterError("feature matrix contains non-finite values");
}

FeatureMatrix FeatureMatrix::select(const std::vector<Eigen::Index>& rows) const {
    FeatureMatrix out;
    out.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.values.row(static_cast<Eigen::Index>(i)) = values.row(rows[i]);
        out.labels.push_back(labels[rows[i]]);
        out.ids.push_back(ids[rows[i]]);
    }
    return out;
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> labels,
                                       std::vector<std::string> ids) {
    FeatureMatrix m;
    const Eigen::Index n = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
    m.values.resize(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n)
            throw ParameterError("feature rows differ in length");
        for (Eigen::Index j = 0; j < n; ++j) m.values(static_cast<Eigen::Index>(i), j) = rows[i][j];
    }
    m.labels = std::move(labels);
    m.ids = std::move(ids);
    m.validate();
    return m;
}

std::vector<std::string> class_names(const std::vector<std::string>& labels) {
    std::vector<std::string> out(labels);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FeatureMatrix concat_features(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.rows() != b.rows())
        throw AlignmentError("cannot concatenate " + std::to_string(a.rows()) + " rows with " +
                             std::to_string(b.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (a.ids[i] != b.ids[i])
            throw AlignmentError("row " + std::to_string(i) + ": id '" + a.ids[i] + "' vs '" +
                                 b.ids[i] + "'");
        if (a.labels[i] != b.labels[i])
            throw AlignmentError("row " + std::to_string(i) + ": label mismatch for id '" +
                                 a.ids[i] + "'");
    }
    FeatureMatrix out;
    out.values.resize(a.rows(), a.cols() + b.cols());
    out.values << a.values, b.values;
    out.labels = a.labels;
    out.ids = a.ids;
    return out;
}

ScatterPair scatter_matrices(const FeatureMatrix& m) {
    m.validate();
    ScatterPair sp;
    sp.classes = class_names(m.labels);
    if (sp.classes.size() < 2) throw ParameterError("scatter matrices need at least two classes");
    const Eigen::Index n = m.cols();
    const Eigen::Index k = static_cast<Eigen::Index>(sp.classes.size());
    std::map<std::string, Eigen::Index> index;
    for (Eigen::Index c = 0; c < k; ++c) index[sp.classes[c]] = c;

    sp.class_means = Eigen::MatrixXd::Zero(k, n);
    sp.class_sizes.assign(k, 0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Eigen::Index c = index[m.labels[i]];
        sp.class_means.row(c) += m.values.row(i);
        ++sp.class_sizes[c];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
        if (sp.class_sizes[c] < 2)
            throw ParameterError("class '" + sp.classes[c] + "' has fewer than two samples");
        sp.class_means.row(c) /= static_cast<double>(sp.class_sizes[c]);
    }
    sp.global_mean = m.values.colwise().mean();

    sp.s_intra = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Eigen::RowVectorXd d = m.values.row(i) - sp.class_means.row(index[m.labels[i]]);
        sp.s_intra.noalias() += d.transpose() * d;
    }
    sp.s_inter = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index c = 0; c < k; ++c) {
        const Eigen::RowVectorXd d = sp.class_means.row(c) - sp.global_mean;
        sp.s_inter.noalias() += static_cast<double>(sp.class_sizes[c]) * (d.transpose() * d);
    }
    return sp;
}

Eigen::MatrixXd total_scatter(const Eigen::MatrixXd& values) {
    const Eigen::MatrixXd centered = values.rowwise() - values.colwise().mean();
    return centered.transpose() * centered;
}

TransformKind parse_transform(const std::string& text) {
    if (text == "scatter") return TransformKind::scatter;
    if (text == "pca") return TransformKind::pca;
    if (text == "none") return TransformKind::none;
    throw ParameterError("unknown transform '" + text + "' (scatter, pca, none)");
}

std::string to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::scatter: return "scatter";
        case TransformKind::pca: return "pca";
        case TransformKind::none: return "none";
    }
    return "none";
}

Eigen::MatrixXd Projection::apply(const Eigen::MatrixXd& values) const {
    if (values.cols() != basis.rows())
        throw ParameterError("projection expects " + std::to_string(basis.rows()) + " features, got " +
                             std::to_string(values.cols()));
    if (center.size() == 0) return values * basis;
    return (values.rowwise() - center) * basis;
}

FeatureMatrix Projection::apply(const FeatureMatrix& m) const {
    FeatureMatrix out;
    out.values = apply(m.values);
    out.labels = m.labels;
    out.ids = m.ids;
    return out;
}

Projection fit_discriminant(const FeatureMatrix& m, int k, double ridge) {
    check_k(k, m.cols());
    if (ridge < 0.0) throw ParameterError("ridge must be non-negative");
    const ScatterPair sp = scatter_matrices(m);
    const Eigen::Index n = m.cols();

    const double trace = sp.s_intra.trace();
    const double lambda = trace > 0.0 ? ridge * trace / static_cast<double>(n) : ridge;
    Eigen::MatrixXd within = sp.s_intra;
    within.diagonal().array() += lambda;

    Eigen::VectorXd w_vals;
    Eigen::MatrixXd w_vecs;
    sorted_eigen(within, w_vals, w_vecs);
    const double floor = 1e-13 * std::max(1.0, w_vals(0));
    if (w_vals(n - 1) <= floor)
        throw DegenerateInputError("within-class scatter is singular; use a positive ridge");
    const Eigen::MatrixXd whiten = w_vecs * w_vals.cwiseSqrt().cwiseInverse().asDiagonal();

    Eigen::MatrixXd between = whiten.transpose() * sp.s_inter * whiten;
    between = 0.5 * (between + between.transpose()).eval();
    Eigen::VectorXd b_vals;
    Eigen::MatrixXd b_vecs;
    sorted_eigen(between, b_vals, b_vecs);

    Projection p;
    p.kind = TransformKind::scatter;
    p.eigenvalues = b_vals;
    p.basis = whiten * b_vecs.leftCols(k);
    fix_signs(p.basis);
    return p;
}

Projection fit_pca(const FeatureMatrix& m, int k) {
    check_k(k, m.cols());
    m.validate();
    if (m.rows() < 2) throw ParameterError("PCA needs at least two samples");
    Eigen::VectorXd vals;
    Eigen::MatrixXd vecs;
    sorted_eigen(total_scatter(m.values) / static_cast<double>(m.rows() - 1), vals, vecs);
    Projection p;
    p.kind = TransformKind::pca;
    p.center = m.values.colwise().mean();
    p.eigenvalues = vals;
    p.basis = vecs.leftCols(k);
    fix_signs(p.basis);
    return p;
}

Projection fit_transform(TransformKind kind, const FeatureMatrix& m, int k, double ridge) {
    switch (kind) {
        case TransformKind::scatter: return fit_discriminant(m, k, ridge);
        case TransformKind::pca: return fit_pca(m, k);
        case TransformKind::none: break;
    }
    Projection p;
    p.kind = TransformKind::none;
    p.basis = Eigen::MatrixXd::Identity(m.cols(), m.cols());
    return p;
}

FeatureMatrix discriminant_transform(const FeatureMatrix& m, int k, double ridge) {
    return fit_discriminant(m, k, ridge).apply(m);
}

double fisher_ratio(const FeatureMatrix& m, Eigen::Index column) {
    FeatureMatrix one;
    one.values = m.values.col(column);
    one.labels = m.labels;
    one.ids = m.ids;
    const ScatterPair sp = scatter_matrices(one);
    return sp.s_inter(0, 0) / sp.s_intra(0, 0);
}

}  // namespace fraxel
