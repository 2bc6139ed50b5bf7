#include "fraxel/classify.hpp"

#include "fraxel/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace fraxel {

ConfusionMatrix ConfusionMatrix::zeros(std::vector<std::string> classes) {
    ConfusionMatrix cm;
    const std::size_t k = classes.size();
    cm.classes = std::move(classes);
    cm.counts.assign(k, std::vector<std::int64_t>(k, 0));
    return cm;
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (const auto& row : counts)
        for (auto v : row) t += v;
    return t;
}

Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
    const std::size_t k = cm.counts.size();
    if (k == 0) throw ParameterError("empty confusion matrix");
    for (const auto& row : cm.counts) {
        if (row.size() != k) throw ParameterError("confusion matrix must be square");
        for (auto v : row)
            if (v < 0) throw ParameterError("confusion matrix has negative counts");
    }
    std::vector<double> row_sum(k, 0.0), col_sum(k, 0.0);
    double trace = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            row_sum[i] += static_cast<double>(cm.counts[i][j]);
            col_sum[j] += static_cast<double>(cm.counts[i][j]);
        }
        trace += static_cast<double>(cm.counts[i][i]);
    }
    double total = 0.0;
    for (double r : row_sum) total += r;
    if (total <= 0.0) throw ParameterError("confusion matrix is empty");
    for (std::size_t i = 0; i < k; ++i)
        if (row_sum[i] == 0.0)
            throw ParameterError("class " + (i < cm.classes.size() ? cm.classes[i] : std::to_string(i)) +
                                 " has no true samples");

    Metrics m;
    const double po = trace / total;
    double pe = 0.0;
    for (std::size_t i = 0; i < k; ++i) pe += row_sum[i] * col_sum[i];
    pe /= total * total;
    m.cr = 100.0 * po;
    m.kappa = pe < 1.0 ? (po - pe) / (1.0 - pe) : (po == 1.0 ? 1.0 : 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double diag = static_cast<double>(cm.counts[i][i]);
        m.ae1 += 1.0 - diag / row_sum[i];
        // a class that is never predicted has no false positives
        if (col_sum[i] > 0.0) m.ae2 += (col_sum[i] - diag) / col_sum[i];
    }
    m.ae1 /= static_cast<double>(k);
    m.ae2 /= static_cast<double>(k);
    return m;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& values) {
    Standardizer s;
    const double n = static_cast<double>(values.rows());
    s.mean = values.colwise().mean();
    s.scale.resize(values.cols());
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        const double var = (values.col(j).array() - s.mean(j)).square().sum() / n;
        s.scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& values) const {
    return (values.rowwise() - mean).array().rowwise() / scale.array();
}

double BinarySvm::decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return x.dot(weights) + bias;
}

namespace {

BinarySvm train_pair(const Eigen::MatrixXd& x, const std::vector<double>& y, int positive,
                     int negative, const SvmOptions& opt) {
    const Eigen::Index m = x.rows();
    const Eigen::Index d = x.cols();
    std::vector<double> alpha(m, 0.0);
    std::vector<double> qii(m);
    for (Eigen::Index i = 0; i < m; ++i) qii[i] = x.row(i).squaredNorm() + 1.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    double b = 0.0;

    BinarySvm out;
    out.positive = positive;
    out.negative = negative;
    for (int epoch = 1; epoch <= opt.max_epochs; ++epoch) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double g = y[i] * (x.row(i).dot(w) + b) - 1.0;
            const double old = alpha[i];
            const double next = std::clamp(old - g / qii[i], 0.0, opt.c);
            if (next != old) {
                const double step = (next - old) * y[i];
                w.noalias() += step * x.row(i).transpose();
                b += step;
                alpha[i] = next;
            }
        }
        const double half_norm = 0.5 * (w.squaredNorm() + b * b);
        double hinge = 0.0, alpha_sum = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            hinge += std::max(0.0, 1.0 - y[i] * (x.row(i).dot(w) + b));
            alpha_sum += alpha[i];
        }
        const double primal = half_norm + opt.c * hinge;
        const double dual = alpha_sum - half_norm;
        out.epochs = epoch;
        out.duality_gap = primal - dual;
        if (out.duality_gap <= opt.tolerance * std::max(1.0, primal)) break;
    }
    out.weights = w;
    out.bias = b;
    return out;
}

}  // namespace

SvmModel train_svm(const FeatureMatrix& train, const SvmOptions& options) {
    train.validate();
    if (!(options.c > 0.0)) throw ParameterError("SVM C must be positive");
    SvmModel model;
    model.c = options.c;
    model.classes = class_names(train.labels);
    if (model.classes.size() < 2) throw ParameterError("SVM training needs at least two classes");
    std::map<std::string, int> index;
    for (std::size_t c = 0; c < model.classes.size(); ++c) index[model.classes[c]] = static_cast<int>(c);

    model.standardizer = Standardizer::fit(train.values);
    const Eigen::MatrixXd x = model.standardizer.apply(train.values);
    std::vector<int> cls(train.labels.size());
    for (std::size_t i = 0; i < cls.size(); ++i) cls[i] = index[train.labels[i]];

    const int k = static_cast<int>(model.classes.size());
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            std::vector<Eigen::Index> rows;
            std::vector<double> y;
            for (std::size_t i = 0; i < cls.size(); ++i) {
                if (cls[i] == a || cls[i] == b) {
                    rows.push_back(static_cast<Eigen::Index>(i));
                    y.push_back(cls[i] == a ? 1.0 : -1.0);
                }
            }
            Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), x.cols());
            for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
            model.machines.push_back(train_pair(sub, y, a, b, options));
        }
    }
    return model;
}

SvmModel train_svm(const FeatureMatrix& train, double c) {
    SvmOptions opt;
    opt.c = c;
    return train_svm(train, opt);
}

int SvmModel::predict_index(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    const Eigen::RowVectorXd x = (row - standardizer.mean).array() / standardizer.scale.array();
    std::vector<int> votes(classes.size(), 0);
    for (const auto& m : machines) ++votes[m.decision(x) >= 0.0 ? m.positive : m.negative];
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

std::vector<std::string> SvmModel::predict(const Eigen::MatrixXd& values) const {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(values.rows()));
    for (Eigen::Index i = 0; i < values.rows(); ++i) out.push_back(classes[predict_index(values.row(i))]);
    return out;
}

std::vector<int> assign_folds(const std::vector<std::string>& labels, int folds, std::uint64_t seed,
                              const std::vector<std::string>& groups) {
    if (folds < 2) throw ParameterError("cross-validation needs at least two folds");
    if (!groups.empty() && groups.size() != labels.size())
        throw ParameterError("group list does not match the number of rows");
    std::mt19937_64 rng(seed);
    std::vector<int> fold(labels.size(), -1);
    for (const auto& cls : class_names(labels)) {
        // units are rows, or whole groups when grouping is requested
        std::vector<std::string> unit_keys;
        std::map<std::string, std::vector<std::size_t>> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] != cls) continue;
            const std::string key = groups.empty() ? std::to_string(i) : groups[i];
            auto [it, inserted] = members.try_emplace(key);
            if (inserted) unit_keys.push_back(key);
            it->second.push_back(i);
        }
        if (static_cast<int>(unit_keys.size()) < folds)
            throw ParameterError("class '" + cls + "' has " + std::to_string(unit_keys.size()) +
                                 (groups.empty() ? " samples" : " groups") + ", fewer than " +
                                 std::to_string(folds) + " folds");
        std::shuffle(unit_keys.begin(), unit_keys.end(), rng);
        for (std::size_t u = 0; u < unit_keys.size(); ++u)
            for (auto i : members[unit_keys[u]]) fold[i] = static_cast<int>(u % folds);
    }
    return fold;
}

EvalReport cross_validate(const FeatureMatrix& m, const CvOptions& options,
                          std::vector<FoldDiagnostics>* diagnostics) {
    m.validate();
    const auto classes = class_names(m.labels);
    if (classes.size() < 2) throw ParameterError("cross-validation needs at least two classes");
    if (options.transform != TransformKind::none &&
        (options.components < 1 || options.components > m.cols()))
        throw ParameterError("component count must lie in [1, " + std::to_string(m.cols()) + "]");
    const std::vector<int> fold = assign_folds(m.labels, options.folds, options.seed, options.groups);

    std::map<std::string, int> index;
    for (std::size_t c = 0; c < classes.size(); ++c) index[classes[c]] = static_cast<int>(c);
    EvalReport report;
    report.nd = options.transform == TransformKind::none ? static_cast<int>(m.cols())
                                                          : options.components;
    report.confusion = ConfusionMatrix::zeros(classes);

    for (int f = 0; f < options.folds; ++f) {
        FoldDiagnostics diag;
        diag.fold = f;
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            (fold[i] == f ? diag.test_rows : diag.train_rows).push_back(i);
        FeatureMatrix train = m.select(diag.train_rows);
        FeatureMatrix test = m.select(diag.test_rows);

        diag.standardizer = Standardizer::fit(train.values);
        train.values = diag.standardizer.apply(train.values);
        test.values = diag.standardizer.apply(test.values);
        const Projection proj = fit_transform(options.transform, train, options.components, options.ridge);
        train = proj.apply(train);
        test = proj.apply(test);

        const SvmModel model = train_svm(train, options.svm);
        for (Eigen::Index r = 0; r < test.rows(); ++r) {
            const int truth = index[test.labels[r]];
            const int guess = index[model.classes[model.predict_index(test.values.row(r))]];
            ++report.confusion.counts[truth][guess];
        }
        if (diagnostics) diagnostics->push_back(std::move(diag));
    }
    report.metrics = metrics_from_confusion(report.confusion);
    return report;
}

}  // namespace fraxel
