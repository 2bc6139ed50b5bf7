#include "fraxel/baselines.hpp"
#include "fraxel/classify.hpp"
#include "fraxel/error.hpp"
#include "fraxel/fusion.hpp"
#include "fraxel/image.hpp"
#include "fraxel/minkowski.hpp"
#include "fraxel/preprocess.hpp"
#include "fraxel/regression.hpp"
#include "fraxel/voss.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

namespace py = pybind11;
using namespace fraxel;

namespace {

using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const ImageArray& a) {
    if (a.ndim() != 2) throw ParameterError("expected a 2-D uint8 array (rows, columns)");
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    std::vector<std::uint8_t> px(a.data(), a.data() + a.size());
    return GrayImage(w, h, std::move(px));
}

ImageArray to_array(const GrayImage& img) {
    ImageArray out({img.height(), img.width()});
    std::memcpy(out.mutable_data(), img.pixels().data(), img.pixels().size());
    return out;
}

FeatureMatrix to_features(const Eigen::MatrixXd& x, const std::vector<std::string>& labels) {
    FeatureMatrix m;
    m.values = x;
    m.labels = labels;
    for (Eigen::Index i = 0; i < x.rows(); ++i) m.ids.push_back(std::to_string(i));
    return m;
}

py::dict metrics_dict(const Metrics& m) {
    py::dict d;
    d["cr"] = m.cr;
    d["kappa"] = m.kappa;
    d["ae1"] = m.ae1;
    d["ae2"] = m.ae2;
    return d;
}

py::array_t<std::int64_t> counts_array(const ConfusionMatrix& cm) {
    const auto k = static_cast<py::ssize_t>(cm.size());
    py::array_t<std::int64_t> out({k, k});
    auto v = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < k; ++i)
        for (py::ssize_t j = 0; j < k; ++j) v(i, j) = cm.counts[i][j];
    return out;
}

}  // namespace

PYBIND11_MODULE(_fraxel, m) {
    m.doc() = "Fractal texture descriptors, scatter-matrix fusion and cross-validated linear SVM";

    auto base = py::register_exception<Error>(m, "FraxelError", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<AlignmentError>(m, "AlignmentError", base.ptr());
    py::register_exception<PairingError>(m, "PairingError", base.ptr());

    // images
    m.def("load_image", [](const std::filesystem::path& p) { return to_array(load_image(p)); }, py::arg("path"),
          "Read a PGM, PPM or 8-bit PNG as a (rows, columns) uint8 array.");
    m.def("save_pgm", [](const ImageArray& a, const std::filesystem::path& p) { save_pgm(to_image(a), p); },
          py::arg("image"), py::arg("path"));
    m.def(
        "synth_fbm",
        [](int width, int height, double hurst, std::uint64_t seed) {
            return to_array(synth_fbm(width, height, hurst, seed));
        },
        py::arg("width"), py::arg("height"), py::arg("hurst"), py::arg("seed"));
    m.def("luminance", &luminance, py::arg("r"), py::arg("g"), py::arg("b"));

    // preprocessing
    m.def(
        "radon_align",
        [](const ImageArray& a, double step) {
            auto r = radon_align(to_image(a), step);
            return py::make_tuple(to_array(r.image), r.angle);
        },
        py::arg("image"), py::arg("angle_step") = 1.0, "Returns (aligned image, angle in degrees).");
    m.def(
        "rotate_image",
        [](const ImageArray& a, double degrees, int fill) {
            return to_array(rotate_image(to_image(a), degrees, static_cast<std::uint8_t>(fill)));
        },
        py::arg("image"), py::arg("degrees"), py::arg("fill") = 255);
    m.def(
        "extract_windows",
        [](const ImageArray& a, int size, int count, std::uint64_t seed, int margin) {
            auto ws = extract_windows(to_image(a), size, count, seed, margin);
            std::vector<std::pair<int, int>> origins;
            for (const auto& o : ws.origins) origins.emplace_back(o.row, o.col);
            return origins;
        },
        py::arg("image"), py::arg("size"), py::arg("count"), py::arg("seed"), py::arg("margin") = 0,
        "Top-left (row, col) of each sampled window.");

    // descriptors
    m.def(
        "dilation_volumes",
        [](const ImageArray& a, double r_max, int threads) {
            auto c = dilation_volumes(to_surface(to_image(a)), r_max, kDefaultVoxelBudget, threads);
            py::dict d;
            d["squared_radii"] = c.squared_radii;
            d["radii"] = c.radii;
            d["volumes"] = c.volumes;
            d["surface_size"] = c.surface_size;
            return d;
        },
        py::arg("image"), py::arg("r_max") = 10.0, py::arg("threads") = 1);
    m.def(
        "bm_descriptors",
        [](const ImageArray& a, double r_max) {
            return bm_descriptors(dilation_volumes(to_surface(to_image(a)), r_max));
        },
        py::arg("image"), py::arg("r_max") = 10.0);
    m.def(
        "bm_dimension",
        [](const ImageArray& a, double r_max) { return bm_dimension(dilation_volumes(to_surface(to_image(a)), r_max)); },
        py::arg("image"), py::arg("r_max") = 10.0);
    m.def(
        "voss_curve",
        [](const ImageArray& a, std::vector<int> deltas) {
            auto c = probability_curve(to_surface(to_image(a)), std::move(deltas));
            py::dict d;
            d["deltas"] = c.deltas;
            d["information"] = c.information;
            d["occupancy"] = c.occupancy;
            return d;
        },
        py::arg("image"), py::arg("deltas") = kDefaultDeltas);
    m.def(
        "voss_descriptors",
        [](const ImageArray& a, std::vector<int> deltas) {
            return voss_descriptors(probability_curve(to_surface(to_image(a)), std::move(deltas)));
        },
        py::arg("image"), py::arg("deltas") = kDefaultDeltas);
    m.def(
        "voss_dimension",
        [](const ImageArray& a, std::vector<int> deltas) {
            return voss_dimension(probability_curve(to_surface(to_image(a)), std::move(deltas)));
        },
        py::arg("image"), py::arg("deltas") = kDefaultDeltas);
    m.def(
        "fourier_descriptors", [](const ImageArray& a, int rings) { return fourier_descriptors(to_image(a), rings); },
        py::arg("image"), py::arg("rings") = 30);
    m.def(
        "gabor_descriptors",
        [](const ImageArray& a, int scales, int orientations, double low, double high) {
            BaselineConfig cfg;
            cfg.gabor_scales = scales;
            cfg.gabor_orientations = orientations;
            cfg.gabor_freq_low = low;
            cfg.gabor_freq_high = high;
            return gabor_descriptors(to_image(a), cfg);
        },
        py::arg("image"), py::arg("scales") = 4, py::arg("orientations") = 6, py::arg("freq_low") = 0.05,
        py::arg("freq_high") = 0.4);
    m.def(
        "loglog_slope",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
            auto f = loglog_slope(xs, ys);
            return py::make_tuple(f.slope, f.intercept, f.r_squared);
        },
        py::arg("xs"), py::arg("ys"), "Returns (slope, intercept, r_squared) of ln y on ln x.");

    // fusion and classification
    m.def(
        "scatter_matrices",
        [](const Eigen::MatrixXd& x, const std::vector<std::string>& labels) {
            auto sp = scatter_matrices(to_features(x, labels));
            return py::make_tuple(sp.s_intra, sp.s_inter);
        },
        py::arg("x"), py::arg("labels"), "Returns (within-class, between-class) scatter.");
    m.def(
        "discriminant_transform",
        [](const Eigen::MatrixXd& x, const std::vector<std::string>& labels, int k, double ridge) {
            return discriminant_transform(to_features(x, labels), k, ridge).values;
        },
        py::arg("x"), py::arg("labels"), py::arg("k"), py::arg("ridge") = kDefaultRidge);
    m.def(
        "metrics",
        [](const std::vector<std::vector<std::int64_t>>& counts) {
            ConfusionMatrix cm;
            cm.counts = counts;
            for (std::size_t i = 0; i < counts.size(); ++i) cm.classes.push_back(std::to_string(i));
            return metrics_dict(metrics_from_confusion(cm));
        },
        py::arg("confusion"), "CR (percent), kappa, AE1 and AE2 of a confusion matrix (rows: truth).");
    m.def(
        "cross_validate",
        [](const Eigen::MatrixXd& x, const std::vector<std::string>& labels, int folds, std::uint64_t seed,
           const std::string& transform, int components, double ridge, double c,
           const std::vector<std::string>& groups) {
            CvOptions opt;
            opt.folds = folds;
            opt.seed = seed;
            opt.transform = parse_transform(transform);
            opt.components = components;
            opt.ridge = ridge;
            opt.svm.c = c;
            opt.groups = groups;
            EvalReport r;
            {
                py::gil_scoped_release release;
                r = cross_validate(to_features(x, labels), opt);
            }
            py::dict d = metrics_dict(r.metrics);
            d["nd"] = r.nd;
            d["classes"] = r.confusion.classes;
            d["confusion"] = counts_array(r.confusion);
            return d;
        },
        py::arg("x"), py::arg("labels"), py::arg("folds") = 10, py::arg("seed") = 1,
        py::arg("transform") = "scatter", py::arg("components") = 10, py::arg("ridge") = kDefaultRidge,
        py::arg("c") = 1.0, py::arg("groups") = std::vector<std::string>{});
}
