#include "fraxel/pipeline.hpp"

#include "csv.hpp"
#include "fraxel/error.hpp"
#include "fraxel/preprocess.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace fraxel {
namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError(where + ": not a number: '" + s + "'");
    }
}

std::int64_t parse_count(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError(where + ": not an integer: '" + s + "'");
    }
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Runs body(i) for i in [0, n) on a small pool; results are written by
// index, so completion order never affects output.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body body) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = next++; i < n; i = next++) body(i);
                } catch (...) {
                    failures[static_cast<std::size_t>(t)] = std::current_exception();
                    next = n;
                }
            });
        }
    }
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

}  // namespace

Method parse_method(const std::string& text) {
    if (text == "proposed") return Method::proposed;
    if (text == "fourier") return Method::fourier;
    if (text == "gabor") return Method::gabor;
    throw ParameterError("unknown method '" + text + "' (proposed, fourier, gabor)");
}

std::string to_string(Method method) {
    switch (method) {
        case Method::proposed: return "proposed";
        case Method::fourier: return "fourier";
        case Method::gabor: return "gabor";
    }
    return "proposed";
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void RunConfig::validate_extraction() const {
    if (window_size < 16) throw ParameterError("window size must be >= 16");
    if (windows_per_image < 1) throw ParameterError("windows per image must be >= 1");
    if (margin < 0) throw ParameterError("margin must be non-negative");
    if (align && !(angle_step > 0.0 && angle_step <= 5.0))
        throw ParameterError("angle step must lie in (0, 5]");
    if (threads < 0) throw ParameterError("threads must be >= 0");
    switch (method) {
        case Method::proposed: {
            if (!(r_max >= 1.0)) throw ParameterError("r_max must be >= 1");
            if (deltas.empty()) throw ParameterError("at least one cube side is required");
            for (int d : deltas)
                if (d < 2 || d > window_size)
                    throw ParameterError("cube side " + std::to_string(d) + " outside [2, window size]");
            const std::uint64_t pad = static_cast<std::uint64_t>(std::ceil(r_max));
            const std::uint64_t side = static_cast<std::uint64_t>(window_size) + 2 * pad;
            if (side * side * (256 + 2 * pad) > voxel_budget)
                throw ParameterError("window volume may exceed the voxel budget");
            break;
        }
        case Method::fourier:
        case Method::gabor: baseline.validate(); break;
    }
}

void RunConfig::validate_evaluation() const {
    if (folds < 2) throw ParameterError("folds must be >= 2");
    if (!(svm_c > 0.0)) throw ParameterError("svm C must be positive");
    if (components < 1) throw ParameterError("components must be >= 1");
    if (ridge < 0.0) throw ParameterError("ridge must be non-negative");
    if (!group_by.empty() && group_by != "sample_id")
        throw ParameterError("group-by supports only 'sample_id'");
}

CvOptions RunConfig::cv_options() const {
    CvOptions o;
    o.folds = folds;
    o.seed = seed;
    o.transform = transform;
    o.components = components;
    o.ridge = ridge;
    o.svm.c = svm_c;
    return o;
}

FeatureMatrix FeatureTable::to_matrix() const {
    FeatureMatrix m;
    const std::size_t n = feature_count();
    m.values.resize(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.features.size() != n) throw FormatError("feature rows differ in length");
        for (std::size_t j = 0; j < n; ++j)
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r.features[j];
        m.labels.push_back(r.label);
        m.ids.push_back(r.sample_id + "/" + r.face + "/" + std::to_string(r.window));
    }
    m.validate();
    return m;
}

std::vector<std::string> FeatureTable::sample_ids() const {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.sample_id);
    return out;
}

std::vector<double> window_descriptors(const GrayImage& window, const RunConfig& cfg) {
    switch (cfg.method) {
        case Method::proposed: {
            const SurfacePointSet surface = to_surface(window);
            std::vector<double> f = bm_descriptors(dilation_volumes(surface, cfg.r_max, cfg.voxel_budget));
            const std::vector<double> v = voss_descriptors(probability_curve(surface, cfg.deltas));
            f.insert(f.end(), v.begin(), v.end());
            return f;
        }
        case Method::fourier: return fourier_descriptors(window, cfg.baseline.fourier_rings);
        case Method::gabor: return gabor_descriptors(window, cfg.baseline);
    }
    return {};
}

std::vector<FeatureScale> feature_scales(const RunConfig& cfg) {
    std::vector<FeatureScale> out;
    switch (cfg.method) {
        case Method::proposed: {
            for (int n : attainable_squared_radii(cfg.r_max))
                out.push_back({"minkowski_log_volume", std::sqrt(static_cast<double>(n))});
            std::vector<int> deltas = cfg.deltas;
            std::sort(deltas.begin(), deltas.end());
            for (int d : deltas) out.push_back({"voss_log_information", static_cast<double>(d)});
            break;
        }
        case Method::fourier: {
            const double width = (cfg.window_size / 2.0) / cfg.baseline.fourier_rings;
            for (int r = 0; r < cfg.baseline.fourier_rings; ++r)
                out.push_back({"fourier_ring_energy", (r + 0.5) * width});
            break;
        }
        case Method::gabor:
            for (int s = 0; s < cfg.baseline.gabor_scales; ++s)
                for (int o = 0; o < cfg.baseline.gabor_orientations; ++o) {
                    const double f = gabor_center_frequency(cfg.baseline, s);
                    out.push_back({"gabor_mean_o" + std::to_string(o), f});
                    out.push_back({"gabor_std_o" + std::to_string(o), f});
                }
            break;
    }
    return out;
}

ExtractionResult extract_features(const RunConfig& cfg) {
    cfg.validate_extraction();
    const SampleManifest manifest = read_manifest(cfg.manifest);

    struct Task {
        std::size_t entry;
        int window;
        GrayImage image;
    };
    std::vector<Task> tasks;
    ExtractionResult result;
    for (std::size_t e = 0; e < manifest.entries.size(); ++e) {
        const auto& entry = manifest.entries[e];
        try {
            GrayImage img = load_image(entry.path);
            if (cfg.align) img = radon_align(img, cfg.angle_step).image;
            WindowSet ws = extract_windows(img, cfg.window_size, cfg.windows_per_image,
                                           derive_seed(cfg.seed, e), cfg.margin);
            for (std::size_t w = 0; w < ws.windows.size(); ++w)
                tasks.push_back({e, static_cast<int>(w), std::move(ws.windows[w])});
        } catch (const Error& err) {
            result.errors.push_back(entry.sample_id + "/" + to_string(entry.face) + " (" +
                                    entry.path.string() + "): " + err.what());
        }
    }
    if (tasks.empty())
        throw Error("no manifest entry could be processed (" + std::to_string(result.errors.size()) +
                    " failures)");

    std::vector<std::vector<double>> features(tasks.size());
    parallel_for(tasks.size(), resolve_threads(cfg.threads),
                 [&](std::size_t i) { features[i] = window_descriptors(tasks[i].image, cfg); });

    result.table.records.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& entry = manifest.entries[tasks[i].entry];
        result.table.records.push_back(
            {entry.sample_id, to_string(entry.face), tasks[i].window, entry.label, std::move(features[i])});
    }
    return result;
}

ExtractionResult run_extraction(const RunConfig& cfg) {
    ExtractionResult result = extract_features(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    write_features_csv(result.table, cfg.output_dir / "features.csv");
    {
        std::ofstream log(cfg.output_dir / "errors.log");
        for (const auto& e : result.errors) log << e << '\n';
    }
    std::ofstream scales(cfg.output_dir / "feature_scales.csv");
    scales << "feature,descriptor,scale,log_scale\n";
    const auto fs = feature_scales(cfg);
    for (std::size_t i = 0; i < fs.size(); ++i)
        scales << 'f' << i << ',' << fs[i].descriptor << ',' << format_double(fs[i].scale) << ','
               << format_double(std::log(fs[i].scale)) << '\n';
    return result;
}

FeatureTable pair_faces(const FeatureTable& table) {
    using Key = std::pair<std::string, int>;
    std::map<Key, const SignatureRecord*> inferior;
    std::vector<const SignatureRecord*> superior;
    for (const auto& r : table.records) {
        if (r.face == "superior") {
            superior.push_back(&r);
        } else if (r.face == "inferior") {
            if (!inferior.emplace(Key{r.sample_id, r.window}, &r).second)
                throw PairingError("duplicate inferior row for " + r.sample_id + " window " +
                                   std::to_string(r.window));
        } else {
            throw PairingError("row " + r.sample_id + " has face '" + r.face + "', cannot pair");
        }
    }
    std::vector<std::string> missing;
    FeatureTable out;
    for (const auto* s : superior) {
        auto it = inferior.find({s->sample_id, s->window});
        if (it == inferior.end()) {
            missing.push_back(s->sample_id + " window " + std::to_string(s->window) + " (inferior)");
            continue;
        }
        if (it->second->label != s->label)
            throw PairingError("faces of " + s->sample_id + " carry different labels");
        SignatureRecord r{s->sample_id, "superior+inferior", s->window, s->label, s->features};
        r.features.insert(r.features.end(), it->second->features.begin(), it->second->features.end());
        out.records.push_back(std::move(r));
        inferior.erase(it);
    }
    for (const auto& [key, rec] : inferior)
        missing.push_back(key.first + " window " + std::to_string(key.second) + " (superior)");
    if (!missing.empty()) {
        std::string msg = "missing partner face for:";
        for (const auto& m : missing) msg += "\n  " + m;
        throw PairingError(msg);
    }
    return out;
}

std::vector<EvalReport> sweep_descriptors(const FeatureMatrix& m, int k_max, const CvOptions& base) {
    if (k_max < 1 || k_max > m.cols())
        throw ParameterError("k_max must lie in [1, " + std::to_string(m.cols()) + "]");
    std::vector<EvalReport> out;
    for (int k = 1; k <= k_max; ++k) {
        CvOptions o = base;
        o.components = k;
        out.push_back(cross_validate(m, o));
    }
    return out;
}

void write_features_csv(const FeatureTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "sample_id,face,window,label";
    const std::size_t n = table.feature_count();
    for (std::size_t j = 0; j < n; ++j) out << ",f" << j;
    out << '\n';
    for (const auto& r : table.records) {
        if (r.features.size() != n) throw FormatError("feature rows differ in length");
        out << detail::quote_csv(r.sample_id) << ',' << r.face << ',' << r.window << ','
            << detail::quote_csv(r.label);
        for (double v : r.features) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

FeatureTable read_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty features file " + path.string());
    const auto header = detail::split_csv(line);
    if (header.size() < 4 || header[0] != "sample_id" || header[1] != "face" ||
        header[2] != "window" || header[3] != "label")
        throw FormatError("features header must start with sample_id,face,window,label");
    const std::size_t n = header.size() - 4;
    FeatureTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = detail::split_csv(line);
        const std::string where = path.filename().string() + ":" + std::to_string(lineno);
        if (f.size() != n + 4) throw FormatError(where + ": expected " + std::to_string(n + 4) + " fields");
        SignatureRecord r;
        r.sample_id = f[0];
        r.face = f[1];
        r.window = static_cast<int>(parse_count(f[2], where));
        r.label = f[3];
        r.features.reserve(n);
        for (std::size_t j = 0; j < n; ++j) r.features.push_back(parse_double(f[4 + j], where));
        table.records.push_back(std::move(r));
    }
    return table;
}

void write_sweep_csv(const std::vector<EvalReport>& reports, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "k,CR,kappa,AE1,AE2\n";
    for (const auto& r : reports)
        out << r.nd << ',' << format_double(r.metrics.cr) << ',' << format_double(r.metrics.kappa) << ','
            << format_double(r.metrics.ae1) << ',' << format_double(r.metrics.ae2) << '\n';
}

ConfusionMatrix read_confusion_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto f = detail::split_csv(line);
        for (auto& s : f) s = trim(s);
        rows.push_back(std::move(f));
    }
    if (rows.empty()) throw FormatError("empty confusion matrix file " + path.string());

    ConfusionMatrix cm;
    std::size_t first = 0;
    const bool header = std::any_of(rows[0].begin(), rows[0].end(), [](const std::string& s) {
        return s.empty() || s.find_first_not_of("0123456789+-") != std::string::npos;
    });
    if (header) {
        cm.classes = rows[0];
        first = 1;
    }
    const std::size_t k = rows.size() - first;
    if (cm.classes.empty())
        for (std::size_t i = 0; i < k; ++i) cm.classes.push_back("class" + std::to_string(i));
    if (cm.classes.size() != k) throw FormatError("header names do not match the row count");
    for (std::size_t r = first; r < rows.size(); ++r) {
        if (rows[r].size() != k) throw FormatError("confusion matrix must be square");
        std::vector<std::int64_t> counts;
        for (const auto& s : rows[r]) {
            const auto v = parse_count(s, path.filename().string());
            if (v < 0) throw FormatError("negative count in " + path.string());
            counts.push_back(v);
        }
        cm.counts.push_back(std::move(counts));
    }
    return cm;
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (std::size_t i = 0; i < cm.classes.size(); ++i)
        out << (i ? "," : "") << detail::quote_csv(cm.classes[i]);
    out << '\n';
    for (const auto& row : cm.counts) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
        out << '\n';
    }
}

std::string report_json(const std::string& method, const EvalReport& report, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["method"] = method;
    j["nd"] = report.nd;
    j["cr"] = report.metrics.cr;
    j["kappa"] = report.metrics.kappa;
    j["ae1"] = report.metrics.ae1;
    j["ae2"] = report.metrics.ae2;
    j["confusion"] = {{"classes", report.confusion.classes}, {"counts", report.confusion.counts}};
    j["config"] = {{"transform", to_string(cfg.transform)},
                   {"components", cfg.components},
                   {"ridge", cfg.ridge},
                   {"folds", cfg.folds},
                   {"seed", cfg.seed},
                   {"svm_c", cfg.svm_c},
                   {"group_by", cfg.group_by}};
    return j.dump(2) + "\n";
}

std::string format_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-16s %4s %8s %7s %6s %6s\n", "Method", "ND", "CR (%)", "kappa", "AE1",
                  "AE2");
    out << buf;
    for (const auto& [name, r] : rows) {
        std::snprintf(buf, sizeof buf, "%-16s %4d %8.2f %7.4f %6.4f %6.4f\n", name.c_str(), r.nd,
                      r.metrics.cr, r.metrics.kappa, r.metrics.ae1, r.metrics.ae2);
        out << buf;
    }
    return out.str();
}

std::filesystem::path synth_corpus(const std::filesystem::path& dir, const std::vector<double>& hursts,
                                   int images_per_class, int size, std::uint64_t seed,
                                   bool both_faces) {
    if (hursts.empty()) throw ParameterError("at least one Hurst exponent is required");
    if (images_per_class < 1) throw ParameterError("images per class must be >= 1");
    std::filesystem::create_directories(dir);
    SampleManifest manifest;
    std::uint64_t stream = 0;
    for (double h : hursts) {
        char label[32];
        std::snprintf(label, sizeof label, "H%.2f", h);
        for (int i = 0; i < images_per_class; ++i) {
            const std::string sample = std::string(label) + "_s" + std::to_string(i);
            for (Face face : {Face::superior, Face::inferior}) {
                if (face == Face::inferior && !both_faces) break;
                const std::string file = sample + "_" + to_string(face) + ".pgm";
                save_pgm(synth_fbm(size, size, h, derive_seed(seed, stream++)), dir / file);
                manifest.entries.push_back({file, label, sample, face});
            }
        }
    }
    const auto path = dir / "manifest.csv";
    write_manifest(manifest, path);
    return path;
}

}  // namespace fraxel
