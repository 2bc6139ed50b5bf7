// fraxel: fractal texture descriptors, fusion and cross-validated
// classification from the command line.

#include "fraxel/error.hpp"
#include "fraxel/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace fraxel;

constexpr int kExitRunError = 1;
constexpr int kExitConfigError = 2;

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParameterError("not an integer list: '" + text + "'");
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParameterError("not a number list: '" + text + "'");
        }
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

// key=value lines (blank lines and '#' comments ignored) become
// "--key=value" arguments placed before the real command line, so explicit
// flags override the file.
std::vector<std::string> config_arguments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file " + path.string());
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        auto strip = [](std::string s) {
            const auto first = s.find_first_not_of(" \t\r");
            const auto last = s.find_last_not_of(" \t\r");
            return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw ParameterError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        args.push_back("--" + key + "=" + value);
    }
    return args;
}

// Pulls "--config FILE" / "--config=FILE" out of argv and splices the
// file's settings in right after the subcommand name.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::filesystem::path config;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config.empty() || args.empty()) return args;
    auto extra = config_arguments(config);
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

struct Options {
    RunConfig cfg;
    std::string method = "proposed";
    std::string transform = "scatter";
    std::string deltas = "2,3,4,6,8,11,16,23,32";
    std::string hursts = "0.2,0.5,0.8";
    std::string features;
    std::string out;
    int images_per_class = 3;
    int synth_size = 1000;
    bool both_faces = false;
    int k_max = 30;
    std::vector<std::string> metric_files;
    std::vector<std::string> metric_labels;
    std::string json_out;
};

void add_extraction_flags(CLI::App* cmd, Options& o) {
    auto& c = o.cfg;
    cmd->add_option("--manifest", c.manifest, "Manifest CSV (path,label,sample_id,face)")->required();
    cmd->add_option("--out", o.out, "Output directory")->required();
    cmd->add_option("--method", o.method, "proposed | fourier | gabor");
    cmd->add_option("--window-size", c.window_size, "Window side in pixels");
    cmd->add_option("--windows-per-image", c.windows_per_image, "Windows sampled per image");
    cmd->add_option("--seed", c.seed, "Window sampling seed");
    cmd->add_option("--margin", c.margin, "Minimum distance of windows from the border");
    cmd->add_flag("--align", c.align, "Radon-align images before sampling windows");
    cmd->add_option("--angle-step", c.angle_step, "Alignment angle step in degrees");
    cmd->add_option("--r-max", c.r_max, "Largest dilation radius");
    cmd->add_option("--voxel-budget", c.voxel_budget, "Largest distance volume allowed");
    cmd->add_option("--deltas", o.deltas, "Voss cube sides, comma separated");
    cmd->add_option("--fourier-rings", c.baseline.fourier_rings, "Fourier ring count");
    cmd->add_option("--gabor-scales", c.baseline.gabor_scales, "Gabor scales");
    cmd->add_option("--gabor-orientations", c.baseline.gabor_orientations, "Gabor orientations");
    cmd->add_option("--threads", c.threads, "Worker threads (0: all CPUs)");
}

void add_evaluation_flags(CLI::App* cmd, Options& o) {
    auto& c = o.cfg;
    cmd->add_option("--features", o.features, "features.csv")->required();
    cmd->add_option("--out", o.out, "Output directory")->required();
    cmd->add_option("--method", o.method, "Method name recorded in the report");
    cmd->add_option("--transform", o.transform, "scatter | pca | none");
    cmd->add_option("--components", c.components, "Projected components kept");
    cmd->add_option("--ridge", c.ridge, "Relative ridge added to the within-class scatter");
    cmd->add_option("--folds", c.folds, "Cross-validation folds");
    cmd->add_option("--seed", c.seed, "Fold assignment seed");
    cmd->add_option("--svm-c", c.svm_c, "SVM regularization C");
    cmd->add_option("--group-by", c.group_by, "Keep rows of one sample_id in one fold");
}

int run_synth(Options& o) {
    const auto manifest = synth_corpus(o.out, parse_double_list(o.hursts), o.images_per_class,
                                       o.synth_size, o.cfg.seed, o.both_faces);
    std::cout << "wrote " << manifest.string() << '\n';
    return 0;
}

int run_extract(Options& o) {
    o.cfg.method = parse_method(o.method);
    o.cfg.deltas = parse_int_list(o.deltas);
    o.cfg.output_dir = o.out;
    const auto result = run_extraction(o.cfg);
    for (const auto& e : result.errors) std::cerr << "warning: skipped " << e << '\n';
    std::cout << result.table.records.size() << " windows x " << result.table.feature_count()
              << " features -> " << (o.cfg.output_dir / "features.csv").string() << '\n';
    return 0;
}

int run_pair(Options& o) {
    const FeatureTable paired = pair_faces(read_features_csv(o.features));
    write_features_csv(paired, o.out);
    std::cout << paired.records.size() << " paired rows -> " << o.out << '\n';
    return 0;
}

CvOptions evaluation_options(Options& o, const FeatureTable& table) {
    o.cfg.transform = parse_transform(o.transform);
    o.cfg.validate_evaluation();
    CvOptions cv = o.cfg.cv_options();
    if (o.cfg.group_by == "sample_id") cv.groups = table.sample_ids();
    return cv;
}

int run_eval(Options& o) {
    const FeatureTable table = read_features_csv(o.features);
    const CvOptions cv = evaluation_options(o, table);
    const EvalReport report = cross_validate(table.to_matrix(), cv);
    const std::filesystem::path dir = o.out;
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", report_json(o.method, report, o.cfg));
    const std::string table_text = format_table({{o.method, report}});
    write_text(dir / "report.txt", table_text);
    write_confusion_csv(report.confusion, dir / "confusion.csv");
    std::cout << table_text;
    return 0;
}

int run_sweep(Options& o) {
    const FeatureTable table = read_features_csv(o.features);
    const CvOptions cv = evaluation_options(o, table);
    const auto reports = sweep_descriptors(table.to_matrix(), o.k_max, cv);
    const std::filesystem::path dir = o.out;
    std::filesystem::create_directories(dir);
    write_sweep_csv(reports, dir / "sweep.csv");
    std::vector<std::pair<std::string, EvalReport>> rows;
    for (const auto& r : reports) rows.emplace_back(o.method, r);
    std::cout << format_table(rows);
    return 0;
}

int run_metrics(Options& o) {
    if (!o.metric_labels.empty() && o.metric_labels.size() != o.metric_files.size())
        throw ParameterError("give one --label per confusion matrix file");
    std::vector<std::pair<std::string, EvalReport>> rows;
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < o.metric_files.size(); ++i) {
        const std::filesystem::path file = o.metric_files[i];
        EvalReport r;
        r.confusion = read_confusion_csv(file);
        r.metrics = metrics_from_confusion(r.confusion);
        const std::string name = o.metric_labels.empty() ? file.stem().string() : o.metric_labels[i];
        rows.emplace_back(name, r);
        out.push_back({{"method", name},
                       {"cr", r.metrics.cr},
                       {"kappa", r.metrics.kappa},
                       {"ae1", r.metrics.ae1},
                       {"ae2", r.metrics.ae2},
                       {"total", r.confusion.total()}});
    }
    std::cout << format_table(rows);
    if (!o.json_out.empty()) write_text(o.json_out, out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fraxel - multiscale fractal texture descriptors and classification"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    // config-file values come first on the command line; explicit flags win
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Options o;

    auto* synth = app.add_subcommand("synth", "Generate a fractional Brownian texture corpus");
    synth->add_option("--out", o.out, "Output directory")->required();
    synth->add_option("--hurst", o.hursts, "Hurst exponents, one class each");
    synth->add_option("--images-per-class", o.images_per_class, "Images per class");
    synth->add_option("--size", o.synth_size, "Image side in pixels");
    synth->add_option("--seed", o.cfg.seed, "Generator seed");
    synth->add_flag("--both-faces", o.both_faces, "Write superior and inferior images per sample");

    auto* extract = app.add_subcommand("extract", "Compute per-window descriptors (features.csv)");
    add_extraction_flags(extract, o);

    auto* pair = app.add_subcommand("pair", "Concatenate superior and inferior face signatures");
    pair->add_option("--features", o.features, "features.csv with both faces")->required();
    pair->add_option("--out", o.out, "Output CSV")->required();

    auto* eval = app.add_subcommand("eval", "Cross-validated classification report");
    add_evaluation_flags(eval, o);

    auto* sweep = app.add_subcommand("sweep", "Classification rate versus component count");
    add_evaluation_flags(sweep, o);
    sweep->add_option("--k-max", o.k_max, "Largest component count");

    auto* metrics = app.add_subcommand("metrics", "CR, kappa, AE1, AE2 from confusion matrix CSVs");
    metrics->add_option("files", o.metric_files, "Confusion matrix CSV files")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    metrics->add_option("--label", o.metric_labels, "Row name per file")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    metrics->add_option("--json", o.json_out, "Write the metrics as JSON");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    try {
        if (*synth) return run_synth(o);
        if (*extract) return run_extract(o);
        if (*pair) return run_pair(o);
        if (*eval) return run_eval(o);
        if (*sweep) return run_sweep(o);
        if (*metrics) return run_metrics(o);
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRunError;
    }
    return kExitRunError;
}
