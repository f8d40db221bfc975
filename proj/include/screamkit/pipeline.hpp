#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "screamkit/audio.hpp"
#include "screamkit/cnn.hpp"
#include "screamkit/dataset.hpp"
#include "screamkit/features.hpp"
#include "screamkit/metrics.hpp"
#include "screamkit/model_io.hpp"
#include "screamkit/segmentation.hpp"
#include "screamkit/svg.hpp"
#include "screamkit/svm.hpp"
#include "screamkit/tsne.hpp"
#include "screamkit/util.hpp"

namespace screamkit {

/// Raised for invalid configs or schema violations (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// One experiment: which features, classifier and class scheme to run.
struct ExperimentConfig {
    std::string manifest;
    std::string out_dir = "out";
    int classes = 3;
    FeatureSetId feature_set = FeatureSetId::FS1;
    std::string classifier = "svm";
    std::string features_path;   // feature JSONL for split/train/eval/project
    std::string split_path;      // split JSON for train/eval
    std::string vggish_path;     // FS2 embeddings JSONL
    std::array<double, 3> ratios{0.70, 0.15, 0.15};
    std::uint64_t split_seed = 0;
    std::uint64_t undersample_seed = 0;
    std::uint64_t model_seed = 0;
    SvmParams svm;
    CnnArch cnn_arch;
    CnnTrainConfig cnn_train;

    std::string tag() const
    {
        return to_string(feature_set) + "_" + classifier + "_" + std::to_string(classes) + "c";
    }
};

inline ExperimentConfig parse_experiment_config(const nlohmann::json& j)
{
    ExperimentConfig cfg;
    try {
        if (j.contains("manifest")) cfg.manifest = j["manifest"].get<std::string>();
        if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
        if (j.contains("classes")) cfg.classes = j["classes"].get<int>();
        if (j.contains("feature_set"))
            cfg.feature_set = feature_set_from_string(j["feature_set"].get<std::string>());
        if (j.contains("classifier")) cfg.classifier = j["classifier"].get<std::string>();
        if (j.contains("features")) cfg.features_path = j["features"].get<std::string>();
        if (j.contains("split_file")) cfg.split_path = j["split_file"].get<std::string>();
        if (j.contains("vggish_embeddings") && !j["vggish_embeddings"].is_null())
            cfg.vggish_path = j["vggish_embeddings"].get<std::string>();
        if (j.contains("ratios")) {
            const auto r = j["ratios"].get<std::vector<double>>();
            if (r.size() != 3) throw ConfigError("config: ratios must have 3 entries");
            cfg.ratios = {r[0], r[1], r[2]};
        }
        if (j.contains("seeds")) {
            const auto& s = j["seeds"];
            if (s.contains("split")) cfg.split_seed = s["split"].get<std::uint64_t>();
            if (s.contains("undersample"))
                cfg.undersample_seed = s["undersample"].get<std::uint64_t>();
            if (s.contains("model")) cfg.model_seed = s["model"].get<std::uint64_t>();
        }
        if (j.contains("svm")) {
            const auto& s = j["svm"];
            if (s.contains("kernel")) cfg.svm.kernel = kernel_from_string(s["kernel"].get<std::string>());
            if (s.contains("C")) cfg.svm.C = s["C"].get<double>();
            if (s.contains("gamma")) cfg.svm.gamma = s["gamma"].get<double>();
            if (s.contains("tol")) cfg.svm.tol = s["tol"].get<double>();
        }
        if (j.contains("cnn")) {
            const auto& c = j["cnn"];
            if (c.contains("conv_channels"))
                cfg.cnn_arch.conv_channels = c["conv_channels"].get<std::vector<int>>();
            if (c.contains("dense_dims"))
                cfg.cnn_arch.dense_dims = c["dense_dims"].get<std::vector<int>>();
            if (c.contains("lr")) cfg.cnn_train.lr = c["lr"].get<double>();
            if (c.contains("batch_size")) cfg.cnn_train.batch_size = c["batch_size"].get<int>();
            if (c.contains("max_epochs")) cfg.cnn_train.max_epochs = c["max_epochs"].get<int>();
            if (c.contains("patience")) cfg.cnn_train.patience = c["patience"].get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (cfg.classes != 3 && cfg.classes != 6)
        throw ConfigError("config: classes must be 3 or 6");
    if (cfg.classifier != "svm" && cfg.classifier != "cnn")
        throw ConfigError("config: classifier must be svm or cnn");
    // the log-mel set drives the CNN, the vector sets drive the SVM
    if (cfg.feature_set == FeatureSetId::FS5 && cfg.classifier != "cnn")
        throw ConfigError("config: fs5 requires the cnn classifier");
    if (cfg.feature_set != FeatureSetId::FS5 && cfg.classifier != "svm")
        throw ConfigError("config: " + to_string(cfg.feature_set) + " requires the svm classifier");
    cfg.cnn_train.seed = cfg.model_seed;
    cfg.cnn_arch.n_classes = cfg.classes;
    return cfg;
}

/// Expand a config with an "experiments" override list into per-run configs.
inline std::vector<nlohmann::json> expand_experiments(const nlohmann::json& base)
{
    if (!base.contains("experiments")) return {base};
    std::vector<nlohmann::json> out;
    nlohmann::json stripped = base;
    stripped.erase("experiments");
    for (const auto& overrides : base["experiments"]) {
        nlohmann::json merged = stripped;
        merged.update(overrides);
        out.push_back(std::move(merged));
    }
    return out;
}

struct ExtractResult {
    std::vector<std::string> errors; // one entry per failed manifest row
    std::size_t songs_done = 0;
    std::vector<std::string> files_written;
};

namespace detail {

struct SongData {
    ManifestRow row;
    std::vector<Block> blocks;
    std::vector<LabeledBlock> labeled;
    std::vector<Annotation> annotations;
};

inline std::vector<SongData> load_songs(const std::string& manifest_path,
                                        std::vector<std::string>& errors)
{
    std::vector<SongData> songs;
    for (const auto& row : parse_manifest_file(manifest_path)) {
        try {
            AudioClip clip = load_canonical(row.audio_path);
            clip.source_id = row.song_id;
            SongData song;
            song.row = row;
            song.annotations = parse_annotations(read_text_file(row.annotation_path));
            song.blocks = make_blocks(clip);
            for (auto& b : song.blocks) b.source_id = row.song_id;
            song.labeled = label_blocks(song.blocks, song.annotations, row.band_id);
            log_info("extract: " + row.song_id + " -> " + std::to_string(song.blocks.size()) +
                     " blocks");
            songs.push_back(std::move(song));
        } catch (const std::exception& e) {
            errors.push_back(row.song_id + ": " + e.what());
            log_error("extract: " + row.song_id + " failed: " + e.what());
        }
    }
    return songs;
}

} // namespace detail

/// Extract feature files (one JSON-Lines file per set) for every readable
/// manifest row. Failures are collected per row; the batch never aborts.
inline ExtractResult run_extract(const std::string& manifest_path,
                                 const std::vector<FeatureSetId>& sets, const std::string& out_dir,
                                 const std::string& vggish_path = "", DspConfig dsp = {})
{
    std::filesystem::create_directories(out_dir);
    ExtractResult result;
    auto songs = detail::load_songs(manifest_path, result.errors);
    result.songs_done = songs.size();

    std::map<BlockRef, std::vector<double>> embeddings;
    bool embeddings_loaded = false;

    const FeatureExtractor extractor(dsp);
    for (const FeatureSetId set : sets) {
        std::vector<FeatureVector> records;
        for (const auto& song : songs) {
            bool song_ok = true;
            std::vector<FeatureVector> song_records;
            for (std::size_t i = 0; i < song.blocks.size(); ++i) {
                const auto& block = song.blocks[i];
                const auto& labeled = song.labeled[i];
                FeatureVector fv;
                if (set == FeatureSetId::FS2) {
                    if (!embeddings_loaded) {
                        if (vggish_path.empty())
                            throw ConfigError("extract: fs2 requires a vggish embeddings file");
                        for (auto& e : ingest_vggish_file(vggish_path))
                            embeddings.emplace(e.block_ref, std::move(e.values));
                        embeddings_loaded = true;
                    }
                    const BlockRef ref{block.source_id, block.block_index};
                    const auto it = embeddings.find(ref);
                    if (it == embeddings.end()) {
                        result.errors.push_back(song.row.song_id + ": missing vggish embedding for block " +
                                                std::to_string(block.block_index));
                        song_ok = false;
                        break;
                    }
                    fv.set_id = FeatureSetId::FS2;
                    fv.values = it->second;
                    fv.block_ref = ref;
                    fv.start_s = block.start_time;
                } else {
                    fv = extractor.extract(block, set);
                }
                fv.band_id = song.row.band_id;
                fv.label = to_string(labeled.label6);
                song_records.push_back(std::move(fv));
            }
            if (song_ok)
                for (auto& r : song_records) records.push_back(std::move(r));
        }
        const std::string path =
            (std::filesystem::path(out_dir) / ("features_" + to_string(set) + ".jsonl")).string();
        write_features_file(path, records);
        result.files_written.push_back(path);
        log_info("extract: wrote " + std::to_string(records.size()) + " records to " + path);
    }
    return result;
}

namespace detail {

inline std::vector<LabeledBlock> labeled_from_features(const std::vector<FeatureVector>& features)
{
    std::vector<LabeledBlock> out;
    out.reserve(features.size());
    for (const auto& fv : features) {
        LabeledBlock lb;
        lb.block_ref = fv.block_ref;
        lb.band_id = fv.band_id;
        lb.start_time = fv.start_s;
        lb.label6 = label6_from_string(fv.label);
        lb.label3 = map_3class(lb.label6);
        out.push_back(std::move(lb));
    }
    return out;
}

} // namespace detail

/// Undersample and band-split a feature file, then write the split JSON.
/// Band-disjointness is re-checked before anything is written.
inline Split run_split(const std::string& features_path, std::array<double, 3> ratios, int classes,
                       std::uint64_t split_seed, std::uint64_t undersample_seed,
                       const std::string& out_path)
{
    const auto features = read_features_file(features_path);
    if (features.empty()) throw ConfigError("split: feature file is empty");
    auto labeled = detail::labeled_from_features(features);
    labeled = undersample(labeled, classes, undersample_seed);
    const Split split = band_split(labeled, ratios, split_seed);

    std::set<std::string> train_bands, other_bands;
    for (const auto& b : split.train) train_bands.insert(b.band_id);
    for (const auto& b : split.validation) other_bands.insert(b.band_id);
    for (const auto& b : split.test) other_bands.insert(b.band_id);
    for (const auto& band : train_bands)
        if (other_bands.count(band))
            throw std::logic_error("split: band-disjointness self-check failed for " + band);

    write_text_file(out_path, split_to_json(split, undersample_seed, classes).dump(2) + "\n");
    log_info("split: train/validation/test = " + std::to_string(split.train.size()) + "/" +
             std::to_string(split.validation.size()) + "/" + std::to_string(split.test.size()));
    return split;
}

namespace detail {

struct JoinedSet {
    std::vector<const FeatureVector*> vectors;
    std::vector<int> labels; // class indices under the configured scheme
};

inline int class_index(const FeatureVector& fv, int classes)
{
    const Label6 l6 = label6_from_string(fv.label);
    return classes == 3 ? static_cast<int>(map_3class(l6)) : static_cast<int>(l6);
}

inline JoinedSet join_partition(const std::map<BlockRef, const FeatureVector*>& index,
                                const std::vector<BlockRef>& refs, int classes,
                                const char* partition)
{
    JoinedSet out;
    for (const auto& ref : refs) {
        const auto it = index.find(ref);
        if (it == index.end())
            throw ConfigError(std::string("train/eval: ") + partition + " block " + ref.source_id +
                              ":" + std::to_string(ref.block_index) + " missing from feature file");
        out.vectors.push_back(it->second);
        out.labels.push_back(class_index(*it->second, classes));
    }
    return out;
}

inline std::map<BlockRef, const FeatureVector*> index_features(const std::vector<FeatureVector>& features)
{
    std::map<BlockRef, const FeatureVector*> index;
    for (const auto& fv : features) index[fv.block_ref] = &fv;
    return index;
}

} // namespace detail

struct TrainResult {
    std::string model_path;
    std::string log_path;
};

/// Train the configured classifier on the train partition (validation drives
/// CNN early stopping) and write the model file plus a training log. The test
/// partition is never touched here.
inline TrainResult run_train(const ExperimentConfig& cfg)
{
    if (cfg.features_path.empty() || cfg.split_path.empty())
        throw ConfigError("train: config needs features and split_file");
    std::filesystem::create_directories(cfg.out_dir);

    const auto features = read_features_file(cfg.features_path);
    if (!features.empty() && features[0].set_id != cfg.feature_set)
        throw ConfigError("train: feature file holds " + to_string(features[0].set_id) +
                          " but config says " + to_string(cfg.feature_set));
    const auto index = detail::index_features(features);
    const auto refs = split_refs_from_json(nlohmann::json::parse(read_text_file(cfg.split_path)));

    const auto train = detail::join_partition(index, refs.train, cfg.classes, "train");
    const auto val = detail::join_partition(index, refs.validation, cfg.classes, "validation");
    log_info("train: partitions train=" + std::to_string(train.vectors.size()) +
             " validation=" + std::to_string(val.vectors.size()) + " (test excluded: " +
             std::to_string(refs.test.size()) + " blocks)");

    ModelFile file;
    file.feature_set = to_string(cfg.feature_set);
    file.classes = cfg.classes;
    file.class_names = class_names(cfg.classes);

    nlohmann::ordered_json log_json;
    log_json["experiment"] = {{"feature_set", to_string(cfg.feature_set)},
                              {"classifier", cfg.classifier},
                              {"classes", cfg.classes}};
    log_json["partitions"] = {{"train", train.vectors.size()},
                              {"validation", val.vectors.size()},
                              {"test_excluded", refs.test.size()}};

    if (cfg.classifier == "svm") {
        std::vector<FeatureVector> train_fv;
        train_fv.reserve(train.vectors.size());
        for (const auto* fv : train.vectors) train_fv.push_back(*fv);
        const Normalizer norm = fit_normalizer(train_fv);

        std::vector<std::vector<double>> X;
        X.reserve(train_fv.size());
        for (const auto& fv : train_fv) X.push_back(apply_normalizer(norm, fv).values);

        const SvmModel model = svm_train(X, train.labels, cfg.svm);
        file.kind = "svm";
        file.normalizer = norm;
        file.svm = model;

        auto machines = nlohmann::ordered_json::array();
        for (const auto& m : model.machines)
            machines.push_back({{"pos_class", m.pos_class},
                                {"neg_class", m.neg_class},
                                {"iterations", m.iterations},
                                {"converged", m.converged},
                                {"dual_objective", m.dual_objective},
                                {"n_support_vectors", m.support_vectors.size()}});
        log_json["svm"] = {{"gamma", model.params.gamma}, {"machines", machines}};
    } else {
        std::vector<Mat> X, Xval;
        for (const auto* fv : train.vectors) X.push_back(fv->matrix);
        for (const auto* fv : val.vectors) Xval.push_back(fv->matrix);
        if (X.empty()) throw ConfigError("train: empty training partition");

        CnnArch arch = cfg.cnn_arch;
        arch.in_rows = static_cast<int>(X[0].rows);
        arch.in_cols = static_cast<int>(X[0].cols);
        CnnModel<float> model = cnn_init<float>(arch, cfg.model_seed);
        const CnnTrainHistory history = cnn_train(model, X, train.labels, Xval, val.labels, cfg.cnn_train);

        file.kind = "cnn";
        file.cnn = model;
        file.cnn_train_config = cfg.cnn_train;

        auto epochs = nlohmann::ordered_json::array();
        for (const auto& e : history.epochs)
            epochs.push_back({{"epoch", e.epoch},
                              {"train_loss", e.train_loss},
                              {"train_acc", e.train_acc},
                              {"val_loss", e.val_loss},
                              {"val_acc", e.val_acc}});
        log_json["cnn"] = {{"best_epoch", history.best_epoch}, {"epochs", epochs}};
    }

    TrainResult result;
    result.model_path =
        (std::filesystem::path(cfg.out_dir) / ("model_" + cfg.tag() + ".json")).string();
    result.log_path =
        (std::filesystem::path(cfg.out_dir) / ("train_log_" + cfg.tag() + ".json")).string();
    model_save(file, result.model_path);
    write_text_file(result.log_path, log_json.dump(2) + "\n");
    return result;
}

struct EvalResult {
    EvalReport report;
    std::string report_path;
    std::string recall_svg_path;
    std::string confusion_svg_path;
};

/// Evaluate a trained model on the test partition; writes the report JSON,
/// the class-wise recall bar chart and the confusion heatmap.
inline EvalResult run_eval(const ExperimentConfig& cfg, const std::string& model_path)
{
    if (cfg.features_path.empty() || cfg.split_path.empty())
        throw ConfigError("eval: config needs features and split_file");
    std::filesystem::create_directories(cfg.out_dir);

    const ModelFile file = model_load(model_path);
    if (file.kind != cfg.classifier)
        throw ConfigError("eval: model kind " + file.kind + " does not match config classifier " +
                          cfg.classifier);
    if (file.classes != cfg.classes)
        throw ConfigError("eval: model was trained for " + std::to_string(file.classes) +
                          " classes, config says " + std::to_string(cfg.classes));
    if (file.feature_set != to_string(cfg.feature_set))
        throw ConfigError("eval: model was trained on " + file.feature_set + ", config says " +
                          to_string(cfg.feature_set));

    const auto features = read_features_file(cfg.features_path);
    const auto index = detail::index_features(features);
    const auto refs = split_refs_from_json(nlohmann::json::parse(read_text_file(cfg.split_path)));
    const auto test = detail::join_partition(index, refs.test, cfg.classes, "test");
    log_info("eval: scoring " + std::to_string(test.vectors.size()) + " test blocks");

    std::vector<int> y_pred;
    y_pred.reserve(test.vectors.size());
    if (file.kind == "svm") {
        if (!file.normalizer) throw ConfigError("eval: svm model file lacks a normalizer");
        for (const auto* fv : test.vectors)
            y_pred.push_back(svm_predict(file.svm, apply_normalizer(*file.normalizer, *fv).values).label);
    } else {
        for (const auto* fv : test.vectors) {
            const auto probs = cnn_forward(file.cnn, fv->matrix);
            y_pred.push_back(static_cast<int>(
                std::max_element(probs.begin(), probs.end()) - probs.begin()));
        }
    }

    EvalResult result;
    result.report.experiment = {to_string(cfg.feature_set), cfg.classifier, cfg.classes,
                                cfg.split_seed};
    result.report.confusion =
        confusion_matrix(test.labels, y_pred, cfg.classes, class_names(cfg.classes));
    result.report.metrics = metrics(result.report.confusion);

    const auto out = std::filesystem::path(cfg.out_dir);
    result.report_path = (out / ("report_" + cfg.tag() + ".json")).string();
    result.recall_svg_path = (out / ("recall_" + cfg.tag() + ".svg")).string();
    result.confusion_svg_path = (out / ("confusion_" + cfg.tag() + ".svg")).string();
    write_text_file(result.report_path, report_to_json(result.report).dump(2) + "\n");
    write_text_file(result.recall_svg_path,
                    svg_recall_bar_chart(result.report.confusion.names,
                                         result.report.metrics.class_recall));
    write_text_file(result.confusion_svg_path, svg_confusion_heatmap(result.report.confusion));
    return result;
}

struct ProjectResult {
    Projection2D projection;
    std::string json_path;
    std::string svg_path;
};

/// t-SNE projection of a vector feature file (FS1-FS4), colored by label.
inline ProjectResult run_project(const std::string& features_path, int classes,
                                 const std::string& out_dir, TsneParams params,
                                 bool normalize = true)
{
    std::filesystem::create_directories(out_dir);
    if (classes != 3 && classes != 6) throw ConfigError("project: classes must be 3 or 6");
    const auto features = read_features_file(features_path);
    if (features.empty()) throw ConfigError("project: feature file is empty");
    if (features[0].set_id == FeatureSetId::FS5)
        throw ConfigError("project: fs5 matrices are not projectable; use a vector feature set");

    std::vector<FeatureVector> work = features;
    if (normalize) {
        const Normalizer norm = fit_normalizer(work);
        for (auto& fv : work) fv = apply_normalizer(norm, fv);
    }
    std::vector<std::vector<double>> X;
    std::vector<int> labels;
    for (const auto& fv : work) {
        X.push_back(fv.values);
        labels.push_back(detail::class_index(fv, classes));
    }

    ProjectResult result;
    result.projection = tsne(X, params, labels);

    nlohmann::ordered_json j;
    j["seed"] = result.projection.seed;
    j["perplexity"] = result.projection.perplexity;
    j["initial_kl"] = result.projection.initial_kl;
    j["final_kl"] = result.projection.final_kl;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : result.projection.points) pts.push_back({p[0], p[1]});
    j["points"] = pts;
    j["labels"] = result.projection.labels;

    const auto set_name = to_string(features[0].set_id);
    const auto out = std::filesystem::path(out_dir);
    result.json_path = (out / ("projection_" + set_name + ".json")).string();
    result.svg_path = (out / ("projection_" + set_name + ".svg")).string();
    write_text_file(result.json_path, j.dump(2) + "\n");
    write_text_file(result.svg_path,
                    svg_projection_scatter(result.projection, class_names(classes)));
    return result;
}

struct StatsResult {
    DatasetStats stats;
    std::vector<std::string> errors;
    std::string json_path;
};

/// Dataset statistics straight from a manifest: block counts per class,
/// annotated seconds per class, songs per band.
inline StatsResult run_stats(const std::string& manifest_path, const std::string& out_path)
{
    StatsResult result;
    const auto songs = detail::load_songs(manifest_path, result.errors);
    std::vector<LabeledBlock> all_blocks;
    std::vector<std::vector<Annotation>> all_annotations;
    for (const auto& song : songs) {
        all_blocks.insert(all_blocks.end(), song.labeled.begin(), song.labeled.end());
        all_annotations.push_back(song.annotations);
    }
    result.stats = dataset_stats(all_blocks, all_annotations);
    result.json_path = out_path;
    write_text_file(out_path, stats_to_json(result.stats).dump(2) + "\n");
    return result;
}

} // namespace screamkit
