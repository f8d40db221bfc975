#pragma once

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "screamkit/cnn.hpp"
#include "screamkit/features.hpp"
#include "screamkit/svm.hpp"
#include "screamkit/util.hpp"

namespace screamkit {

inline constexpr int kModelFileVersion = 1;

struct ModelIoError : std::runtime_error {
    enum class Kind { Malformed, VersionMismatch, ChecksumMismatch };
    Kind kind;
    ModelIoError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

/// A trained classifier plus everything eval needs: feature set, class
/// scheme/names and (for SVM) the normalizer fitted on the training partition.
struct ModelFile {
    std::string kind; // "svm" | "cnn"
    std::string feature_set;
    int classes = 3;
    std::vector<std::string> class_names;
    std::optional<Normalizer> normalizer;
    SvmModel svm;
    CnnModel<float> cnn;
    CnnTrainConfig cnn_train_config;
};

namespace detail {

inline std::string checksum_hex(const std::string& payload)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    return buf;
}

inline nlohmann::ordered_json svm_payload(const ModelFile& file)
{
    nlohmann::ordered_json j;
    j["feature_set"] = file.feature_set;
    j["classes"] = file.classes;
    j["class_names"] = file.class_names;
    if (file.normalizer) {
        j["normalizer"] = {{"set_id", to_string(file.normalizer->set_id)},
                           {"means", file.normalizer->means},
                           {"stds", file.normalizer->stds}};
    } else {
        j["normalizer"] = nullptr;
    }
    j["params"] = {{"kernel", to_string(file.svm.params.kernel)},
                   {"C", file.svm.params.C},
                   {"gamma", file.svm.params.gamma},
                   {"tol", file.svm.params.tol}};
    j["class_ids"] = file.svm.classes;
    j["dim"] = file.svm.dim;
    auto machines = nlohmann::ordered_json::array();
    for (const auto& m : file.svm.machines) {
        nlohmann::ordered_json mj;
        mj["pos_class"] = m.pos_class;
        mj["neg_class"] = m.neg_class;
        mj["bias"] = m.bias;
        mj["dual_coef"] = m.dual_coef;
        auto svs = nlohmann::ordered_json::array();
        for (const auto& sv : m.support_vectors) svs.push_back(sv);
        mj["support_vectors"] = svs;
        machines.push_back(std::move(mj));
    }
    j["machines"] = machines;
    return j;
}

inline nlohmann::ordered_json cnn_payload(const ModelFile& file)
{
    nlohmann::ordered_json j;
    j["feature_set"] = file.feature_set;
    j["classes"] = file.classes;
    j["class_names"] = file.class_names;
    j["arch"] = {{"conv_channels", file.cnn.arch.conv_channels},
                 {"dense_dims", file.cnn.arch.dense_dims},
                 {"n_classes", file.cnn.arch.n_classes},
                 {"in_rows", file.cnn.arch.in_rows},
                 {"in_cols", file.cnn.arch.in_cols}};
    j["seed"] = file.cnn.seed;
    j["train_config"] = {{"lr", file.cnn_train_config.lr},
                         {"batch_size", file.cnn_train_config.batch_size},
                         {"max_epochs", file.cnn_train_config.max_epochs},
                         {"patience", file.cnn_train_config.patience},
                         {"seed", file.cnn_train_config.seed}};
    j["conv_w"] = file.cnn.conv_w;
    j["conv_b"] = file.cnn.conv_b;
    j["dense_w"] = file.cnn.dense_w;
    j["dense_b"] = file.cnn.dense_b;
    return j;
}

} // namespace detail

inline std::string model_to_string(const ModelFile& file)
{
    nlohmann::ordered_json j;
    j["kind"] = file.kind;
    j["version"] = kModelFileVersion;
    const nlohmann::ordered_json payload =
        file.kind == "svm" ? detail::svm_payload(file) : detail::cnn_payload(file);
    j["payload"] = payload;
    j["checksum"] = detail::checksum_hex(payload.dump());
    return j.dump();
}

inline void model_save(const ModelFile& file, const std::string& path)
{
    if (file.kind != "svm" && file.kind != "cnn")
        throw std::invalid_argument("model_save: kind must be svm or cnn");
    write_text_file(path, model_to_string(file));
}

inline ModelFile model_from_string(const std::string& text)
{
    using Kind = ModelIoError::Kind;
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelIoError(Kind::Malformed, std::string("model file: ") + e.what());
    }
    for (const char* key : {"kind", "version", "payload", "checksum"})
        if (!j.contains(key)) throw ModelIoError(Kind::Malformed, std::string("model file: missing ") + key);
    if (j["version"].get<int>() != kModelFileVersion)
        throw ModelIoError(Kind::VersionMismatch,
                           "model file: unsupported version " + j["version"].dump());
    const std::string expect = detail::checksum_hex(j["payload"].dump());
    if (j["checksum"].get<std::string>() != expect)
        throw ModelIoError(Kind::ChecksumMismatch, "model file: checksum mismatch");

    ModelFile file;
    file.kind = j["kind"].get<std::string>();
    const auto& p = j["payload"];
    try {
        file.feature_set = p.at("feature_set").get<std::string>();
        file.classes = p.at("classes").get<int>();
        file.class_names = p.at("class_names").get<std::vector<std::string>>();
        if (file.kind == "svm") {
            if (!p.at("normalizer").is_null()) {
                Normalizer norm;
                norm.set_id = feature_set_from_string(p["normalizer"].at("set_id").get<std::string>());
                norm.means = p["normalizer"].at("means").get<std::vector<double>>();
                norm.stds = p["normalizer"].at("stds").get<std::vector<double>>();
                file.normalizer = std::move(norm);
            }
            file.svm.params.kernel = kernel_from_string(p.at("params").at("kernel").get<std::string>());
            file.svm.params.C = p.at("params").at("C").get<double>();
            file.svm.params.gamma = p.at("params").at("gamma").get<double>();
            file.svm.params.tol = p.at("params").at("tol").get<double>();
            file.svm.classes = p.at("class_ids").get<std::vector<int>>();
            file.svm.dim = p.at("dim").get<std::size_t>();
            for (const auto& mj : p.at("machines")) {
                BinarySvm m;
                m.pos_class = mj.at("pos_class").get<int>();
                m.neg_class = mj.at("neg_class").get<int>();
                m.bias = mj.at("bias").get<double>();
                m.dual_coef = mj.at("dual_coef").get<std::vector<double>>();
                for (const auto& sv : mj.at("support_vectors"))
                    m.support_vectors.push_back(sv.get<std::vector<double>>());
                file.svm.machines.push_back(std::move(m));
            }
        } else if (file.kind == "cnn") {
            file.cnn.arch.conv_channels = p.at("arch").at("conv_channels").get<std::vector<int>>();
            file.cnn.arch.dense_dims = p.at("arch").at("dense_dims").get<std::vector<int>>();
            file.cnn.arch.n_classes = p.at("arch").at("n_classes").get<int>();
            file.cnn.arch.in_rows = p.at("arch").at("in_rows").get<int>();
            file.cnn.arch.in_cols = p.at("arch").at("in_cols").get<int>();
            file.cnn.seed = p.at("seed").get<std::uint64_t>();
            file.cnn_train_config.lr = p.at("train_config").at("lr").get<double>();
            file.cnn_train_config.batch_size = p.at("train_config").at("batch_size").get<int>();
            file.cnn_train_config.max_epochs = p.at("train_config").at("max_epochs").get<int>();
            file.cnn_train_config.patience = p.at("train_config").at("patience").get<int>();
            file.cnn_train_config.seed = p.at("train_config").at("seed").get<std::uint64_t>();
            file.cnn.conv_w = p.at("conv_w").get<std::vector<std::vector<float>>>();
            file.cnn.conv_b = p.at("conv_b").get<std::vector<std::vector<float>>>();
            file.cnn.dense_w = p.at("dense_w").get<std::vector<std::vector<float>>>();
            file.cnn.dense_b = p.at("dense_b").get<std::vector<std::vector<float>>>();
        } else {
            throw ModelIoError(Kind::Malformed, "model file: unknown kind " + file.kind);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ModelIoError(Kind::Malformed, std::string("model file: ") + e.what());
    }
    return file;
}

inline ModelFile model_load(const std::string& path)
{
    return model_from_string(read_text_file(path));
}

} // namespace screamkit
