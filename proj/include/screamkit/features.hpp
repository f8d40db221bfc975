#pragma once

#include <cmath>
#include <compare>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "screamkit/dsp.hpp"
#include "screamkit/segmentation.hpp"

namespace screamkit {

enum class FeatureSetId { FS1, FS2, FS3, FS4, FS5 };

inline std::string to_string(FeatureSetId id)
{
    switch (id) {
    case FeatureSetId::FS1: return "fs1";
    case FeatureSetId::FS2: return "fs2";
    case FeatureSetId::FS3: return "fs3";
    case FeatureSetId::FS4: return "fs4";
    case FeatureSetId::FS5: return "fs5";
    }
    return "?";
}

inline FeatureSetId feature_set_from_string(const std::string& s)
{
    if (s == "fs1") return FeatureSetId::FS1;
    if (s == "fs2") return FeatureSetId::FS2;
    if (s == "fs3") return FeatureSetId::FS3;
    if (s == "fs4") return FeatureSetId::FS4;
    if (s == "fs5") return FeatureSetId::FS5;
    throw std::invalid_argument("unknown feature set id: " + s);
}

inline constexpr int kVggishDim = 128;

/// One per-block feature observation. FS1-FS4 fill `values`; FS5 fills
/// `matrix` (n_mels x frames log-mel).
struct FeatureVector {
    FeatureSetId set_id = FeatureSetId::FS1;
    std::vector<double> values;
    Mat matrix;
    BlockRef block_ref;
    std::string band_id;
    double start_s = 0.0;
    std::string label; // 6-class label name, empty if unlabeled
};

/// Fixed vector lengths under the default DspConfig.
inline std::size_t expected_length(FeatureSetId id)
{
    switch (id) {
    case FeatureSetId::FS1: return 76;
    case FeatureSetId::FS2: return kVggishDim;
    case FeatureSetId::FS3: return 52;
    case FeatureSetId::FS4: return 24;
    case FeatureSetId::FS5: return 0; // matrix-valued
    }
    return 0;
}

/// For each feature dimension, in series order, append the mean then the
/// population standard deviation across frames.
inline std::vector<double> aggregate(const std::vector<FrameSeries>& series)
{
    if (series.empty()) throw std::invalid_argument("aggregate: no series given");
    const std::size_t frames = series[0].n_frames();
    if (frames == 0) throw std::invalid_argument("aggregate: series has no frames");
    for (const auto& s : series)
        if (s.n_frames() != frames)
            throw std::invalid_argument("aggregate: frame count mismatch between series");

    std::vector<double> out;
    for (const auto& s : series) {
        for (std::size_t d = 0; d < s.dims(); ++d) {
            double mean = 0.0;
            for (std::size_t t = 0; t < frames; ++t) mean += s.values.at(d, t);
            mean /= static_cast<double>(frames);
            double var = 0.0;
            for (std::size_t t = 0; t < frames; ++t) {
                const double diff = s.values.at(d, t) - mean;
                var += diff * diff;
            }
            var /= static_cast<double>(frames);
            out.push_back(mean);
            out.push_back(std::sqrt(var));
        }
    }
    return out;
}

/// Computes feature sets for blocks. The mel filterbank is built once and
/// shared; extraction itself is pure.
class FeatureExtractor {
public:
    explicit FeatureExtractor(DspConfig cfg = {})
        : cfg_(cfg), bank_(cfg.n_mels, cfg.fmin, cfg.fmax, cfg.window, kPipelineRate)
    {
    }

    const DspConfig& config() const { return cfg_; }

    FeatureVector extract(const Block& block, FeatureSetId id) const
    {
        if (id == FeatureSetId::FS2)
            throw std::invalid_argument("FS2 vectors come from ingest_vggish, not extraction");

        FeatureVector fv;
        fv.set_id = id;
        fv.block_ref = {block.source_id, block.block_index};
        fv.start_s = block.start_time;

        const Spectrogram spec = stft(block, cfg_.window, cfg_.hop);
        if (id == FeatureSetId::FS5) {
            fv.matrix = log_compress(mel_spectrogram(spec, bank_)).values;
            return fv;
        }

        std::vector<FrameSeries> series;
        if (id == FeatureSetId::FS1 || id == FeatureSetId::FS3) {
            const FrameSeries m = mfcc(log_compress(mel_spectrogram(spec, bank_)), cfg_.n_mfcc);
            FrameSeries dm = delta(m, cfg_.delta_width);
            dm.name = "delta_mfcc";
            series.push_back(m);
            series.push_back(std::move(dm));
        }
        if (id == FeatureSetId::FS1 || id == FeatureSetId::FS4) {
            series.push_back(frame_rms(block, cfg_.window, cfg_.hop));
            series.push_back(frame_zcr(block, cfg_.window, cfg_.hop));
            series.push_back(spectral_centroid(spec));
            series.push_back(spectral_contrast(spec, cfg_.contrast_bands, cfg_.contrast_quantile,
                                               cfg_.contrast_fmin));
            series.push_back(spectral_flatness(spec));
            series.push_back(spectral_rolloff(spec, cfg_.rolloff_fraction));
        }
        // FS1 order: mfcc, delta_mfcc, rms, zcr, centroid, contrast, flatness, rolloff
        fv.values = aggregate(series);
        return fv;
    }

private:
    DspConfig cfg_;
    MelFilterbank bank_;
};

inline FeatureVector assemble(const Block& block, FeatureSetId id, const DspConfig& cfg = {})
{
    return FeatureExtractor(cfg).extract(block, id);
}

struct FeatureIoError : std::runtime_error {
    enum class Kind { MalformedJson, BadRecord, DimensionMismatch };
    Kind kind;
    int line;
    FeatureIoError(Kind k, int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), kind(k), line(line_)
    {
    }
};

/// Read precomputed VGGish embeddings (JSON-Lines records with source_id,
/// block_index and a fixed-length embedding array). The embedding dimension
/// must be consistent across the whole file.
inline std::vector<FeatureVector> ingest_vggish(std::istream& in)
{
    using Kind = FeatureIoError::Kind;
    std::vector<FeatureVector> out;
    std::string line;
    int line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FeatureIoError(Kind::MalformedJson, line_no, e.what());
        }
        if (!rec.is_object() || !rec.contains("source_id") || !rec["source_id"].is_string() ||
            !rec.contains("block_index") || !rec["block_index"].is_number_integer() ||
            !rec.contains("embedding") || !rec["embedding"].is_array())
            throw FeatureIoError(Kind::BadRecord, line_no,
                                 "record must carry source_id, block_index and embedding");

        FeatureVector fv;
        fv.set_id = FeatureSetId::FS2;
        fv.block_ref = {rec["source_id"].get<std::string>(), rec["block_index"].get<int>()};
        fv.values.reserve(rec["embedding"].size());
        for (const auto& v : rec["embedding"]) {
            if (!v.is_number()) throw FeatureIoError(Kind::BadRecord, line_no, "non-numeric embedding entry");
            fv.values.push_back(v.get<double>());
        }
        if (dim == 0 && !fv.values.empty()) dim = fv.values.size();
        if (fv.values.size() != dim)
            throw FeatureIoError(Kind::DimensionMismatch, line_no,
                                 "embedding length " + std::to_string(fv.values.size()) +
                                     " != " + std::to_string(dim));
        out.push_back(std::move(fv));
    }
    return out;
}

inline std::vector<FeatureVector> ingest_vggish_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings file: " + path);
    return ingest_vggish(in);
}

/// Per-dimension z-score parameters fitted on a training partition.
/// Zero-variance dimensions store std = 1 so normalized values stay 0.
struct Normalizer {
    FeatureSetId set_id = FeatureSetId::FS1;
    std::vector<double> means;
    std::vector<double> stds;

    friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

inline Normalizer fit_normalizer(const std::vector<FeatureVector>& train)
{
    if (train.empty()) throw std::invalid_argument("fit_normalizer: empty training set");
    const FeatureSetId id = train[0].set_id;
    if (id == FeatureSetId::FS5)
        throw std::invalid_argument("fit_normalizer: FS5 is log-scaled only, not z-scored");
    const std::size_t dim = train[0].values.size();
    for (const auto& fv : train) {
        if (fv.set_id != id) throw std::invalid_argument("fit_normalizer: mixed set ids");
        if (fv.values.size() != dim)
            throw std::invalid_argument("fit_normalizer: inconsistent vector length");
    }

    Normalizer norm;
    norm.set_id = id;
    norm.means.assign(dim, 0.0);
    norm.stds.assign(dim, 0.0);
    const double n = static_cast<double>(train.size());
    for (const auto& fv : train)
        for (std::size_t d = 0; d < dim; ++d) norm.means[d] += fv.values[d];
    for (double& m : norm.means) m /= n;
    for (const auto& fv : train)
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = fv.values[d] - norm.means[d];
            norm.stds[d] += diff * diff;
        }
    for (double& s : norm.stds) {
        s = std::sqrt(s / n);
        if (s == 0.0) s = 1.0;
    }
    return norm;
}

inline FeatureVector apply_normalizer(const Normalizer& norm, const FeatureVector& v)
{
    if (v.set_id != norm.set_id)
        throw std::invalid_argument("apply_normalizer: set id mismatch");
    if (v.values.size() != norm.means.size())
        throw std::invalid_argument("apply_normalizer: dimension mismatch");
    FeatureVector out = v;
    for (std::size_t d = 0; d < out.values.size(); ++d)
        out.values[d] = (out.values[d] - norm.means[d]) / norm.stds[d];
    return out;
}

/// JSON-Lines feature records: {source_id, band_id, block_index, start_s,
/// label, set_id, values} with an extra shape field for FS5.
inline std::string feature_record_json(const FeatureVector& fv)
{
    nlohmann::ordered_json rec;
    rec["source_id"] = fv.block_ref.source_id;
    rec["band_id"] = fv.band_id;
    rec["block_index"] = fv.block_ref.block_index;
    rec["start_s"] = fv.start_s;
    rec["label"] = fv.label;
    rec["set_id"] = to_string(fv.set_id);
    if (fv.set_id == FeatureSetId::FS5) {
        rec["shape"] = {fv.matrix.rows, fv.matrix.cols};
        rec["values"] = fv.matrix.v;
    } else {
        rec["values"] = fv.values;
    }
    return rec.dump();
}

inline void write_features(std::ostream& out, const std::vector<FeatureVector>& features)
{
    for (const auto& fv : features) out << feature_record_json(fv) << '\n';
}

inline void write_features_file(const std::string& path, const std::vector<FeatureVector>& features)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write feature file: " + path);
    write_features(out, features);
}

inline std::vector<FeatureVector> read_features(std::istream& in)
{
    using Kind = FeatureIoError::Kind;
    std::vector<FeatureVector> out;
    std::string line;
    int line_no = 0;
    std::optional<FeatureSetId> set_id;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FeatureIoError(Kind::MalformedJson, line_no, e.what());
        }
        for (const char* key : {"source_id", "band_id", "block_index", "start_s", "label",
                                "set_id", "values"})
            if (!rec.contains(key))
                throw FeatureIoError(Kind::BadRecord, line_no, std::string("missing field ") + key);

        FeatureVector fv;
        fv.set_id = feature_set_from_string(rec["set_id"].get<std::string>());
        if (set_id && fv.set_id != *set_id)
            throw FeatureIoError(Kind::BadRecord, line_no, "mixed set ids in one feature file");
        set_id = fv.set_id;
        fv.block_ref = {rec["source_id"].get<std::string>(), rec["block_index"].get<int>()};
        fv.band_id = rec["band_id"].get<std::string>();
        fv.start_s = rec["start_s"].get<double>();
        fv.label = rec["label"].get<std::string>();
        const auto values = rec["values"].get<std::vector<double>>();
        if (fv.set_id == FeatureSetId::FS5) {
            if (!rec.contains("shape") || !rec["shape"].is_array() || rec["shape"].size() != 2)
                throw FeatureIoError(Kind::BadRecord, line_no, "FS5 record missing shape");
            const auto r = rec["shape"][0].get<std::size_t>();
            const auto c = rec["shape"][1].get<std::size_t>();
            if (r * c != values.size())
                throw FeatureIoError(Kind::DimensionMismatch, line_no, "shape does not match values");
            if (!out.empty() && (out[0].matrix.rows != r || out[0].matrix.cols != c))
                throw FeatureIoError(Kind::DimensionMismatch, line_no,
                                     "FS5 shape differs from earlier records");
            fv.matrix = Mat(r, c);
            fv.matrix.v = values;
        } else {
            fv.values = values;
            if (dim == 0) dim = values.size();
            if (values.size() != dim)
                throw FeatureIoError(Kind::DimensionMismatch, line_no, "vector length mismatch");
        }
        out.push_back(std::move(fv));
    }
    return out;
}

inline std::vector<FeatureVector> read_features_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open feature file: " + path);
    return read_features(in);
}

} // namespace screamkit
