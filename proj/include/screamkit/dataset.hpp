#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "screamkit/rng.hpp"
#include "screamkit/segmentation.hpp"

namespace screamkit {

enum class Label6 { Sing = 0, LowFry = 1, MidFry = 2, HighFry = 3, Layered = 4, NoVocal = 5 };
enum class Label3 { Sing = 0, Scream = 1, NoVocal = 2 };

inline constexpr int kNumClasses6 = 6;
inline constexpr int kNumClasses3 = 3;

inline std::string to_string(Label6 l)
{
    switch (l) {
    case Label6::Sing: return "Sing";
    case Label6::LowFry: return "LowFry";
    case Label6::MidFry: return "MidFry";
    case Label6::HighFry: return "HighFry";
    case Label6::Layered: return "Layered";
    case Label6::NoVocal: return "NoVocal";
    }
    return "?";
}

inline std::string to_string(Label3 l)
{
    switch (l) {
    case Label3::Sing: return "Sing";
    case Label3::Scream: return "Scream";
    case Label3::NoVocal: return "NoVocal";
    }
    return "?";
}

inline std::vector<std::string> class_names(int classes)
{
    if (classes == 3) return {"Sing", "Scream", "NoVocal"};
    return {"Sing", "LowFry", "MidFry", "HighFry", "Layered", "NoVocal"};
}

inline Label6 label6_from_string(const std::string& s)
{
    if (s == "Sing") return Label6::Sing;
    if (s == "LowFry") return Label6::LowFry;
    if (s == "MidFry") return Label6::MidFry;
    if (s == "HighFry") return Label6::HighFry;
    if (s == "Layered") return Label6::Layered;
    if (s == "NoVocal") return Label6::NoVocal;
    throw std::invalid_argument("unknown 6-class label: '" + s + "'");
}

struct AnnotationError : std::runtime_error {
    enum class Kind { Parse, Label, Range, Overlap };
    Kind kind;
    int line;
    AnnotationError(Kind k, int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), kind(k), line(line_)
    {
    }
};

/// One annotated vocal event. Gaps between annotations mean NoVocal.
struct Annotation {
    double start = 0.0;
    double end = 0.0;
    Label6 label = Label6::Sing; // one of the five vocal classes
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_csv_row(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline double parse_seconds(const std::string& s, int line_no)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw AnnotationError(AnnotationError::Kind::Parse, line_no, "bad number: '" + s + "'");
    }
}

inline Label6 parse_vocal_label(const std::string& s, int line_no)
{
    if (s == "Sing") return Label6::Sing;
    if (s == "LowFry") return Label6::LowFry;
    if (s == "MidFry") return Label6::MidFry;
    if (s == "HighFry") return Label6::HighFry;
    if (s == "Layered") return Label6::Layered;
    throw AnnotationError(AnnotationError::Kind::Label, line_no, "unknown label: '" + s + "'");
}

} // namespace detail

/// Parse the canonical annotation CSV (header start_seconds,end_seconds,label).
/// Result is sorted by start; overlapping or inverted intervals are rejected.
inline std::vector<Annotation> parse_annotations(std::istream& in)
{
    using Kind = AnnotationError::Kind;
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line))
        throw AnnotationError(Kind::Parse, 1, "empty annotation file");
    ++line_no;
    if (detail::trim(line) != "start_seconds,end_seconds,label")
        throw AnnotationError(Kind::Parse, 1, "expected header start_seconds,end_seconds,label");

    std::vector<Annotation> anns;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 3)
            throw AnnotationError(Kind::Parse, line_no, "expected 3 fields");
        Annotation a;
        a.start = detail::parse_seconds(fields[0], line_no);
        a.end = detail::parse_seconds(fields[1], line_no);
        a.label = detail::parse_vocal_label(fields[2], line_no);
        if (a.start < 0.0)
            throw AnnotationError(Kind::Range, line_no, "start must be >= 0");
        if (a.end <= a.start)
            throw AnnotationError(Kind::Range, line_no, "end must come after start");
        anns.push_back(a);
    }
    std::sort(anns.begin(), anns.end(),
              [](const Annotation& a, const Annotation& b) { return a.start < b.start; });
    for (std::size_t i = 0; i + 1 < anns.size(); ++i)
        if (anns[i].end > anns[i + 1].start + 1e-9)
            throw AnnotationError(Kind::Overlap, 0,
                                  "annotations overlap at " + std::to_string(anns[i + 1].start) + " s");
    return anns;
}

inline std::vector<Annotation> parse_annotations(const std::string& text)
{
    std::istringstream in(text);
    return parse_annotations(in);
}

/// {HighFry, MidFry, LowFry, Layered} -> Scream. Layered's target is
/// configurable since it can contain sung parts.
inline Label3 map_3class(Label6 l, Label3 layered_as = Label3::Scream)
{
    switch (l) {
    case Label6::Sing: return Label3::Sing;
    case Label6::NoVocal: return Label3::NoVocal;
    case Label6::Layered: return layered_as;
    default: return Label3::Scream;
    }
}

/// A block with its class labels and band identity.
struct LabeledBlock {
    BlockRef block_ref;
    std::string band_id;
    double start_time = 0.0;
    Label6 label6 = Label6::NoVocal;
    Label3 label3 = Label3::NoVocal;
};

namespace detail {

// Tie priority: vocal beats NoVocal, then Layered > LowFry > MidFry > HighFry > Sing.
inline int tie_rank(Label6 l)
{
    switch (l) {
    case Label6::NoVocal: return 0;
    case Label6::Sing: return 1;
    case Label6::HighFry: return 2;
    case Label6::MidFry: return 3;
    case Label6::LowFry: return 4;
    case Label6::Layered: return 5;
    }
    return 0;
}

} // namespace detail

/// Assign each block the class with maximal overlap duration inside its span;
/// unannotated time counts toward NoVocal.
inline std::vector<LabeledBlock> label_blocks(const std::vector<Block>& blocks,
                                              const std::vector<Annotation>& anns,
                                              const std::string& band_id,
                                              Label3 layered_as = Label3::Scream)
{
    std::vector<LabeledBlock> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) {
        const double t0 = b.start_time;
        const double t1 = b.start_time + static_cast<double>(b.samples.size()) / kPipelineRate;
        std::array<double, kNumClasses6> overlap{};
        double vocal_total = 0.0;
        for (const auto& a : anns) {
            const double d = std::max(0.0, std::min(a.end, t1) - std::max(a.start, t0));
            if (d > 0.0) {
                overlap[static_cast<std::size_t>(a.label)] += d;
                vocal_total += d;
            }
        }
        overlap[static_cast<std::size_t>(Label6::NoVocal)] = std::max(0.0, (t1 - t0) - vocal_total);

        Label6 winner = Label6::NoVocal;
        for (int c = 0; c < kNumClasses6; ++c) {
            const Label6 l = static_cast<Label6>(c);
            const double dw = overlap[static_cast<std::size_t>(winner)];
            const double dc = overlap[static_cast<std::size_t>(c)];
            if (dc > dw + 1e-12 ||
                (std::abs(dc - dw) <= 1e-12 && detail::tie_rank(l) > detail::tie_rank(winner)))
                winner = l;
        }

        LabeledBlock lb;
        lb.block_ref = {b.source_id, b.block_index};
        lb.band_id = band_id;
        lb.start_time = b.start_time;
        lb.label6 = winner;
        lb.label3 = map_3class(winner, layered_as);
        out.push_back(std::move(lb));
    }
    return out;
}

namespace detail {

inline int class_key_of(const LabeledBlock& b, int classes)
{
    return classes == 3 ? static_cast<int>(b.label3) : static_cast<int>(b.label6);
}

inline void sort_by_ref(std::vector<LabeledBlock>& v)
{
    std::sort(v.begin(), v.end(), [](const LabeledBlock& a, const LabeledBlock& b) {
        return a.block_ref < b.block_ref;
    });
}

} // namespace detail

/// Reduce every class above the target count to it by seeded uniform sampling
/// without replacement. Target is the minimum class count floored to the
/// nearest thousand (or the minimum itself when below 1000).
inline std::vector<LabeledBlock> undersample(const std::vector<LabeledBlock>& blocks, int classes,
                                             std::uint64_t seed)
{
    if (blocks.empty()) throw std::invalid_argument("undersample: empty input");
    if (classes != 3 && classes != 6)
        throw std::invalid_argument("undersample: classes must be 3 or 6");

    std::vector<LabeledBlock> sorted = blocks;
    detail::sort_by_ref(sorted);

    const int k = classes == 3 ? kNumClasses3 : kNumClasses6;
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < sorted.size(); ++i)
        by_class[static_cast<std::size_t>(detail::class_key_of(sorted[i], classes))].push_back(i);

    std::size_t min_count = sorted.size();
    for (const auto& idx : by_class)
        if (!idx.empty()) min_count = std::min(min_count, idx.size());
    const std::size_t target =
        min_count < 1000 ? std::max<std::size_t>(1, min_count) : (min_count / 1000) * 1000;

    Rng rng(seed);
    std::vector<bool> keep(sorted.size(), false);
    for (auto& idx : by_class) {
        if (idx.size() <= target) {
            for (std::size_t i : idx) keep[i] = true;
        } else {
            for (std::size_t j : rng.sample_without_replacement(idx.size(), target))
                keep[idx[j]] = true;
        }
    }

    std::vector<LabeledBlock> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (keep[i]) out.push_back(sorted[i]);
    return out;
}

/// Band-disjoint train/validation/test partition.
struct Split {
    std::vector<LabeledBlock> train, validation, test;
    std::uint64_t seed = 0;
    std::array<double, 3> ratios{0.70, 0.15, 0.15};
};

/// Assign whole bands to train by seeded greedy packing toward
/// ratios[0] of all blocks, then split the remaining blocks at block level
/// into validation and test (equal halves under the default ratios).
inline Split band_split(const std::vector<LabeledBlock>& blocks,
                        std::array<double, 3> ratios = {0.70, 0.15, 0.15},
                        std::uint64_t seed = 0)
{
    if (ratios[0] <= 0.0 || ratios[1] < 0.0 || ratios[2] < 0.0 || ratios[1] + ratios[2] <= 0.0)
        throw std::invalid_argument("band_split: bad ratios");

    std::vector<LabeledBlock> sorted = blocks;
    detail::sort_by_ref(sorted);

    std::map<std::string, std::size_t> band_counts;
    for (const auto& b : sorted) ++band_counts[b.band_id];
    if (band_counts.size() < 2)
        throw std::invalid_argument("band_split: need at least 2 bands for a band-disjoint split");

    std::vector<std::string> bands;
    bands.reserve(band_counts.size());
    for (const auto& [name, _] : band_counts) bands.push_back(name);

    Rng rng(seed);
    rng.shuffle(bands);

    const double total = static_cast<double>(sorted.size());
    const double sum = ratios[0] + ratios[1] + ratios[2];
    const double target = total * ratios[0] / sum;

    std::set<std::string> train_bands;
    std::size_t train_count = 0;
    bool skipped_any = false;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const std::size_t size = band_counts[bands[i]];
        const bool last = i + 1 == bands.size();
        const bool improves = std::abs(static_cast<double>(train_count + size) - target) <
                              std::abs(static_cast<double>(train_count) - target);
        if ((last && !skipped_any) || !improves) {
            skipped_any = true;
            continue;
        }
        train_bands.insert(bands[i]);
        train_count += size;
    }

    Split split;
    split.seed = seed;
    split.ratios = ratios;
    std::vector<LabeledBlock> rest;
    for (const auto& b : sorted) {
        if (train_bands.count(b.band_id))
            split.train.push_back(b);
        else
            rest.push_back(b);
    }

    // the non-train blocks are divided at block level, mirroring the
    // validation/test halves of the published protocol
    std::vector<std::size_t> order(rest.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t val_n = static_cast<std::size_t>(std::llround(
        static_cast<double>(rest.size()) * ratios[1] / (ratios[1] + ratios[2])));
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i < val_n)
            split.validation.push_back(rest[order[i]]);
        else
            split.test.push_back(rest[order[i]]);
    }
    detail::sort_by_ref(split.validation);
    detail::sort_by_ref(split.test);
    return split;
}

/// Per-class block counts, per-class annotated seconds and per-band song counts.
struct DatasetStats {
    std::map<std::string, std::size_t> class_blocks;
    std::map<std::string, double> class_seconds;
    std::map<std::string, std::size_t> band_songs;
};

inline DatasetStats dataset_stats(const std::vector<LabeledBlock>& blocks,
                                  const std::vector<std::vector<Annotation>>& per_song_annotations = {})
{
    DatasetStats stats;
    std::map<std::string, std::set<std::string>> songs_per_band;
    for (const auto& b : blocks) {
        ++stats.class_blocks[to_string(b.label6)];
        songs_per_band[b.band_id].insert(b.block_ref.source_id);
    }
    for (const auto& [band, songs] : songs_per_band) stats.band_songs[band] = songs.size();
    for (const auto& anns : per_song_annotations)
        for (const auto& a : anns) stats.class_seconds[to_string(a.label)] += a.end - a.start;
    return stats;
}

inline nlohmann::ordered_json stats_to_json(const DatasetStats& stats)
{
    nlohmann::ordered_json j;
    j["class_blocks"] = stats.class_blocks;
    j["class_seconds"] = stats.class_seconds;
    j["band_songs"] = stats.band_songs;
    return j;
}

/// One manifest row: song identity, band identity and input file paths.
struct ManifestRow {
    std::string song_id;
    std::string band_id;
    std::string audio_path;
    std::string annotation_path;
};

inline std::vector<ManifestRow> parse_manifest(std::istream& in)
{
    using Kind = AnnotationError::Kind;
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line))
        throw AnnotationError(Kind::Parse, 1, "empty manifest");
    ++line_no;
    if (detail::trim(line) != "song_id,band_id,audio_path,annotation_path")
        throw AnnotationError(Kind::Parse, 1,
                              "expected header song_id,band_id,audio_path,annotation_path");
    std::vector<ManifestRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 4)
            throw AnnotationError(Kind::Parse, line_no, "expected 4 fields");
        rows.push_back({fields[0], fields[1], fields[2], fields[3]});
    }
    return rows;
}

inline std::vector<ManifestRow> parse_manifest_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    return parse_manifest(in);
}

inline nlohmann::ordered_json block_ref_json(const BlockRef& r)
{
    nlohmann::ordered_json j;
    j["source_id"] = r.source_id;
    j["block_index"] = r.block_index;
    return j;
}

inline nlohmann::ordered_json split_to_json(const Split& split, std::uint64_t undersample_seed,
                                            int classes)
{
    nlohmann::ordered_json j;
    j["seed"] = split.seed;
    j["undersample_seed"] = undersample_seed;
    j["classes"] = classes;
    j["ratios"] = split.ratios;
    auto refs_array = [](const std::vector<LabeledBlock>& list) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& b : list) arr.push_back(block_ref_json(b.block_ref));
        return arr;
    };
    j["train"] = refs_array(split.train);
    j["validation"] = refs_array(split.validation);
    j["test"] = refs_array(split.test);
    return j;
}

/// Split file contents as block references (the labels live in feature files).
struct SplitRefs {
    std::uint64_t seed = 0;
    std::array<double, 3> ratios{};
    std::vector<BlockRef> train, validation, test;
};

inline SplitRefs split_refs_from_json(const nlohmann::json& j)
{
    SplitRefs refs;
    refs.seed = j.at("seed").get<std::uint64_t>();
    const auto r = j.at("ratios").get<std::vector<double>>();
    if (r.size() != 3) throw std::runtime_error("split file: ratios must have 3 entries");
    refs.ratios = {r[0], r[1], r[2]};
    auto read_part = [&](const char* key, std::vector<BlockRef>& out) {
        for (const auto& e : j.at(key)) {
            out.push_back({e.at("source_id").get<std::string>(), e.at("block_index").get<int>()});
        }
    };
    read_part("train", refs.train);
    read_part("validation", refs.validation);
    read_part("test", refs.test);
    return refs;
}

} // namespace screamkit
